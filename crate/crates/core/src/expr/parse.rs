//! Text grammar for expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] int | '^' '(' ['-'] int ')')?
//! primary := int | '(' expr ')' | 'exp(' expr ')' | 'log(' expr ')' | 'intt(' expr ')'
//!          | 'D[' expr ',' var ',' int ']'
//!          | name ['_' suffix] '(' var (',' var)* ')'     function symbol
//!          | ('u' | 'v') ['_' suffix]                     jet variable
//!          | 't' | 'x' | name                             base variable or parameter
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{Atom, BaseVar, Dependent, Expr, FuncSymbol, JetVar, PointVar, Raw, Scalar, Signature};
use crate::error::{Error, Result};
use crate::jet::JetSpace;

/// Function names seen so far with their signatures. A name keeps one
/// signature for the lifetime of the table.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    funcs: BTreeMap<String, Signature>,
    params: std::collections::BTreeSet<String>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str, sig: Signature) -> Result<()> {
        if self.params.contains(name) {
            return Err(Error::SignatureConflict {
                name: name.into(),
                first: "parameter".into(),
                second: sig.to_string(),
            });
        }
        match self.funcs.get(name) {
            Some(prev) if *prev != sig => {
                Err(Error::SignatureConflict { name: name.into(), first: prev.to_string(), second: sig.to_string() })
            }
            Some(_) => Ok(()),
            None => {
                self.funcs.insert(name.into(), sig);
                Ok(())
            }
        }
    }

    fn register_param(&mut self, name: &str) -> Result<()> {
        if let Some(sig) = self.funcs.get(name) {
            return Err(Error::SignatureConflict {
                name: name.into(),
                first: sig.to_string(),
                second: "parameter".into(),
            });
        }
        self.params.insert(name.into());
        Ok(())
    }

    pub fn signature(&self, name: &str) -> Option<Signature> {
        self.funcs.get(name).copied()
    }

    /// Registers every function symbol occurring in `e`.
    pub fn register_expr(&mut self, e: &Expr) -> Result<()> {
        let mut found = Vec::new();
        e.for_each_atom(&mut |a| match a {
            Atom::Func(f) => found.push((f.name.to_string(), Some(f.sig))),
            Atom::Param(p) => found.push((p.to_string(), None)),
            _ => {}
        });
        for (name, sig) in found {
            match sig {
                Some(sig) => self.register(&name, sig)?,
                None => self.register_param(&name)?,
            }
        }
        Ok(())
    }
}

/// Parses and canonicalizes `src`.
pub fn parse(src: &str, symbols: &mut SymbolTable, js: &JetSpace) -> Result<Expr> {
    Parser::new(src, symbols).parse_raw()?.canonicalize(js)
}

pub struct Parser<'a> {
    src: &'a str,
    pos: usize,
    symbols: &'a mut SymbolTable,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str, symbols: &'a mut SymbolTable) -> Self {
        Parser { src, pos: 0, symbols }
    }

    pub fn parse_raw(&mut self) -> Result<Raw> {
        let e = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(e)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Raw> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(Raw::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Raw::Add(terms) })
    }

    fn term(&mut self) -> Result<Raw> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = match acc {
                    Raw::Mul(mut xs) => {
                        xs.push(rhs);
                        Raw::Mul(xs)
                    }
                    other => Raw::Mul(vec![other, rhs]),
                };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = Raw::Div(Box::new(acc), Box::new(rhs));
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Raw> {
        if self.eat('-') {
            return Ok(Raw::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Raw> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = self.integer()?;
        if paren {
            self.expect(')')?;
        }
        let n: i32 = n.try_into().map_err(|_| self.err("exponent out of range"))?;
        Ok(Raw::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        self.src[start..self.pos].parse().map_err(|_| Error::Parse { pos: start, msg: "integer out of range".into() })
    }

    fn ident(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        if !rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        self.pos += len;
        Some((start, &self.src[start..start + len]))
    }

    fn point_var(&mut self) -> Result<PointVar> {
        let pos = self.pos;
        match self.ident() {
            Some((_, "t")) => Ok(PointVar::T),
            Some((_, "x")) => Ok(PointVar::X),
            Some((_, "u")) => Ok(PointVar::U),
            _ => Err(Error::Parse { pos, msg: "expected one of t, x, u".into() }),
        }
    }

    fn primary(&mut self) -> Result<Raw> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: BigInt = self.src[start..self.pos].parse().expect("digits");
                Ok(Raw::Num(Scalar::from_bigint(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => self.named(),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn named(&mut self) -> Result<Raw> {
        let (start, word) = self.ident().expect("caller checked");
        let call = self.peek() == Some('(');
        match word {
            "exp" | "log" | "intt" if call => {
                self.pos += 1;
                let arg = Box::new(self.expr()?);
                self.expect(')')?;
                return Ok(match word {
                    "exp" => Raw::Exp(arg),
                    "log" => Raw::Log(arg),
                    _ => Raw::IntT(arg),
                });
            }
            "D" if self.peek() == Some('[') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(',')?;
                let var = self.point_var()?;
                self.expect(',')?;
                let n = self.integer()?;
                self.expect(']')?;
                let n: u32 = n.try_into().map_err(|_| self.err("derivative count out of range"))?;
                return Ok(Raw::Deriv(Box::new(inner), var, n));
            }
            "t" if !call => return Ok(Raw::Atom(Atom::Base(BaseVar::T))),
            "x" if !call => return Ok(Raw::Atom(Atom::Base(BaseVar::X))),
            _ => {}
        }
        let (base, suffix) = match word.split_once('_') {
            Some((b, s)) if !s.is_empty() && s.chars().all(|c| matches!(c, 't' | 'x' | 'u')) => (b, Some(s)),
            _ => (word, None),
        };
        if !call && (base == "u" || base == "v") {
            let dep = if base == "u" { Dependent::U } else { Dependent::V };
            let (mut t, mut x) = (0, 0);
            for c in suffix.unwrap_or("").chars() {
                match c {
                    't' => t += 1,
                    'x' => x += 1,
                    _ => {
                        return Err(Error::Parse {
                            pos: start,
                            msg: format!("`{word}`: jets differentiate in t and x only"),
                        })
                    }
                }
            }
            return Ok(Raw::Atom(Atom::Jet(JetVar::new(dep, t, x))));
        }
        if call {
            self.pos += 1;
            let mut vars = vec![self.point_var()?];
            while self.eat(',') {
                vars.push(self.point_var()?);
            }
            self.expect(')')?;
            let sig = Signature::from_vars(&vars);
            if sig.vars().count() != vars.len() {
                return Err(Error::Parse { pos: start, msg: format!("`{base}`: repeated argument") });
            }
            if base == "u" || base == "v" || base == "t" || base == "x" {
                return Err(Error::Parse { pos: start, msg: format!("`{base}` cannot name a function") });
            }
            self.symbols.register(base, sig)?;
            let mut deriv = [0u32; 3];
            for c in suffix.unwrap_or("").chars() {
                let v = PointVar::from_char(c).expect("suffix letters checked");
                if !sig.has(v) {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("`{word}` differentiates in {} outside the signature ({sig})", v.name()),
                    });
                }
                deriv[v.index()] += 1;
            }
            return Ok(Raw::Atom(Atom::Func(FuncSymbol::new(base, sig).with_deriv(deriv))));
        }
        self.symbols.register_param(word)?;
        Ok(Raw::Atom(Atom::param(word)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Result<Expr> {
        parse(s, &mut SymbolTable::new(), &JetSpace::default())
    }

    #[test]
    fn parses_jets_and_functions() {
        let e = p("u_txx + beta_xx(t,x) - 2/5*k2*u").unwrap();
        let beta = FuncSymbol::new("beta", Signature::TX).with_deriv([0, 2, 0]);
        let expected = Expr::u(1, 2) + Expr::func(beta) - Expr::ratio(2, 5) * Expr::param("k2") * Expr::u(0, 0);
        assert_eq!(e, expected);
    }

    #[test]
    fn derivative_forms_agree() {
        assert_eq!(p("D[B(t), t, 2]").unwrap(), p("B_tt(t)").unwrap());
        assert_eq!(p("D[u, x, 3]").unwrap(), p("u_xxx").unwrap());
        assert_eq!(p("D[phi(t,x,u), x, 1]").unwrap(), p("phi_x(t,x,u)").unwrap());
        assert_eq!(p("D[u*u_x, x, 1]").unwrap(), p("u_x^2 + u*u_xx").unwrap());
    }

    #[test]
    fn whitespace_and_powers() {
        assert_eq!(p("  exp( 2 * intt(Q(t)) )").unwrap(), p("exp(intt(Q(t)))^2").unwrap());
        assert_eq!(p("A(t)^-1").unwrap(), p("1/A(t)").unwrap());
        assert_eq!(p("-u^2").unwrap(), -p("u^2").unwrap());
        assert_eq!(p("x^(-2)*x^2").unwrap(), Expr::one());
    }

    #[test]
    fn errors_carry_positions() {
        match p("u + * 2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(p("B(t) + B(t,x)"), Err(Error::SignatureConflict { .. })));
        assert!(matches!(p("B_x(t)"), Err(Error::Parse { .. })));
        assert!(matches!(p("log(u + 1)"), Err(Error::LogArgument(_))));
        assert!(matches!(p("u_xxxxxxxxxxxxx"), Err(Error::JetOrderOverflow { .. })));
        assert!(p("(u").is_err());
    }
}
