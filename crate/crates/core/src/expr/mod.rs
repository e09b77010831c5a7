//! Exact symbolic expressions in canonical form.
//!
//! An [`Expr`] is a finite sum of rational multiples of Laurent monomials in
//! [`Atom`]s. Every constructor and operation returns the canonical form, so
//! structural equality is mathematical equality within the supported
//! fragment. The rewrite rules applied during canonicalization are:
//!
//! * like terms merge and zero coefficients vanish;
//! * `exp(a)^n = exp(n a)` and `exp(a) exp(b) = exp(a + b)`, `exp(0) = 1`;
//! * `exp(n log(a)) = a^n` for integer `n`;
//! * `log(c a^n b^m) = log(c) + n log(a) + m log(b)` and `log(exp(g)) = g`;
//! * `intt` is linear, factors independent of `t` move outside it, and
//!   `intt(t^n) = t^(n+1)/(n+1)` for `n != -1`.

mod atom;
mod calculus;
mod json;
mod parse;
mod raw;
mod render;
mod scalar;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use atom::{Atom, BaseVar, Dependent, FuncSymbol, JetVar, PointVar, Signature};
pub use calculus::func_occurrences;
pub use json::{expr_from_json, expr_to_json};
pub use parse::{parse, Parser, SymbolTable};
pub use raw::Raw;
pub use render::{to_latex, to_text};
pub use scalar::Scalar;

use crate::error::{Error, Result};

/// Product of atoms raised to nonzero integer powers, sorted by atom.
///
/// At most one `Exp` atom occurs, always with exponent 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Atom, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.0
    }

    pub fn exponent(&self, atom: &Atom) -> i32 {
        self.0.binary_search_by(|(a, _)| a.cmp(atom)).map(|i| self.0[i].1).unwrap_or(0)
    }

    fn has_exp(&self) -> bool {
        self.0.iter().any(|(a, _)| matches!(a, Atom::Exp(_)))
    }

    /// Builds a monomial from arbitrary factors; returns the scalar produced
    /// by `exp(n log(c))` extraction alongside it.
    pub fn from_factors<I>(factors: I) -> (Scalar, Monomial)
    where
        I: IntoIterator<Item = (Atom, i32)>,
    {
        let mut map: BTreeMap<Atom, i32> = BTreeMap::new();
        let mut exp_arg = Expr::zero();
        let mut scalar = Scalar::one();
        for (a, n) in factors {
            if n == 0 {
                continue;
            }
            match a {
                Atom::Exp(arg) => exp_arg = &exp_arg + &arg.scale(&Scalar::int(n as i64)),
                other => *map.entry(other).or_insert(0) += n,
            }
        }
        if !exp_arg.is_zero() {
            let mut rest = Vec::with_capacity(exp_arg.terms.len());
            for (m, c) in exp_arg.terms {
                match (m.0.as_slice(), c.to_i64()) {
                    ([(Atom::Log(inner), 1)], Some(k)) => {
                        let k = k as i32;
                        match inner.as_scalar() {
                            Some(s) => scalar = &scalar * &s.powi(k).expect("log of zero is rejected"),
                            None => {
                                let (a, _) = inner.terms[0].0 .0[0].clone();
                                *map.entry(a).or_insert(0) += k;
                            }
                        }
                    }
                    _ => rest.push((m, c)),
                }
            }
            let rest = Expr { terms: rest };
            if !rest.is_zero() {
                map.insert(Atom::Exp(Arc::new(rest)), 1);
            }
        }
        (scalar, Monomial(map.into_iter().filter(|(_, n)| *n != 0).collect()))
    }

    fn mul(&self, other: &Monomial) -> (Scalar, Monomial) {
        if self.has_exp() && other.has_exp() {
            return Monomial::from_factors(self.0.iter().chain(other.0.iter()).cloned());
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let n = self.0[i].1 + other.0[j].1;
                    if n != 0 {
                        out.push((self.0[i].0.clone(), n));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        (Scalar::one(), Monomial(out))
    }

    fn inverse(&self) -> (Scalar, Monomial) {
        Monomial::from_factors(self.0.iter().map(|(a, n)| (a.clone(), -n)))
    }

    /// Splits off the factors selected by `keep`, returning `(selected, rest)`.
    pub fn split<F: Fn(&Atom) -> bool>(&self, keep: F) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(atom, _)| keep(atom));
        (Monomial(a), Monomial(b))
    }

    /// The monomial with `atom`'s exponent lowered by one.
    fn without_one(&self, idx: usize) -> Monomial {
        let mut f = self.0.clone();
        f[idx].1 -= 1;
        if f[idx].1 == 0 {
            f.remove(idx);
        }
        Monomial(f)
    }
}

/// Canonical exact-arithmetic expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Expr {
    terms: Vec<(Monomial, Scalar)>,
}

/// Sum accumulator used by the arithmetic kernels.
#[derive(Default)]
pub(crate) struct Acc(BTreeMap<Monomial, Scalar>);

impl Acc {
    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Adds `c * m * e`.
    pub(crate) fn add_scaled(&mut self, c: &Scalar, m: &Monomial, e: &Expr) {
        for (em, ec) in &e.terms {
            let (s, prod) = m.mul(em);
            self.add_term(prod, &(c * ec) * &s);
        }
    }

    pub(crate) fn add_expr(&mut self, e: &Expr) {
        for (m, c) in &e.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub(crate) fn finish(self) -> Expr {
        Expr { terms: self.0.into_iter().collect() }
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Expr::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        Expr::term(Monomial::one(), s)
    }

    pub fn int(n: i64) -> Self {
        Expr::scalar(Scalar::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Expr::scalar(Scalar::ratio(n, d))
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        if c.is_zero() {
            Expr::zero()
        } else {
            Expr { terms: vec![(m, c)] }
        }
    }

    /// A single atom. `Exp`, `Log` and `IntT` atoms are canonicalized through
    /// [`Expr::exp`], [`Expr::log`] and [`Expr::intt`].
    pub fn atom(a: Atom) -> Self {
        match a {
            Atom::Exp(arg) => Expr::exp((*arg).clone()),
            Atom::Log(arg) => Expr::log(&arg).expect("log atoms carry valid arguments"),
            Atom::IntT(arg) => Expr::intt(&arg).expect("intt atoms carry valid arguments"),
            other => Expr::term(Monomial(vec![(other, 1)]), Scalar::one()),
        }
    }

    pub fn t() -> Self {
        Expr::atom(Atom::Base(BaseVar::T))
    }

    pub fn x() -> Self {
        Expr::atom(Atom::Base(BaseVar::X))
    }

    pub fn param(name: &str) -> Self {
        Expr::atom(Atom::param(name))
    }

    pub fn jet(j: JetVar) -> Self {
        Expr::atom(Atom::Jet(j))
    }

    /// `u_{t^t x^x}`.
    pub fn u(t: u32, x: u32) -> Self {
        Expr::jet(JetVar::u(t, x))
    }

    pub fn v(t: u32, x: u32) -> Self {
        Expr::jet(JetVar::v(t, x))
    }

    pub fn func(f: FuncSymbol) -> Self {
        Expr::atom(Atom::Func(f))
    }

    /// Undifferentiated function symbol `name(sig)`.
    pub fn fun(name: &str, sig: Signature) -> Self {
        Expr::func(FuncSymbol::new(name, sig))
    }

    pub fn exp(arg: Expr) -> Self {
        if arg.is_zero() {
            return Expr::one();
        }
        let (s, m) = Monomial::from_factors([(Atom::Exp(Arc::new(arg)), 1)]);
        Expr::term(m, s)
    }

    /// Logarithm of a Laurent monomial, expanded over its factors.
    pub fn log(arg: &Expr) -> Result<Self> {
        let (m, c) = match arg.terms.as_slice() {
            [(m, c)] => (m, c),
            _ => return Err(Error::LogArgument(to_text(arg))),
        };
        let mut acc = Acc::default();
        if !c.is_one() {
            let inner = Expr::scalar(c.clone());
            acc.add_term(Monomial(vec![(Atom::Log(Arc::new(inner)), 1)]), Scalar::one());
        }
        for (a, n) in &m.0 {
            let piece = match a {
                Atom::Exp(g) => (**g).clone(),
                Atom::Log(_) => {
                    let inner = Expr::atom(a.clone());
                    Expr::term(Monomial(vec![(Atom::Log(Arc::new(inner)), 1)]), Scalar::one())
                }
                other => {
                    let inner = Expr::term(Monomial(vec![(other.clone(), 1)]), Scalar::one());
                    Expr::term(Monomial(vec![(Atom::Log(Arc::new(inner)), 1)]), Scalar::one())
                }
            };
            acc.add_scaled(&Scalar::int(*n as i64), &Monomial::one(), &piece);
        }
        Ok(acc.finish())
    }

    /// Formal antiderivative in `t`.
    pub fn intt(arg: &Expr) -> Result<Self> {
        if arg.depends_on(PointVar::X) || arg.depends_on(PointVar::U) || arg.has_jets() {
            return Err(Error::IntTArgument(to_text(arg)));
        }
        let t_atom = Atom::Base(BaseVar::T);
        let mut acc = Acc::default();
        for (m, c) in &arg.terms {
            let (varying, constant) = m.split(atom_depends_on_t);
            let piece = match varying.0.as_slice() {
                [] => Monomial(vec![(t_atom.clone(), 1)]),
                [(a, n)] if *a == t_atom && *n != -1 => {
                    let k = n + 1;
                    let s = Scalar::int(k as i64).recip().expect("k is nonzero");
                    acc.add_scaled(
                        &(c * &s),
                        &constant,
                        &Expr::term(Monomial(vec![(t_atom.clone(), k)]), Scalar::one()),
                    );
                    continue;
                }
                _ => Monomial(vec![(Atom::IntT(Arc::new(Expr::term(varying, Scalar::one()))), 1)]),
            };
            acc.add_scaled(c, &constant, &Expr::term(piece, Scalar::one()));
        }
        Ok(acc.finish())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, c)] if m.is_one() && c.is_one())
    }

    /// The value if this is a constant (including zero).
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// `Some` when the expression is a single atom with unit coefficient.
    pub fn as_atom(&self) -> Option<&Atom> {
        match self.terms.as_slice() {
            [(m, c)] if c.is_one() => match m.0.as_slice() {
                [(a, 1)] => Some(a),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(terms: I) -> Expr {
        let mut acc = Acc::default();
        for (m, c) in terms {
            acc.add_term(m, c);
        }
        acc.finish()
    }

    pub fn scale(&self, s: &Scalar) -> Expr {
        if s.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Expr {
        let mut acc = Acc::default();
        acc.add_scaled(c, m, self);
        acc.finish()
    }

    /// Inverse of a single term; sums are never inverted.
    pub fn inv(&self) -> Result<Expr> {
        match self.terms.as_slice() {
            [(m, c)] => {
                let (s, mi) = m.inverse();
                let ci = c.recip().expect("canonical coefficients are nonzero");
                Ok(Expr::term(mi, &ci * &s))
            }
            _ => Err(Error::NonInvertible(to_text(self))),
        }
    }

    pub fn div(&self, other: &Expr) -> Result<Expr> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: i32) -> Result<Expr> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = Expr::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Visits every atom, including atoms nested in `exp`/`log`/`intt` arguments.
    pub fn for_each_atom<F: FnMut(&Atom)>(&self, f: &mut F) {
        for (m, _) in &self.terms {
            for (a, _) in &m.0 {
                f(a);
                if let Some(arg) = a.argument() {
                    arg.for_each_atom(f);
                }
            }
        }
    }

    pub fn contains_atom(&self, target: &Atom) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= a == target);
        found
    }

    pub fn has_jets(&self) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= matches!(a, Atom::Jet(_)));
        found
    }

    /// All jet variables occurring anywhere in the expression.
    pub fn jets(&self) -> std::collections::BTreeSet<JetVar> {
        let mut out = std::collections::BTreeSet::new();
        self.for_each_atom(&mut |a| {
            if let Atom::Jet(j) = a {
                out.insert(*j);
            }
        });
        out
    }

    /// Whether the expression depends on the point coordinate `v`, through
    /// base variables, function signatures, or (for `u`) any jet of `u`.
    pub fn depends_on(&self, v: PointVar) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| {
            found |= match (a, v) {
                (Atom::Base(BaseVar::T), PointVar::T) | (Atom::Base(BaseVar::X), PointVar::X) => true,
                (Atom::Func(f), _) => f.sig.has(v),
                (Atom::Jet(j), PointVar::U) => j.dep == Dependent::U,
                (Atom::IntT(_), PointVar::T) => true,
                _ => false,
            }
        });
        found
    }

    /// Largest total order of any jet variable present.
    pub fn jet_order(&self) -> u32 {
        self.jets().iter().map(JetVar::order).max().unwrap_or(0)
    }
}

fn atom_depends_on_t(a: &Atom) -> bool {
    match a {
        Atom::Base(b) => *b == BaseVar::T,
        Atom::Param(_) | Atom::Jet(_) => false,
        Atom::Func(f) => f.sig.has(PointVar::T),
        Atom::IntT(_) => true,
        Atom::Exp(g) | Atom::Log(g) => g.depends_on(PointVar::T),
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match self.terms[i].0.cmp(&rhs.terms[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &self.terms[i].1 + &rhs.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        Expr { terms: out }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut acc = Acc::default();
        for (m, c) in &self.terms {
            acc.add_scaled(c, m, rhs);
        }
        acc.finish()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Scalar> for Expr {
    fn from(s: Scalar) -> Self {
        Expr::scalar(s)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut acc = Acc::default();
        for e in iter {
            acc.add_expr(&e);
        }
        acc.finish()
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&to_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Expr {
        Expr::fun("Q", Signature::T)
    }

    #[test]
    fn like_terms_cancel() {
        let ux = Expr::u(0, 1);
        let e = ux.scale(&Scalar::int(2)) + ux.scale(&Scalar::int(3)) - ux.scale(&Scalar::int(5));
        assert!(e.is_zero());
    }

    #[test]
    fn exponentials_merge() {
        let h = Expr::intt(&q()).unwrap();
        let e = Expr::exp(h.clone()) * Expr::exp(h.clone());
        assert_eq!(e, Expr::exp(h.scale(&Scalar::int(2))));
        assert_eq!(Expr::exp(h.clone()).pow(-1).unwrap(), Expr::exp(-&h));
        assert!((Expr::exp(h.clone()) * Expr::exp(-h)).is_one());
        assert!(Expr::exp(Expr::zero()).is_one());
    }

    #[test]
    fn exp_of_log_extracts_powers() {
        let a = Expr::fun("A", Signature::T);
        let c = Expr::fun("C", Signature::T);
        let ratio = a.div(&c).unwrap();
        let l = Expr::log(&ratio).unwrap();
        assert_eq!(Expr::exp(l.clone()), ratio);
        assert_eq!(Expr::exp(l.scale(&Scalar::int(-2))), c.pow(2).unwrap().div(&a.pow(2).unwrap()).unwrap());
        assert!(Expr::log(&Expr::one()).unwrap().is_zero());
        assert!(Expr::log(&(a.clone() + c)).is_err());
        let k = Expr::param("k");
        assert_eq!(Expr::log(&Expr::exp(k.clone())).unwrap(), k);
    }

    #[test]
    fn difference_of_squares() {
        let u = Expr::u(0, 0);
        let ux = Expr::u(0, 1);
        let lhs = (&u + &ux) * (&u - &ux);
        let rhs = u.pow(2).unwrap() - ux.pow(2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sums_are_not_inverted() {
        let e = Expr::u(0, 0) + Expr::one();
        assert!(matches!(e.inv(), Err(Error::NonInvertible(_))));
        assert!(Expr::zero().inv().is_err());
    }

    #[test]
    fn intt_linear_and_polynomial() {
        assert_eq!(Expr::intt(&Expr::one()).unwrap(), Expr::t());
        assert_eq!(Expr::intt(&Expr::t()).unwrap(), Expr::t().pow(2).unwrap().scale(&Scalar::ratio(1, 2)));
        let two_q = q().scale(&Scalar::int(2));
        assert_eq!(Expr::intt(&two_q).unwrap(), Expr::intt(&q()).unwrap().scale(&Scalar::int(2)));
        let k = Expr::exp(Expr::param("k1").scale(&Scalar::int(5)));
        assert_eq!(Expr::intt(&(&k * &q())).unwrap(), &k * &Expr::intt(&q()).unwrap());
        assert_eq!(
            Expr::intt(&(&k * &Expr::t())).unwrap(),
            &k * &Expr::t().pow(2).unwrap().scale(&Scalar::ratio(1, 2))
        );
        assert!(Expr::intt(&Expr::x()).is_err());
        assert!(Expr::intt(&Expr::u(0, 1)).is_err());
    }
}
