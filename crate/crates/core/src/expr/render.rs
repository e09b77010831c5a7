//! Plain-text and LaTeX rendering. Plain text re-parses to the same expression.

use super::{Atom, Expr, FuncSymbol, Monomial, Scalar};

pub fn to_text(e: &Expr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let c = c.abs();
        if m.is_one() {
            out.push_str(&c.to_string());
            continue;
        }
        if !c.is_one() {
            out.push_str(&c.to_string());
            out.push('*');
        }
        out.push_str(&monomial_text(m));
    }
    out
}

fn monomial_text(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .factors()
        .iter()
        .map(|(a, n)| {
            let base = atom_text(a);
            if *n == 1 {
                base
            } else {
                format!("{base}^{n}")
            }
        })
        .collect();
    parts.join("*")
}

fn atom_text(a: &Atom) -> String {
    match a {
        Atom::Base(b) => b.name().into(),
        Atom::Param(p) => p.to_string(),
        Atom::Func(f) => f.to_string(),
        Atom::Jet(j) => j.to_string(),
        Atom::IntT(g) => format!("intt({})", to_text(g)),
        Atom::Exp(g) => format!("exp({})", to_text(g)),
        Atom::Log(g) => format!("log({})", to_text(g)),
    }
}

pub fn to_latex(e: &Expr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&term_latex(m, &c.abs()));
    }
    out
}

fn term_latex(m: &Monomial, c: &Scalar) -> String {
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    for (a, n) in m.factors() {
        let base = atom_latex(a);
        let k = n.abs();
        let s = if k == 1 { base } else { format!("{}^{{{k}}}", wrap_for_power(a, base)) };
        if *n > 0 {
            num.push(s);
        } else {
            den.push(s);
        }
    }
    let cn = c.numer().to_string();
    let cd = c.denom().to_string();
    let mut top = num.join(" ");
    if cn != "1" || top.is_empty() {
        top = if top.is_empty() { cn } else { format!("{cn} {top}") };
    }
    if cd != "1" {
        den.insert(0, cd);
    }
    if den.is_empty() {
        top
    } else {
        format!("\\frac{{{top}}}{{{}}}", den.join(" "))
    }
}

fn wrap_for_power(a: &Atom, s: String) -> String {
    match a {
        Atom::Jet(_) | Atom::Func(_) | Atom::Exp(_) => format!("\\left({s}\\right)"),
        _ => s,
    }
}

fn name_latex(name: &str) -> String {
    const GREEK: &[(&str, &str)] = &[
        ("alpha", "\\alpha"),
        ("beta", "\\beta"),
        ("gamma", "\\gamma"),
        ("delta", "\\delta"),
        ("eta", "\\eta"),
        ("lambda", "\\lambda"),
        ("mu", "\\mu"),
        ("phi", "\\varphi"),
        ("rho", "\\rho"),
        ("sigma", "\\sigma"),
        ("tau", "\\tau"),
        ("xi", "\\xi"),
        ("zeta", "\\zeta"),
    ];
    if let Some((_, g)) = GREEK.iter().find(|(n, _)| *n == name) {
        return (*g).into();
    }
    let split = name.find(|c: char| c.is_ascii_digit() || c == '_');
    match split {
        Some(i) if i > 0 => {
            let sub = name[i..].trim_start_matches('_');
            format!("{}_{{{}}}", &name[..i], sub)
        }
        _ => name.into(),
    }
}

fn func_latex(f: &FuncSymbol) -> String {
    let base = name_latex(&f.name);
    if f.derivative_order() == 0 {
        base
    } else if base.contains('_') {
        format!("\\left({base}\\right)_{{{}}}", f.deriv_suffix())
    } else {
        format!("{base}_{{{}}}", f.deriv_suffix())
    }
}

fn atom_latex(a: &Atom) -> String {
    match a {
        Atom::Base(b) => b.name().into(),
        Atom::Param(p) => name_latex(p),
        Atom::Func(f) => func_latex(f),
        Atom::Jet(j) => {
            let s = j.to_string();
            match s.split_once('_') {
                Some((d, sub)) => format!("{d}_{{{sub}}}"),
                None => s,
            }
        }
        Atom::IntT(g) => format!("\\int {}\\,dt", group_latex(g)),
        Atom::Exp(g) => format!("e^{{{}}}", to_latex(g)),
        Atom::Log(g) => format!("\\log\\left({}\\right)", to_latex(g)),
    }
}

fn group_latex(e: &Expr) -> String {
    if e.len() > 1 {
        format!("\\left({}\\right)", to_latex(e))
    } else {
        to_latex(e)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, SymbolTable};
    use super::*;
    use crate::jet::JetSpace;

    fn p(s: &str) -> Expr {
        parse(s, &mut SymbolTable::new(), &JetSpace::default()).unwrap()
    }

    #[test]
    fn text_reparses() {
        for src in [
            "u_t + u_xxxxx + B(t)*u_xxx - 2/5*k2*u",
            "c1*exp(2*intt(Q(t)))*u + c2*exp(intt(Q(t)))",
            "-3*phi_uux(t,x,u)*u_x^2 + A(t)^-2*log(C(t))",
            "0",
        ] {
            let e = p(src);
            assert_eq!(p(&to_text(&e)), e, "{src}");
        }
    }

    #[test]
    fn latex_forms() {
        assert_eq!(to_latex(&p("-v_xxxxx")), "-v_{xxxxx}");
        assert_eq!(to_latex(&p("2/5*k2*u")), "\\frac{2 k_{2} u}{5}");
        assert_eq!(to_latex(&p("exp(intt(Q(t)))")), "e^{\\int Q\\,dt}");
        assert_eq!(to_latex(&p("B(t)/A(t)")), "\\frac{B}{A}");
        assert_eq!(to_latex(&p("beta_xxx(t,x)")), "\\beta_{xxx}");
    }
}
