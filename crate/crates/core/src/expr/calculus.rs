//! Derivations, substitutions and coefficient extraction.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{to_text, Acc, Atom, BaseVar, Dependent, Expr, FuncSymbol, JetVar, Monomial, PointVar, Scalar};
use crate::error::{Error, Result};

impl Expr {
    /// Applies the derivation determined by its values on atoms.
    ///
    /// `leaf` supplies the derivative of every atom except `exp` and `log`,
    /// which follow the chain rule through their arguments.
    pub fn derive<F>(&self, leaf: &mut F) -> Result<Expr>
    where
        F: FnMut(&Atom) -> Result<Expr>,
    {
        let mut acc = Acc::default();
        let mut cache: BTreeMap<Atom, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (idx, (a, n)) in m.0.iter().enumerate() {
                let da = match cache.get(a) {
                    Some(d) => d.clone(),
                    None => {
                        let d = atom_derivative(a, leaf)?;
                        cache.insert(a.clone(), d.clone());
                        d
                    }
                };
                if da.is_zero() {
                    continue;
                }
                let coeff = c * &Scalar::int(*n as i64);
                acc.add_scaled(&coeff, &m.without_one(idx), &da);
            }
        }
        Ok(acc.finish())
    }

    /// Formal partial derivative treating every atom as an independent
    /// coordinate. For a base variable this is the explicit derivative in
    /// that variable (arbitrary functions of it are differentiated, jets are
    /// held fixed).
    pub fn partial(&self, target: &Atom) -> Expr {
        match target {
            Atom::Base(b) => self.diff_point((*b).into()),
            _ => self
                .derive(&mut |a: &Atom| Ok(if a == target { Expr::one() } else { Expr::zero() }))
                .expect("formal partial is infallible"),
        }
    }

    /// Partial derivative in a point coordinate `t`, `x` or `u`, with jets of
    /// positive order held fixed. Arbitrary functions are differentiated
    /// according to their signatures.
    pub fn diff_point(&self, var: PointVar) -> Expr {
        self.derive(&mut |a: &Atom| {
            Ok(match a {
                Atom::Base(BaseVar::T) if var == PointVar::T => Expr::one(),
                Atom::Base(BaseVar::X) if var == PointVar::X => Expr::one(),
                Atom::Func(f) => f.bump(var).map(Expr::func).unwrap_or_else(Expr::zero),
                Atom::Jet(JetVar { dep: Dependent::U, t: 0, x: 0 }) if var == PointVar::U => Expr::one(),
                Atom::IntT(g) if var == PointVar::T => (**g).clone(),
                _ => Expr::zero(),
            })
        })
        .expect("point derivative is infallible")
    }

    /// Repeated [`Expr::diff_point`] along a multi-index indexed by [`PointVar`].
    pub fn diff_point_multi(&self, counts: [u32; 3]) -> Expr {
        let mut out = self.clone();
        for v in PointVar::ALL {
            for _ in 0..counts[v.index()] {
                out = out.diff_point(v);
            }
        }
        out
    }

    /// Ring homomorphism defined on atoms: every atom for which `f` returns
    /// `Some` is replaced; other `exp`/`log`/`intt` atoms are rebuilt from
    /// their mapped arguments. Negative powers require monomial images.
    pub fn map_atoms<F>(&self, f: &mut F) -> Result<Expr>
    where
        F: FnMut(&Atom) -> Result<Option<Expr>>,
    {
        let mut images: BTreeMap<Atom, Option<Expr>> = BTreeMap::new();
        let mut acc = Acc::default();
        for (m, c) in &self.terms {
            let mut plain = Vec::new();
            let mut replaced: Vec<(Expr, i32)> = Vec::new();
            for (a, n) in &m.0 {
                if !images.contains_key(a) {
                    let img = image_of(a, f)?;
                    images.insert(a.clone(), img);
                }
                match &images[a] {
                    None => plain.push((a.clone(), *n)),
                    Some(e) => replaced.push((e.clone(), *n)),
                }
            }
            let (s, pm) = Monomial::from_factors(plain);
            let mut term = Expr::term(pm, c * &s);
            for (e, n) in replaced {
                term = &term * &e.pow(n)?;
                if term.is_zero() {
                    break;
                }
            }
            acc.add_expr(&term);
        }
        Ok(acc.finish())
    }

    /// Replaces every occurrence of `target` by `replacement`.
    pub fn substitute(&self, target: &Atom, replacement: &Expr) -> Result<Expr> {
        if matches!(target, Atom::Base(BaseVar::T)) && self.has_intt() {
            return Err(Error::Unsupported("substituting t inside a t-antiderivative".into()));
        }
        self.map_atoms(&mut |a: &Atom| Ok((a == target).then(|| replacement.clone())))
    }

    /// Simultaneous substitution of several atoms.
    pub fn substitute_all(&self, map: &BTreeMap<Atom, Expr>) -> Result<Expr> {
        if map.contains_key(&Atom::Base(BaseVar::T)) && self.has_intt() {
            return Err(Error::Unsupported("substituting t inside a t-antiderivative".into()));
        }
        self.map_atoms(&mut |a: &Atom| Ok(map.get(a).cloned()))
    }

    fn has_intt(&self) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= matches!(a, Atom::IntT(_)));
        found
    }

    /// Replaces the arbitrary function `name` and all its derivatives by the
    /// corresponding point derivatives of `definition`.
    pub fn instantiate(&self, name: &str, definition: &Expr) -> Result<Expr> {
        let mut sig_checked: Option<super::Signature> = None;
        let mut cache: BTreeMap<[u32; 3], Expr> = BTreeMap::new();
        self.map_atoms(&mut |a: &Atom| {
            let f = match a {
                Atom::Func(f) if &*f.name == name => f,
                _ => return Ok(None),
            };
            if sig_checked != Some(f.sig) {
                check_within_signature(name, f.sig, definition)?;
                sig_checked = Some(f.sig);
            }
            let img = cache.entry(f.deriv).or_insert_with(|| definition.diff_point_multi(f.deriv)).clone();
            Ok(Some(img))
        })
    }

    /// Splits the expression along monomials in the `basis` jets.
    ///
    /// The returned coefficients contain no basis jet, and
    /// `Σ key · value` reproduces the input exactly.
    pub fn collect(&self, basis: &BTreeSet<JetVar>) -> BTreeMap<Monomial, Expr> {
        let mut parts: BTreeMap<Monomial, Acc> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(|a| matches!(a, Atom::Jet(j) if basis.contains(j)));
            parts.entry(key).or_default().add_term(rest, c.clone());
        }
        parts.into_iter().map(|(k, acc)| (k, acc.finish())).filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Coefficient of `atom^1` when the expression is written as a
    /// polynomial in `atom`.
    pub fn coefficient(&self, atom: &Atom, power: i32) -> Expr {
        let mut acc = Acc::default();
        for (m, c) in &self.terms {
            if m.exponent(atom) == power {
                let (_, rest) = m.split(|a| a == atom);
                acc.add_term(rest, c.clone());
            }
        }
        acc.finish()
    }

    /// Solves `self = 0` for `target`, which must occur linearly with a
    /// monomial coefficient.
    pub fn solve_for(&self, target: &Atom) -> Result<Expr> {
        let unsolvable =
            || Error::Unsolvable { condition: to_text(self), target: to_text(&Expr::atom(target.clone())) };
        let mut lin = Acc::default();
        let mut rest = Acc::default();
        for (m, c) in &self.terms {
            match m.exponent(target) {
                0 => rest.add_term(m.clone(), c.clone()),
                1 => {
                    let (_, r) = m.split(|a| a == target);
                    lin.add_term(r, c.clone());
                }
                _ => return Err(unsolvable()),
            }
        }
        let (lin, rest) = (lin.finish(), rest.finish());
        if lin.is_zero() || lin.contains_atom(target) || rest.contains_atom(target) {
            return Err(unsolvable());
        }
        let inv = lin.inv().map_err(|_| unsolvable())?;
        Ok(-(&rest * &inv))
    }
}

fn atom_derivative<F>(a: &Atom, leaf: &mut F) -> Result<Expr>
where
    F: FnMut(&Atom) -> Result<Expr>,
{
    match a {
        Atom::Exp(g) => {
            let dg = g.derive(leaf)?;
            Ok(&dg * &Expr::atom(a.clone()))
        }
        Atom::Log(m) => {
            let dm = m.derive(leaf)?;
            if dm.is_zero() {
                return Ok(dm);
            }
            dm.div(m)
        }
        other => leaf(other),
    }
}

fn image_of<F>(a: &Atom, f: &mut F) -> Result<Option<Expr>>
where
    F: FnMut(&Atom) -> Result<Option<Expr>>,
{
    if let Some(img) = f(a)? {
        return Ok(Some(img));
    }
    let rebuilt = match a {
        Atom::Exp(g) => rebuild(g, f, |e| Ok(Expr::exp(e)))?,
        Atom::Log(g) => rebuild(g, f, |e| Expr::log(&e))?,
        Atom::IntT(g) => rebuild(g, f, |e| Expr::intt(&e))?,
        _ => None,
    };
    Ok(rebuilt)
}

fn rebuild<F, B>(arg: &Arc<Expr>, f: &mut F, build: B) -> Result<Option<Expr>>
where
    F: FnMut(&Atom) -> Result<Option<Expr>>,
    B: FnOnce(Expr) -> Result<Expr>,
{
    let mapped = arg.map_atoms(f)?;
    if mapped == **arg {
        Ok(None)
    } else {
        build(mapped).map(Some)
    }
}

fn check_within_signature(name: &str, sig: super::Signature, def: &Expr) -> Result<()> {
    for v in PointVar::ALL {
        if !sig.has(v) && def.depends_on(v) {
            return Err(Error::SignatureMismatch { name: name.to_string(), var: v.name().to_string() });
        }
    }
    if def.jets().iter().any(|j| j.order() > 0 || j.dep == Dependent::V) {
        return Err(Error::SignatureMismatch { name: name.to_string(), var: "jet".to_string() });
    }
    Ok(())
}

/// Function symbols (with derivatives) named `name` occurring in `e`.
pub fn func_occurrences(e: &Expr, name: &str) -> BTreeSet<FuncSymbol> {
    let mut out = BTreeSet::new();
    e.for_each_atom(&mut |a| {
        if let Atom::Func(f) = a {
            if &*f.name == name {
                out.insert(f.clone());
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::super::Signature;
    use super::*;

    #[test]
    fn partial_examples() {
        let u = Expr::u(0, 0);
        let ux = Expr::u(0, 1);
        let uxx = Expr::u(0, 2);
        let e = &u * &uxx + ux.pow(2).unwrap();
        assert_eq!(e.partial(&Atom::Jet(JetVar::u(0, 2))), u);

        let b = Expr::fun("B", Signature::T);
        let e = &b * &Expr::u(0, 3);
        assert_eq!(e.partial(&Atom::Jet(JetVar::u(0, 3))), b);

        let h = Expr::intt(&Expr::fun("Q", Signature::T)).unwrap();
        let g = Expr::exp(h.scale(&Scalar::int(2)));
        assert_eq!((&g * &u).partial(&Atom::Jet(JetVar::u(0, 0))), g);
    }

    #[test]
    fn substitution_examples() {
        let u = Atom::Jet(JetVar::u(0, 0));
        assert!(Expr::u(0, 0).pow(2).unwrap().substitute(&u, &Expr::zero()).unwrap().is_zero());

        let b = FuncSymbol::new("B", Signature::T);
        let e = Expr::u(0, 1) * Expr::func(b.clone());
        let t2 = Expr::t().pow(2).unwrap();
        assert_eq!(e.substitute(&Atom::Func(b), &t2).unwrap(), &t2 * &Expr::u(0, 1));

        let inv = Expr::u(0, 0).pow(-1).unwrap();
        assert!(inv.substitute(&u, &(Expr::one() + Expr::t())).is_err());
        assert_eq!(inv.substitute(&u, &Expr::int(2)).unwrap(), Expr::ratio(1, 2));
    }

    #[test]
    fn substitution_reaches_nested_arguments() {
        let q = FuncSymbol::new("Q", Signature::T);
        let e = Expr::exp(Expr::intt(&Expr::func(q.clone())).unwrap());
        let out = e.substitute(&Atom::Func(q), &Expr::zero()).unwrap();
        assert!(out.is_one());
    }

    #[test]
    fn collect_examples() {
        let phi = Expr::fun("phi", Signature::TXU);
        let lam = Expr::fun("lambda", Signature::TXU);
        let phi_u = phi.diff_point(PointVar::U);
        let q = Expr::fun("Q", Signature::T);
        let ut = Expr::u(1, 0);
        let e = -(&(&lam + &phi_u) * &ut) + &phi * &q;
        let basis: BTreeSet<_> = [JetVar::u(1, 0)].into_iter().collect();
        let parts = e.collect(&basis);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&Monomial::one()], &phi * &q);
        let key = Monomial::from_factors([(Atom::Jet(JetVar::u(1, 0)), 1)]).1;
        assert_eq!(parts[&key], -(&lam + &phi_u));

        assert!(Expr::zero().collect(&basis).is_empty());
    }

    #[test]
    fn collect_matches_brute_force_square() {
        let e = (Expr::u(0, 1) + Expr::u(0, 2)).pow(2).unwrap();
        let basis: BTreeSet<_> = [JetVar::u(0, 1), JetVar::u(0, 2)].into_iter().collect();
        let parts = e.collect(&basis);
        let key = |f: Vec<(JetVar, i32)>| Monomial::from_factors(f.into_iter().map(|(j, n)| (Atom::Jet(j), n))).1;
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[&key(vec![(JetVar::u(0, 1), 2)])], Expr::one());
        assert_eq!(parts[&key(vec![(JetVar::u(0, 1), 1), (JetVar::u(0, 2), 1)])], Expr::int(2));
        assert_eq!(parts[&key(vec![(JetVar::u(0, 2), 2)])], Expr::one());
    }

    #[test]
    fn solve_for_linear_atom() {
        let b = FuncSymbol::new("B", Signature::T);
        let bt = b.bump(PointVar::T).unwrap();
        let tt = Expr::fun("T", Signature::T);
        let k2 = Expr::param("k2");
        let rho = Expr::fun("rho", Signature::TX);
        let cond = Expr::int(5) * &tt * Expr::func(bt.clone())
            + Expr::int(2) * &k2 * Expr::func(b.clone())
            + Expr::int(5) * &rho;
        let rhs = cond.solve_for(&Atom::Func(bt.clone())).unwrap();
        let back = cond.substitute(&Atom::Func(bt), &rhs).unwrap();
        assert!(back.is_zero());
        let quad = Expr::func(b.clone()).pow(2).unwrap();
        assert!(quad.solve_for(&Atom::Func(b)).is_err());
    }

    #[test]
    fn instantiate_checks_signature() {
        let e = Expr::fun("B", Signature::T).diff_point(PointVar::T);
        assert_eq!(e.instantiate("B", &Expr::t().pow(3).unwrap()).unwrap(), Expr::int(3) * Expr::t().pow(2).unwrap());
        assert!(e.instantiate("B", &Expr::x()).is_err());
    }
}
