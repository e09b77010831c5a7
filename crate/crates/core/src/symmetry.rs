//! Lie point symmetries of the reduced family.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::expr::{func_occurrences, Atom, Dependent, Expr, FuncSymbol, Monomial, PointVar, Scalar, Signature};
use crate::jet::{prolong, JetSpace, VectorField};
use crate::pde::PdeFamily;
use crate::rules::{clock, clock_rule, finalize_clock, RuleSet};

/// `pr⁽⁵⁾v (lhs)` reduced on the solutions of the equation.
pub fn invariance_residual(vf: &VectorField, fam: &PdeFamily, js: &JetSpace) -> Result<Expr> {
    let pr = prolong(js, vf, 5)?;
    let raw = pr.apply(&fam.lhs())?;
    fam.reduce_on_solutions(&raw, js)
}

/// Coefficients of the invariance residual with respect to monomials in the
/// derivatives of `u`; each entry is one equation `= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminingSystem {
    pub equations: Vec<(Monomial, Expr)>,
    pub unknowns: Vec<String>,
}

impl DeterminingSystem {
    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// `Σ monomial · equation`.
    pub fn reassemble(&self) -> Expr {
        self.equations.iter().map(|(m, e)| e.mul_monomial(m, &Scalar::one())).sum()
    }
}

pub fn generic_field() -> VectorField {
    let f = |n: &str| Expr::fun(n, Signature::TXU);
    VectorField { tau: f("tau"), xi: f("xi"), eta: f("eta") }
}

/// Determining equations for the generic point field `(τ, ξ, η)(t, x, u)`.
pub fn determining_system(fam: &PdeFamily, js: &JetSpace) -> Result<DeterminingSystem> {
    let residual = invariance_residual(&generic_field(), fam, js)?;
    let basis: BTreeSet<_> = residual.jets().into_iter().filter(|j| j.dep == Dependent::U && j.order() > 0).collect();
    let equations = residual.collect(&basis).into_iter().collect();
    let mut unknowns: Vec<String> = vec!["tau".into(), "xi".into(), "eta".into()];
    let mut seen = BTreeSet::new();
    for c in fam.coefficients() {
        c.for_each_atom(&mut |a| {
            if let Atom::Func(f) = a {
                if seen.insert(f.name.to_string()) {
                    unknowns.push(f.name.to_string());
                }
            }
        });
    }
    Ok(DeterminingSystem { equations, unknowns })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    /// `F(t)` arbitrary with the seven general conditions.
    General,
    /// `F = 0`.
    Case1Fzero,
    /// `F` a nonzero constant, `ρ = σ(t)`.
    Case2Fconst,
    /// `k2 = k3 = 0`: the field reduces to `δ ∂_x` with `δ_t = 0`.
    Degenerate,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::General, CaseId::Case1Fzero, CaseId::Case2Fconst, CaseId::Degenerate];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::General => "general",
            CaseId::Case1Fzero => "f0",
            CaseId::Case2Fconst => "fconst",
            CaseId::Degenerate => "degenerate",
        }
    }
}

/// A candidate family of symmetries together with the conditions on the
/// arbitrary functions under which it is claimed to be admitted.
#[derive(Clone, Debug)]
pub struct AnsatzCase {
    pub id: CaseId,
    pub family: PdeFamily,
    pub field: VectorField,
    /// Each condition `= 0`, with `T` standing for `k2 t + k3`.
    pub conditions: Vec<Expr>,
    pub rules: RuleSet,
}

fn s(name: &str) -> Expr {
    Expr::fun(name, Signature::T)
}

fn stx(name: &str) -> Expr {
    Expr::fun(name, Signature::TX)
}

fn d(name: &str, sig: Signature, deriv: [u32; 3]) -> FuncSymbol {
    FuncSymbol::new(name, sig).with_deriv(deriv)
}

fn dx(e: &Expr, n: u32) -> Expr {
    e.diff_point_multi([0, n, 0])
}

fn k(name: &str) -> Expr {
    Expr::param(name)
}

fn ratio(n: i64, m: i64) -> Scalar {
    Scalar::ratio(n, m)
}

/// `τ = T`, `ξ = k2 x / 5 + δ`, `η = g − 2 k2 u / 5`.
fn ansatz_field(g: &Expr) -> VectorField {
    let k2 = k("k2");
    VectorField {
        tau: clock(),
        xi: &(&k2 * &Expr::x()).scale(&ratio(1, 5)) + &s("delta"),
        eta: g - &(&k2 * &Expr::u(0, 0)).scale(&ratio(2, 5)),
    }
}

impl AnsatzCase {
    pub fn new(id: CaseId) -> Result<AnsatzCase> {
        match id {
            CaseId::General => Self::general(),
            CaseId::Case1Fzero => Self::case1(),
            CaseId::Case2Fconst => Self::case2(),
            CaseId::Degenerate => Self::degenerate(),
        }
    }

    fn general() -> Result<AnsatzCase> {
        let (t, k2) = (clock(), k("k2"));
        let (b, e, f, q, rho) = (s("B"), s("E"), s("F"), s("Q"), stx("rho"));
        let family = PdeFamily::reduced_symbolic();
        let bt = Expr::func(d("B", Signature::T, [1, 0, 0]));
        let et = Expr::func(d("E", Signature::T, [1, 0, 0]));
        let ft = Expr::func(d("F", Signature::T, [1, 0, 0]));
        let qt = Expr::func(d("Q", Signature::T, [1, 0, 0]));
        let delta_t = s("delta").diff_point(PointVar::T);
        let rho_t = rho.diff_point(PointVar::T);
        let conditions = vec![
            &(&(&t * &bt).scale(&Scalar::int(5)) + &(&k2 * &b).scale(&Scalar::int(2))) + &rho.scale(&Scalar::int(5)),
            &dx(&rho, 1) * &f,
            &(&t * &et) + &(&k2 * &e).scale(&ratio(2, 5)),
            &(&(&dx(&rho, 2) * &f) + &(&rho * &e)) - &delta_t,
            &t * &ft,
            &(&(&(&rho * &q) + &(&dx(&rho, 3) * &b)) + &dx(&rho, 5)) + &rho_t,
            &(&(&(&t * &qt) + &(&k2 * &q)) + &(&dx(&rho, 1) * &e)) + &dx(&rho, 3),
        ];
        let mut rules = RuleSet::new();
        rules.push(clock_rule());
        let heads = [
            Some(d("B", Signature::T, [1, 0, 0])),
            None,
            Some(d("E", Signature::T, [1, 0, 0])),
            Some(d("delta", Signature::T, [1, 0, 0])),
            Some(d("F", Signature::T, [1, 0, 0])),
            Some(d("rho", Signature::TX, [1, 0, 0])),
            Some(d("Q", Signature::T, [1, 0, 0])),
        ];
        for (c, h) in conditions.iter().zip(heads) {
            if let Some(h) = h {
                rules.add_condition(c, h)?;
            }
        }
        rules.annihilate(Atom::Func(FuncSymbol::new("F", Signature::T)), "rho", [0, 1, 0]);
        Ok(AnsatzCase { id: CaseId::General, family, field: ansatz_field(&rho), conditions, rules })
    }

    fn case1() -> Result<AnsatzCase> {
        let (t, k2) = (clock(), k("k2"));
        let (b, e, q, rho) = (s("B"), s("E"), s("Q"), stx("rho"));
        let family = PdeFamily::reduced_symbolic().with_f(Expr::zero());
        let bt = b.diff_point(PointVar::T);
        let et = e.diff_point(PointVar::T);
        let qt = q.diff_point(PointVar::T);
        let conditions = vec![
            &(&(&t * &bt).scale(&Scalar::int(5)) + &(&k2 * &b).scale(&Scalar::int(2))) + &rho.scale(&Scalar::int(5)),
            &(&t * &et) + &(&k2 * &e).scale(&ratio(2, 5)),
            &(&rho * &e) - &s("delta").diff_point(PointVar::T),
            &(&(&(&rho * &q) + &(&dx(&rho, 3) * &b)) + &dx(&rho, 5)) + &rho.diff_point(PointVar::T),
            &(&(&(&t * &qt) + &(&k2 * &q)) + &(&dx(&rho, 1) * &e)) + &dx(&rho, 3),
        ];
        let heads = [
            d("B", Signature::T, [1, 0, 0]),
            d("E", Signature::T, [1, 0, 0]),
            d("delta", Signature::T, [1, 0, 0]),
            d("rho", Signature::TX, [1, 0, 0]),
            d("Q", Signature::T, [1, 0, 0]),
        ];
        let mut rules = RuleSet::new();
        rules.push(clock_rule());
        for (c, h) in conditions.iter().zip(heads) {
            rules.add_condition(c, h)?;
        }
        Ok(AnsatzCase { id: CaseId::Case1Fzero, family, field: ansatz_field(&rho), conditions, rules })
    }

    /// Case 2 conditions for a family with constant `F` (a parameter unless
    /// `f` is given).
    pub fn case2_with(f: Expr) -> Result<AnsatzCase> {
        let (t, k2) = (clock(), k("k2"));
        let (b, e, q, sigma) = (s("B"), s("E"), s("Q"), s("sigma"));
        let family = PdeFamily::reduced_symbolic().with_f(f);
        let conditions = vec![
            &(&(&t * &b.diff_point(PointVar::T)).scale(&Scalar::int(5)) + &(&k2 * &b).scale(&Scalar::int(2)))
                + &sigma.scale(&Scalar::int(5)),
            &(&t * &e.diff_point(PointVar::T)) + &(&k2 * &e).scale(&ratio(2, 5)),
            &(&sigma * &e) - &s("delta").diff_point(PointVar::T),
            &(&sigma * &q) + &sigma.diff_point(PointVar::T),
            &(&t * &q.diff_point(PointVar::T)) + &(&k2 * &q),
        ];
        let heads = [
            d("B", Signature::T, [1, 0, 0]),
            d("E", Signature::T, [1, 0, 0]),
            d("delta", Signature::T, [1, 0, 0]),
            d("sigma", Signature::T, [1, 0, 0]),
            d("Q", Signature::T, [1, 0, 0]),
        ];
        let mut rules = RuleSet::new();
        rules.push(clock_rule());
        for (c, h) in conditions.iter().zip(heads) {
            rules.add_condition(c, h)?;
        }
        Ok(AnsatzCase { id: CaseId::Case2Fconst, family, field: ansatz_field(&sigma), conditions, rules })
    }

    fn case2() -> Result<AnsatzCase> {
        Self::case2_with(k("F"))
    }

    fn degenerate() -> Result<AnsatzCase> {
        let delta_t = s("delta").diff_point(PointVar::T);
        let mut rules = RuleSet::new();
        rules.add_condition(&delta_t, d("delta", Signature::T, [1, 0, 0]))?;
        Ok(AnsatzCase {
            id: CaseId::Degenerate,
            family: PdeFamily::reduced_symbolic(),
            field: VectorField { tau: Expr::zero(), xi: s("delta"), eta: Expr::zero() },
            conditions: vec![delta_t],
            rules,
        })
    }
}

/// Invariance residual of the case's field rewritten with its conditions.
pub fn verify_ansatz(case: &AnsatzCase, js: &JetSpace) -> Result<Expr> {
    let raw = invariance_residual(&case.field, &case.family, js)?;
    finalize_clock(&case.rules.apply(&raw)?)
}

/// Each determining equation with the case's field substituted for the
/// generic `(τ, ξ, η)` and rewritten with the case's conditions.
pub fn ansatz_equations(case: &AnsatzCase, js: &JetSpace) -> Result<BTreeMap<Monomial, Expr>> {
    let sys = determining_system(&case.family, js)?;
    let mut out = BTreeMap::new();
    for (m, eq) in sys.equations {
        let mut e = eq;
        for (name, def) in [("tau", &case.field.tau), ("xi", &case.field.xi), ("eta", &case.field.eta)] {
            e = e.instantiate(name, def)?;
        }
        out.insert(m, finalize_clock(&case.rules.apply(&e)?)?);
    }
    Ok(out)
}

/// Names of the unknown functions of `t`, `x` occurring in `e`.
pub fn unknown_functions(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for name in ["delta", "rho", "sigma", "T"] {
        if !func_occurrences(e, name).is_empty() {
            out.insert(name.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, SymbolTable};

    fn p(s: &str) -> Expr {
        parse(s, &mut SymbolTable::new(), &JetSpace::default()).unwrap()
    }

    #[test]
    fn translations_are_symmetries() {
        let js = JetSpace::default();
        let dx = VectorField::new(Expr::zero(), Expr::one(), Expr::zero()).unwrap();
        assert!(invariance_residual(&dx, &PdeFamily::reduced_symbolic(), &js).unwrap().is_zero());
        let dt = VectorField::new(Expr::one(), Expr::zero(), Expr::zero()).unwrap();
        let constant = PdeFamily::new(Expr::one(), p("b"), Expr::one(), p("e"), p("f"), p("q")).unwrap();
        assert!(invariance_residual(&dt, &constant, &js).unwrap().is_zero());
    }

    #[test]
    fn scaling_u_is_not_a_symmetry() {
        let js = JetSpace::default();
        let vf = VectorField::new(Expr::zero(), Expr::zero(), p("u")).unwrap();
        let r = invariance_residual(&vf, &PdeFamily::reduced_symbolic(), &js).unwrap();
        assert_eq!(r, p("u*u_xxx + E(t)*u*u_x + F(t)*u_x*u_xx"));
    }

    #[test]
    fn ansatz_cases_verify() {
        let js = JetSpace::default();
        for id in CaseId::ALL {
            let case = AnsatzCase::new(id).unwrap();
            let r = verify_ansatz(&case, &js).unwrap();
            assert!(r.is_zero(), "{}: {}", id.name(), r);
        }
    }
}
