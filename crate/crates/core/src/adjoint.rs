//! Formal Lagrangian, adjoint equation and nonlinear self-adjointness.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::expr::{to_text, Atom, Dependent, Expr, FuncSymbol, JetVar, Monomial, PointVar, Signature};
use crate::jet::JetSpace;
use crate::pde::PdeFamily;

/// `L = v · lhs`.
pub fn formal_lagrangian(fam: &PdeFamily) -> Expr {
    &Expr::v(0, 0) * &fam.lhs()
}

/// `F* = δL/δu`.
pub fn adjoint_equation(fam: &PdeFamily, js: &JetSpace) -> Result<Expr> {
    js.euler(&formal_lagrangian(fam), Dependent::U)
}

/// Replaces `v` and its derivatives by the total derivatives of `phi`.
pub fn substitute_v(e: &Expr, phi: &Expr, js: &JetSpace) -> Result<Expr> {
    let jets: Vec<JetVar> = e.jets().into_iter().filter(|j| j.dep == Dependent::V).collect();
    if jets.is_empty() {
        return Ok(e.clone());
    }
    let mut map = BTreeMap::new();
    let mut by_x: BTreeMap<(u32, u32), Expr> = BTreeMap::new();
    for j in jets {
        let img = match by_x.get(&(j.t, j.x)) {
            Some(img) => img.clone(),
            None => {
                let img = js.total_d_multi(phi, j.t, j.x)?;
                by_x.insert((j.t, j.x), img.clone());
                img
            }
        };
        map.insert(Atom::Jet(j), img);
    }
    e.substitute_all(&map)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    SelfAdjoint,
    QuasiSelfAdjoint,
    NonlinearlySelfAdjoint,
    None,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::SelfAdjoint => "self_adjoint",
            Classification::QuasiSelfAdjoint => "quasi_self_adjoint",
            Classification::NonlinearlySelfAdjoint => "nonlinearly_self_adjoint",
            Classification::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfAdjointnessReport {
    pub phi: Expr,
    pub lambda: Expr,
    /// Coefficient conditions, each `= 0`, keyed by the monomial they multiply.
    pub conditions: Vec<(Monomial, Expr)>,
    pub classification: Classification,
    /// `false` when `phi` is zero, which is never an admissible substitution.
    pub witness_valid: bool,
}

impl SelfAdjointnessReport {
    pub fn all_zero(&self) -> bool {
        self.conditions.iter().all(|(_, c)| c.is_zero())
    }

    pub fn nonzero_conditions(&self) -> Vec<&Expr> {
        self.conditions.iter().map(|(_, c)| c).filter(|c| !c.is_zero()).collect()
    }
}

/// `F*|_{v=φ} − λ F` for a given `λ`.
pub fn condition_expression(fam: &PdeFamily, phi: &Expr, lambda: &Expr, js: &JetSpace) -> Result<Expr> {
    let adj = substitute_v(&adjoint_equation(fam, js)?, phi, js)?;
    Ok(&adj - &(lambda * &fam.lhs()))
}

/// Splits `e` over monomials in the derivatives of `u`, and also in `u`
/// itself when no arbitrary function depends on `u`.
pub fn split_conditions(e: &Expr) -> Vec<(Monomial, Expr)> {
    let mut u_free = true;
    e.for_each_atom(&mut |a| {
        if let Atom::Func(f) = a {
            u_free &= !f.sig.has(PointVar::U);
        }
    });
    let basis: BTreeSet<JetVar> =
        e.jets().into_iter().filter(|j| j.dep == Dependent::U && (j.order() > 0 || u_free)).collect();
    e.collect(&basis).into_iter().collect()
}

fn check_phi(phi: &Expr) -> Result<()> {
    if phi.jets().iter().any(|j| j.order() > 0 || j.dep == Dependent::V) {
        return Err(Error::Unsupported(format!("phi = {} must depend on t, x, u only", to_text(phi))));
    }
    Ok(())
}

fn classify(phi: &Expr, all_zero: bool) -> Classification {
    if phi.is_zero() || !all_zero {
        return Classification::None;
    }
    if *phi == Expr::u(0, 0) {
        return Classification::SelfAdjoint;
    }
    let point_only = !phi.depends_on(PointVar::T) && !phi.depends_on(PointVar::X);
    if point_only && !phi.diff_point(PointVar::U).is_zero() {
        Classification::QuasiSelfAdjoint
    } else {
        Classification::NonlinearlySelfAdjoint
    }
}

/// Conditions for `F*|_{v=φ} = λ F`, with `λ` fixed by matching the `u_t`
/// coefficients (the equation has unit `u_t` coefficient).
pub fn self_adjointness_conditions(fam: &PdeFamily, phi: &Expr, js: &JetSpace) -> Result<SelfAdjointnessReport> {
    check_phi(phi)?;
    let adj = substitute_v(&adjoint_equation(fam, js)?, phi, js)?;
    let lambda = adj.coefficient(&Atom::Jet(JetVar::u(1, 0)), 1);
    let residual = &adj - &(&lambda * &fam.lhs());
    let conditions = split_conditions(&residual);
    let all_zero = conditions.iter().all(|(_, c)| c.is_zero());
    Ok(SelfAdjointnessReport {
        phi: phi.clone(),
        lambda,
        classification: classify(phi, all_zero),
        witness_valid: !phi.is_zero(),
        conditions,
    })
}

/// `c1 e^{2∫Q} u + c2 e^{∫Q}`.
pub fn phi_f2() -> Expr {
    let h = Expr::intt(&Expr::fun("Q", Signature::T)).expect("Q depends on t only");
    let a = &Expr::param("c1") * &Expr::exp(h.scale(&crate::expr::Scalar::int(2)));
    &(&a * &Expr::u(0, 0)) + &phi_generic()
}

/// `c2 e^{∫Q}`.
pub fn phi_generic() -> Expr {
    let h = Expr::intt(&Expr::fun("Q", Signature::T)).expect("Q depends on t only");
    &Expr::param("c2") * &Expr::exp(h)
}

/// `α(t) u + β(t, x)`.
pub fn affine_ansatz() -> Expr {
    &(&Expr::fun("alpha", Signature::T) * &Expr::u(0, 0)) + &beta()
}

/// The fully generic `λ(t, x, u)` and `φ(t, x, u)`.
pub fn generic_lambda() -> Expr {
    Expr::fun("lambda", Signature::TXU)
}

pub fn generic_phi() -> Expr {
    Expr::fun("phi", Signature::TXU)
}

/// `F*|_{v=φ} − λ F` for generic `φ(t, x, u)` and `λ(t, x, u)`, split over
/// the derivatives of `u`.
pub fn generic_condition_coefficients(fam: &PdeFamily, js: &JetSpace) -> Result<BTreeMap<Monomial, Expr>> {
    let e = condition_expression(fam, &generic_phi(), &generic_lambda(), js)?;
    Ok(split_conditions(&e).into_iter().collect())
}

pub fn beta() -> Expr {
    Expr::fun("beta", Signature::TX)
}

/// Outcome of the `F = 3` analysis with `φ = β(t, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F3Analysis {
    pub report: SelfAdjointnessReport,
    /// Nonzero derived conditions, each `= 0`.
    pub derived: Vec<Expr>,
    /// `βQ + β_x B E − β_xxxxx − β_t`.
    pub printed_condition: Expr,
    /// Multipliers `m_i` with `printed − Σ m_i derived_i = implication_residual`.
    pub multipliers: Vec<Expr>,
    pub implication_residual: Expr,
}

fn beta_d(t: u32, x: u32) -> Expr {
    Expr::func(FuncSymbol::new("beta", Signature::TX).with_deriv([t, x, 0]))
}

pub fn f3_printed_condition() -> Expr {
    let (b, e, q) = (Expr::fun("B", Signature::T), Expr::fun("E", Signature::T), Expr::fun("Q", Signature::T));
    let terms = [&beta() * &q, &(&beta_d(0, 1) * &b) * &e, -beta_d(0, 5), -beta_d(1, 0)];
    terms.into_iter().sum()
}

/// Eliminates one leading atom per condition from `target`, in order.
/// Returns the multipliers and what remains.
pub fn eliminate(target: &Expr, conditions: &[(Expr, Atom)]) -> Result<(Vec<Expr>, Expr)> {
    let mut rest = target.clone();
    let mut multipliers = Vec::new();
    for (cond, lead) in conditions {
        let pivot = cond.coefficient(lead, 1);
        let m = rest.coefficient(lead, 1).div(&pivot)?;
        rest = &rest - &(&m * cond);
        multipliers.push(m);
    }
    Ok((multipliers, rest))
}

pub fn f3_condition_set(fam: &PdeFamily, js: &JetSpace) -> Result<F3Analysis> {
    if fam.f != Expr::int(3) {
        return Err(Error::Unsupported(format!("F = {} but the F = 3 analysis needs F = 3", to_text(&fam.f))));
    }
    let report = self_adjointness_conditions(fam, &beta(), js)?;
    let derived: Vec<Expr> = report.nonzero_conditions().into_iter().cloned().collect();
    let printed = f3_printed_condition();
    let leads = [Atom::Func(FuncSymbol::new("beta", Signature::TX).with_deriv([1, 0, 0])), {
        Atom::Func(FuncSymbol::new("beta", Signature::TX).with_deriv([0, 3, 0]))
    }];
    let mut pairs = Vec::new();
    for lead in leads {
        if let Some(c) =
            derived.iter().find(|c| !c.coefficient(&lead, 1).is_zero() && !pairs.iter().any(|(d, _)| d == *c))
        {
            pairs.push(((*c).clone(), lead));
        }
    }
    let (multipliers, implication_residual) = eliminate(&printed, &pairs)?;
    let derived_ordered = pairs.into_iter().map(|(c, _)| c).collect();
    Ok(F3Analysis { report, derived: derived_ordered, printed_condition: printed, multipliers, implication_residual })
}
