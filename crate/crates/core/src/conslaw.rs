//! Conserved vectors from symmetries and the nonlocal adjoint substitution,
//! and exact divergence checks on solutions.

use crate::adjoint::{beta, formal_lagrangian, phi_f2, phi_generic, substitute_v};
use crate::error::{Error, Result};
use crate::expr::{to_text, Atom, BaseVar, Dependent, Expr, FuncSymbol, JetVar, Signature};
use crate::jet::{JetSpace, VectorField};
use crate::pde::PdeFamily;
use crate::rules::{finalize_clock, RuleSet};
use crate::symmetry::{AnsatzCase, CaseId};

/// `W = η − τ u_t − ξ u_x`.
pub fn characteristic(vf: &VectorField) -> Expr {
    vf.characteristic()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservedVector {
    pub c1: Expr,
    pub c2: Expr,
}

impl ConservedVector {
    pub fn zero() -> Self {
        ConservedVector { c1: Expr::zero(), c2: Expr::zero() }
    }

    pub fn add(&self, other: &ConservedVector) -> ConservedVector {
        ConservedVector { c1: &self.c1 + &other.c1, c2: &self.c2 + &other.c2 }
    }

    /// Adds the trivial vector `(D_x G, −D_t G)`.
    pub fn gauge(&self, g: &Expr, js: &JetSpace) -> Result<ConservedVector> {
        Ok(ConservedVector { c1: &self.c1 + &js.total_d(g, BaseVar::X)?, c2: &self.c2 - &js.total_d(g, BaseVar::T)? })
    }

    /// `D_t C¹ + D_x C²` without any substitution.
    pub fn divergence(&self, js: &JetSpace) -> Result<Expr> {
        Ok(&js.total_d(&self.c1, BaseVar::T)? + &js.total_d(&self.c2, BaseVar::X)?)
    }

    pub fn try_map<F>(&self, mut f: F) -> Result<ConservedVector>
    where
        F: FnMut(&Expr) -> Result<Expr>,
    {
        Ok(ConservedVector { c1: f(&self.c1)?, c2: f(&self.c2)? })
    }
}

fn lx(l: &Expr, k: u32) -> Expr {
    l.partial(&Atom::Jet(JetVar::u(0, k)))
}

/// The conserved vector attached to `vf` through the formal Lagrangian.
pub fn ibragimov_vector(vf: &VectorField, fam: &PdeFamily, js: &JetSpace) -> Result<ConservedVector> {
    let l = formal_lagrangian(fam);
    let w = characteristic(vf);
    let dx = |e: &Expr, n: u32| js.total_d_n(e, BaseVar::X, n);
    let c1 = &(&vf.tau * &l) + &(&w * &l.partial(&Atom::Jet(JetVar::u(1, 0))));
    let (l1, l2, l3, l5) = (lx(&l, 1), lx(&l, 2), lx(&l, 3), lx(&l, 5));
    let k0 = &(&(&l1 - &dx(&l2, 1)?) + &dx(&l3, 2)?) + &dx(&l5, 4)?;
    let k1 = &(&l2 - &dx(&l3, 1)?) - &dx(&l5, 3)?;
    let k2 = &l3 + &dx(&l5, 2)?;
    let k3 = dx(&l5, 1)?;
    let mut c2 = &(&vf.xi * &l) + &(&w * &k0);
    c2 = &c2 + &(&dx(&w, 1)? * &k1);
    c2 = &c2 + &(&dx(&w, 2)? * &k2);
    c2 = &c2 - &(&dx(&w, 3)? * &k3);
    c2 = &c2 + &(&dx(&w, 4)? * &l5);
    Ok(ConservedVector { c1, c2 })
}

/// Replaces `v` by `phi` in both components.
pub fn substitute_phi(cv: &ConservedVector, phi: &Expr, js: &JetSpace) -> Result<ConservedVector> {
    cv.try_map(|e| substitute_v(e, phi, js))
}

/// `D_t C¹ + D_x C²` with `v = phi`, reduced on solutions but with no side
/// conditions applied.
pub fn divergence_on_solutions(cv: &ConservedVector, fam: &PdeFamily, phi: &Expr, js: &JetSpace) -> Result<Expr> {
    let div = substitute_phi(cv, phi, js)?.divergence(js)?;
    fam.reduce_on_solutions(&div, js)
}

/// As [`divergence_on_solutions`], then rewritten by `rules`.
pub fn divergence_residual(
    cv: &ConservedVector,
    fam: &PdeFamily,
    phi: &Expr,
    rules: &RuleSet,
    js: &JetSpace,
) -> Result<Expr> {
    let raw = divergence_on_solutions(cv, fam, phi, js)?;
    finalize_clock(&rules.apply(&raw)?)
}

/// Reduces a density on solutions with `v = phi` and the side conditions.
pub fn reduced_density(c1: &Expr, fam: &PdeFamily, phi: &Expr, rules: &RuleSet, js: &JetSpace) -> Result<Expr> {
    let d = fam.reduce_on_solutions(&substitute_v(c1, phi, js)?, js)?;
    rules.apply(&d)
}

/// Euler derivative of the difference of two reduced densities. Zero means
/// they differ by a total `x`-derivative on solutions.
pub fn density_difference(
    a: &Expr,
    b: &Expr,
    fam: &PdeFamily,
    phi: &Expr,
    rules: &RuleSet,
    js: &JetSpace,
) -> Result<Expr> {
    let diff = &reduced_density(a, fam, phi, rules, js)? - &reduced_density(b, fam, phi, rules, js)?;
    finalize_clock(&rules.apply(&js.euler(&diff, Dependent::U)?)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsCase {
    F0,
    FConst,
    F2,
    F3,
}

impl ConsCase {
    pub const ALL: [ConsCase; 4] = [ConsCase::F0, ConsCase::FConst, ConsCase::F2, ConsCase::F3];

    pub fn name(self) -> &'static str {
        match self {
            ConsCase::F0 => "f0",
            ConsCase::FConst => "fconst",
            ConsCase::F2 => "f2",
            ConsCase::F3 => "f3",
        }
    }

    pub fn parse(s: &str) -> Result<ConsCase> {
        ConsCase::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

/// A symmetry, a substitution `v = φ` and the side conditions they rely on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub case: ConsCase,
    pub family: PdeFamily,
    pub field: VectorField,
    pub phi: Expr,
    pub rules: RuleSet,
}

fn beta_d(t: u32, x: u32) -> FuncSymbol {
    FuncSymbol::new("beta", Signature::TX).with_deriv([t, x, 0])
}

impl Scenario {
    pub fn new(case: ConsCase) -> Result<Scenario> {
        let (sym, phi) = match case {
            ConsCase::F0 => (AnsatzCase::new(CaseId::Case1Fzero)?, phi_generic()),
            ConsCase::FConst => (AnsatzCase::new(CaseId::Case2Fconst)?, phi_generic()),
            ConsCase::F2 => (AnsatzCase::case2_with(Expr::int(2))?, phi_f2()),
            ConsCase::F3 => (AnsatzCase::case2_with(Expr::int(3))?, beta()),
        };
        let mut rules = sym.rules;
        if case == ConsCase::F3 {
            let (b, e, q) = (Expr::fun("B", Signature::T), Expr::fun("E", Signature::T), Expr::fun("Q", Signature::T));
            let bd = |t, x| Expr::func(beta_d(t, x));
            let d2 = &(&(&(&beta() * &q) - &(&b * &bd(0, 3))) - &bd(0, 5)) - &bd(1, 0);
            rules.add_condition(&d2, beta_d(1, 0))?;
            rules.add_condition(&(&bd(0, 3) + &(&e * &bd(0, 1))), beta_d(0, 3))?;
        }
        Ok(Scenario { case, family: sym.family, field: sym.field, phi, rules })
    }

    pub fn vector(&self, js: &JetSpace) -> Result<ConservedVector> {
        ibragimov_vector(&self.field, &self.family, js)
    }

    /// The conserved vector with `v = φ` and the side conditions applied.
    pub fn explicit_vector(&self, js: &JetSpace) -> Result<ConservedVector> {
        let cv = substitute_phi(&self.vector(js)?, &self.phi, js)?;
        cv.try_map(|e| finalize_clock(&self.rules.apply(e)?))
    }

    pub fn residual(&self, js: &JetSpace) -> Result<Expr> {
        divergence_residual(&self.vector(js)?, &self.family, &self.phi, &self.rules, js)
    }

    pub fn residual_of(&self, cv: &ConservedVector, js: &JetSpace) -> Result<Expr> {
        divergence_residual(cv, &self.family, &self.phi, &self.rules, js)
    }

    pub fn density_difference(&self, a: &Expr, b: &Expr, js: &JetSpace) -> Result<Expr> {
        density_difference(a, b, &self.family, &self.phi, &self.rules, js)
    }

    /// Instantiates the parameter `F` of a printed expression with this
    /// scenario's `F`.
    pub fn specialize(&self, e: &Expr) -> Result<Expr> {
        e.substitute(&Atom::param("F"), &self.family.f)
    }
}

pub fn describe_vector(cv: &ConservedVector) -> String {
    format!("C1 = {}\nC2 = {}", to_text(&cv.c1), to_text(&cv.c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, SymbolTable};

    fn p(s: &str) -> Expr {
        parse(s, &mut SymbolTable::new(), &JetSpace::default()).unwrap()
    }

    #[test]
    fn characteristic_examples() {
        let vf = VectorField::new(Expr::zero(), Expr::one(), Expr::zero()).unwrap();
        assert_eq!(characteristic(&vf), p("-u_x"));
        let vf = VectorField::new(Expr::zero(), Expr::zero(), p("u")).unwrap();
        assert_eq!(characteristic(&vf), p("u"));
    }

    #[test]
    fn first_component() {
        let js = JetSpace::default();
        let fam = PdeFamily::reduced_symbolic();
        let vf = VectorField::new(p("tau(t,x,u)"), p("xi(t,x,u)"), p("eta(t,x,u)")).unwrap();
        let cv = ibragimov_vector(&vf, &fam, &js).unwrap();
        let w = characteristic(&vf);
        assert_eq!(cv.c1, &(&p("tau(t,x,u)") * &formal_lagrangian(&fam)) + &(&w * &p("v")));
        assert_eq!(ibragimov_vector(&VectorField::zero(), &fam, &js).unwrap(), ConservedVector::zero());
    }

    #[test]
    fn fifth_order_flux() {
        let js = JetSpace::default();
        let z = Expr::zero();
        let fam =
            PdeFamily { a: Expr::one(), b: z.clone(), c: z.clone(), e: z.clone(), f: z.clone(), q: z, time: Expr::t() };
        let vf = VectorField::new(Expr::zero(), Expr::zero(), Expr::one()).unwrap();
        let cv = ibragimov_vector(&vf, &fam, &js).unwrap();
        assert_eq!(cv.c1, p("v"));
        assert_eq!(cv.c2, p("v_xxxx"));
    }

    #[test]
    fn master_identity() {
        let js = JetSpace::default();
        for case in ConsCase::ALL {
            let s = Scenario::new(case).unwrap();
            let r = s.residual(&js).unwrap();
            assert!(r.is_zero(), "{}: {}", case.name(), to_text(&r));
        }
    }
}
