//! Total derivatives, prolongation of point vector fields and the Euler operator.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{Atom, BaseVar, Dependent, Expr, JetVar, PointVar};

pub const DEFAULT_MAX_ORDER: u32 = 12;

/// Jet space truncated at a maximum total derivative order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetSpace {
    max_order: u32,
}

impl Default for JetSpace {
    fn default() -> Self {
        JetSpace { max_order: DEFAULT_MAX_ORDER }
    }
}

impl JetSpace {
    pub fn new(max_order: u32) -> Result<Self> {
        if max_order < 7 {
            return Err(Error::JetOrderTooSmall(max_order));
        }
        Ok(JetSpace { max_order })
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn check(&self, order: u32) -> Result<()> {
        if order > self.max_order {
            Err(Error::JetOrderOverflow { order, max: self.max_order })
        } else {
            Ok(())
        }
    }

    /// Total derivative `D_t` or `D_x`.
    pub fn total_d(&self, e: &Expr, dir: BaseVar) -> Result<Expr> {
        let pv = PointVar::from(dir);
        let u_dir = Expr::jet(JetVar::u(0, 0).bump(dir));
        e.derive(&mut |a: &Atom| {
            Ok(match a {
                Atom::Base(b) if *b == dir => Expr::one(),
                Atom::Func(f) => {
                    let mut d = f.bump(pv).map(Expr::func).unwrap_or_else(Expr::zero);
                    if let Some(fu) = f.bump(PointVar::U) {
                        d = &d + &(&Expr::func(fu) * &u_dir);
                    }
                    d
                }
                Atom::Jet(j) => {
                    let next = j.bump(dir);
                    self.check(next.order())?;
                    Expr::jet(next)
                }
                Atom::IntT(g) if dir == BaseVar::T => (**g).clone(),
                _ => Expr::zero(),
            })
        })
    }

    pub fn total_d_n(&self, e: &Expr, dir: BaseVar, n: u32) -> Result<Expr> {
        let mut out = e.clone();
        for _ in 0..n {
            if out.is_zero() {
                break;
            }
            out = self.total_d(&out, dir)?;
        }
        Ok(out)
    }

    /// `D_t^t D_x^x e`.
    pub fn total_d_multi(&self, e: &Expr, t: u32, x: u32) -> Result<Expr> {
        let ex = self.total_d_n(e, BaseVar::X, x)?;
        self.total_d_n(&ex, BaseVar::T, t)
    }

    /// Partial derivative in the jet coordinate `j`. For `u` itself this
    /// includes the dependence of arbitrary functions whose signature
    /// contains `u`.
    pub fn jet_partial(&self, e: &Expr, j: JetVar) -> Expr {
        if j == JetVar::u(0, 0) {
            e.diff_point(PointVar::U)
        } else {
            e.partial(&Atom::Jet(j))
        }
    }

    /// Variational derivative `δe/δw`, summed over every multi-index present.
    pub fn euler(&self, e: &Expr, dep: Dependent) -> Result<Expr> {
        let mut targets: Vec<JetVar> = e.jets().into_iter().filter(|j| j.dep == dep).collect();
        let base = JetVar::new(dep, 0, 0);
        if dep == Dependent::U && !targets.contains(&base) && e.depends_on(PointVar::U) {
            targets.push(base);
        }
        let mut out = Expr::zero();
        for j in targets {
            let p = self.jet_partial(e, j);
            if p.is_zero() {
                continue;
            }
            let d = self.total_d_multi(&p, j.t, j.x)?;
            out = if j.order() % 2 == 0 { &out + &d } else { &out - &d };
        }
        Ok(out)
    }
}

/// Point vector field `τ ∂_t + ξ ∂_x + η ∂_u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub tau: Expr,
    pub xi: Expr,
    pub eta: Expr,
}

impl VectorField {
    pub fn new(tau: Expr, xi: Expr, eta: Expr) -> Result<Self> {
        for (name, c) in [("tau", &tau), ("xi", &xi), ("eta", &eta)] {
            if c.jets().iter().any(|j| j.order() > 0 || j.dep == Dependent::V) {
                return Err(Error::Unsupported(format!("{name} of a point field must not contain derivatives of u")));
            }
        }
        Ok(VectorField { tau, xi, eta })
    }

    pub fn zero() -> Self {
        VectorField { tau: Expr::zero(), xi: Expr::zero(), eta: Expr::zero() }
    }

    /// Characteristic `W = η − τ u_t − ξ u_x`.
    pub fn characteristic(&self) -> Expr {
        &(&self.eta - &(&self.tau * &Expr::u(1, 0))) - &(&self.xi * &Expr::u(0, 1))
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField { tau: &self.tau + &other.tau, xi: &self.xi + &other.xi, eta: &self.eta + &other.eta }
    }

    /// Maps every component through `f`.
    pub fn try_map<F>(&self, mut f: F) -> Result<VectorField>
    where
        F: FnMut(&Expr) -> Result<Expr>,
    {
        Ok(VectorField { tau: f(&self.tau)?, xi: f(&self.xi)?, eta: f(&self.eta)? })
    }
}

/// Prolonged field: `zeta[(i, j)]` is the coefficient of `∂/∂u_{t^i x^j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub zeta: BTreeMap<(u32, u32), Expr>,
}

impl ProlongedField {
    pub fn get(&self, t: u32, x: u32) -> Option<&Expr> {
        self.zeta.get(&(t, x))
    }

    /// Applies the prolonged field to a differential function of order at
    /// most the prolongation order. Arbitrary functions of `t` and `x` are
    /// differentiated through `τ` and `ξ`.
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        let mut out = &(&self.base.tau * &e.diff_point(PointVar::T)) + &(&self.base.xi * &e.diff_point(PointVar::X));
        for j in e.jets() {
            if j.dep != Dependent::U {
                return Err(Error::Unsupported("prolonged fields act on u only".into()));
            }
            let z = self.get(j.t, j.x).ok_or_else(|| Error::Unsupported(format!("prolongation does not reach {j}")))?;
            let p = if j.order() == 0 { e.diff_point(PointVar::U) } else { e.partial(&Atom::Jet(j)) };
            out = &out + &(z * &p);
        }
        if !e.jets().contains(&JetVar::u(0, 0)) && e.depends_on(PointVar::U) {
            out = &out + &(&self.base.eta * &e.diff_point(PointVar::U));
        }
        Ok(out)
    }
}

/// `ζ^J = D_J(W) + τ u_{Jt} + ξ u_{Jx}` for the multi-index `t^t x^x`.
pub fn zeta(js: &JetSpace, vf: &VectorField, t: u32, x: u32) -> Result<Expr> {
    if t == 0 && x == 0 {
        return Ok(vf.eta.clone());
    }
    let w = vf.characteristic();
    let dw = js.total_d_multi(&w, t, x)?;
    js.check(t + x + 1)?;
    Ok(&(&dw + &(&vf.tau * &Expr::u(t + 1, x))) + &(&vf.xi * &Expr::u(t, x + 1)))
}

/// Prolongation carrying `ζ^t` and `ζ^{x^k}` for `1 ≤ k ≤ max_order`.
pub fn prolong(js: &JetSpace, vf: &VectorField, max_order: u32) -> Result<ProlongedField> {
    if max_order < 1 {
        return Err(Error::Unsupported("prolongation order must be at least 1".into()));
    }
    js.check(max_order + 1)?;
    let w = vf.characteristic();
    let mut zeta = BTreeMap::new();
    zeta.insert((0, 0), vf.eta.clone());
    let tail = |t: u32, x: u32| &(&vf.tau * &Expr::u(t + 1, x)) + &(&vf.xi * &Expr::u(t, x + 1));
    zeta.insert((1, 0), &js.total_d(&w, BaseVar::T)? + &tail(1, 0));
    let mut dw = w;
    for k in 1..=max_order {
        dw = js.total_d(&dw, BaseVar::X)?;
        zeta.insert((0, k), &dw + &tail(0, k));
    }
    Ok(ProlongedField { base: vf.clone(), zeta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, SymbolTable};

    fn p(s: &str) -> Expr {
        parse(s, &mut SymbolTable::new(), &JetSpace::default()).unwrap()
    }

    #[test]
    fn total_derivative_examples() {
        let js = JetSpace::default();
        assert_eq!(js.total_d(&p("u*u_x"), BaseVar::X).unwrap(), p("u_x^2 + u*u_xx"));
        assert_eq!(js.total_d(&p("exp(intt(Q(t)))"), BaseVar::T).unwrap(), p("Q(t)*exp(intt(Q(t)))"));
        assert_eq!(js.total_d(&p("phi(t,x,u)"), BaseVar::X).unwrap(), p("phi_x(t,x,u) + phi_u(t,x,u)*u_x"));
        assert!(js.total_d(&p("B(t)"), BaseVar::X).unwrap().is_zero());
    }

    #[test]
    fn overflow_is_reported() {
        let js = JetSpace::new(7).unwrap();
        assert!(matches!(js.total_d(&p("u_xxxxxxx"), BaseVar::X), Err(Error::JetOrderOverflow { order: 8, max: 7 })));
        assert!(matches!(JetSpace::new(6), Err(Error::JetOrderTooSmall(6))));
    }

    #[test]
    fn zeta_x_general_formula() {
        let js = JetSpace::default();
        let vf = VectorField::new(p("tau(t,x,u)"), p("xi(t,x,u)"), p("eta(t,x,u)")).unwrap();
        let pr = prolong(&js, &vf, 5).unwrap();
        let expected = p("eta_x(t,x,u) + (eta_u(t,x,u) - xi_x(t,x,u))*u_x - tau_x(t,x,u)*u_t \
                          - xi_u(t,x,u)*u_x^2 - tau_u(t,x,u)*u_x*u_t");
        assert_eq!(pr.get(0, 1).unwrap(), &expected);
        for k in 1..=5 {
            assert_eq!(pr.get(0, k).unwrap(), &zeta(&js, &vf, 0, k).unwrap());
        }
        assert_eq!(pr.get(1, 0).unwrap(), &zeta(&js, &vf, 1, 0).unwrap());
    }

    #[test]
    fn trivial_prolongations() {
        let js = JetSpace::default();
        let scaling = VectorField::new(Expr::zero(), Expr::zero(), p("u")).unwrap();
        let pr = prolong(&js, &scaling, 5).unwrap();
        assert_eq!(pr.get(0, 1).unwrap(), &p("u_x"));
        assert_eq!(pr.get(0, 2).unwrap(), &p("u_xx"));
        let shift = VectorField::new(Expr::one(), Expr::zero(), Expr::zero()).unwrap();
        let pr = prolong(&js, &shift, 5).unwrap();
        assert!(pr.zeta.iter().all(|(_, z)| z.is_zero()));
    }

    #[test]
    fn euler_examples() {
        let js = JetSpace::default();
        assert!(js.euler(&p("u*u_xx + u_x^2"), Dependent::U).unwrap().is_zero());
        assert_eq!(js.euler(&p("v*u_t"), Dependent::U).unwrap(), p("-v_t"));
        assert_eq!(js.euler(&p("v*u_t"), Dependent::V).unwrap(), p("u_t"));
        assert_eq!(js.euler(&p("phi(t,x,u)*u_x"), Dependent::U).unwrap(), p("-phi_x(t,x,u)"));
        assert!(js.euler(&p("phi_u(t,x,u)*u_x + phi_x(t,x,u)"), Dependent::U).unwrap().is_zero());
    }
}
