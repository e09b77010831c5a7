//! The equation family, reduction on its solutions, and its equivalence group.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{to_text, Atom, BaseVar, Dependent, Expr, JetVar, PointVar, Scalar, Signature};
use crate::jet::JetSpace;

/// Coefficients of
/// `u_t + A u_xxxxx + B u_xxx + C u u_xxx + E u u_x + F u_x u_xx + Q u = 0`.
///
/// `time` is the family's own time coordinate expressed in `t`; it is `t`
/// unless the family was produced by an equivalence transformation, in
/// which case the coefficients are pulled back to the original `t` and
/// `u_t` stands for the derivative in `time`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeFamily {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub e: Expr,
    pub f: Expr,
    pub q: Expr,
    pub time: Expr,
}

pub const COEFF_NAMES: [&str; 6] = ["A", "B", "C", "E", "F", "Q"];

impl PdeFamily {
    pub fn new(a: Expr, b: Expr, c: Expr, e: Expr, f: Expr, q: Expr) -> Result<Self> {
        let fam = PdeFamily { a, b, c, e, f, q, time: Expr::t() };
        fam.validate()?;
        Ok(fam)
    }

    /// All six coefficients arbitrary functions of `t`.
    pub fn symbolic() -> Self {
        let s = |n: &str| Expr::fun(n, Signature::T);
        PdeFamily { a: s("A"), b: s("B"), c: s("C"), e: s("E"), f: s("F"), q: s("Q"), time: Expr::t() }
    }

    /// `A = C = 1` with `B, E, F, Q` arbitrary.
    pub fn reduced_symbolic() -> Self {
        PdeFamily { a: Expr::one(), c: Expr::one(), ..PdeFamily::symbolic() }
    }

    pub fn with_f(mut self, f: Expr) -> Self {
        self.f = f;
        self
    }

    pub fn coefficients(&self) -> [&Expr; 6] {
        [&self.a, &self.b, &self.c, &self.e, &self.f, &self.q]
    }

    pub fn from_coefficients(cs: [Expr; 6], time: Expr) -> Result<Self> {
        let [a, b, c, e, f, q] = cs;
        let fam = PdeFamily { a, b, c, e, f, q, time };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in COEFF_NAMES.iter().zip(self.coefficients()) {
            if c.has_jets() || c.depends_on(PointVar::X) || c.depends_on(PointVar::U) {
                return Err(Error::DegenerateFamily(format!(
                    "coefficient {name} = {} must depend on t only",
                    to_text(c)
                )));
            }
        }
        if self.a.is_zero() {
            return Err(Error::DegenerateFamily("A = 0".into()));
        }
        if self.c.is_zero() {
            return Err(Error::DegenerateFamily("C = 0".into()));
        }
        Ok(())
    }

    pub fn is_reduced(&self) -> bool {
        self.a.is_one() && self.c.is_one()
    }

    /// The left-hand side of the equation.
    pub fn lhs(&self) -> Expr {
        let u = Expr::u;
        let terms = [
            u(1, 0),
            &self.a * &u(0, 5),
            &self.b * &u(0, 3),
            &(&self.c * &u(0, 0)) * &u(0, 3),
            &(&self.e * &u(0, 0)) * &u(0, 1),
            &(&self.f * &u(0, 1)) * &u(0, 2),
            &self.q * &u(0, 0),
        ];
        terms.into_iter().sum()
    }

    /// The expression equal to `u_t` on solutions.
    pub fn solve_ut(&self) -> Result<Expr> {
        let lhs = self.lhs();
        let ut = Atom::Jet(JetVar::u(1, 0));
        let coeff = lhs.coefficient(&ut, 1);
        if !coeff.is_one() {
            return Err(Error::UtCoefficient(to_text(&coeff)));
        }
        Ok(-(&lhs - &Expr::u(1, 0)))
    }

    pub fn reducer(&self, js: &JetSpace) -> Result<Reducer> {
        Ok(Reducer { js: *js, ut: self.solve_ut()?, cache: BTreeMap::new() })
    }

    /// Eliminates every `t`-derivative of `u` using the equation.
    pub fn reduce_on_solutions(&self, e: &Expr, js: &JetSpace) -> Result<Expr> {
        self.reducer(js)?.reduce(e)
    }
}

/// Rewrites `u_{t^i x^j}` (`i ≥ 1`) into pure `x`-jets on solutions,
/// memoizing the image of each jet.
pub struct Reducer {
    js: JetSpace,
    ut: Expr,
    cache: BTreeMap<JetVar, Expr>,
}

impl Reducer {
    fn jet(&mut self, j: JetVar) -> Result<Expr> {
        if j.dep != Dependent::U || j.t == 0 {
            return Ok(Expr::jet(j));
        }
        if let Some(e) = self.cache.get(&j) {
            return Ok(e.clone());
        }
        let out = if j.x > 0 {
            let prev = self.jet(JetVar::u(j.t, j.x - 1))?;
            self.js.total_d(&prev, BaseVar::X)?
        } else if j.t == 1 {
            self.ut.clone()
        } else {
            let prev = self.jet(JetVar::u(j.t - 1, 0))?;
            let d = self.js.total_d(&prev, BaseVar::T)?;
            self.reduce(&d)?
        };
        self.cache.insert(j, out.clone());
        Ok(out)
    }

    pub fn reduce(&mut self, e: &Expr) -> Result<Expr> {
        let targets: Vec<JetVar> = e.jets().into_iter().filter(|j| j.dep == Dependent::U && j.t > 0).collect();
        if targets.is_empty() {
            return Ok(e.clone());
        }
        let mut map = BTreeMap::new();
        for j in targets {
            map.insert(Atom::Jet(j), self.jet(j)?);
        }
        e.substitute_all(&map)
    }
}

/// Parameters of `t̃ = α(t)`, `x̃ = e^{k1}(x + k2)`, `ũ = e^{s(t) + k1/2} u`
/// where `s = r(t) k_r`.
///
/// `alpha` is the new time expressed in the original `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceParams {
    pub alpha: Expr,
    pub k1: Expr,
    pub k2: Expr,
    pub scale_r: Expr,
}

fn is_constant(e: &Expr) -> bool {
    !e.has_jets() && PointVar::ALL.iter().all(|v| !e.depends_on(*v))
}

impl EquivalenceParams {
    pub fn new(alpha: Expr, k1: Expr, k2: Expr, scale_r: Expr) -> Result<Self> {
        let p = EquivalenceParams { alpha, k1, k2, scale_r };
        p.validate()?;
        Ok(p)
    }

    /// The identity transformation of a family with time coordinate `time`.
    pub fn identity(time: &Expr) -> Self {
        EquivalenceParams { alpha: time.clone(), k1: Expr::zero(), k2: Expr::zero(), scale_r: Expr::zero() }
    }

    fn validate(&self) -> Result<()> {
        if !is_constant(&self.k1) || !is_constant(&self.k2) {
            return Err(Error::DegenerateParams("k1 and k2 must be constants".into()));
        }
        for (name, e) in [("alpha", &self.alpha), ("scale_r", &self.scale_r)] {
            if e.has_jets() || e.depends_on(PointVar::X) || e.depends_on(PointVar::U) {
                return Err(Error::DegenerateParams(format!("{name} must depend on t only")));
            }
        }
        if self.alpha.diff_point(PointVar::T).is_zero() {
            return Err(Error::DegenerateParams("alpha_t = 0".into()));
        }
        Ok(())
    }

    /// `g(t)` with `ũ = g u`.
    pub fn u_scale(&self) -> Expr {
        Expr::exp(&self.scale_r + &self.k1.scale(&Scalar::ratio(1, 2)))
    }

    /// The single transformation equal to applying `self` and then `next`.
    /// `next.alpha` is the final time expressed in the original `t`.
    pub fn compose(&self, next: &EquivalenceParams) -> EquivalenceParams {
        EquivalenceParams {
            alpha: next.alpha.clone(),
            k1: &self.k1 + &next.k1,
            k2: &self.k2 + &(&next.k2 * &Expr::exp(-&self.k1)),
            scale_r: &self.scale_r + &next.scale_r,
        }
    }

    /// The transformation undoing `self` for a family whose time coordinate
    /// was `time` before `self` was applied.
    pub fn inverse(&self, time: &Expr) -> EquivalenceParams {
        EquivalenceParams {
            alpha: time.clone(),
            k1: -&self.k1,
            k2: -(&self.k2 * &Expr::exp(self.k1.clone())),
            scale_r: -&self.scale_r,
        }
    }
}

/// `d e / d time` for a family whose time coordinate is `time`.
fn d_time(e: &Expr, time: &Expr) -> Result<Expr> {
    e.diff_point(PointVar::T).div(&time.diff_point(PointVar::T))
}

/// Coefficients of the transformed equation, pulled back to the original `t`.
pub fn apply_equivalence(fam: &PdeFamily, p: &EquivalenceParams) -> Result<PdeFamily> {
    p.validate()?;
    let alpha_t = d_time(&p.alpha, &fam.time)?;
    let inv = alpha_t.inv()?;
    let ek = |num: i64, den: i64, with_r: bool| {
        let mut arg = p.k1.scale(&Scalar::ratio(num, den));
        if with_r {
            arg = &arg - &p.scale_r;
        }
        &Expr::exp(arg) * &inv
    };
    let out = PdeFamily {
        a: &ek(5, 1, false) * &fam.a,
        b: &ek(3, 1, false) * &fam.b,
        c: &ek(5, 2, true) * &fam.c,
        e: &ek(1, 2, true) * &fam.e,
        f: &ek(5, 2, true) * &fam.f,
        q: &(&fam.q - &d_time(&p.scale_r, &fam.time)?) * &inv,
        time: p.alpha.clone(),
    };
    out.validate()?;
    Ok(out)
}

/// Parameters of the transformation setting `A = C = 1`:
/// `t̃ = ∫ e^{5k1} A dt`, `x̃ = e^{k1}(x + k2)`, `ũ = e^{-2k1} (C/A) u`.
pub fn normal_form_params(fam: &PdeFamily, k1: &Expr, k2: &Expr) -> Result<EquivalenceParams> {
    fam.validate()?;
    let ek = Expr::exp(k1.scale(&Scalar::int(5)));
    let alpha = Expr::intt(&(&(&ek * &fam.a) * &fam.time.diff_point(PointVar::T)))?;
    let scale_r = &Expr::log(&fam.c.div(&fam.a)?)? - &k1.scale(&Scalar::ratio(5, 2));
    EquivalenceParams::new(alpha, k1.clone(), k2.clone(), scale_r)
}

pub fn normal_form(fam: &PdeFamily, k1: &Expr, k2: &Expr) -> Result<(PdeFamily, EquivalenceParams)> {
    let p = normal_form_params(fam, k1, k2)?;
    Ok((apply_equivalence(fam, &p)?, p))
}

/// `lhs(fam)` rewritten in the transformed variables, normalized to unit
/// `ũ_t̃` coefficient, minus `lhs(target)`. The transformed jets reuse the
/// `u` jet symbols; `target` is normally `apply_equivalence(fam, p)`.
pub fn verify_against(fam: &PdeFamily, p: &EquivalenceParams, target: &PdeFamily) -> Result<Expr> {
    p.validate()?;
    let g = p.u_scale();
    let g_inv = g.inv()?;
    let time_t = fam.time.diff_point(PointVar::T);
    let alpha_t = p.alpha.diff_point(PointVar::T);
    let ek = Expr::exp(p.k1.clone());
    let mut map = BTreeMap::new();
    for n in 0..=5u32 {
        map.insert(Atom::Jet(JetVar::u(0, n)), &(&g_inv * &ek.pow(n as i32)?) * &Expr::u(0, n));
    }
    let ut = &(&g_inv.diff_point(PointVar::T) * &Expr::u(0, 0)) + &(&(&g_inv * &alpha_t) * &Expr::u(1, 0));
    map.insert(Atom::Jet(JetVar::u(1, 0)), ut.div(&time_t)?);
    let lhs = fam.lhs();
    if let Some(j) = lhs.jets().into_iter().find(|j| !map.contains_key(&Atom::Jet(*j))) {
        return Err(Error::Unsupported(format!("jet {j} outside the transformation table")));
    }
    let transformed = lhs.substitute_all(&map)?;
    let normalized = &transformed * &(&g * &time_t).div(&alpha_t)?;
    Ok(&normalized - &target.lhs())
}

pub fn verify_equivalence(fam: &PdeFamily, p: &EquivalenceParams) -> Result<Expr> {
    verify_against(fam, p, &apply_equivalence(fam, p)?)
}
