use std::fmt;
use std::sync::Arc;

use super::Expr;

/// Independent variables of the equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseVar {
    T,
    X,
}

impl BaseVar {
    pub fn name(self) -> &'static str {
        match self {
            BaseVar::T => "t",
            BaseVar::X => "x",
        }
    }
}

/// Dependent symbols: the solution `u` and the adjoint variable `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dependent {
    U,
    V,
}

impl Dependent {
    pub fn name(self) -> &'static str {
        match self {
            Dependent::U => "u",
            Dependent::V => "v",
        }
    }
}

/// Point coordinates an arbitrary function may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointVar {
    T,
    X,
    U,
}

impl PointVar {
    pub const ALL: [PointVar; 3] = [PointVar::T, PointVar::X, PointVar::U];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PointVar::T => "t",
            PointVar::X => "x",
            PointVar::U => "u",
        }
    }

    pub fn from_char(c: char) -> Option<PointVar> {
        match c {
            't' => Some(PointVar::T),
            'x' => Some(PointVar::X),
            'u' => Some(PointVar::U),
            _ => None,
        }
    }
}

impl From<BaseVar> for PointVar {
    fn from(b: BaseVar) -> Self {
        match b {
            BaseVar::T => PointVar::T,
            BaseVar::X => PointVar::X,
        }
    }
}

/// Derivative coordinate `∂_t^t ∂_x^x w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub dep: Dependent,
    pub t: u32,
    pub x: u32,
}

impl JetVar {
    pub const fn new(dep: Dependent, t: u32, x: u32) -> Self {
        JetVar { dep, t, x }
    }

    pub const fn u(t: u32, x: u32) -> Self {
        JetVar::new(Dependent::U, t, x)
    }

    pub const fn v(t: u32, x: u32) -> Self {
        JetVar::new(Dependent::V, t, x)
    }

    pub fn order(&self) -> u32 {
        self.t + self.x
    }

    pub fn bump(&self, dir: BaseVar) -> JetVar {
        match dir {
            BaseVar::T => JetVar { t: self.t + 1, ..*self },
            BaseVar::X => JetVar { x: self.x + 1, ..*self },
        }
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dep.name())?;
        if self.order() > 0 {
            f.write_str("_")?;
            for _ in 0..self.t {
                f.write_str("t")?;
            }
            for _ in 0..self.x {
                f.write_str("x")?;
            }
        }
        Ok(())
    }
}

/// Subset of `{t, x, u}`, always kept in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Signature(u8);

impl Signature {
    pub const T: Signature = Signature(0b001);
    pub const TX: Signature = Signature(0b011);
    pub const TXU: Signature = Signature(0b111);

    pub fn from_vars(vars: &[PointVar]) -> Signature {
        Signature(vars.iter().fold(0, |m, v| m | (1 << v.index())))
    }

    pub fn has(self, v: PointVar) -> bool {
        self.0 & (1 << v.index()) != 0
    }

    pub fn vars(self) -> impl Iterator<Item = PointVar> {
        PointVar::ALL.into_iter().filter(move |v| self.has(*v))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.vars().map(PointVar::name).collect();
        f.write_str(&names.join(","))
    }
}

/// A named arbitrary function together with a partial-derivative multi-index.
///
/// `deriv` is indexed by [`PointVar`]; entries for variables outside the
/// signature are always zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncSymbol {
    pub name: Arc<str>,
    pub sig: Signature,
    pub deriv: [u32; 3],
}

impl FuncSymbol {
    pub fn new(name: &str, sig: Signature) -> Self {
        FuncSymbol { name: Arc::from(name), sig, deriv: [0; 3] }
    }

    pub fn with_deriv(mut self, deriv: [u32; 3]) -> Self {
        self.deriv = deriv;
        self
    }

    /// Partial derivative in `v`, or `None` if the function does not depend on it.
    pub fn bump(&self, v: PointVar) -> Option<FuncSymbol> {
        if !self.sig.has(v) {
            return None;
        }
        let mut out = self.clone();
        out.deriv[v.index()] += 1;
        Some(out)
    }

    pub fn derivative_order(&self) -> u32 {
        self.deriv.iter().sum()
    }

    /// Suffix such as `txx` listing derivatives in signature order.
    pub fn deriv_suffix(&self) -> String {
        let mut s = String::new();
        for v in PointVar::ALL {
            for _ in 0..self.deriv[v.index()] {
                s.push_str(v.name());
            }
        }
        s
    }
}

impl fmt::Display for FuncSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.derivative_order() > 0 {
            write!(f, "_{}", self.deriv_suffix())?;
        }
        write!(f, "({})", self.sig)
    }
}

/// Irreducible factor of a monomial.
///
/// The variant order is the canonical atom order used for sorting.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Base(BaseVar),
    Param(Arc<str>),
    Func(FuncSymbol),
    Jet(JetVar),
    /// Formal antiderivative in `t`.
    IntT(Arc<Expr>),
    Exp(Arc<Expr>),
    Log(Arc<Expr>),
}

impl Atom {
    pub fn param(name: &str) -> Atom {
        Atom::Param(Arc::from(name))
    }

    pub fn as_jet(&self) -> Option<&JetVar> {
        match self {
            Atom::Jet(j) => Some(j),
            _ => None,
        }
    }

    pub fn as_func(&self) -> Option<&FuncSymbol> {
        match self {
            Atom::Func(f) => Some(f),
            _ => None,
        }
    }

    /// Nested expression for `IntT`, `Exp` and `Log` atoms.
    pub fn argument(&self) -> Option<&Expr> {
        match self {
            Atom::IntT(e) | Atom::Exp(e) | Atom::Log(e) => Some(e),
            _ => None,
        }
    }
}

impl From<JetVar> for Atom {
    fn from(j: JetVar) -> Self {
        Atom::Jet(j)
    }
}

impl From<FuncSymbol> for Atom {
    fn from(f: FuncSymbol) -> Self {
        Atom::Func(f)
    }
}

impl From<BaseVar> for Atom {
    fn from(b: BaseVar) -> Self {
        Atom::Base(b)
    }
}
