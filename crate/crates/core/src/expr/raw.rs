use super::{Atom, Expr, PointVar, Scalar};
use crate::error::{Error, Result};
use crate::jet::JetSpace;

/// Uncanonicalized expression tree, as produced by the parser or built by
/// hand. [`Raw::canonicalize`] turns it into an [`Expr`].
#[derive(Clone, Debug, PartialEq)]
pub enum Raw {
    Num(Scalar),
    Atom(Atom),
    Add(Vec<Raw>),
    Mul(Vec<Raw>),
    Neg(Box<Raw>),
    Div(Box<Raw>, Box<Raw>),
    Pow(Box<Raw>, i32),
    Exp(Box<Raw>),
    Log(Box<Raw>),
    IntT(Box<Raw>),
    /// `D[e, var, n]`: total derivative in `t`/`x` when `e` involves jets,
    /// otherwise the partial derivative in the point coordinate.
    Deriv(Box<Raw>, PointVar, u32),
}

impl Raw {
    pub fn canonicalize(&self, js: &JetSpace) -> Result<Expr> {
        Ok(match self {
            Raw::Num(s) => Expr::scalar(s.clone()),
            Raw::Atom(a) => {
                if let Atom::Jet(j) = a {
                    js.check(j.order())?;
                }
                Expr::atom(a.clone())
            }
            Raw::Add(xs) => xs.iter().map(|x| x.canonicalize(js)).sum::<Result<Expr>>()?,
            Raw::Mul(xs) => {
                let mut acc = Expr::one();
                for x in xs {
                    acc = &acc * &x.canonicalize(js)?;
                }
                acc
            }
            Raw::Neg(x) => -x.canonicalize(js)?,
            Raw::Div(a, b) => a.canonicalize(js)?.div(&b.canonicalize(js)?)?,
            Raw::Pow(x, n) => x.canonicalize(js)?.pow(*n)?,
            Raw::Exp(x) => Expr::exp(x.canonicalize(js)?),
            Raw::Log(x) => Expr::log(&x.canonicalize(js)?)?,
            Raw::IntT(x) => Expr::intt(&x.canonicalize(js)?)?,
            Raw::Deriv(x, var, n) => {
                let mut e = x.canonicalize(js)?;
                let total = !e.jets().is_empty();
                for _ in 0..*n {
                    e = match (total, var) {
                        (true, PointVar::T) => js.total_d(&e, super::BaseVar::T)?,
                        (true, PointVar::X) => js.total_d(&e, super::BaseVar::X)?,
                        (true, PointVar::U) => {
                            return Err(Error::Unsupported("D[.., u, ..] of an expression containing jets".into()))
                        }
                        (false, v) => e.diff_point(*v),
                    };
                }
                e
            }
        })
    }
}
