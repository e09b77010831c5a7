//! Exact symbolic engine for the variable-coefficient fifth-order KdV family
//!
//! `u_t + A u_xxxxx + B u_xxx + C u u_xxx + E u u_x + F u_x u_xx + Q u = 0`
//!
//! with coefficients depending on `t` only. The crate covers equivalence
//! reductions, Lie point symmetries, the adjoint equation, nonlinear
//! self-adjointness and Ibragimov conserved vectors. Every check is an exact
//! identity between canonical expressions.

pub mod adjoint;
pub mod conslaw;
pub mod error;
pub mod expr;
pub mod jet;
pub mod pde;
pub mod printed;
pub mod rules;
pub mod symmetry;

pub use error::{Error, Result};
pub use expr::{Atom, BaseVar, Dependent, Expr, FuncSymbol, JetVar, PointVar, Scalar, Signature};
pub use jet::JetSpace;
