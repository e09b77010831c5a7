//! Canonical JSON form: terms and factors appear as arrays in canonical order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Atom, BaseVar, Dependent, Expr, FuncSymbol, JetVar, PointVar, Scalar, Signature};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExprJson {
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    coeff: String,
    factors: Vec<FactorJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    atom: AtomJson,
    pow: i32,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum AtomJson {
    Base(String),
    Param(String),
    Func { name: String, args: Vec<String>, deriv: Vec<u32> },
    Jet { dep: String, t: u32, x: u32 },
    Intt(Box<ExprJson>),
    Exp(Box<ExprJson>),
    Log(Box<ExprJson>),
}

fn encode(e: &Expr) -> ExprJson {
    ExprJson {
        terms: e
            .terms()
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                factors: m.factors().iter().map(|(a, n)| FactorJson { atom: encode_atom(a), pow: *n }).collect(),
            })
            .collect(),
    }
}

fn encode_atom(a: &Atom) -> AtomJson {
    match a {
        Atom::Base(b) => AtomJson::Base(b.name().into()),
        Atom::Param(p) => AtomJson::Param(p.to_string()),
        Atom::Func(f) => AtomJson::Func {
            name: f.name.to_string(),
            args: f.sig.vars().map(|v| v.name().to_string()).collect(),
            deriv: f.sig.vars().map(|v| f.deriv[v.index()]).collect(),
        },
        Atom::Jet(j) => AtomJson::Jet { dep: j.dep.name().into(), t: j.t, x: j.x },
        Atom::IntT(g) => AtomJson::Intt(Box::new(encode(g))),
        Atom::Exp(g) => AtomJson::Exp(Box::new(encode(g))),
        Atom::Log(g) => AtomJson::Log(Box::new(encode(g))),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn decode(j: &ExprJson) -> Result<Expr> {
    let mut out = Expr::zero();
    for t in &j.terms {
        let c: Scalar = t.coeff.parse().map_err(bad)?;
        let mut term = Expr::scalar(c);
        for f in &t.factors {
            term = &term * &decode_atom(&f.atom)?.pow(f.pow)?;
        }
        out = &out + &term;
    }
    Ok(out)
}

fn decode_atom(a: &AtomJson) -> Result<Expr> {
    Ok(match a {
        AtomJson::Base(b) => match b.as_str() {
            "t" => Expr::atom(Atom::Base(BaseVar::T)),
            "x" => Expr::atom(Atom::Base(BaseVar::X)),
            other => return Err(bad(format!("unknown base variable `{other}`"))),
        },
        AtomJson::Param(p) => Expr::param(p),
        AtomJson::Func { name, args, deriv } => {
            if args.len() != deriv.len() {
                return Err(bad(format!("`{name}`: deriv length differs from args")));
            }
            let vars = args
                .iter()
                .map(|s| s.chars().next().filter(|_| s.len() == 1).and_then(PointVar::from_char))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad(format!("`{name}`: bad argument list")))?;
            let sig = Signature::from_vars(&vars);
            let mut d = [0; 3];
            for (v, n) in vars.iter().zip(deriv) {
                d[v.index()] = *n;
            }
            Expr::func(FuncSymbol { name: Arc::from(name.as_str()), sig, deriv: d })
        }
        AtomJson::Jet { dep, t, x } => {
            let dep = match dep.as_str() {
                "u" => Dependent::U,
                "v" => Dependent::V,
                other => return Err(bad(format!("unknown dependent variable `{other}`"))),
            };
            Expr::jet(JetVar::new(dep, *t, *x))
        }
        AtomJson::Intt(g) => Expr::intt(&decode(g)?)?,
        AtomJson::Exp(g) => Expr::exp(decode(g)?),
        AtomJson::Log(g) => Expr::log(&decode(g)?)?,
    })
}

pub fn expr_to_json(e: &Expr) -> serde_json::Value {
    serde_json::to_value(encode(e)).expect("expression JSON is always serializable")
}

pub fn expr_from_json(v: &serde_json::Value) -> Result<Expr> {
    let j: ExprJson = serde_json::from_value(v.clone()).map_err(|e| bad(e.to_string()))?;
    decode(&j)
}
