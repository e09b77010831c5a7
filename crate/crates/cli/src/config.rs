use std::path::Path;

use clap::ValueEnum;
use kdv5::expr::{parse, Expr, SymbolTable};
use kdv5::jet::VectorField;
use kdv5::pde::{PdeFamily, COEFF_NAMES};
use kdv5::{JetSpace, Signature};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    #[serde(rename = "A")]
    pub a: Option<String>,
    #[serde(rename = "B")]
    pub b: Option<String>,
    #[serde(rename = "C")]
    pub c: Option<String>,
    #[serde(rename = "E")]
    pub e: Option<String>,
    #[serde(rename = "F")]
    pub f: Option<String>,
    #[serde(rename = "Q")]
    pub q: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub tau: String,
    pub xi: String,
    pub eta: String,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub family: Option<FamilyConfig>,
    pub case: Option<String>,
    pub vector_field: Option<FieldConfig>,
    pub phi: Option<String>,
    pub output: Option<Format>,
    pub max_jet_order: Option<u32>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&src).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Parses the expressions of a config against one symbol table.
pub struct Resolver<'a> {
    pub symbols: SymbolTable,
    pub js: &'a JetSpace,
}

impl<'a> Resolver<'a> {
    pub fn new(js: &'a JetSpace) -> Self {
        Resolver { symbols: SymbolTable::new(), js }
    }

    pub fn expr(&mut self, what: &str, src: &str) -> Result<Expr, String> {
        parse(src, &mut self.symbols, self.js).map_err(|e| format!("{what}: {e}"))
    }

    /// Missing entries and `symbolic` stand for arbitrary functions of `t`.
    pub fn family(&mut self, cfg: &FamilyConfig) -> Result<PdeFamily, String> {
        let entries = [&cfg.a, &cfg.b, &cfg.c, &cfg.e, &cfg.f, &cfg.q];
        let mut cs: Vec<Expr> = Vec::new();
        for (name, entry) in COEFF_NAMES.iter().zip(entries) {
            let e = match entry.as_deref().map(str::trim) {
                None | Some("symbolic") => Expr::fun(name, Signature::T),
                Some(src) => self.expr(&format!("family.{name}"), src)?,
            };
            cs.push(e);
        }
        let cs: [Expr; 6] = cs.try_into().map_err(|_| "family needs six coefficients".to_string())?;
        PdeFamily::from_coefficients(cs, Expr::t()).map_err(|e| e.to_string())
    }

    pub fn field(&mut self, cfg: &FieldConfig) -> Result<VectorField, String> {
        let tau = self.expr("vector_field.tau", &cfg.tau)?;
        let xi = self.expr("vector_field.xi", &cfg.xi)?;
        let eta = self.expr("vector_field.eta", &cfg.eta)?;
        VectorField::new(tau, xi, eta).map_err(|e| e.to_string())
    }
}
