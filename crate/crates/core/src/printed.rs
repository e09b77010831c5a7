//! Checks of printed conserved vectors stored as fixtures.

use std::path::Path;

use serde::Deserialize;

use crate::conslaw::{ConsCase, ConservedVector, Scenario};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr, SymbolTable};
use crate::jet::JetSpace;
use crate::rules::finalize_clock;

const BUNDLED: [(&str, &str); 4] = [
    ("case1.toml", include_str!("../fixtures/case1.toml")),
    ("f2.toml", include_str!("../fixtures/f2.toml")),
    ("f3.toml", include_str!("../fixtures/f3.toml")),
    ("control.toml", include_str!("../fixtures/control.toml")),
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFixture {
    case: String,
    display: String,
    reading: Vec<RawReading>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReading {
    name: String,
    note: Option<String>,
    c1: String,
    c2: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reading {
    pub name: String,
    pub note: Option<String>,
    pub c1: Expr,
    pub c2: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub file: String,
    pub case: ConsCase,
    pub display: String,
    pub readings: Vec<Reading>,
}

impl Fixture {
    pub fn parse(file: &str, src: &str, js: &JetSpace) -> Result<Fixture> {
        let fail = |msg: String| Error::Fixture { name: file.to_string(), msg };
        let raw: RawFixture = toml::from_str(src).map_err(|e| fail(e.to_string()))?;
        let case = ConsCase::parse(&raw.case)?;
        let expr = |s: &str, what: &str| {
            parse(s.trim(), &mut SymbolTable::new(), js).map_err(|e| fail(format!("{what}: {e}")))
        };
        let mut readings = Vec::new();
        for r in raw.reading {
            let c1 = expr(&r.c1, &format!("{} c1", r.name))?;
            let c2 = r.c2.as_deref().map(|s| expr(s, &format!("{} c2", r.name))).transpose()?;
            readings.push(Reading { name: r.name, note: r.note, c1, c2 });
        }
        Ok(Fixture { file: file.to_string(), case, display: raw.display, readings })
    }

    pub fn bundled(js: &JetSpace) -> Result<Vec<Fixture>> {
        BUNDLED.iter().map(|(name, src)| Fixture::parse(name, src, js)).collect()
    }

    /// Every `*.toml` file of `dir`, in file name order.
    pub fn load_dir(dir: &Path, js: &JetSpace) -> Result<Vec<Fixture>> {
        let io = |e: std::io::Error| Error::Fixture { name: dir.display().to_string(), msg: e.to_string() };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "toml"))
            .collect();
        paths.sort();
        paths
            .iter()
            .map(|p| {
                let src = std::fs::read_to_string(p).map_err(io)?;
                let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                Fixture::parse(&name, &src, js)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    ExactMatch,
    DivergenceZero,
    DensityEquivalent,
    Mismatch,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::ExactMatch => "exact-match",
            Outcome::DivergenceZero => "divergence-zero",
            Outcome::DensityEquivalent => "density-equivalent",
            Outcome::Mismatch => "mismatch",
        }
    }

    pub fn passes(self) -> bool {
        self != Outcome::Mismatch
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadingReport {
    pub name: String,
    pub note: Option<String>,
    /// The printed density equals the computed one after reduction.
    pub exact_density: bool,
    /// Euler derivative of the density difference; zero when they agree up
    /// to a total `x`-derivative.
    pub density_residual: Expr,
    /// Divergence of the printed vector on solutions, when a flux is printed.
    pub divergence: Option<Expr>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureReport {
    pub file: String,
    pub case: ConsCase,
    pub display: String,
    pub computed: ConservedVector,
    /// Divergence of the computed vector.
    pub computed_residual: Expr,
    pub readings: Vec<ReadingReport>,
}

fn outcome(exact: bool, density_zero: bool, divergence: Option<&Expr>) -> Outcome {
    let div_zero = divergence.map(Expr::is_zero);
    match (exact, div_zero) {
        (true, None | Some(true)) => Outcome::ExactMatch,
        (_, Some(true)) => Outcome::DivergenceZero,
        _ if density_zero => Outcome::DensityEquivalent,
        _ => Outcome::Mismatch,
    }
}

pub fn check_fixture(fx: &Fixture, js: &JetSpace) -> Result<FixtureReport> {
    let scenario = Scenario::new(fx.case)?;
    let vector = scenario.vector(js)?;
    let computed = scenario.explicit_vector(js)?;
    let computed_residual = scenario.residual_of(&vector, js)?;
    let engine_density = finalize_clock(&scenario.family.reduce_on_solutions(&computed.c1, js)?)?;
    let mut readings = Vec::new();
    for r in &fx.readings {
        let c1 = scenario.specialize(&r.c1)?;
        let printed_density = finalize_clock(&scenario.rules.apply(&scenario.family.reduce_on_solutions(&c1, js)?)?)?;
        let exact_density = printed_density == engine_density;
        let density_residual = scenario.density_difference(&c1, &computed.c1, js)?;
        let divergence = match &r.c2 {
            Some(c2) => {
                let cv = ConservedVector { c1: c1.clone(), c2: scenario.specialize(c2)? };
                Some(scenario.residual_of(&cv, js)?)
            }
            None => None,
        };
        readings.push(ReadingReport {
            name: r.name.clone(),
            note: r.note.clone(),
            exact_density,
            outcome: outcome(exact_density, density_residual.is_zero(), divergence.as_ref()),
            density_residual,
            divergence,
        });
    }
    Ok(FixtureReport {
        file: fx.file.clone(),
        case: fx.case,
        display: fx.display.clone(),
        computed,
        computed_residual,
        readings,
    })
}

pub fn check_all(fixtures: &[Fixture], js: &JetSpace) -> Result<Vec<FixtureReport>> {
    fixtures.iter().map(|f| check_fixture(f, js)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixtures_parse() {
        let js = JetSpace::default();
        let fx = Fixture::bundled(&js).unwrap();
        assert_eq!(fx.len(), 4);
        assert!(fx.iter().all(|f| !f.readings.is_empty()));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let js = JetSpace::default();
        let src = "case = \"f2\"\ndisplay = \"x\"\ncolour = 1\n[[reading]]\nname = \"a\"\nc1 = \"u\"\n";
        assert!(matches!(Fixture::parse("bad.toml", src, &js), Err(Error::Fixture { .. })));
    }
}
