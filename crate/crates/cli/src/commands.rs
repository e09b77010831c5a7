use std::path::Path;

use kdv5::adjoint::{
    adjoint_equation, affine_ansatz, f3_condition_set, phi_f2, phi_generic, self_adjointness_conditions,
    SelfAdjointnessReport,
};
use kdv5::conslaw::{ibragimov_vector, substitute_phi, ConsCase, Scenario};
use kdv5::expr::Expr;
use kdv5::pde::{normal_form, verify_equivalence, PdeFamily, COEFF_NAMES};
use kdv5::printed::{check_all, Fixture};
use kdv5::rules::RuleSet;
use kdv5::symmetry::{ansatz_equations, determining_system, invariance_residual, verify_ansatz, AnsatzCase, CaseId};
use kdv5::JetSpace;

use crate::config::{Config, Resolver};
use crate::report::{Report, Section};

pub struct Context<'a> {
    pub config: Config,
    pub case: Option<String>,
    pub fixtures: Option<&'a Path>,
    pub js: JetSpace,
}

type Outcome = Result<Report, String>;

fn err(e: kdv5::Error) -> String {
    e.to_string()
}

impl Context<'_> {
    fn family_or(&self, r: &mut Resolver, default: PdeFamily) -> Result<PdeFamily, String> {
        match &self.config.family {
            Some(f) => r.family(f),
            None => Ok(default),
        }
    }

    fn reduced_family(&self, r: &mut Resolver) -> Result<PdeFamily, String> {
        let fam = self.family_or(r, PdeFamily::reduced_symbolic())?;
        if !fam.is_reduced() {
            return Err("the family must have A = C = 1; run `reduce` first".into());
        }
        Ok(fam)
    }

    fn case(&self) -> Option<&str> {
        self.case.as_deref().or(self.config.case.as_deref())
    }
}

fn symmetry_case(name: &str) -> Result<AnsatzCase, String> {
    let id = match name {
        "f2" => return AnsatzCase::case2_with(Expr::int(2)).map_err(err),
        "f3" => return AnsatzCase::case2_with(Expr::int(3)).map_err(err),
        other => CaseId::ALL.into_iter().find(|c| c.name() == other),
    };
    let id = id.ok_or_else(|| format!("unknown case `{name}`"))?;
    AnsatzCase::new(id).map_err(err)
}

fn family_section(title: &str, fam: &PdeFamily) -> Section {
    let mut s = Section::new(title);
    for (name, c) in COEFF_NAMES.iter().zip(fam.coefficients()) {
        s.expr(name, c);
    }
    s
}

pub fn reduce(ctx: &Context) -> Outcome {
    let mut r = Resolver::new(&ctx.js);
    let fam = ctx.family_or(&mut r, PdeFamily::symbolic())?;
    let (k1, k2) = (Expr::param("k1"), Expr::param("k2"));
    let (reduced, p) = normal_form(&fam, &k1, &k2).map_err(err)?;
    let residual = verify_equivalence(&fam, &p).map_err(err)?;
    let mut report = Report::new("reduce");
    report.push(family_section("family", &fam));
    let mut t = Section::new("transformation");
    t.expr("t~", &p.alpha).expr("k1", &p.k1).expr("k2", &p.k2).expr("s", &p.scale_r).expr("u~ / u", &p.u_scale());
    report.push(t);
    let mut s = family_section("reduced family", &reduced);
    s.expr("residual", &residual);
    report.push(s);
    report.require_zero(&residual);
    Ok(report)
}

pub fn adjoint(ctx: &Context) -> Outcome {
    let mut r = Resolver::new(&ctx.js);
    let fam = ctx.reduced_family(&mut r)?;
    let adj = adjoint_equation(&fam, &ctx.js).map_err(err)?;
    let mut report = Report::new("adjoint");
    let mut s = Section::new("adjoint equation");
    s.expr("F*", &adj);
    report.push(s);
    Ok(report)
}

pub fn determining(ctx: &Context) -> Outcome {
    let mut report = Report::new("determining");
    if let Some(name) = ctx.case() {
        let case = symmetry_case(name)?;
        let eqs = ansatz_equations(&case, &ctx.js).map_err(err)?;
        let mut s = Section::new(format!("determining equations on the {} ansatz", name));
        s.lines("conditions", case.rules.describe());
        s.count("equations", eqs.len());
        s.exprs("nonzero", eqs.values().filter(|e| !e.is_zero()).cloned().collect());
        for e in eqs.values() {
            report.require_zero(e);
        }
        report.push(s);
        return Ok(report);
    }
    let mut r = Resolver::new(&ctx.js);
    let fam = ctx.family_or(&mut r, PdeFamily::reduced_symbolic())?;
    let sys = determining_system(&fam, &ctx.js).map_err(err)?;
    let mut s = Section::new("determining equations");
    s.count("count", sys.len());
    s.exprs("equations", sys.equations.iter().map(|(_, e)| e.clone()).collect());
    report.push(s);
    Ok(report)
}

pub fn verify_symmetries(ctx: &Context) -> Outcome {
    let mut report = Report::new("verify-symmetries");
    if let Some(vf) = &ctx.config.vector_field {
        let mut r = Resolver::new(&ctx.js);
        let fam = ctx.family_or(&mut r, PdeFamily::reduced_symbolic())?;
        let field = r.field(vf)?;
        let residual = invariance_residual(&field, &fam, &ctx.js).map_err(err)?;
        let mut s = Section::new("configured field");
        s.expr("tau", &field.tau).expr("xi", &field.xi).expr("eta", &field.eta).expr("residual", &residual);
        report.push(s);
        report.require_zero(&residual);
        return Ok(report);
    }
    let names: Vec<String> = match ctx.case() {
        Some(n) => vec![n.to_string()],
        None => CaseId::ALL.iter().map(|c| c.name().to_string()).collect(),
    };
    for name in names {
        let case = symmetry_case(&name)?;
        let residual = verify_ansatz(&case, &ctx.js).map_err(err)?;
        let mut s = Section::new(format!("case {name}"));
        s.expr("tau", &case.field.tau).expr("xi", &case.field.xi).expr("eta", &case.field.eta);
        s.lines("conditions", case.rules.describe());
        s.expr("residual", &residual);
        report.push(s);
        report.require_zero(&residual);
    }
    Ok(report)
}

fn adjointness_section(title: &str, r: &SelfAdjointnessReport) -> Section {
    let mut s = Section::new(title);
    s.expr("phi", &r.phi).expr("lambda", &r.lambda);
    s.exprs("conditions", r.nonzero_conditions().into_iter().cloned().collect());
    s.text("classification", r.classification.name());
    s.flag("witness_valid", r.witness_valid);
    s
}

pub fn self_adjoint(ctx: &Context) -> Outcome {
    let js = &ctx.js;
    let mut report = Report::new("self-adjoint");
    let mut r = Resolver::new(js);
    let (fam, phi) = match ctx.case() {
        Some("f3") => {
            let fam = PdeFamily::reduced_symbolic().with_f(Expr::int(3));
            let a = f3_condition_set(&fam, js).map_err(err)?;
            report.push(adjointness_section("F = 3, phi = beta(t,x)", &a.report));
            let mut s = Section::new("implication");
            s.exprs("derived", a.derived.clone());
            s.expr("printed condition", &a.printed_condition);
            s.exprs("multipliers", a.multipliers.clone());
            s.expr("residual", &a.implication_residual);
            report.require_zero(&a.implication_residual);
            report.push(s);
            return Ok(report);
        }
        Some("f2") => (PdeFamily::reduced_symbolic().with_f(Expr::int(2)), phi_f2()),
        Some("fconst") => (PdeFamily::reduced_symbolic().with_f(Expr::param("F")), phi_generic()),
        Some("f0") => (PdeFamily::reduced_symbolic().with_f(Expr::zero()), phi_generic()),
        Some("general") => (PdeFamily::reduced_symbolic().with_f(Expr::param("F")), affine_ansatz()),
        Some(other) => return Err(format!("unknown case `{other}`")),
        None => {
            let fam = ctx.reduced_family(&mut r)?;
            let phi = match &ctx.config.phi {
                Some(src) => r.expr("phi", src)?,
                None => affine_ansatz(),
            };
            (fam, phi)
        }
    };
    let rep = self_adjointness_conditions(&fam, &phi, js).map_err(err)?;
    report.push(family_section("family", &fam));
    report.push(adjointness_section("self-adjointness", &rep));
    for (_, c) in &rep.conditions {
        report.require_zero(c);
    }
    Ok(report)
}

fn cons_cases(ctx: &Context) -> Result<Vec<ConsCase>, String> {
    match ctx.case() {
        Some(n) => Ok(vec![ConsCase::parse(n).map_err(err)?]),
        None => Ok(ConsCase::ALL.to_vec()),
    }
}

pub fn conslaw(ctx: &Context) -> Outcome {
    let js = &ctx.js;
    let mut report = Report::new("conslaw");
    if let (Some(vf), None) = (&ctx.config.vector_field, ctx.case()) {
        let mut r = Resolver::new(js);
        let fam = ctx.reduced_family(&mut r)?;
        let field = r.field(vf)?;
        let cv = ibragimov_vector(&field, &fam, js).map_err(err)?;
        let cv = match &ctx.config.phi {
            Some(src) => substitute_phi(&cv, &r.expr("phi", src)?, js).map_err(err)?,
            None => cv,
        };
        let mut s = Section::new("conserved vector");
        s.expr("C1", &cv.c1).expr("C2", &cv.c2);
        report.push(s);
        return Ok(report);
    }
    for case in cons_cases(ctx)? {
        let sc = Scenario::new(case).map_err(err)?;
        let cv = sc.explicit_vector(js).map_err(err)?;
        let mut s = Section::new(format!("case {}", case.name()));
        s.expr("phi", &sc.phi).expr("C1", &cv.c1).expr("C2", &cv.c2);
        report.push(s);
    }
    Ok(report)
}

pub fn verify_divergence(ctx: &Context) -> Outcome {
    let js = &ctx.js;
    let mut report = Report::new("verify-divergence");
    if let (Some(vf), None) = (&ctx.config.vector_field, ctx.case()) {
        let mut r = Resolver::new(js);
        let fam = ctx.reduced_family(&mut r)?;
        let field = r.field(vf)?;
        let phi = r.expr("phi", ctx.config.phi.as_deref().ok_or("verify-divergence needs phi")?)?;
        let cv = ibragimov_vector(&field, &fam, js).map_err(err)?;
        let residual = kdv5::conslaw::divergence_residual(&cv, &fam, &phi, &RuleSet::new(), js).map_err(err)?;
        let mut s = Section::new("configured field");
        s.expr("residual", &residual);
        report.push(s);
        report.require_zero(&residual);
        return Ok(report);
    }
    for case in cons_cases(ctx)? {
        let sc = Scenario::new(case).map_err(err)?;
        let residual = sc.residual(js).map_err(err)?;
        let mut s = Section::new(format!("case {}", case.name()));
        s.expr("residual", &residual);
        report.push(s);
        report.require_zero(&residual);
    }
    Ok(report)
}

pub fn check_paper(ctx: &Context) -> Outcome {
    let js = &ctx.js;
    let fixtures = match ctx.fixtures {
        Some(dir) => Fixture::load_dir(dir, js).map_err(err)?,
        None => Fixture::bundled(js).map_err(err)?,
    };
    let wanted = ctx.case().map(ConsCase::parse).transpose().map_err(err)?;
    let fixtures: Vec<Fixture> = fixtures.into_iter().filter(|f| wanted.is_none_or(|c| c == f.case)).collect();
    let mut report = Report::new("check-paper");
    for fr in check_all(&fixtures, js).map_err(err)? {
        let mut s = Section::new(format!("{} ({}, case {})", fr.display, fr.file, fr.case.name()));
        s.expr("computed C1", &fr.computed.c1);
        s.expr("computed residual", &fr.computed_residual);
        report.require_zero(&fr.computed_residual);
        for rd in &fr.readings {
            let mut line = format!("{}: {}", rd.name, rd.outcome.name());
            if let Some(n) = &rd.note {
                line.push_str(&format!(" ({n})"));
            }
            s.text("reading", line);
            s.flag(&format!("{} exact density", rd.name), rd.exact_density);
            s.expr(&format!("{} density residual", rd.name), &rd.density_residual);
            match &rd.divergence {
                Some(d) => s.expr(&format!("{} divergence", rd.name), d),
                None => s.text(&format!("{} divergence", rd.name), "no flux printed"),
            };
        }
        report.push(s);
    }
    Ok(report)
}
