mod common;

use common::Gen;
use kdv5::conslaw::{divergence_residual, ibragimov_vector, ConsCase, Scenario};
use kdv5::expr::{parse, to_text, Expr, Scalar, SymbolTable};
use kdv5::jet::VectorField;
use kdv5::pde::PdeFamily;
use kdv5::rules::RuleSet;
use kdv5::symmetry::{invariance_residual, verify_ansatz, AnsatzCase, CaseId};
use kdv5::JetSpace;

fn p(s: &str) -> Expr {
    parse(s, &mut SymbolTable::new(), &JetSpace::default()).unwrap()
}

fn field(g: &mut Gen) -> VectorField {
    VectorField::new(g.point_expr(2), g.point_expr(2), g.point_expr(2)).unwrap()
}

#[test]
fn invariance_is_linear_in_the_field() {
    let js = JetSpace::default();
    let fam = PdeFamily::reduced_symbolic();
    for seed in 0..40 {
        let mut g = Gen::new(100 + seed);
        let (a, b) = (field(&mut g), field(&mut g));
        let ra = invariance_residual(&a, &fam, &js).unwrap();
        let rb = invariance_residual(&b, &fam, &js).unwrap();
        assert_eq!(invariance_residual(&a.add(&b), &fam, &js).unwrap(), &ra + &rb, "seed {seed}");
    }
}

#[test]
fn conserved_vector_is_linear_in_the_field() {
    let js = JetSpace::default();
    let fam = PdeFamily::reduced_symbolic();
    for seed in 0..40 {
        let mut g = Gen::new(200 + seed);
        let (a, b) = (field(&mut g), field(&mut g));
        let sum = ibragimov_vector(&a, &fam, &js).unwrap().add(&ibragimov_vector(&b, &fam, &js).unwrap());
        assert_eq!(ibragimov_vector(&a.add(&b), &fam, &js).unwrap(), sum, "seed {seed}");
    }
}

#[test]
fn gauge_terms_do_not_change_the_divergence() {
    let js = JetSpace::default();
    let s = Scenario::new(ConsCase::F2).unwrap();
    let cv = s.vector(&js).unwrap();
    let base = s.residual_of(&cv, &js).unwrap();
    assert!(base.is_zero());
    for seed in 0..60 {
        let mut g = Gen::new(300 + seed).order(2);
        let gauge = g.expr(2);
        let shifted = cv.gauge(&gauge, &js).unwrap();
        assert_eq!(s.residual_of(&shifted, &js).unwrap(), base, "seed {seed}: {}", to_text(&gauge));
    }
}

#[test]
fn broken_generators_are_rejected() {
    let js = JetSpace::default();
    for id in [CaseId::General, CaseId::Case1Fzero, CaseId::Case2Fconst] {
        let mut case = AnsatzCase::new(id).unwrap();
        case.field.eta = &case.field.eta - &p("1/5*k2*u");
        assert!(!verify_ansatz(&case, &js).unwrap().is_zero(), "{}", id.name());
        let mut case = AnsatzCase::new(id).unwrap();
        case.field.xi = &case.field.xi + &p("1/5*k2*x");
        assert!(!verify_ansatz(&case, &js).unwrap().is_zero(), "{}", id.name());
        let mut case = AnsatzCase::new(id).unwrap();
        case.rules = RuleSet::new();
        assert!(!verify_ansatz(&case, &js).unwrap().is_zero(), "{}", id.name());
    }
}

#[test]
fn master_identity_needs_its_ingredients() {
    let js = JetSpace::default();
    for case in ConsCase::ALL {
        let s = Scenario::new(case).unwrap();
        let cv = s.vector(&js).unwrap();
        let no_rules = divergence_residual(&cv, &s.family, &s.phi, &RuleSet::new(), &js).unwrap();
        assert!(!no_rules.is_zero(), "{} without side conditions", case.name());
        let wrong_phi = &s.phi + &Expr::u(0, 0).scale(&Scalar::int(1));
        let r = divergence_residual(&cv, &s.family, &wrong_phi, &s.rules, &js).unwrap();
        assert!(!r.is_zero(), "{} with a wrong substitution", case.name());
    }
}

#[test]
fn master_identity_for_translations() {
    let js = JetSpace::default();
    let fam = PdeFamily::reduced_symbolic().with_f(Expr::int(2));
    let phi = kdv5::adjoint::phi_f2();
    let dx = VectorField::new(Expr::zero(), Expr::one(), Expr::zero()).unwrap();
    let cv = ibragimov_vector(&dx, &fam, &js).unwrap();
    assert!(divergence_residual(&cv, &fam, &phi, &RuleSet::new(), &js).unwrap().is_zero());
}
