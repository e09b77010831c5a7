//! Randomized kernel checks shared by the property tests and the acceptance run.

use super::Gen;
use kdv5::expr::{expr_from_json, expr_to_json, parse, Atom, BaseVar, Dependent, Expr, JetVar, PointVar, SymbolTable};
use kdv5::pde::PdeFamily;
use kdv5::JetSpace;
use std::collections::BTreeSet;

fn each(cases: u64, seed_base: u64, mut f: impl FnMut(&mut Gen, u64)) {
    for i in 0..cases {
        let seed = seed_base * 1_000_003 + i;
        f(&mut Gen::new(seed), seed);
    }
}

pub fn canonical_form_is_unique(cases: u64) {
    let js = JetSpace::default();
    each(cases, 1, |g, seed| {
        let (a, b, c) = (g.expr(3), g.expr(3), g.expr(2));
        assert_eq!(&(&a + &b) + &c, &(&c + &b) + &a, "seed {seed}");
        let shuffled: Vec<_> = a.terms().iter().rev().cloned().collect();
        assert_eq!(Expr::from_terms(shuffled), a, "seed {seed}");
        let text = kdv5::expr::to_text(&a);
        assert_eq!(parse(&text, &mut SymbolTable::new(), &js).unwrap(), a, "seed {seed}: {text}");
        assert_eq!(expr_from_json(&expr_to_json(&a)).unwrap(), a, "seed {seed}");
    });
}

pub fn ring_axioms(cases: u64) {
    each(cases, 2, |g, seed| {
        let (a, b, c) = (g.expr(2), g.expr(2), g.expr(2));
        assert_eq!(&a * &b, &b * &a, "seed {seed}");
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c), "seed {seed}");
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c), "seed {seed}");
        assert_eq!(&a + &Expr::zero(), a);
        assert_eq!(&a * &Expr::one(), a);
        let same = a.clone();
        assert!((&a - &same).is_zero());
        assert!((&a * &Expr::zero()).is_zero());
    });
}

pub fn leibniz_rule(cases: u64) {
    let js = JetSpace::default();
    each(cases, 3, |g, seed| {
        let (a, b) = (g.expr(2), g.expr(2));
        for dir in [BaseVar::T, BaseVar::X] {
            let lhs = js.total_d(&(&a * &b), dir).unwrap();
            let rhs = &(&js.total_d(&a, dir).unwrap() * &b) + &(&a * &js.total_d(&b, dir).unwrap());
            assert_eq!(lhs, rhs, "seed {seed}");
        }
        let j = Atom::Jet(g.jet_var());
        assert_eq!((&a * &b).partial(&j), &(&a.partial(&j) * &b) + &(&a * &b.partial(&j)), "seed {seed}");
    });
}

pub fn total_derivatives_commute(cases: u64) {
    let js = JetSpace::default();
    each(cases, 4, |g, seed| {
        let a = g.expr(3);
        let tx = js.total_d(&js.total_d(&a, BaseVar::X).unwrap(), BaseVar::T).unwrap();
        let xt = js.total_d(&js.total_d(&a, BaseVar::T).unwrap(), BaseVar::X).unwrap();
        assert_eq!(tx, xt, "seed {seed}");
        let p = g.point_expr(3);
        assert_eq!(
            p.diff_point(PointVar::T).diff_point(PointVar::U),
            p.diff_point(PointVar::U).diff_point(PointVar::T),
            "seed {seed}"
        );
    });
}

pub fn collect_round_trip(cases: u64) {
    each(cases, 5, |g, seed| {
        let a = g.expr(3);
        let mut basis: BTreeSet<JetVar> = BTreeSet::new();
        for _ in 0..3 {
            basis.insert(g.jet_var());
        }
        let parts = a.collect(&basis);
        let mut back = Expr::zero();
        for (m, c) in &parts {
            assert!(c.jets().iter().all(|j| !basis.contains(j)), "seed {seed}");
            back = &back + &c.mul_monomial(m, &kdv5::Scalar::one());
        }
        assert_eq!(back, a, "seed {seed}");
    });
}

pub fn reduction_is_idempotent_and_commutes_with_dx(cases: u64) {
    let js = JetSpace::default();
    let fam = PdeFamily::reduced_symbolic();
    each(cases, 6, |g, seed| {
        let a = g.expr(2);
        let r = fam.reduce_on_solutions(&a, &js).unwrap();
        assert!(r.jets().iter().all(|j| j.t == 0 || j.dep == Dependent::V), "seed {seed}");
        assert_eq!(fam.reduce_on_solutions(&r, &js).unwrap(), r, "seed {seed}");
        let dx_then = fam.reduce_on_solutions(&js.total_d(&a, BaseVar::X).unwrap(), &js).unwrap();
        let then_dx = fam.reduce_on_solutions(&js.total_d(&r, BaseVar::X).unwrap(), &js).unwrap();
        assert_eq!(dx_then, then_dx, "seed {seed}");
    });
}

pub fn euler_annihilates_total_derivatives(cases: u64) {
    let js = JetSpace::default();
    for seed in 0..cases {
        let mut g = Gen::new(7_000 + seed).order(3);
        let gx = g.expr(3);
        assert!(gx.jet_order() <= 3);
        for dir in [BaseVar::X, BaseVar::T] {
            let d = js.total_d(&gx, dir).unwrap();
            assert!(js.euler(&d, Dependent::U).unwrap().is_zero(), "seed {seed} {dir:?}");
        }
    }
}
