#![allow(dead_code)]

pub mod suites;

use kdv5::expr::{Expr, JetVar, Scalar, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded generator of random differential functions.
pub struct Gen {
    rng: ChaCha8Rng,
    pub max_order: u32,
    pub with_exp: bool,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), max_order: 3, with_exp: true }
    }

    pub fn order(mut self, n: u32) -> Self {
        self.max_order = n;
        self
    }

    pub fn without_exp(mut self) -> Self {
        self.with_exp = false;
        self
    }

    pub fn scalar(&mut self) -> Scalar {
        let n = self.rng.gen_range(-4i64..=4);
        let d = self.rng.gen_range(1i64..=3);
        Scalar::ratio(if n == 0 { 1 } else { n }, d)
    }

    pub fn jet(&mut self) -> Expr {
        let order = self.rng.gen_range(0..=self.max_order);
        let t = if order > 0 && self.rng.gen_bool(0.25) { 1 } else { 0 };
        Expr::u(t, order - t)
    }

    /// A function of `t`, `x`, `u` without derivatives of `u`.
    pub fn point_leaf(&mut self) -> Expr {
        match self.rng.gen_range(0..8) {
            0 => Expr::t(),
            1 => Expr::x(),
            2 => Expr::u(0, 0),
            3 => Expr::param(["a", "b"][self.rng.gen_range(0..2)]),
            4 => Expr::fun(["B", "E", "Q"][self.rng.gen_range(0..3)], Signature::T),
            5 => Expr::fun("psi", Signature::TX),
            6 => Expr::fun("phi", Signature::TXU),
            _ => Expr::scalar(self.scalar()),
        }
    }

    pub fn leaf(&mut self) -> Expr {
        match self.rng.gen_range(0..10) {
            0..=4 => self.jet(),
            5 if self.with_exp => Expr::exp(Expr::intt(&Expr::fun("Q", Signature::T)).unwrap()),
            _ => self.point_leaf(),
        }
    }

    fn build(&mut self, depth: u32, leaf: &mut dyn FnMut(&mut Self) -> Expr) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return leaf(self);
        }
        let a = self.build(depth - 1, leaf);
        let b = self.build(depth - 1, leaf);
        match self.rng.gen_range(0..4) {
            0 => &a + &b,
            1 => &a - &b,
            2 => &a * &b,
            _ => &a.scale(&self.scalar()) + &b,
        }
    }

    pub fn expr(&mut self, depth: u32) -> Expr {
        self.build(depth, &mut |g| g.leaf())
    }

    /// A function of `t`, `x`, `u` only.
    pub fn point_expr(&mut self, depth: u32) -> Expr {
        self.build(depth, &mut |g| g.point_leaf())
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn jet_var(&mut self) -> JetVar {
        match self.jet().as_atom().and_then(|a| a.as_jet()) {
            Some(j) => *j,
            None => JetVar::u(0, 0),
        }
    }
}
