//! Side conditions on arbitrary functions as oriented rewrite rules.
//!
//! A rule `f_J → rhs` rewrites `f_J` and every derivative `f_{J+K}` to
//! `∂_K rhs`, and the result is rewritten again until no rule applies.
//! An annihilator drops every monomial containing both a given atom and a
//! derivative of a partner function of at least the given order; it encodes
//! a product condition such as `ρ_x F = 0` together with its derivatives.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{to_text, Atom, Expr, FuncSymbol, Monomial, Signature};

const MAX_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub head: FuncSymbol,
    pub rhs: Expr,
}

impl Rule {
    /// Solves `condition = 0` for `head`.
    pub fn solve(condition: &Expr, head: FuncSymbol) -> Result<Rule> {
        let rhs = condition.solve_for(&Atom::Func(head.clone()))?;
        Ok(Rule { head, rhs })
    }

    fn offset(&self, f: &FuncSymbol) -> Option<[u32; 3]> {
        if f.name != self.head.name || f.sig != self.head.sig {
            return None;
        }
        let mut k = [0; 3];
        for (k, (d, h)) in k.iter_mut().zip(f.deriv.iter().zip(self.head.deriv)) {
            *k = d.checked_sub(h)?;
        }
        Some(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annihilator {
    pub factor: Atom,
    pub partner: String,
    pub min_deriv: [u32; 3],
}

impl Annihilator {
    fn kills(&self, m: &Monomial) -> bool {
        let has_factor = m.exponent(&self.factor) > 0;
        has_factor
            && m.factors().iter().any(|(a, n)| {
                *n > 0
                    && matches!(a, Atom::Func(f) if *f.name == *self.partner
                        && (0..3).all(|i| f.deriv[i] >= self.min_deriv[i]))
            })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub annihilators: Vec<Annihilator>,
}

impl RuleSet {
    pub fn new() -> Self {
        RuleSet::default()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.annihilators.is_empty()
    }

    pub fn push(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    /// Adds the rule obtained by solving `condition = 0` for `head`.
    pub fn add_condition(&mut self, condition: &Expr, head: FuncSymbol) -> Result<()> {
        self.rules.push(Rule::solve(condition, head)?);
        Ok(())
    }

    pub fn annihilate(&mut self, factor: Atom, partner: &str, min_deriv: [u32; 3]) {
        self.annihilators.push(Annihilator { factor, partner: partner.to_string(), min_deriv });
    }

    pub fn extend(&mut self, other: &RuleSet) {
        self.rules.extend(other.rules.iter().cloned());
        self.annihilators.extend(other.annihilators.iter().cloned());
    }

    /// Rewrites `e` to normal form.
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        if self.is_empty() {
            return Ok(e.clone());
        }
        let mut cache = BTreeMap::new();
        let out = self.rewrite(e, &mut cache, 0)?;
        Ok(self.prune(&out))
    }

    fn prune(&self, e: &Expr) -> Expr {
        if self.annihilators.is_empty() {
            return e.clone();
        }
        Expr::from_terms(e.terms().iter().filter(|(m, _)| !self.annihilators.iter().any(|a| a.kills(m))).cloned())
    }

    fn rewrite(&self, e: &Expr, cache: &mut BTreeMap<FuncSymbol, Expr>, depth: usize) -> Result<Expr> {
        if depth > MAX_DEPTH {
            return Err(Error::RewriteLoop(depth));
        }
        e.map_atoms(&mut |a: &Atom| {
            let f = match a {
                Atom::Func(f) => f,
                _ => return Ok(None),
            };
            if let Some(img) = cache.get(f) {
                return Ok(Some(img.clone()));
            }
            let Some((rule, k)) = self.rules.iter().find_map(|r| r.offset(f).map(|k| (r, k))) else {
                return Ok(None);
            };
            let raw = rule.rhs.diff_point_multi(k);
            let img = self.prune(&self.rewrite(&raw, cache, depth + 1)?);
            cache.insert(f.clone(), img.clone());
            Ok(Some(img))
        })
    }

    pub fn describe(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .rules
            .iter()
            .map(|r| format!("{} -> {}", to_text(&Expr::func(r.head.clone())), to_text(&r.rhs)))
            .collect();
        for a in &self.annihilators {
            let f = FuncSymbol::new(&a.partner, Signature::TX).with_deriv(a.min_deriv);
            out.push(format!("{} * {} -> 0", to_text(&Expr::atom(a.factor.clone())), f));
        }
        out
    }
}

/// The clock symbol `T(t)` standing for `k2 t + k3`, so that divisions by
/// `k2 t + k3` stay within Laurent monomials.
pub fn clock() -> Expr {
    Expr::fun("T", Signature::T)
}

pub fn clock_value() -> Expr {
    &(&Expr::param("k2") * &Expr::t()) + &Expr::param("k3")
}

/// The rule `T_t → k2`.
pub fn clock_rule() -> Rule {
    Rule { head: FuncSymbol::new("T", Signature::T).with_deriv([1, 0, 0]), rhs: Expr::param("k2") }
}

/// Replaces `T` by `k2 t + k3` when it occurs with nonnegative powers only.
/// With negative powers the expression is kept, unless clearing the
/// denominator and substituting shows it vanishes.
pub fn finalize_clock(e: &Expr) -> Result<Expr> {
    let t_sym = Atom::Func(FuncSymbol::new("T", Signature::T));
    if contains_nested_clock(e) {
        return Ok(e.clone());
    }
    let lowest = e.terms().iter().map(|(m, _)| m.exponent(&t_sym)).min().unwrap_or(0);
    if lowest >= 0 {
        return e.instantiate("T", &clock_value());
    }
    let cleared = (e * &clock().pow(-lowest)?).instantiate("T", &clock_value())?;
    Ok(if cleared.is_zero() { cleared } else { e.clone() })
}

fn contains_nested_clock(e: &Expr) -> bool {
    let mut found = false;
    e.for_each_atom(&mut |a| {
        if let Atom::IntT(g) | Atom::Exp(g) | Atom::Log(g) = a {
            found |= g.contains_atom(&Atom::Func(FuncSymbol::new("T", Signature::T)));
        }
    });
    found
}
