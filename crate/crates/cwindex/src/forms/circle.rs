//! Forms on a product chart base×S¹ whose fiber dependence is through
//! trigonometric monomials w^k = e^{ikλ}, optionally carrying one factor
//! of s = sqrt(s²) for a designated rational s² on the base.
//!
//! Neither w nor s is a rational coordinate function, so they are kept
//! as formal bookkeeping: a [`PhaseElem`] is a finite sum of terms
//! w^k·s^m·F with F a form whose coefficients are rational in the base
//! coordinates, m reduced to a parity in {0,1} by folding even powers
//! of s into F as (s²)^j. The differential acts by
//! d(w^k) = ik·w^k·dλ and d(s) = d(s²)/(2s), which closes the algebra.
//! Unit-circle trivializations pull honest forms into this algebra; the
//! results of interest cancel back down to parity 0.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::expr::{crat_from_int, crat_from_rat, crat_i, CRat, Chart, Expr};

use super::Form;

/// Shared context: product chart with the fiber coordinate last, and
/// the base expression s².
#[derive(Debug)]
pub struct CirclePhase {
    base: Arc<Chart>,
    total: Arc<Chart>,
    fiber: usize,
    s_sq: Expr,
}

impl CirclePhase {
    pub fn new(base_coords: Vec<&str>, fiber_coord: &str, s_sq: Expr) -> Arc<CirclePhase> {
        let base = Chart::new(base_coords.clone()).expect("valid base chart");
        let mut all: Vec<&str> = base_coords;
        all.push(fiber_coord);
        let fiber = all.len() - 1;
        let total = Chart::new(all).expect("valid product chart");
        Arc::new(CirclePhase {
            base,
            total,
            fiber,
            s_sq,
        })
    }

    pub fn base(&self) -> &Arc<Chart> {
        &self.base
    }

    pub fn total(&self) -> &Arc<Chart> {
        &self.total
    }

    pub fn fiber_index(&self) -> usize {
        self.fiber
    }

    pub fn s_sq(&self) -> &Expr {
        &self.s_sq
    }

    fn dlambda(&self) -> Form {
        Form::dx(&self.total, &self.total.coords()[self.fiber])
    }

    /// Restriction of a fiber-coefficient-free form on the total chart
    /// to the base chart (the form must not contain dλ or λ).
    pub fn restrict_to_base(&self, f: &Form) -> Form {
        let lam_bit = 1u32 << self.fiber;
        let lam = &self.total.coords()[self.fiber];
        let mut out = Form::zero(&self.base);
        for (m, e) in f.terms() {
            assert!(m & lam_bit == 0, "form contains the fiber differential");
            assert!(
                !e.vars().iter().any(|v| v == lam),
                "coefficient depends on the fiber coordinate"
            );
            out = out.add(&Form::term(
                &self.base,
                &(0..self.fiber).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>(),
                e.clone(),
            ));
        }
        out
    }
}

/// s^m reduced to (parity, even-part multiplier (s²)^⌊m/2⌋).
fn fold_s_power(ctx: &CirclePhase, m: i32) -> (u8, Expr) {
    let parity = m.rem_euclid(2) as u8;
    let q = (m - parity as i32) / 2;
    let mult = ctx
        .s_sq
        .powi(q)
        .expect("s² is nonzero as a rational function");
    (parity, mult)
}

#[derive(Clone, Debug)]
pub struct PhaseElem {
    ctx: Arc<CirclePhase>,
    terms: BTreeMap<(i32, u8), Form>,
}

impl PartialEq for PhaseElem {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl PhaseElem {
    pub fn zero(ctx: &Arc<CirclePhase>) -> PhaseElem {
        PhaseElem {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// w^k · s^m · f
    pub fn monomial(ctx: &Arc<CirclePhase>, k: i32, m: i32, f: Form) -> PhaseElem {
        assert_eq!(f.chart(), ctx.total(), "form not on the product chart");
        let (parity, mult) = fold_s_power(ctx, m);
        let mut out = PhaseElem::zero(ctx);
        out.insert(k, parity, f.scale_expr(&mult));
        out
    }

    pub fn from_form(ctx: &Arc<CirclePhase>, f: Form) -> PhaseElem {
        PhaseElem::monomial(ctx, 0, 0, f)
    }

    fn insert(&mut self, k: i32, parity: u8, f: Form) {
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((k, parity)) {
            Entry::Vacant(v) => {
                v.insert(f);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&f);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &PhaseElem) -> PhaseElem {
        let mut out = self.clone();
        for (&(k, p), f) in &other.terms {
            out.insert(k, p, f.clone());
        }
        out
    }

    pub fn neg(&self) -> PhaseElem {
        let mut out = self.clone();
        for f in out.terms.values_mut() {
            *f = f.neg();
        }
        out
    }

    pub fn sub(&self, other: &PhaseElem) -> PhaseElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CRat) -> PhaseElem {
        let mut out = PhaseElem::zero(&self.ctx);
        for (&(k, p), f) in &self.terms {
            out.insert(k, p, f.scale(c));
        }
        out
    }

    pub fn wedge(&self, other: &PhaseElem) -> PhaseElem {
        let mut out = PhaseElem::zero(&self.ctx);
        for (&(k1, p1), f1) in &self.terms {
            for (&(k2, p2), f2) in &other.terms {
                let (parity, mult) = fold_s_power(&self.ctx, (p1 + p2) as i32);
                out.insert(k1 + k2, parity, f1.wedge(f2).scale_expr(&mult));
            }
        }
        out
    }

    /// Complex conjugate: w ↦ w⁻¹, s real, coefficients conjugated
    /// entrywise (valid because every basis differential is real).
    pub fn conj(&self) -> PhaseElem {
        let mut out = PhaseElem::zero(&self.ctx);
        for (&(k, p), f) in &self.terms {
            let mut g = Form::zero(self.ctx.total());
            for (m, e) in f.terms() {
                g = g.add(&Form::term(
                    self.ctx.total(),
                    &(0..self.ctx.total().dimension())
                        .filter(|i| m & (1 << i) != 0)
                        .collect::<Vec<_>>(),
                    e.conj(),
                ));
            }
            out.insert(-k, p, g);
        }
        out
    }

    /// Exterior derivative:
    /// d(w^k s^p F) = w^k s^p (ik·dλ∧F + dF) + w^k (p/2)·s^{p−2} d(s²)∧F.
    pub fn d(&self) -> PhaseElem {
        let ctx = &self.ctx;
        let dlam = ctx.dlambda();
        let ds_sq = Form::from_expr(ctx.total(), lift_to_total(ctx, ctx.s_sq())).d();
        let mut out = PhaseElem::zero(ctx);
        for (&(k, p), f) in &self.terms {
            out.insert(k, p, f.d());
            if k != 0 {
                let c = crat_from_int(k as i64) * crat_i();
                out.insert(k, p, dlam.wedge(f).scale(&c));
            }
            if p == 1 {
                let (parity, mult) = fold_s_power(ctx, -1);
                out.insert(
                    k,
                    parity,
                    ds_sq.wedge(f).scale(&crat_from_rat(1, 2)).scale_expr(&mult),
                );
            }
        }
        out
    }

    /// If the element has no s or w dependence beyond Fourier modes
    /// (all parities even), view it as a [`CircleForm`].
    pub fn as_circle_form(&self) -> Option<CircleForm> {
        let mut modes = BTreeMap::new();
        for (&(k, p), f) in &self.terms {
            if p != 0 {
                return None;
            }
            modes.insert(k, f.clone());
        }
        Some(CircleForm {
            ctx: self.ctx.clone(),
            modes,
        })
    }
}

fn lift_to_total(ctx: &CirclePhase, e: &Expr) -> Expr {
    // Expressions carry their own variable lists; nothing to do beyond
    // asserting the variables live on the base.
    for v in e.vars() {
        assert!(ctx.base().index_of(v).is_some(), "expression not on base");
    }
    e.clone()
}

/// A form on base×S¹ with fiber dependence organized by Fourier mode:
/// Σ_k e^{ikλ}·F_k, coefficients of each F_k rational in the base.
#[derive(Clone, Debug)]
pub struct CircleForm {
    ctx: Arc<CirclePhase>,
    modes: BTreeMap<i32, Form>,
}

impl PartialEq for CircleForm {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes
    }
}

impl CircleForm {
    pub fn ctx(&self) -> &Arc<CirclePhase> {
        &self.ctx
    }

    pub fn modes(&self) -> impl Iterator<Item = (i32, &Form)> {
        self.modes.iter().map(|(&k, f)| (k, f))
    }

    pub fn mode(&self, k: i32) -> Option<&Form> {
        self.modes.get(&k)
    }

    /// Fiber integration over λ ∈ [0,2π]: modes k ≠ 0 integrate to zero,
    /// and the mode-0 dλ-component contributes 2π times its coefficient
    /// (convention: terms read dλ∧β with dλ moved to the front).
    /// Returns the base form `G` with ∫ = 2π·G; the transcendental
    /// factor is left symbolic so the result stays exact.
    pub fn fiber_integral_over_two_pi(&self) -> Form {
        let fiber = self.ctx.fiber_index();
        let lam_bit = 1u32 << fiber;
        let mut out = Form::zero(self.ctx.base());
        if let Some(f0) = self.modes.get(&0) {
            for (m, e) in f0.terms() {
                if m & lam_bit == 0 {
                    continue;
                }
                // dx_rest∧…∧dλ∧… → move dλ to the front: sign (−1)^{#bits below λ}.
                let below = (m & (lam_bit - 1)).count_ones();
                let coeff = if below % 2 == 1 { e.neg() } else { e.clone() };
                let rest: Vec<usize> = (0..fiber).filter(|i| m & (1 << i) != 0).collect();
                out = out.add(&Form::term(self.ctx.base(), &rest, coeff));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ast::parse_expr;

    fn ctx() -> Arc<CirclePhase> {
        CirclePhase::new(
            vec!["a1", "a2"],
            "lam",
            parse_expr("1 + a1^2 + a2^2").unwrap(),
        )
    }

    #[test]
    fn d_squared_zero_on_phase_terms() {
        let c = ctx();
        let f = Form::from_expr(c.total(), parse_expr("a1/(1 + a2^2)").unwrap());
        for (k, m) in [(0, 0), (1, 0), (-2, 1), (3, -1)] {
            let e = PhaseElem::monomial(&c, k, m, f.clone());
            assert!(e.d().d().is_zero(), "d² ≠ 0 for mode {k}, s-power {m}");
        }
    }

    #[test]
    fn s_squared_is_rational() {
        let c = ctx();
        let one = Form::one(c.total());
        let s = PhaseElem::monomial(&c, 0, 1, one.clone());
        let s2 = s.wedge(&s);
        let expect = PhaseElem::from_form(&c, one.scale_expr(c.s_sq()));
        assert_eq!(s2, expect);
    }

    #[test]
    fn w_times_conj_is_one() {
        let c = ctx();
        let one = Form::one(c.total());
        let w = PhaseElem::monomial(&c, 1, 0, one.clone());
        assert_eq!(w.wedge(&w.conj()), PhaseElem::from_form(&c, one));
    }

    #[test]
    fn leibniz_rule() {
        let c = ctx();
        let f = Form::from_expr(c.total(), parse_expr("a1*a2").unwrap());
        let g = Form::dx(c.total(), "a2").scale_expr(&parse_expr("1/(1+a1^2)").unwrap());
        let a = PhaseElem::monomial(&c, 2, 1, f);
        let b = PhaseElem::monomial(&c, -1, 1, g);
        // deg a = 0 ⇒ d(a∧b) = da∧b + a∧db
        let lhs = a.wedge(&b).d();
        let rhs = a.d().wedge(&b).add(&a.wedge(&b.d()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fiber_integral_picks_mode_zero_dlambda() {
        let c = ctx();
        let dlam = Form::dx(c.total(), "lam");
        let coeff = parse_expr("a1/(1 + a1^2 + a2^2)").unwrap();
        let e = PhaseElem::from_form(&c, dlam.scale_expr(&coeff))
            .add(&PhaseElem::monomial(&c, 2, 0, dlam.clone()));
        let cf = e.as_circle_form().unwrap();
        let out = cf.fiber_integral_over_two_pi();
        assert_eq!(out, Form::from_expr(c.base(), coeff));
    }

    #[test]
    fn fiber_integral_sign_convention() {
        // da1∧dλ = −dλ∧da1 integrates to −2π·da1
        let c = ctx();
        let t = Form::dx(c.total(), "a1").wedge(&Form::dx(c.total(), "lam"));
        let cf = PhaseElem::from_form(&c, t).as_circle_form().unwrap();
        assert_eq!(
            cf.fiber_integral_over_two_pi(),
            Form::dx(c.base(), "a1").neg()
        );
    }
}
