//! The Hopf circle bundle S³ → S² in the trivialization over the affine
//! chart of the base.
//!
//! The unit section is t₀(α, e^{iλ}) = e^{iλ}·(1, α)/s with s² = 1+|α|²,
//! pulled back through the phase algebra of [`crate::forms::circle`]:
//! z_k = w·f_k/s with w = e^{iλ}, f = (1, α). The connection
//! θ = (i/2)Σ_k (z_k dz̄_k − z̄_k dz_k) lands in Fourier mode 0 with
//! dλ-coefficient exactly 1; its base potential is
//! A = (a1·da2 − a2·da1)/(1+|α|²) and the curvature is
//! Θ = dA = 2/(1+|α|²)²·da1∧da2 (= i·dα∧dᾱ/(1+|α|²)²).

use std::sync::Arc;

use crate::expr::{crat_from_rat, crat_i, Expr};
use crate::forms::circle::{CircleForm, CirclePhase, PhaseElem};
use crate::forms::{z_expr, Form};

use super::{Connection, Frame};

pub struct HopfBundle {
    ctx: Arc<CirclePhase>,
    theta: CircleForm,
    summands: Vec<CircleForm>,
    potential: Form,
    curvature: Form,
}

impl HopfBundle {
    pub fn new() -> HopfBundle {
        let s_sq = Expr::one()
            .add(&crate::forms::abs2_expr("a1", "a2"));
        let ctx = CirclePhase::new(vec!["a1", "a2"], "lam", s_sq);
        let alpha = z_expr("a1", "a2");
        let f = [Expr::one(), alpha];

        let mut summands = Vec::with_capacity(2);
        let mut theta = PhaseElem::zero(&ctx);
        for fk in &f {
            // z_k = w·s⁻¹·f_k
            let zk = PhaseElem::monomial(&ctx, 1, -1, Form::from_expr(ctx.total(), fk.clone()));
            let zk_bar = zk.conj();
            let summand = zk.wedge(&zk_bar.d()).sub(&zk_bar.wedge(&zk.d()));
            theta = theta.add(&summand);
            summands.push(
                summand
                    .as_circle_form()
                    .expect("square roots cancel in the connection summand"),
            );
        }
        let theta = theta
            .scale(&(crat_i() * crat_from_rat(1, 2)))
            .as_circle_form()
            .expect("square roots cancel in the connection");

        // Base potential: the λ-free part of mode 0.
        let lam_bit = 1u32 << ctx.fiber_index();
        let mut pot_total = Form::zero(ctx.total());
        if let Some(f0) = theta.mode(0) {
            for (m, e) in f0.terms() {
                if m & lam_bit == 0 {
                    let idx: Vec<usize> = (0..ctx.fiber_index())
                        .filter(|i| m & (1 << i) != 0)
                        .collect();
                    pot_total = pot_total.add(&Form::term(ctx.total(), &idx, e.clone()));
                }
            }
        }
        let potential = ctx.restrict_to_base(&pot_total);
        let curvature = potential.d();
        HopfBundle {
            ctx,
            theta,
            summands,
            potential,
            curvature,
        }
    }

    pub fn ctx(&self) -> &Arc<CirclePhase> {
        &self.ctx
    }

    /// Full pullback of θ on base×S¹, organized by Fourier mode.
    pub fn theta(&self) -> &CircleForm {
        &self.theta
    }

    /// Pullback of z_k dz̄_k − z̄_k dz_k.
    pub fn summand(&self, k: usize) -> &CircleForm {
        &self.summands[k]
    }

    /// Local connection potential A on the base chart.
    pub fn potential(&self) -> &Form {
        &self.potential
    }

    /// Curvature Θ = dA on the base chart.
    pub fn curvature(&self) -> &Form {
        &self.curvature
    }

    /// Abelian principal connection view (1×1 matrix of the potential).
    pub fn connection(&self) -> Connection {
        Connection {
            chart: self.ctx.base().clone(),
            omega: crate::forms::MatrixForm::from_entries(
                self.ctx.base(),
                1,
                vec![self.potential.clone()],
            ),
            frame: Frame::Named("principal-S1".to_string()),
            gamma: vec![],
        }
    }
}

impl Default for HopfBundle {
    fn default() -> Self {
        HopfBundle::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ast::parse_expr;
    use crate::expr::crat_from_int;

    #[test]
    fn theta_fiber_integral_is_two_pi() {
        let h = HopfBundle::new();
        let g = h.theta().fiber_integral_over_two_pi();
        assert_eq!(g, Form::one(h.ctx().base()));
    }

    #[test]
    fn first_summand_integral() {
        // ∫ over the fiber of t₀*(z0 dz̄0 − z̄0 dz0) = 2π·(−2i/(1+|α|²))
        let h = HopfBundle::new();
        let g = h.summand(0).fiber_integral_over_two_pi();
        let expect = Form::from_expr(
            h.ctx().base(),
            parse_expr("-2*i/(1 + a1^2 + a2^2)").unwrap(),
        );
        assert_eq!(g, expect);
    }

    #[test]
    fn potential_and_curvature_closed_forms() {
        let h = HopfBundle::new();
        let base = h.ctx().base();
        let a = Form::dx(base, "a2")
            .scale_expr(&parse_expr("a1/(1 + a1^2 + a2^2)").unwrap())
            .sub(&Form::dx(base, "a1").scale_expr(&parse_expr("a2/(1 + a1^2 + a2^2)").unwrap()));
        assert_eq!(h.potential(), &a);
        let vol = Form::dx(base, "a1").wedge(&Form::dx(base, "a2"));
        let expect = vol
            .scale(&crat_from_int(2))
            .scale_expr(&parse_expr("1/(1 + a1^2 + a2^2)^2").unwrap());
        assert_eq!(h.curvature(), &expect);
        assert!(h.curvature().d().is_zero());
    }

    #[test]
    fn theta_has_unit_dlambda_coefficient() {
        let h = HopfBundle::new();
        let mode0 = h.theta().mode(0).unwrap();
        let lam_bit = 1u32 << h.ctx().fiber_index();
        assert_eq!(mode0.coefficient(lam_bit), Expr::one());
    }
}
