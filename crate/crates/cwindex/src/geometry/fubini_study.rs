//! Fubini–Study geometry on the affine chart U₀ of CP².
//!
//! Hermitian components h_ij = [(1+|z|²)δ_ij − z̄_i z_j]/(1+|z|²)² in the
//! complex coordinates (z1, z2); the real metric uses the convention
//! g(∂x_i,∂x_j) = g(∂y_i,∂y_j) = Re h_ij, g(∂x_i,∂y_j) = Im h_ij, so the
//! metric is the identity at the origin. Curvature is invariant under
//! the overall scale of the metric, so all curvature-level quantities
//! agree with any other normalization of h.

use std::sync::Arc;

use crate::expr::{crat_from_rat, crat_i, Chart, Expr};
use crate::forms::{abs2_expr, zbar_expr, z_expr, Form, MatrixForm};

use super::{GeometryError, MetricChart};

pub const COORDS: [&str; 4] = ["x1", "y1", "x2", "y2"];

pub fn chart_u0() -> Arc<Chart> {
    Chart::new(COORDS.to_vec()).expect("valid chart")
}

/// 1 + |z1|² + |z2|²
pub fn u_expr() -> Expr {
    Expr::one()
        .add(&abs2_expr("x1", "y1"))
        .add(&abs2_expr("x2", "y2"))
}

/// Hermitian component h_ij = g^{FS}(∂z_i, ∂z̄_j) as an expression in the
/// real chart coordinates (i, j ∈ {0, 1} for z1, z2).
pub fn hermitian_component(i: usize, j: usize) -> Expr {
    let u = u_expr();
    let zi_bar = [zbar_expr("x1", "y1"), zbar_expr("x2", "y2")][i].clone();
    let zj = [z_expr("x1", "y1"), z_expr("x2", "y2")][j].clone();
    let delta = if i == j { u.clone() } else { Expr::zero() };
    delta
        .sub(&zi_bar.mul(&zj))
        .div(&u.mul(&u))
        .expect("denominator (1+|z|²)² is nonzero")
}

/// The real 4-dimensional Fubini–Study metric on U₀.
pub fn fubini_study_cp2() -> MetricChart {
    let chart = chart_u0();
    let mut g = vec![vec![Expr::zero(); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let h = hermitian_component(i, j);
            let re = h.real_part();
            let im = h.imag_part();
            g[2 * i][2 * j] = re.clone(); // x_i, x_j
            g[2 * i + 1][2 * j + 1] = re; // y_i, y_j
            g[2 * i][2 * j + 1] = im.clone(); // x_i, y_j
            g[2 * i + 1][2 * j] = im.neg(); // y_i, x_j
        }
    }
    let samples = super::sample_points(4, 8, 0x5eed);
    MetricChart::new(chart, g, &samples).expect("Fubini–Study metric is positive definite")
}

/// Constant basis change from the real coordinate frame
/// (∂x1, ∂y1, ∂x2, ∂y2) to the complex frame (∂z1, ∂z̄1, ∂z2, ∂z̄2):
/// returns (P, P⁻¹) with new-frame matrix = P⁻¹·M·P.
pub fn complex_frame_change(chart: &Arc<Chart>) -> (MatrixForm, MatrixForm) {
    let half = crat_from_rat(1, 2);
    let half_i = crat_from_rat(1, 2) * crat_i();
    let i = crat_i();
    let c = |v: crate::expr::CRat| Form::constant(chart, v);
    let z = || Form::zero(chart);
    // Columns of P: ∂z_j = ½(∂x_j − i∂y_j), ∂z̄_j = ½(∂x_j + i∂y_j).
    let p = MatrixForm::from_entries(
        chart,
        4,
        vec![
            c(half.clone()), c(half.clone()), z(), z(),
            c(-half_i.clone()), c(half_i.clone()), z(), z(),
            z(), z(), c(half.clone()), c(half.clone()),
            z(), z(), c(-half_i.clone()), c(half_i),
        ],
    );
    let p_inv = MatrixForm::from_entries(
        chart,
        4,
        vec![
            c(crate::expr::crat_one()), c(i.clone()), z(), z(),
            c(crate::expr::crat_one()), c(-i.clone()), z(), z(),
            z(), z(), c(crate::expr::crat_one()), c(i.clone()),
            z(), z(), c(crate::expr::crat_one()), c(-i),
        ],
    );
    (p, p_inv)
}

/// Expected diagonal coefficient of F² in the complex frame:
/// 3/(1+|z|²)³ (times dz1∧dz̄1∧dz2∧dz̄2).
pub fn f_squared_diagonal_coefficient() -> Expr {
    let u = u_expr();
    Expr::int(3)
        .div(&u.powi(3).expect("positive power"))
        .expect("nonzero denominator")
}

/// The complex volume form dz1∧dz̄1∧dz2∧dz̄2 on U₀
/// (equals −4·dx1∧dy1∧dx2∧dy2).
pub fn complex_volume(chart: &Arc<Chart>) -> Form {
    crate::forms::dz(chart, "x1", "y1")
        .wedge(&crate::forms::dzbar(chart, "x1", "y1"))
        .wedge(&crate::forms::dz(chart, "x2", "y2"))
        .wedge(&crate::forms::dzbar(chart, "x2", "y2"))
}

/// The assembled CP² pipeline, computed once and shared: the symbolic
/// Levi-Civita inversion is the most expensive step in the crate.
pub struct Cp2Geometry {
    pub metric: MetricChart,
    pub connection: super::Connection,
    pub f: MatrixForm,
    pub action: super::VectorField,
    pub mu: MatrixForm,
    pub f_squared: MatrixForm,
    /// F² conjugated into the complex frame (∂z1, ∂z̄1, ∂z2, ∂z̄2).
    pub f_squared_complex: MatrixForm,
    pub tr_f2: Form,
    pub tr_mu2: Expr,
}

pub fn cp2_geometry() -> &'static Cp2Geometry {
    use once_cell::sync::Lazy;
    static CACHE: Lazy<Cp2Geometry> = Lazy::new(|| {
        let metric = fubini_study_cp2();
        let connection = super::levi_civita(&metric).expect("Fubini–Study metric is invertible");
        let f = super::curvature(&connection);
        let action = super::circle_action_field(
            &super::ActionSpec::Cp2LastCoordinate,
            metric.chart(),
        )
        .expect("built-in action");
        let mu = super::moment_map(&connection, &action);
        let f_squared = f.mat_mul(&f);
        let (p, p_inv) = complex_frame_change(metric.chart());
        let f_squared_complex = f_squared.conjugate_basis(&p, &p_inv);
        let tr_f2 = f_squared.trace();
        let tr_mu2 = mu.mat_mul(&mu).trace().coefficient(0);
        Cp2Geometry {
            metric,
            connection,
            f,
            action,
            mu,
            f_squared,
            f_squared_complex,
            tr_f2,
            tr_mu2,
        }
    });
    &CACHE
}

pub fn metric_registry(name: &str) -> Result<MetricChart, GeometryError> {
    match name {
        "fubini-study-cp2" => Ok(fubini_study_cp2()),
        "flat-torus-2d" => Ok(super::flat_torus_2d()),
        other => Err(GeometryError::UnknownGeometry(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::C64;
    use std::collections::HashMap;

    fn at(point: [f64; 4]) -> HashMap<String, C64> {
        COORDS
            .iter()
            .zip(point)
            .map(|(c, v)| (c.to_string(), C64::new(v, 0.0)))
            .collect()
    }

    #[test]
    fn identity_at_origin() {
        let g = fubini_study_cp2();
        let vals = g.eval_at(&[0.0, 0.0, 0.0, 0.0]).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((vals[a][b] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hermitian_value_at_z1_equals_one() {
        // h_11 at (z1, z2) = (1, 0): (2·1 − 1)/4 = 1/4
        let h = hermitian_component(0, 0);
        let v = h.eval(&at([1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((v.re - 0.25).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn killing_field_structural() {
        let g = fubini_study_cp2();
        let x = super::super::circle_action_field(
            &super::super::ActionSpec::Cp2LastCoordinate,
            g.chart(),
        )
        .unwrap();
        let lie = super::super::lie_derivative_metric(&g, &x);
        for row in &lie {
            for e in row {
                assert!(e.is_zero(), "Lie derivative component nonzero: {}", e);
            }
        }
    }

    #[test]
    fn basis_change_is_inverse_pair() {
        let chart = chart_u0();
        let (p, p_inv) = complex_frame_change(&chart);
        assert_eq!(p_inv.mat_mul(&p), MatrixForm::identity(&chart, 4));
        assert_eq!(p.mat_mul(&p_inv), MatrixForm::identity(&chart, 4));
    }
}
