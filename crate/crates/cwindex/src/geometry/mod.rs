//! Riemannian and circle-bundle geometry on charts: metrics, the
//! Levi-Civita connection, curvature 2-forms, circle-action generators,
//! moment maps, and the built-in geometries.

pub mod fubini_study;
pub mod hopf;

pub use fubini_study::{cp2_geometry, Cp2Geometry};

use std::sync::Arc;

use thiserror::Error;

use crate::expr::{crat_from_rat, Chart, Expr, ExprError};
use crate::forms::{Form, MatrixForm};

#[derive(Error, Debug)]
pub enum GeometryError {
    #[error("metric components are not symmetric")]
    NotSymmetric,
    #[error("metric is not positive definite at sample point {0:?} (eigenvalue {1})")]
    NotPositiveDefinite(Vec<f64>, f64),
    #[error("metric is not invertible as a rational-function matrix")]
    SingularMetric,
    #[error("unknown action spec `{0}`")]
    UnknownAction(String),
    #[error("unknown geometry `{0}`")]
    UnknownGeometry(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Metric on a chart as a symmetric grid of expressions in the real
/// coordinates.
#[derive(Clone, Debug)]
pub struct MetricChart {
    chart: Arc<Chart>,
    g: Vec<Vec<Expr>>, // g[a][b]
}

impl MetricChart {
    /// Validates symmetry structurally and positive definiteness
    /// numerically (eigenvalues > 1e-9) at the supplied sample points.
    pub fn new(
        chart: Arc<Chart>,
        g: Vec<Vec<Expr>>,
        sample_points: &[Vec<f64>],
    ) -> Result<MetricChart, GeometryError> {
        let n = chart.dimension();
        assert_eq!(g.len(), n);
        for row in &g {
            assert_eq!(row.len(), n);
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if g[a][b] != g[b][a] {
                    return Err(GeometryError::NotSymmetric);
                }
            }
        }
        let m = MetricChart { chart, g };
        for p in sample_points {
            let vals = m.eval_at(p)?;
            let eigs = jacobi_eigenvalues(&vals);
            for &e in &eigs {
                if e <= 1e-9 {
                    return Err(GeometryError::NotPositiveDefinite(p.clone(), e));
                }
            }
        }
        Ok(m)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn component(&self, a: usize, b: usize) -> &Expr {
        &self.g[a][b]
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    pub fn eval_at(&self, point: &[f64]) -> Result<Vec<Vec<f64>>, ExprError> {
        let n = self.dimension();
        let cpoint: Vec<crate::expr::C64> = point
            .iter()
            .map(|&x| crate::expr::C64::new(x, 0.0))
            .collect();
        let mut out = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                out[a][b] = self.g[a][b].eval_on_chart(&self.chart, &cpoint)?.re;
            }
        }
        Ok(out)
    }
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Exact inverse of a square matrix of expressions by Gaussian
/// elimination over the rational-function field.
pub fn invert_expr_matrix(m: &[Vec<Expr>]) -> Result<Vec<Vec<Expr>>, GeometryError> {
    let n = m.len();
    let mut a: Vec<Vec<Expr>> = m.to_vec();
    let mut inv: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(GeometryError::SingularMetric)?;
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].div(&pivot)?;
            inv[col][j] = inv[col][j].div(&pivot)?;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let t = a[col][j].mul(&factor);
                a[r][j] = a[r][j].sub(&t);
                let t = inv[col][j].mul(&factor);
                inv[r][j] = inv[r][j].sub(&t);
            }
        }
    }
    Ok(inv)
}

/// Frame in which a connection matrix is expressed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    Coordinate,
    Named(String),
}

/// Connection 1-form matrix in a declared frame, with the Christoffel
/// symbols kept for moment-map and compatibility computations.
#[derive(Clone, Debug)]
pub struct Connection {
    chart: Arc<Chart>,
    omega: MatrixForm,
    frame: Frame,
    /// gamma[k][a][b] = Γ^k_{ab}; empty for non-Levi-Civita connections.
    gamma: Vec<Vec<Vec<Expr>>>,
}

impl Connection {
    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn omega(&self) -> &MatrixForm {
        &self.omega
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn christoffel(&self, k: usize, a: usize, b: usize) -> &Expr {
        &self.gamma[k][a][b]
    }

    pub fn has_christoffels(&self) -> bool {
        !self.gamma.is_empty()
    }
}

/// Levi-Civita connection of a metric:
/// Γ^k_{ab} = ½ g^{kc}(∂_a g_{cb} + ∂_b g_{ca} − ∂_c g_{ab}),
/// ω^k_b = Γ^k_{ab} dx^a.
pub fn levi_civita(g: &MetricChart) -> Result<Connection, GeometryError> {
    let n = g.dimension();
    let chart = g.chart().clone();
    let coords = chart.coords().to_vec();
    let ginv = invert_expr_matrix(&g.g)?;
    let half = crat_from_rat(1, 2);
    let mut gamma = vec![vec![vec![Expr::zero(); n]; n]; n];
    for a in 0..n {
        for b in a..n {
            // Σ_c-independent inner derivative combination per c
            let mut inner = Vec::with_capacity(n);
            for c in 0..n {
                let t = g.g[c][b]
                    .diff(&coords[a])
                    .add(&g.g[c][a].diff(&coords[b]))
                    .sub(&g.g[a][b].diff(&coords[c]));
                inner.push(t);
            }
            for k in 0..n {
                let mut acc = Expr::zero();
                for c in 0..n {
                    acc = acc.add(&ginv[k][c].mul(&inner[c]));
                }
                let gkab = acc.scale(&half);
                gamma[k][a][b] = gkab.clone();
                gamma[k][b][a] = gkab;
            }
        }
    }
    let mut omega = MatrixForm::zero(&chart, n);
    for k in 0..n {
        for b in 0..n {
            let mut acc = Form::zero(&chart);
            for a in 0..n {
                acc = acc.add(&Form::dx(&chart, &coords[a]).scale_expr(&gamma[k][a][b]));
            }
            *omega.at_mut(k, b) = acc;
        }
    }
    Ok(Connection {
        chart,
        omega,
        frame: Frame::Coordinate,
        gamma,
    })
}

/// Curvature F = dω + ω∧ω.
pub fn curvature(c: &Connection) -> MatrixForm {
    c.omega().d().add(&c.omega().mat_mul(c.omega()))
}

#[derive(Clone, Debug)]
pub struct VectorField {
    chart: Arc<Chart>,
    components: Vec<Expr>,
}

impl VectorField {
    pub fn new(chart: &Arc<Chart>, components: Vec<Expr>) -> VectorField {
        assert_eq!(components.len(), chart.dimension());
        VectorField {
            chart: chart.clone(),
            components,
        }
    }

    pub fn zero(chart: &Arc<Chart>) -> VectorField {
        VectorField::new(chart, vec![Expr::zero(); chart.dimension()])
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }
}

/// Built-in circle actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionSpec {
    /// γ·[z0,z1,z2] = [z0,z1,γz2] on CP², chart U₀ = (x1,y1,x2,y2).
    Cp2LastCoordinate,
    /// Rotation of the circle factor, chart with the fiber coordinate last.
    CircleTranslation,
}

impl ActionSpec {
    pub fn parse(name: &str) -> Result<ActionSpec, GeometryError> {
        match name {
            "cp2-last-coordinate" => Ok(ActionSpec::Cp2LastCoordinate),
            "circle-translation" => Ok(ActionSpec::CircleTranslation),
            other => Err(GeometryError::UnknownAction(other.to_string())),
        }
    }
}

/// Generator of the flow t ↦ e^{−it}·(·) (sign convention: the field
/// generates the inverse flow; only even powers of the moment enter the
/// final index values, so the opposite convention yields the same
/// outputs — the choice is recorded in CLI reports).
pub fn circle_action_field(
    action: &ActionSpec,
    chart: &Arc<Chart>,
) -> Result<VectorField, GeometryError> {
    match action {
        ActionSpec::Cp2LastCoordinate => {
            // d/dt|₀ of (z1, e^{−it}z2): ż2 = −i·z2 → (ẋ2, ẏ2) = (y2, −x2).
            assert_eq!(chart.dimension(), 4);
            Ok(VectorField::new(
                chart,
                vec![
                    Expr::zero(),
                    Expr::zero(),
                    Expr::coord(&chart.coords()[3]),
                    Expr::coord(&chart.coords()[2]).neg(),
                ],
            ))
        }
        ActionSpec::CircleTranslation => {
            let n = chart.dimension();
            let mut comps = vec![Expr::zero(); n];
            comps[n - 1] = Expr::int(-1);
            Ok(VectorField::new(chart, comps))
        }
    }
}

/// Lie derivative of the metric along X:
/// (L_X g)_{ab} = X^c ∂_c g_{ab} + g_{cb} ∂_a X^c + g_{ac} ∂_b X^c.
/// Structurally zero iff X is Killing.
pub fn lie_derivative_metric(g: &MetricChart, x: &VectorField) -> Vec<Vec<Expr>> {
    let n = g.dimension();
    let coords = g.chart().coords().to_vec();
    let mut out = vec![vec![Expr::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut acc = Expr::zero();
            for c in 0..n {
                acc = acc.add(&x.components()[c].mul(&g.g[a][b].diff(&coords[c])));
                acc = acc.add(&g.g[c][b].mul(&x.components()[c].diff(&coords[a])));
                acc = acc.add(&g.g[a][c].mul(&x.components()[c].diff(&coords[b])));
            }
            out[a][b] = acc;
        }
    }
    out
}

/// Moment of a Killing field X with respect to a Levi-Civita connection:
/// μ(X)^k_j = −∂_j X^k − Γ^k_{aj} X^a (Lie derivative minus covariant
/// derivative on the tangent bundle), a matrix of functions.
pub fn moment_map(c: &Connection, x: &VectorField) -> MatrixForm {
    assert!(c.has_christoffels(), "moment map needs Christoffel symbols");
    let chart = c.chart().clone();
    let n = chart.dimension();
    let coords = chart.coords().to_vec();
    let mut out = MatrixForm::zero(&chart, n);
    for k in 0..n {
        for j in 0..n {
            let mut acc = x.components()[k].diff(&coords[j]).neg();
            for a in 0..n {
                acc = acc.sub(&c.christoffel(k, a, j).mul(&x.components()[a]));
            }
            *out.at_mut(k, j) = Form::from_expr(&chart, acc);
        }
    }
    out
}

/// The X-graded equivariant curvature F(X) = F + X·μ kept as the pair.
#[derive(Clone, Debug)]
pub struct EquivariantCurvature {
    pub f: MatrixForm,
    pub mu: MatrixForm,
}

impl EquivariantCurvature {
    pub fn new(f: MatrixForm, mu: MatrixForm) -> EquivariantCurvature {
        assert_eq!(f.size(), mu.size(), "size mismatch");
        assert_eq!(f.chart(), mu.chart(), "chart mismatch");
        EquivariantCurvature { f, mu }
    }
}

/// Flat metric (identity components) on a chart.
pub fn flat_metric(chart: &Arc<Chart>) -> MetricChart {
    let n = chart.dimension();
    let g = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect();
    MetricChart::new(chart.clone(), g, &[vec![0.0; n]]).expect("flat metric is definite")
}

/// Flat 2-torus chart with coordinates (u, v).
pub fn flat_torus_2d() -> MetricChart {
    let chart = Chart::new(vec!["u", "v"]).expect("valid chart");
    flat_metric(&chart)
}

/// Names of built-in geometries addressable from the CLI.
pub fn builtin_geometries() -> &'static [&'static str] {
    &["fubini-study-cp2", "hopf-s3", "flat-torus-2d"]
}

/// Deterministic quasi-random sample points in (−0.9, 0.9)^dim for
/// numeric checks (xorshift; fixed seed for reproducibility).
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut state = seed | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| (0..dim).map(|_| 1.8 * next() - 0.9).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ast::parse_expr;

    #[test]
    fn flat_metric_has_zero_christoffels() {
        let g = flat_torus_2d();
        let c = levi_civita(&g).unwrap();
        for k in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    assert!(c.christoffel(k, a, b).is_zero());
                }
            }
        }
        assert!(curvature(&c).trace().is_zero());
    }

    #[test]
    fn invert_matrix_roundtrip() {
        let m = vec![
            vec![parse_expr("1 + x^2").unwrap(), parse_expr("x*y").unwrap()],
            vec![parse_expr("x*y").unwrap(), parse_expr("1 + y^2").unwrap()],
        ];
        let inv = invert_expr_matrix(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Expr::zero();
                for k in 0..2 {
                    acc = acc.add(&m[i][k].mul(&inv[k][j]));
                }
                let expect = if i == j { Expr::one() } else { Expr::zero() };
                assert_eq!(acc, expect);
            }
        }
    }

    #[test]
    fn jacobi_eigenvalues_of_diag() {
        let m = vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![0.0, 0.0, 5.0],
        ];
        let mut e = jacobi_eigenvalues(&m);
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
        assert!((e[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn moment_of_zero_field_is_zero() {
        let g = flat_torus_2d();
        let c = levi_civita(&g).unwrap();
        let x = VectorField::zero(g.chart());
        let mu = moment_map(&c, &x);
        assert!(mu.trace().is_zero());
        assert!(mu.at(0, 1).is_zero());
    }

    #[test]
    fn circle_translation_generator() {
        let chart = Chart::new(vec!["u", "lam"]).unwrap();
        let x = circle_action_field(&ActionSpec::CircleTranslation, &chart).unwrap();
        assert!(x.components()[0].is_zero());
        assert_eq!(x.components()[1], Expr::int(-1));
    }
}
