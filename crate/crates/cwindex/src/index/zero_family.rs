//! Zero family of the Hopf fibration: the distributional index is the
//! sum over integer weights n of (1 + inΘ)·χ_n, and pairing it with a
//! test function supported near 1 ∈ S¹ gives partial sums that converge
//! to the closed form 2π(φ(0) + Θφ′(0)).

use std::sync::Arc;

use crate::classes::{CohClass, CohRing};
use crate::expr::{crat_from_int, crat_i, C64};
use crate::quad::{fourier_coefficients, QuadConfig, QuadError};

/// Chern class of the weight-n multiplicity line bundle: 1 + inΘ.
pub fn multiplicity_chern(ring: &Arc<CohRing>, n: i64) -> CohClass {
    CohClass::one(ring).add(
        &CohClass::generator(ring, 0).scale(&(crat_i() * crat_from_int(n))),
    )
}

/// One partial-sum-vs-closed-form comparison at truncation N.
#[derive(Clone, Debug)]
pub struct ZeroFamilyRecord {
    pub n_terms: u32,
    /// Σ_{|n|≤N} of the pairing, split by Θ-degree [deg 0, deg 1].
    pub partial: [C64; 2],
    /// 2π·[φ(0), φ′(0)].
    pub closed: [C64; 2],
    /// |partial − closed| per Θ-degree.
    pub difference: [f64; 2],
}

#[derive(Clone, Debug)]
pub struct ZeroFamilyComparison {
    pub records: Vec<ZeroFamilyRecord>,
    pub notes: Vec<String>,
}

/// Pairs the zero-family index with φ at each truncation in `ns`
/// (pass them increasing to read off convergence). The weight-n
/// character pairs to the n-th Fourier coefficient, so the Θ-degree-1
/// partial sum is Σ(−in)·φ̂(n), matching 2πφ′(0) in the limit.
/// `phi0` and `dphi0` are φ(0) and φ′(0) for the closed form.
pub fn index_zero_family_hopf<F>(
    phi: &F,
    phi0: f64,
    dphi0: f64,
    ns: &[u32],
    cfg: &QuadConfig,
) -> Result<ZeroFamilyComparison, QuadError>
where
    F: Fn(f64) -> f64,
{
    let n_max = ns.iter().copied().max().unwrap_or(0) as i64;
    let hat = fourier_coefficients(phi, n_max, cfg)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let closed = [C64::new(two_pi * phi0, 0.0), C64::new(two_pi * dphi0, 0.0)];
    let mut records = Vec::with_capacity(ns.len());
    for &n_terms in ns {
        let mut deg0 = C64::new(0.0, 0.0);
        let mut deg1 = C64::new(0.0, 0.0);
        for n in -(n_terms as i64)..=n_terms as i64 {
            let v = hat[&n];
            deg0 += v;
            deg1 += C64::new(0.0, -(n as f64)) * v;
        }
        records.push(ZeroFamilyRecord {
            n_terms,
            partial: [deg0, deg1],
            closed,
            difference: [(deg0 - closed[0]).norm(), (deg1 - closed[1]).norm()],
        });
    }
    Ok(ZeroFamilyComparison {
        records,
        notes: vec![
            "character orientation: the weight-n summand pairs to the n-th Fourier \
             coefficient, so the degree-1 sum carries a factor -i*n"
                .to_string(),
        ],
    })
}

/// Smooth bump of center c and half-width w (support (c−w, c+w)),
/// returned with its exact 0-th and 1-st jets at 0.
pub fn standard_bump(c: f64, w: f64) -> (impl Fn(f64) -> f64 + Copy, f64, f64) {
    let phi = move |x: f64| -> f64 {
        let u = (x - c) / w;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - u * u)).exp()
        }
    };
    let u0 = -c / w;
    let phi0 = phi(0.0);
    // φ′ = φ · d/dX[−(1−u²)^{−1}] = φ · (−2u/w)/(1−u²)²
    let dphi0 = phi0 * (-2.0 * u0 / w) / ((1.0 - u0 * u0) * (1.0 - u0 * u0));
    (phi, phi0, dphi0)
}

/// Gaussian window e^{−a(x−c)²} with its exact jets at 0. For
/// a·(1−|c|)² ≳ 28 the window is below 1e−12 outside (−1, 1), i.e.
/// numerically supported there, and its circle Fourier coefficients
/// decay like e^{−n²/(4a)} — fast enough for 1e−6 comparisons at
/// N = 64, which true boundary-flat mollifiers only meet at ~1e−3.
pub fn gaussian_window(c: f64, a: f64) -> (impl Fn(f64) -> f64 + Copy, f64, f64) {
    let phi = move |x: f64| (-a * (x - c) * (x - c)).exp();
    let phi0 = phi(0.0);
    let dphi0 = 2.0 * a * c * phi0;
    (phi, phi0, dphi0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{crat_one, CRat};
    use num::traits::One;

    #[test]
    fn multiplicity_chern_structure() {
        let ring = CohRing::s2_theta();
        let ch = multiplicity_chern(&ring, 3);
        assert_eq!(ch.coefficient(&[0]), crat_one());
        assert_eq!(ch.coefficient(&[1]), crat_i() * crat_from_int(3));
        // Θ² = 0 in this ring
        let sq = CohClass::generator(&ring, 0).mul(&CohClass::generator(&ring, 0));
        assert!(sq.is_zero());
        let _one: CRat = CRat::one();
    }

    #[test]
    fn partial_sums_converge_monotonically() {
        let (phi, phi0, dphi0) = gaussian_window(0.1, 35.0);
        let cfg = QuadConfig::default();
        let cmp = index_zero_family_hopf(&phi, phi0, dphi0, &[16, 32, 64], &cfg).unwrap();
        let d: Vec<[f64; 2]> = cmp.records.iter().map(|r| r.difference).collect();
        assert!(d[1][0] < d[0][0] && d[2][0] < d[1][0], "degree 0 errors {:?}", d);
        assert!(d[1][1] < d[0][1] && d[2][1] < d[1][1], "degree 1 errors {:?}", d);
        assert!(d[2][0] < 1e-6 && d[2][1] < 1e-6, "final errors {:?}", d[2]);
    }

    #[test]
    fn compact_bump_partial_sums_converge() {
        // boundary-flat mollifier: slower (sub-exponential) coefficient
        // decay, so only monotone convergence is asserted here
        let (phi, phi0, dphi0) = standard_bump(0.3, 0.6);
        let cfg = QuadConfig::default();
        let cmp = index_zero_family_hopf(&phi, phi0, dphi0, &[16, 32, 64], &cfg).unwrap();
        let d: Vec<[f64; 2]> = cmp.records.iter().map(|r| r.difference).collect();
        assert!(d[1][0] < d[0][0] && d[2][0] < d[1][0], "degree 0 errors {:?}", d);
        assert!(d[1][1] < d[0][1] && d[2][1] < d[1][1], "degree 1 errors {:?}", d);
        assert!(d[2][0] < 1e-3 && d[2][1] < 5e-2, "final errors {:?}", d[2]);
    }

    #[test]
    fn odd_test_function_kills_degree_zero() {
        let (window, _, _) = gaussian_window(0.0, 20.0);
        let phi = move |x: f64| x * window(x); // odd
        let phi0 = 0.0;
        // d/dx [x·window(x)] at 0 = window(0) = 1
        let dphi0 = window(0.0);
        let cfg = QuadConfig::default();
        let cmp = index_zero_family_hopf(&phi, phi0, dphi0, &[64], &cfg).unwrap();
        let r = &cmp.records[0];
        assert!(r.partial[0].norm() < 1e-8, "degree-0 partial {:?}", r.partial[0]);
        assert!(r.closed[0].norm() == 0.0);
        assert!(r.difference[1] < 1e-6);
    }

    #[test]
    fn bump_jets_match_finite_differences() {
        let (phi, phi0, dphi0) = standard_bump(0.3, 0.6);
        assert!((phi(0.0) - phi0).abs() < 1e-15);
        let h = 1e-6;
        let fd = (phi(h) - phi(-h)) / (2.0 * h);
        assert!((fd - dphi0).abs() < 1e-8, "fd {fd} vs exact {dphi0}");
    }
}
