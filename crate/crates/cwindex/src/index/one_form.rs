//! One-form fiber pairing for the Hopf example: the compactly supported
//! representative integrates over the ℝ*-fiber to 2πiθ·(φ(0) + φ′(0)Θ),
//! kept in factored form with a symbolic 2πiθ marker.

use std::sync::Arc;

use crate::classes::{CohClass, CohRing, JetFunction};
use crate::expr::{crat_zero, C64};
use crate::quad::{fourier_transform, integrate_fn, Domain, QuadConfig, QuadError};

/// The value 2πiθ·(class), with the non-cohomological 1-form factor
/// kept symbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFormPairing {
    pub marker: String,
    pub class: CohClass,
}

impl std::fmt::Display for OneFormPairing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}·({})", self.marker, self.class)
    }
}

/// Closed-form pairing: 2πiθ·(φ(0) + φ′(0)Θ) from the jets of φ.
pub fn one_form_fiber_pairing(ring: &Arc<CohRing>, phi: &JetFunction) -> OneFormPairing {
    let j0 = phi.jet(0).cloned().unwrap_or_else(crat_zero);
    let j1 = phi.jet(1).cloned().unwrap_or_else(crat_zero);
    let class = CohClass::scalar(ring, j0).add(&CohClass::generator(ring, 0).scale(&j1));
    OneFormPairing {
        marker: "2πiθ".to_string(),
        class,
    }
}

#[derive(Clone, Debug)]
pub struct FourierIdentityCheck {
    pub name: String,
    pub expected: f64,
    pub computed: C64,
    pub abs_error: f64,
}

/// Numeric verification of the Fourier identities behind the pairing:
/// ∫φ̂(ζ)dζ = 2πφ(0) and ∫−iζφ̂(ζ)dζ = 2πφ′(0), for a callable φ whose
/// transform is negligible outside |ζ| ≤ zeta_cut.
pub fn verify_fourier_identities<F>(
    phi: &F,
    phi0: f64,
    dphi0: f64,
    zeta_cut: f64,
    cfg: &QuadConfig,
) -> Result<Vec<FourierIdentityCheck>, QuadError>
where
    F: Fn(f64) -> f64,
{
    let two_pi = 2.0 * std::f64::consts::PI;
    let dom = [Domain::Interval(-zeta_cut, zeta_cut)];
    let f0 = |z: &[f64]| -> Result<C64, QuadError> { Ok(fourier_transform(phi, z[0], cfg)?.0) };
    let f1 = |z: &[f64]| -> Result<C64, QuadError> {
        Ok(fourier_transform(phi, z[0], cfg)?.0 * C64::new(0.0, -z[0]))
    };
    let (i0, _) = integrate_fn(&f0, &dom, cfg)?;
    let (i1, _) = integrate_fn(&f1, &dom, cfg)?;
    Ok(vec![
        FourierIdentityCheck {
            name: "int_phi_hat_equals_2pi_phi0".to_string(),
            expected: two_pi * phi0,
            computed: i0,
            abs_error: (i0 - C64::new(two_pi * phi0, 0.0)).norm(),
        },
        FourierIdentityCheck {
            name: "int_minus_i_zeta_phi_hat_equals_2pi_dphi0".to_string(),
            expected: two_pi * dphi0,
            computed: i1,
            abs_error: (i1 - C64::new(two_pi * dphi0, 0.0)).norm(),
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{crat_one, CRat};

    #[test]
    fn unit_jets_give_bare_marker() {
        let ring = CohRing::s2_theta();
        let phi = JetFunction::new("Id", vec![(0, crat_one())]);
        let p = one_form_fiber_pairing(&ring, &phi);
        assert_eq!(p.marker, "2πiθ");
        assert_eq!(p.class, CohClass::one(&ring));
    }

    #[test]
    fn derivative_jet_lands_on_theta() {
        let ring = CohRing::s2_theta();
        let phi = JetFunction::new("Id", vec![(0, crat_zero()), (1, crat_one())]);
        let p = one_form_fiber_pairing(&ring, &phi);
        assert_eq!(p.class, CohClass::generator(&ring, 0));
        // linearity in the jets
        let both = JetFunction::new("Id", vec![(0, crat_one()), (1, crat_one())]);
        let q = one_form_fiber_pairing(&ring, &both);
        assert_eq!(
            q.class,
            CohClass::one(&ring).add(&CohClass::generator(&ring, 0))
        );
        let _c: CRat = crat_one();
    }

    #[test]
    fn gaussian_fourier_identities() {
        // φ(x) = e^{−4(x−0.3)²}: effectively supported in (−π, π),
        // transform effectively supported in |ζ| ≤ 30.
        let phi = |x: f64| (-4.0 * (x - 0.3) * (x - 0.3)).exp();
        let phi0 = phi(0.0);
        let dphi0 = phi0 * (-8.0) * (0.0 - 0.3);
        let cfg = QuadConfig::default();
        let checks = verify_fourier_identities(&phi, phi0, dphi0, 30.0, &cfg).unwrap();
        for c in &checks {
            assert!(c.abs_error < 1e-7, "{}: err {}", c.name, c.abs_error);
            assert!(c.computed.im.abs() < 1e-7);
        }
    }
}
