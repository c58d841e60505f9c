//! Typed access to the bundled expected-checks manifest: reference
//! integrand tables and expected constants for the built-in
//! verification pipelines. All reference numbers live in the JSON
//! manifest, never in code.

use num::bigint::BigInt;
use once_cell::sync::Lazy;
use serde::Deserialize;

use crate::expr::Rat;

#[derive(Clone, Debug, Deserialize)]
pub struct ExpectedChecks {
    pub schema: String,
    pub ahat_expansion_truncation_8: Vec<LabeledRational>,
    pub cp2_reference_integrands: Vec<ReferenceIntegrand>,
    pub cp2_tr_mu2_reference: IntegrandData,
    pub cp2_index: Cp2IndexConstants,
    pub cp2_index_derived: Cp2IndexDerived,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LabeledRational {
    pub label: String,
    pub coefficient: [i64; 2],
}

/// A 4-form coefficient of dz1∧dz̄1∧dz2∧dz̄2 given as a polynomial in
/// u = |z1|², v = |z2|² over (1+u+v)^denominator_power.
#[derive(Clone, Debug, Deserialize)]
pub struct IntegrandData {
    /// entries [u_power, v_power, coefficient]
    pub numerator_uv: Vec<[i64; 3]>,
    pub denominator_power: u32,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceIntegrand {
    pub name: String,
    pub numerator_uv: Vec<[i64; 3]>,
    pub denominator_power: u32,
    pub expected_over_two_pi_sq: [i64; 2],
}

#[derive(Clone, Debug, Deserialize)]
pub struct Cp2IndexConstants {
    pub radial_check: [i64; 2],
    pub bracket_weights: BracketWeights,
    pub bracket: [i64; 2],
    pub jet0: [i64; 2],
    pub upsilon2: [i64; 2],
}

#[derive(Clone, Debug, Deserialize)]
pub struct BracketWeights {
    pub tr_f2_mu2: [i64; 2],
    pub tr_fmu_sq: [i64; 2],
    pub tr_f2_tr_mu2: [i64; 2],
    pub tr_fmu_wedge: [i64; 2],
}

#[derive(Clone, Debug, Deserialize)]
pub struct Cp2IndexDerived {
    pub note: String,
    pub tr_fmu_sq_integrand_uv: Vec<[i64; 3]>,
    pub tr_fmu_sq_over_two_pi_sq: [i64; 2],
    pub bracket: [i64; 2],
    pub jet0: [i64; 2],
    pub upsilon2: [i64; 2],
}

pub fn rational(pair: &[i64; 2]) -> Rat {
    Rat::new(BigInt::from(pair[0]), BigInt::from(pair[1]))
}

pub fn expected_checks() -> &'static ExpectedChecks {
    static CACHE: Lazy<ExpectedChecks> = Lazy::new(|| {
        serde_json::from_str(include_str!("../manifest/expected_checks.json"))
            .expect("bundled manifest parses")
    });
    &CACHE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parses_and_is_consistent() {
        let m = expected_checks();
        assert_eq!(m.schema, "cwindex-expected-checks/1");
        assert_eq!(m.cp2_reference_integrands.len(), 5);
        assert_eq!(m.ahat_expansion_truncation_8.len(), 4);
        for r in &m.cp2_reference_integrands {
            assert!(r.denominator_power >= 3);
            assert!(!r.numerator_uv.is_empty());
            assert_ne!(r.expected_over_two_pi_sq[1], 0);
        }
    }
}
