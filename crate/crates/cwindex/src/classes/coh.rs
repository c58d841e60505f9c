//! Truncated even cohomology ring of the base: polynomials in named
//! degree-2 generators with per-generator nilpotency, plus test-function
//! jets and the Chern–Weil pairing ⟨e^Θ∗δ₀, φ⟩.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::traits::Zero;
use thiserror::Error;

use crate::expr::{crat_one, crat_to_c64, crat_zero, CRat, C64};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ClassesError {
    #[error("missing jet order {0} below the nilpotency cutoff {1}")]
    MissingJetOrder(u32, u32),
    #[error("series must have zero constant term (got nonzero s₀)")]
    NonzeroConstantTerm,
}

/// Ring descriptor: generator names with nilpotency exponents
/// (generator^exponent = 0; e.g. Θ on S² has exponent 2, Υ on CP² has 3).
#[derive(Debug, PartialEq, Eq)]
pub struct CohRing {
    generators: Vec<(String, u32)>,
}

impl CohRing {
    pub fn new(generators: Vec<(&str, u32)>) -> Arc<CohRing> {
        for (_, n) in &generators {
            assert!(*n >= 1, "nilpotency exponent must be positive");
        }
        Arc::new(CohRing {
            generators: generators
                .into_iter()
                .map(|(s, n)| (s.to_string(), n))
                .collect(),
        })
    }

    pub fn s2_theta() -> Arc<CohRing> {
        CohRing::new(vec![("Theta", 2)])
    }

    pub fn cp2_upsilon() -> Arc<CohRing> {
        CohRing::new(vec![("Upsilon", 3)])
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.generators[i].0
    }

    pub fn nilpotency(&self, i: usize) -> u32 {
        self.generators[i].1
    }
}

#[derive(Clone, Debug)]
pub struct CohClass {
    ring: Arc<CohRing>,
    terms: BTreeMap<Vec<u32>, CRat>,
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl CohClass {
    pub fn zero(ring: &Arc<CohRing>) -> CohClass {
        CohClass {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(ring: &Arc<CohRing>, c: CRat) -> CohClass {
        let mut out = CohClass::zero(ring);
        out.insert(vec![0; ring.generator_count()], c);
        out
    }

    pub fn one(ring: &Arc<CohRing>) -> CohClass {
        CohClass::scalar(ring, crat_one())
    }

    pub fn generator(ring: &Arc<CohRing>, i: usize) -> CohClass {
        let mut exps = vec![0; ring.generator_count()];
        exps[i] = 1;
        let mut out = CohClass::zero(ring);
        out.insert(exps, crat_one());
        out
    }

    pub fn ring(&self) -> &Arc<CohRing> {
        &self.ring
    }

    fn insert(&mut self, exps: Vec<u32>, c: CRat) {
        if c.is_zero() {
            return;
        }
        for (i, &e) in exps.iter().enumerate() {
            if e >= self.ring.nilpotency(i) {
                return; // nilpotent overflow is exactly zero in the ring
            }
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &CRat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> CRat {
        self.terms.get(exps).cloned().unwrap_or_else(crat_zero)
    }

    pub fn coefficient_c64(&self, exps: &[u32]) -> C64 {
        crat_to_c64(&self.coefficient(exps))
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> CohClass {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &CohClass) -> CohClass {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CRat) -> CohClass {
        let mut out = CohClass::zero(&self.ring);
        for (e, a) in &self.terms {
            out.insert(e.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &CohClass) -> CohClass {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut out = CohClass::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exps, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> CohClass {
        let mut acc = CohClass::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Smallest k with self^k = 0 in the ring (∞-free: bounded by the
    /// sum of generator nilpotencies). Returns None for units.
    pub fn nilpotency_order(&self) -> Option<u32> {
        if !self.coefficient(&vec![0; self.ring.generator_count()]).is_zero() {
            return None;
        }
        let bound: u32 = (0..self.ring.generator_count())
            .map(|i| self.ring.nilpotency(i) - 1)
            .sum::<u32>()
            + 1;
        let mut p = CohClass::one(&self.ring);
        for k in 0..=bound {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        Some(bound + 1)
    }

    /// exp of a nilpotent class.
    pub fn exp(&self) -> CohClass {
        let order = self
            .nilpotency_order()
            .expect("exp requires a nilpotent class");
        let mut acc = CohClass::one(&self.ring);
        let mut pow = CohClass::one(&self.ring);
        let mut fact = crat_one();
        for k in 1..order {
            pow = pow.mul(self);
            fact = fact * crate::expr::crat_from_int(k as i64);
            acc = acc.add(&pow.scale(&(crat_one() / fact.clone())));
        }
        acc
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ring.generator_name(i).to_string()
                    } else {
                        format!("{}^{}", self.ring.generator_name(i), e)
                    }
                })
                .collect();
            let cs = format!(
                "{}",
                crate::expr::Expr::constant(c.clone())
            );
            if mono.is_empty() {
                write!(f, "{}", cs)?;
            } else {
                write!(f, "({})*{}", cs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Test function represented by finitely many derivative values at a
/// group element.
#[derive(Clone, Debug, PartialEq)]
pub struct JetFunction {
    base_point: String,
    jets: BTreeMap<u32, CRat>,
}

impl JetFunction {
    pub fn new(base_point: &str, jets: Vec<(u32, CRat)>) -> JetFunction {
        let jets: BTreeMap<u32, CRat> = jets.into_iter().collect();
        assert!(jets.contains_key(&0), "order-0 jet must be present");
        JetFunction {
            base_point: base_point.to_string(),
            jets,
        }
    }

    /// Jets from double values, embedded exactly into the rationals.
    pub fn from_f64(base_point: &str, values: &[f64]) -> JetFunction {
        let jets = values
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let r = crate::expr::rat_from_f64(v).expect("finite jet value");
                (k as u32, CRat::new(r, num::traits::Zero::zero()))
            })
            .collect();
        JetFunction {
            base_point: base_point.to_string(),
            jets,
        }
    }

    /// φ ≡ 1 near the base point: jets (1, 0, 0, …).
    pub fn one_near(base_point: &str, orders: u32) -> JetFunction {
        let mut jets = vec![(0, crat_one())];
        for k in 1..orders {
            jets.push((k, crat_zero()));
        }
        JetFunction::new(base_point, jets)
    }

    pub fn base_point(&self) -> &str {
        &self.base_point
    }

    pub fn jet(&self, order: u32) -> Option<&CRat> {
        self.jets.get(&order)
    }

    pub fn max_order(&self) -> u32 {
        *self.jets.keys().next_back().unwrap()
    }
}

/// ⟨e^Θ∗δ₀, φ⟩ = Σ_k φ^{(k)}(0)/k!·Θ^k within the truncated ring.
pub fn chern_weil_eval(phi: &JetFunction, theta: &CohClass) -> Result<CohClass, ClassesError> {
    let cutoff = theta
        .nilpotency_order()
        .expect("curvature class must be nilpotent");
    let mut acc = CohClass::zero(theta.ring());
    let mut pow = CohClass::one(theta.ring());
    let mut fact = crat_one();
    for k in 0..cutoff {
        if k > 0 {
            pow = pow.mul(theta);
            fact = fact * crate::expr::crat_from_int(k as i64);
        }
        let jet = phi
            .jet(k)
            .ok_or(ClassesError::MissingJetOrder(k, cutoff))?;
        acc = acc.add(&pow.scale(&(jet.clone() / fact.clone())));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{crat_from_int, crat_i};

    #[test]
    fn nilpotency_enforced() {
        let ring = CohRing::s2_theta();
        let theta = CohClass::generator(&ring, 0);
        assert!(theta.mul(&theta).is_zero());
        let cp2 = CohRing::cp2_upsilon();
        let u = CohClass::generator(&cp2, 0);
        assert!(!u.pow(2).is_zero());
        assert!(u.pow(3).is_zero());
    }

    #[test]
    fn constant_one_jet_gives_unit() {
        let ring = CohRing::s2_theta();
        let theta = CohClass::generator(&ring, 0);
        let phi = JetFunction::one_near("Id", 2);
        assert_eq!(chern_weil_eval(&phi, &theta).unwrap(), CohClass::one(&ring));
    }

    #[test]
    fn linear_jet_gives_theta() {
        let ring = CohRing::s2_theta();
        let theta = CohClass::generator(&ring, 0);
        let phi = JetFunction::new("Id", vec![(0, crat_zero()), (1, crat_one())]);
        assert_eq!(chern_weil_eval(&phi, &theta).unwrap(), theta);
    }

    #[test]
    fn exp_ix_two_term_taylor() {
        // φ(X) = e^{iX}: jets (1, i); on Θ²=0 the pairing is 1 + iΘ.
        let ring = CohRing::s2_theta();
        let theta = CohClass::generator(&ring, 0);
        let phi = JetFunction::new("Id", vec![(0, crat_one()), (1, crat_i())]);
        let got = chern_weil_eval(&phi, &theta).unwrap();
        let expect = CohClass::one(&ring).add(&theta.scale(&crat_i()));
        assert_eq!(got, expect);
    }

    #[test]
    fn missing_jet_order_errors() {
        let ring = CohRing::cp2_upsilon();
        let u = CohClass::generator(&ring, 0);
        let phi = JetFunction::new("Id", vec![(0, crat_one())]);
        assert_eq!(
            chern_weil_eval(&phi, &u),
            Err(ClassesError::MissingJetOrder(1, 3))
        );
    }

    #[test]
    fn exp_matches_manual() {
        let ring = CohRing::cp2_upsilon();
        let u = CohClass::generator(&ring, 0).scale(&crat_from_int(2));
        let e = u.exp();
        // 1 + 2Υ + 2Υ²
        let expect = CohClass::one(&ring)
            .add(&CohClass::generator(&ring, 0).scale(&crat_from_int(2)))
            .add(&CohClass::generator(&ring, 0).pow(2).scale(&crat_from_int(2)));
        assert_eq!(e, expect);
    }
}
