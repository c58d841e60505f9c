//! One-variable formal power series with exact rational coefficients,
//! truncated at a fixed degree.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::expr::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    var: String,
    /// coeffs[k] is the coefficient of var^k; len = truncation + 1.
    coeffs: Vec<Rat>,
}

impl TruncatedSeries {
    pub fn zero(var: &str, truncation: usize) -> TruncatedSeries {
        TruncatedSeries {
            var: var.to_string(),
            coeffs: vec![Rat::zero(); truncation + 1],
        }
    }

    pub fn one(var: &str, truncation: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(var, truncation);
        s.coeffs[0] = Rat::one();
        s
    }

    pub fn from_coeffs(var: &str, truncation: usize, coeffs: &[(usize, Rat)]) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(var, truncation);
        for (k, c) in coeffs {
            if *k <= truncation {
                s.coeffs[*k] = c.clone();
            }
        }
        s
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        TruncatedSeries {
            var: self.var.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> TruncatedSeries {
        TruncatedSeries {
            var: self.var.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        let n = self.coeffs.len();
        let mut coeffs = vec![Rat::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        TruncatedSeries {
            var: self.var.clone(),
            coeffs,
        }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> TruncatedSeries {
        assert!(!self.coeffs[0].is_zero(), "constant term must be invertible");
        let n = self.coeffs.len();
        let c0_inv = Rat::one() / self.coeffs[0].clone();
        let mut inv = vec![Rat::zero(); n];
        inv[0] = c0_inv.clone();
        for k in 1..n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                acc = &acc + &self.coeffs[j] * &inv[k - j];
            }
            inv[k] = -acc * &c0_inv;
        }
        TruncatedSeries {
            var: self.var.clone(),
            coeffs: inv,
        }
    }

    pub fn div(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.mul(&other.inverse())
    }

    /// log of a series with constant term 1:
    /// log(1+u) = Σ (−1)^{m+1} u^m / m, truncated.
    pub fn log(&self) -> TruncatedSeries {
        assert!(
            self.coeffs[0].is_one(),
            "log requires constant term exactly 1"
        );
        let n = self.coeffs.len();
        let mut u = self.clone();
        u.coeffs[0] = Rat::zero();
        let mut acc = TruncatedSeries::zero(&self.var, n - 1);
        let mut upow = TruncatedSeries::one(&self.var, n - 1);
        for m in 1..n {
            upow = upow.mul(&u);
            let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
            let c = sign / Rat::from_integer(BigInt::from(m));
            acc = acc.add(&upow.scale(&c));
        }
        acc
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> TruncatedSeries {
        assert!(self.coeffs[0].is_zero(), "exp requires zero constant term");
        let n = self.coeffs.len();
        let mut acc = TruncatedSeries::one(&self.var, n - 1);
        let mut pow = TruncatedSeries::one(&self.var, n - 1);
        let mut fact = Rat::one();
        for m in 1..n {
            pow = pow.mul(self);
            fact = fact * Rat::from_integer(BigInt::from(m));
            acc = acc.add(&pow.scale(&(Rat::one() / fact.clone())));
        }
        acc
    }

    /// Substitution var ↦ c·var.
    pub fn scale_variable(&self, c: &Rat) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut p = Rat::one();
        for a in &self.coeffs {
            coeffs.push(a * &p);
            p = &p * c;
        }
        TruncatedSeries {
            var: self.var.clone(),
            coeffs,
        }
    }
}

pub fn factorial(n: usize) -> Rat {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    Rat::from_integer(f)
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_inverse() {
        // 1/(1 - t) = 1 + t + t² + …
        let s = TruncatedSeries::from_coeffs("t", 5, &[(0, rat_int(1)), (1, rat_int(-1))]);
        let inv = s.inverse();
        for k in 0..=5 {
            assert_eq!(inv.coefficient(k), rat_int(1));
        }
    }

    #[test]
    fn log_exp_roundtrip() {
        let s = TruncatedSeries::from_coeffs(
            "t",
            6,
            &[(1, rat(1, 2)), (2, rat(-1, 3)), (4, rat_int(5))],
        );
        assert_eq!(s.exp().log(), s);
    }

    #[test]
    fn exp_of_log_of_one_plus_t() {
        let s = TruncatedSeries::from_coeffs("t", 6, &[(0, rat_int(1)), (1, rat_int(1))]);
        assert_eq!(s.log().exp(), s);
    }
}
