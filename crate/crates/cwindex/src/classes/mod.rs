//! Characteristic classes: genus series, genus forms, Chern characters,
//! Chern–Weil jet pairings, and the X-graded [·]_max machinery.

pub mod coh;
pub mod graded;
pub mod series;

use num::traits::{One, Zero};

use crate::expr::{crat_one, CRat, Rat};
use crate::forms::{Form, MatrixForm};

pub use coh::{chern_weil_eval, ClassesError, CohClass, CohRing, JetFunction};
pub use graded::{trace_word, XGradedForm, XGradedMatrix};
pub use series::TruncatedSeries;

/// Exact coefficients of h(t) = ½·ln((t/2)/sinh(t/2)) up to the given
/// truncation degree, by series division and logarithm:
/// sinh(t/2)/(t/2) = Σ_k t^{2k}/((2k+1)!·4^k).
pub fn ahat_series(truncation: usize) -> TruncatedSeries {
    let mut q = TruncatedSeries::zero("t", truncation);
    let mut coeffs = vec![];
    let mut k = 0usize;
    while 2 * k <= truncation {
        let denom = series::factorial(2 * k + 1) * Rat::from_integer(num::bigint::BigInt::from(4).pow(k as u32));
        coeffs.push((2 * k, Rat::one() / denom));
        k += 1;
    }
    q = q.add(&TruncatedSeries::from_coeffs("t", truncation, &coeffs));
    q.log().scale(&series::rat(-1, 2))
}

/// Monomial labels and exact coefficients of the expanded genus form
/// exp(Σ_k h_{2k}·Tr(F^{2k})) up to form degree `truncation`; each
/// Tr(F^{2k}) is a 4k-form, so products Π Tr(F^{2k})^{m_k} are kept
/// while Σ 4k·m_k ≤ truncation, with coefficient Π h_{2k}^{m_k}/m_k!.
pub fn ahat_expansion_coefficients(truncation: usize) -> Vec<(String, Rat)> {
    let h = ahat_series(truncation);
    // even orders 2k whose trace form fits the degree cap
    let orders: Vec<usize> = (1..)
        .map(|k| 2 * k)
        .take_while(|&d| 2 * d <= truncation)
        .collect();
    let mut out = vec![("1".to_string(), Rat::one())];
    // enumerate multi-indices m over the orders with Σ d·m_d ≤ truncation
    fn rec(
        orders: &[usize],
        idx: usize,
        remaining: usize,
        current: &mut Vec<(usize, usize)>,
        h: &TruncatedSeries,
        out: &mut Vec<(String, Rat)>,
    ) {
        if idx == orders.len() {
            if current.is_empty() {
                return;
            }
            let mut label = String::new();
            let mut coeff = Rat::one();
            for &(d, m) in current.iter() {
                if !label.is_empty() {
                    label.push('*');
                }
                if m == 1 {
                    label.push_str(&format!("Tr(F^{})", d));
                } else {
                    label.push_str(&format!("Tr(F^{})^{}", d, m));
                }
                let mut p = Rat::one();
                for _ in 0..m {
                    p = p * h.coefficient(d);
                }
                coeff = coeff * p / series::factorial(m);
            }
            if !coeff.is_zero() {
                out.push((label, coeff));
            }
            return;
        }
        let d = orders[idx];
        let mut m = 0;
        while 2 * d * m <= remaining {
            if m > 0 {
                current.push((d, m));
            }
            rec(orders, idx + 1, remaining - 2 * d * m, current, h, out);
            if m > 0 {
                current.pop();
            }
            m += 1;
        }
    }
    let mut current = vec![];
    rec(&orders, 0, truncation, &mut current, &h, &mut out);
    out
}

/// Genus form exp(Σ_{k≥1} s_k·Tr(F^k)) truncated at form degree
/// `dim_cap`. The series must have vanishing constant term.
pub fn genus_form(
    s: &TruncatedSeries,
    f: &MatrixForm,
    dim_cap: u32,
) -> Result<Form, ClassesError> {
    if !s.coefficient(0).is_zero() {
        return Err(ClassesError::NonzeroConstantTerm);
    }
    let chart = f.chart().clone();
    // Σ_k s_k Tr(F^k); Tr(F^k) has form degree ≥ 2k for 2-form entries,
    // capped at the chart dimension anyway.
    let mut arg = Form::zero(&chart);
    let mut fpow = MatrixForm::identity(&chart, f.size());
    for k in 1..=s.truncation() {
        fpow = fpow.mat_mul(f);
        let c = s.coefficient(k);
        if c.is_zero() {
            continue;
        }
        let tr = fpow.trace().truncate_degree(dim_cap);
        arg = arg.add(&tr.scale(&CRat::new(c, Rat::zero())));
    }
    arg = arg.truncate_degree(dim_cap);
    // exp of a form with no scalar part terminates at the degree cap
    let mut acc = Form::one(&chart);
    let mut pow = Form::one(&chart);
    let mut fact = crat_one();
    let mut m = 0i64;
    loop {
        m += 1;
        fact = fact * crate::expr::crat_from_int(m);
        pow = pow.wedge(&arg).truncate_degree(dim_cap);
        if pow.is_zero() {
            break;
        }
        acc = acc.add(&pow.scale(&(crat_one() / fact.clone())));
    }
    Ok(acc)
}

/// Chern character Tr(twist·exp(F)) summed over direct summands,
/// truncated at form degree `dim_cap`. Twists are character values of a
/// central element (modulus 1 for honest characters; not enforced).
pub fn chern_character(blocks: &[(MatrixForm, CRat)], dim_cap: u32) -> Form {
    assert!(!blocks.is_empty());
    let chart = blocks[0].0.chart().clone();
    let mut acc = Form::zero(&chart);
    for (f, twist) in blocks {
        assert_eq!(f.chart(), &chart, "chart mismatch");
        let mut block = Form::constant(&chart, crate::expr::crat_from_int(f.size() as i64));
        let mut pow = MatrixForm::identity(&chart, f.size());
        let mut fact = crat_one();
        let mut m = 0i64;
        loop {
            m += 1;
            fact = fact * crate::expr::crat_from_int(m);
            pow = pow.mat_mul(f);
            let tr = pow.trace().truncate_degree(dim_cap);
            if tr.is_zero() && 2 * m > dim_cap as i64 {
                break;
            }
            block = block.add(&tr.scale(&(crat_one() / fact.clone())));
        }
        acc = acc.add(&block.scale(twist));
    }
    acc
}

/// Â genus form of a curvature matrix: genus_form of [`ahat_series`].
pub fn ahat_genus_form(f: &MatrixForm, dim_cap: u32) -> Form {
    let s = ahat_series(dim_cap as usize);
    genus_form(&s, f, dim_cap).expect("ahat series has zero constant term")
}

/// Â of the equivariant curvature F(X) = F + X·μ with exact weighted
/// truncation (form degree + 2·X-power ≤ weighted_cap).
pub fn ahat_of_equivariant(
    eq: &crate::geometry::EquivariantCurvature,
    weighted_cap: u32,
) -> XGradedForm {
    assert!(
        weighted_cap <= 11,
        "weighted truncation above 11 would need traces beyond Tr(F(X)^4)"
    );
    let s = ahat_series(weighted_cap as usize);
    let fx = XGradedMatrix::from_equivariant(eq);
    let chart = eq.f.chart().clone();
    // only even trace orders appear in the series; Tr(F(X)²) and
    // Tr(F(X)⁴) are taken without forming full matrix products, which
    // is substantially cheaper on heavy rational coefficients
    let mut arg = XGradedForm::zero(&chart);
    let c2 = s.coefficient(2);
    if !c2.is_zero() {
        let t2 = fx.trace_of_product(&fx).truncate_weighted(weighted_cap);
        arg = arg.add(&t2.scale(&CRat::new(c2, Rat::zero())));
    }
    let c4 = s.coefficient(4);
    if !c4.is_zero() && weighted_cap >= 8 {
        let fx2 = fx.mul(&fx);
        let t4 = fx2.trace_of_product(&fx2).truncate_weighted(weighted_cap);
        arg = arg.add(&t4.scale(&CRat::new(c4, Rat::zero())));
    }
    arg.exp_weighted(weighted_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::crat_from_int;
    use crate::expr::Chart;
    use series::{rat, rat_int};

    /// Bernoulli numbers B_0.. via the defining recurrence.
    fn bernoulli(n: usize) -> Vec<Rat> {
        let mut b = vec![Rat::zero(); n + 1];
        b[0] = Rat::one();
        for m in 1..=n {
            // Σ_{k=0}^{m} C(m+1,k) B_k = 0
            let mut acc = Rat::zero();
            let mut binom = Rat::one(); // C(m+1, 0)
            for k in 0..m {
                acc = acc + binom.clone() * b[k].clone();
                binom = binom * rat_int((m + 1 - k) as i64) / rat_int((k + 1) as i64);
            }
            b[m] = -acc / rat_int((m + 1) as i64);
        }
        b
    }

    #[test]
    fn ahat_series_matches_bernoulli_oracle() {
        // Independent route: ln(sinh x/x) = Σ_{k≥1} 2^{2k}B_{2k}x^{2k}/(2k·(2k)!)
        // so h(t) = −½·ln(sinh(t/2)/(t/2)) has t^{2k} coefficient
        // −B_{2k}/(4k·(2k)!).
        let trunc = 12;
        let h = ahat_series(trunc);
        let b = bernoulli(trunc);
        assert_eq!(h.coefficient(0), Rat::zero());
        for k in 1..=trunc / 2 {
            let expect = -b[2 * k].clone()
                / (rat_int(4 * k as i64) * series::factorial(2 * k));
            assert_eq!(h.coefficient(2 * k), expect, "t^{} coefficient", 2 * k);
            assert_eq!(h.coefficient(2 * k - 1), Rat::zero());
        }
        // pinned leading values
        assert_eq!(h.coefficient(2), rat(-1, 48));
        assert_eq!(h.coefficient(4), rat(1, 5760));
        assert_eq!(h.coefficient(6), rat(-1, 362880));
    }

    #[test]
    fn ahat_expansion_monomial_coefficients() {
        let rows = ahat_expansion_coefficients(8);
        let get = |label: &str| {
            rows.iter()
                .find(|(l, _)| l == label)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| panic!("missing {label}"))
        };
        assert_eq!(get("1"), Rat::one());
        assert_eq!(get("Tr(F^2)"), rat(-1, 4 * 12));
        assert_eq!(get("Tr(F^4)"), rat(1, 16 * 360));
        assert_eq!(get("Tr(F^2)^2"), rat(1, 16 * 288));
        assert_eq!(rows.len(), 4);
    }

    #[test]
    fn truncation_zero_gives_unit_form() {
        let chart = Chart::new(vec!["x", "y"]).unwrap();
        let f = MatrixForm::zero(&chart, 2);
        let s = ahat_series(0);
        assert_eq!(genus_form(&s, &f, 2).unwrap(), Form::one(&chart));
    }

    #[test]
    fn genus_multiplicative_on_blocks() {
        let chart = Chart::new(vec!["x1", "y1", "x2", "y2"]).unwrap();
        let two = |a: &str, b: &str, s: i64| {
            Form::dx(&chart, a)
                .wedge(&Form::dx(&chart, b))
                .scale(&crat_from_int(s))
        };
        let f1 = MatrixForm::from_entries(
            &chart,
            2,
            vec![
                two("x1", "y1", 2),
                two("x1", "x2", 1),
                two("y1", "y2", 3),
                two("x2", "y2", -1),
            ],
        );
        let f2 = MatrixForm::from_entries(&chart, 1, vec![two("x1", "y2", 5)]);
        let s = ahat_series(8);
        let lhs = genus_form(&s, &f1.direct_sum(&f2), 4).unwrap();
        let rhs = genus_form(&s, &f1, 4)
            .unwrap()
            .wedge(&genus_form(&s, &f2, 4).unwrap())
            .truncate_degree(4);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn chern_character_flat_and_additive() {
        let chart = Chart::new(vec!["x1", "y1", "x2", "y2"]).unwrap();
        let flat = MatrixForm::zero(&chart, 3);
        let ch = chern_character(&[(flat.clone(), crat_one())], 4);
        assert_eq!(ch, Form::constant(&chart, crat_from_int(3)));

        let two = |a: &str, b: &str, s: i64| {
            Form::dx(&chart, a)
                .wedge(&Form::dx(&chart, b))
                .scale(&crat_from_int(s))
        };
        let f1 = MatrixForm::from_entries(&chart, 1, vec![two("x1", "y1", 2)]);
        let f2 = MatrixForm::from_entries(&chart, 1, vec![two("x2", "y2", -3)]);
        let t1 = crat_from_int(1);
        let t2 = crate::expr::crat_i();
        let sum = chern_character(&[(f1.direct_sum(&f2), t1.clone())], 4);
        // direct sum with equal twists = sum of blocks
        let parts = chern_character(&[(f1.clone(), t1.clone()), (f2.clone(), t1)], 4);
        assert_eq!(sum, parts);
        // twisted additivity across distinct summands
        let twisted = chern_character(&[(f1.clone(), crat_one()), (f2.clone(), t2.clone())], 4);
        let manual = chern_character(&[(f1, crat_one())], 4)
            .add(&chern_character(&[(f2, crat_one())], 4).scale(&t2));
        assert_eq!(twisted, manual);
    }
}
