//! X-graded forms: polynomials in a formal even variable X with form
//! coefficients, used for the equivariant curvature F(X) = F + X·μ and
//! the extraction [·]_max of maximal-form-degree components per X-power.
//!
//! X counts as weighted degree 2 (it substitutes a degree-2 base class),
//! so a product of k factors of F(X) is weighted-homogeneous of degree
//! 2k and weighted truncation at the fibered dimension cap is exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::expr::{crat_to_c64, C64, CRat, Chart, Expr};
use crate::forms::{Form, MatrixForm};
use crate::geometry::EquivariantCurvature;

#[derive(Clone, Debug, PartialEq)]
pub struct XGradedForm {
    chart: Arc<Chart>,
    terms: BTreeMap<u32, Form>,
}

impl XGradedForm {
    pub fn zero(chart: &Arc<Chart>) -> XGradedForm {
        XGradedForm {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_form(xpow: u32, f: Form) -> XGradedForm {
        let chart = f.chart().clone();
        let mut out = XGradedForm::zero(&chart);
        out.insert(xpow, f);
        out
    }

    pub fn one(chart: &Arc<Chart>) -> XGradedForm {
        XGradedForm::from_form(0, Form::one(chart))
    }

    fn insert(&mut self, xpow: u32, f: Form) {
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(xpow) {
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

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Form)> {
        self.terms.iter().map(|(&k, f)| (k, f))
    }

    pub fn component(&self, xpow: u32) -> Form {
        self.terms
            .get(&xpow)
            .cloned()
            .unwrap_or_else(|| Form::zero(&self.chart))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &XGradedForm) -> XGradedForm {
        let mut out = self.clone();
        for (&k, f) in &other.terms {
            out.insert(k, f.clone());
        }
        out
    }

    pub fn scale(&self, c: &CRat) -> XGradedForm {
        let mut out = XGradedForm::zero(&self.chart);
        for (&k, f) in &self.terms {
            out.insert(k, f.scale(c));
        }
        out
    }

    pub fn mul(&self, other: &XGradedForm) -> XGradedForm {
        let mut out = XGradedForm::zero(&self.chart);
        for (&k1, f1) in &self.terms {
            for (&k2, f2) in &other.terms {
                out.insert(k1 + k2, f1.wedge(f2));
            }
        }
        out
    }

    /// Product truncated at weighted degree `cap`, pruning component
    /// pairs (and form-term pairs within them) whose weighted degree
    /// already exceeds the cap before their coefficients are multiplied.
    pub fn mul_weighted(&self, other: &XGradedForm, cap: u32) -> XGradedForm {
        let mut out = XGradedForm::zero(&self.chart);
        for (&k1, f1) in &self.terms {
            for (&k2, f2) in &other.terms {
                let k = k1 + k2;
                if 2 * k > cap {
                    continue;
                }
                out.insert(k, f1.wedge_truncated(f2, cap - 2 * k));
            }
        }
        out
    }

    /// Drops every term whose weighted degree (form degree + 2·X-power)
    /// exceeds the cap; exact because the dropped parts substitute to
    /// classes above the fibered dimension.
    pub fn truncate_weighted(&self, cap: u32) -> XGradedForm {
        let mut out = XGradedForm::zero(&self.chart);
        for (&k, f) in &self.terms {
            if 2 * k > cap {
                continue;
            }
            let mut kept = Form::zero(&self.chart);
            for (m, e) in f.terms() {
                if m.count_ones() + 2 * k <= cap {
                    let idx: Vec<usize> = (0..self.chart.dimension())
                        .filter(|i| m & (1 << i) != 0)
                        .collect();
                    kept = kept.add(&Form::term(&self.chart, &idx, e.clone()));
                }
            }
            out.insert(k, kept);
        }
        out
    }

    /// exp with weighted truncation; the degree-0-in-everything part of
    /// `self` must vanish so the sum terminates.
    pub fn exp_weighted(&self, cap: u32) -> XGradedForm {
        assert!(
            self.component(0).coefficient(0).is_zero(),
            "exp requires vanishing scalar part"
        );
        let mut acc = XGradedForm::one(&self.chart);
        let mut pow = XGradedForm::one(&self.chart);
        let mut fact = crate::expr::crat_one();
        let mut k = 0u64;
        loop {
            k += 1;
            fact = fact * crate::expr::crat_from_int(k as i64);
            pow = pow.mul_weighted(self, cap);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow.scale(&(crate::expr::crat_one() / fact.clone())));
        }
        acc.truncate_weighted(cap)
    }

    /// [·]_max: terms whose form degree equals `top_degree`, grouped by
    /// X-power.
    pub fn max_degree_component(&self, top_degree: u32) -> BTreeMap<u32, Form> {
        let mut out = BTreeMap::new();
        for (&k, f) in &self.terms {
            let mut kept = Form::zero(&self.chart);
            for (m, e) in f.terms() {
                if m.count_ones() == top_degree {
                    let idx: Vec<usize> = (0..self.chart.dimension())
                        .filter(|i| m & (1 << i) != 0)
                        .collect();
                    kept = kept.add(&Form::term(&self.chart, &idx, e.clone()));
                }
            }
            if !kept.is_zero() {
                out.insert(k, kept);
            }
        }
        out
    }

    /// Numeric substitution X ↦ x, then evaluation of the top-degree
    /// coefficient at a point (used by the reassembly oracles).
    pub fn substitute_x(&self, x: &CRat) -> Form {
        let mut acc = Form::zero(&self.chart);
        for (&k, f) in &self.terms {
            let mut c = crate::expr::crat_one();
            for _ in 0..k {
                c = c * x.clone();
            }
            acc = acc.add(&f.scale(&c));
        }
        acc
    }

    pub fn eval_component(
        &self,
        xpow: u32,
        mask: u32,
        point: &std::collections::HashMap<String, C64>,
    ) -> Result<C64, crate::expr::ExprError> {
        match self.terms.get(&xpow) {
            None => Ok(C64::new(0.0, 0.0)),
            Some(f) => f.coefficient(mask).eval(point),
        }
    }
}

#[derive(Clone, Debug)]
pub struct XGradedMatrix {
    chart: Arc<Chart>,
    size: usize,
    terms: BTreeMap<u32, MatrixForm>,
}

impl XGradedMatrix {
    pub fn from_equivariant(eq: &EquivariantCurvature) -> XGradedMatrix {
        let chart = eq.f.chart().clone();
        let size = eq.f.size();
        let mut terms = BTreeMap::new();
        terms.insert(0, eq.f.clone());
        terms.insert(1, eq.mu.clone());
        XGradedMatrix { chart, size, terms }
    }

    pub fn mul(&self, other: &XGradedMatrix) -> XGradedMatrix {
        assert_eq!(self.size, other.size);
        let mut terms: BTreeMap<u32, MatrixForm> = BTreeMap::new();
        for (&k1, m1) in &self.terms {
            for (&k2, m2) in &other.terms {
                let prod = m1.mat_mul(m2);
                terms
                    .entry(k1 + k2)
                    .and_modify(|m| *m = m.add(&prod))
                    .or_insert(prod);
            }
        }
        XGradedMatrix {
            chart: self.chart.clone(),
            size: self.size,
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> XGradedMatrix {
        assert!(e >= 1);
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> XGradedForm {
        let mut out = XGradedForm::zero(&self.chart);
        for (&k, m) in &self.terms {
            out.insert(k, m.trace());
        }
        out
    }

    /// Tr(self·other) by X-graded convolution of entrywise trace
    /// products, skipping the off-diagonal entries of the product.
    pub fn trace_of_product(&self, other: &XGradedMatrix) -> XGradedForm {
        assert_eq!(self.size, other.size);
        let mut out = XGradedForm::zero(&self.chart);
        for (&k1, m1) in &self.terms {
            for (&k2, m2) in &other.terms {
                out.insert(k1 + k2, m1.trace_of_product(m2));
            }
        }
        out
    }
}

/// Tr(F(X)^{p₁})·…·Tr(F(X)^{p_r}) as an X-graded form.
pub fn trace_word(eq: &EquivariantCurvature, powers: &[u32]) -> XGradedForm {
    let fx = XGradedMatrix::from_equivariant(eq);
    let mut acc = XGradedForm::one(&eq.f.chart().clone());
    for &p in powers {
        acc = acc.mul(&fx.pow(p).trace());
    }
    acc
}

pub fn crat_to_c64_pub(c: &CRat) -> C64 {
    crat_to_c64(c)
}

/// Convenience: the scalar (degree-0, X-power 0) part as an expression.
pub fn scalar_part(xg: &XGradedForm) -> Expr {
    xg.component(0).coefficient(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{crat_from_int, Chart};
    use crate::forms::Form;

    fn toy_equivariant() -> EquivariantCurvature {
        // 2x2 on a 4-dim chart: F entries 2-forms, μ entries functions.
        let c = Chart::new(vec!["x1", "y1", "x2", "y2"]).unwrap();
        let two = |a: &str, b: &str, s: i64| {
            Form::dx(&c, a).wedge(&Form::dx(&c, b)).scale(&crat_from_int(s))
        };
        let f = MatrixForm::from_entries(
            &c,
            2,
            vec![
                two("x1", "y1", 1),
                two("x1", "x2", 2),
                two("y1", "y2", -1),
                two("x2", "y2", 3),
            ],
        );
        let mu = MatrixForm::from_entries(
            &c,
            2,
            vec![
                Form::constant(&c, crat_from_int(0)),
                Form::constant(&c, crat_from_int(1)),
                Form::constant(&c, crat_from_int(-1)),
                Form::constant(&c, crat_from_int(0)),
            ],
        );
        EquivariantCurvature::new(f, mu)
    }

    #[test]
    fn trace_square_x0_is_tr_f2() {
        let eq = toy_equivariant();
        let tw = trace_word(&eq, &[2]);
        let max = tw.max_degree_component(4);
        let tr_f2 = eq.f.mat_mul(&eq.f).trace();
        assert_eq!(max.get(&0), Some(&tr_f2));
    }

    #[test]
    fn x_graded_reassembly_matches_direct_expansion() {
        // Tr((F+xμ)⁴) at several numeric x equals the graded reassembly.
        let eq = toy_equivariant();
        let tw = trace_word(&eq, &[4]);
        for x in [-3i64, -1, 0, 2, 5] {
            let xc = crat_from_int(x);
            let direct = eq
                .f
                .add(&eq.mu.scale(&xc))
                .pow(4)
                .trace();
            assert_eq!(tw.substitute_x(&xc), direct, "x = {x}");
        }
    }

    #[test]
    fn weighted_truncation_is_exact_on_products() {
        let eq = toy_equivariant();
        let t2 = trace_word(&eq, &[2]);
        let full = t2.mul(&t2);
        // every term of Tr(F(X)²)² has weighted degree exactly 8
        assert_eq!(full.truncate_weighted(8), full);
        assert!(full.truncate_weighted(7).is_zero());
    }
}
