//! Exterior algebra on a chart: differential forms, matrix-valued forms
//! and chart maps with pullback.
//!
//! A form is stored as a map from strictly increasing coordinate index
//! sets (bitmasks over the chart coordinates) to normalized coefficient
//! expressions. Terms whose degree would exceed the chart dimension are
//! exact zeros and never stored. Complex-coordinate sugar (`dz`, `dz̄`)
//! expands eagerly into the real coordinates.

pub mod circle;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::expr::{crat_i, C64, CRat, Chart, Expr, ExprError};

/// Sign picked up when merging the index set `a` past `b`:
/// (-1)^{#\{(i,j) : i ∈ a, j ∈ b, i > j\}}.
fn merge_sign(a: u32, b: u32) -> i32 {
    let mut sign = 1;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // Bits of `a` strictly above j must move past dx_j.
        if (a >> (j + 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        rest &= rest - 1;
    }
    sign
}

#[derive(Clone, Debug)]
pub struct Form {
    chart: Arc<Chart>,
    terms: BTreeMap<u32, Expr>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.terms == other.terms
    }
}

impl Form {
    pub fn zero(chart: &Arc<Chart>) -> Form {
        Form {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 form from a scalar expression.
    pub fn from_expr(chart: &Arc<Chart>, e: Expr) -> Form {
        let mut f = Form::zero(chart);
        f.insert(0, e);
        f
    }

    pub fn constant(chart: &Arc<Chart>, c: CRat) -> Form {
        Form::from_expr(chart, Expr::constant(c))
    }

    pub fn one(chart: &Arc<Chart>) -> Form {
        Form::from_expr(chart, Expr::one())
    }

    /// The coordinate differential `d(name)`.
    pub fn dx(chart: &Arc<Chart>, name: &str) -> Form {
        let i = chart
            .index_of(name)
            .unwrap_or_else(|| panic!("coordinate `{}` not on chart", name));
        let mut f = Form::zero(chart);
        f.insert(1 << i, Expr::one());
        f
    }

    /// Single term coefficient·dx_{i1}∧…∧dx_{ik} from a sorted index list.
    pub fn term(chart: &Arc<Chart>, indices: &[usize], coeff: Expr) -> Form {
        let mut mask = 0u32;
        for &i in indices {
            assert!(i < chart.dimension(), "index beyond chart dimension");
            assert!(mask & (1 << i) == 0, "repeated index in form term");
            mask |= 1 << i;
        }
        let mut f = Form::zero(chart);
        f.insert(mask, coeff);
        f
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Expr)> {
        self.terms.iter().map(|(&m, e)| (m, e))
    }

    pub fn coefficient(&self, mask: u32) -> Expr {
        self.terms.get(&mask).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal term degree; 0 for the zero form.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Drops every term of form degree above `cap`.
    pub fn truncate_degree(&self, cap: u32) -> Form {
        let mut out = Form::zero(&self.chart);
        for (&m, e) in &self.terms {
            if m.count_ones() <= cap {
                out.insert(m, e.clone());
            }
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.count_ones());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn insert(&mut self, mask: u32, e: Expr) {
        if e.is_zero() || mask.count_ones() > self.chart.dimension() as u32 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mask) {
            Entry::Vacant(v) => {
                v.insert(e);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&e);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut out = self.clone();
        for (&m, e) in &other.terms {
            out.insert(m, e.clone());
        }
        out
    }

    pub fn neg(&self) -> Form {
        let mut out = self.clone();
        for e in out.terms.values_mut() {
            *e = e.neg();
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CRat) -> Form {
        let mut out = Form::zero(&self.chart);
        for (&m, e) in &self.terms {
            out.insert(m, e.scale(c));
        }
        out
    }

    pub fn scale_expr(&self, s: &Expr) -> Form {
        let mut out = Form::zero(&self.chart);
        for (&m, e) in &self.terms {
            out.insert(m, e.mul(s));
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut out = Form::zero(&self.chart);
        for (&ma, ea) in &self.terms {
            for (&mb, eb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(ma, mb);
                let mut c = ea.mul(eb);
                if sign < 0 {
                    c = c.neg();
                }
                out.insert(ma | mb, c);
            }
        }
        out
    }

    /// Wedge product keeping only terms of form degree ≤ `deg_cap`,
    /// skipping the (potentially expensive) coefficient products of
    /// terms that would be dropped anyway.
    pub fn wedge_truncated(&self, other: &Form, deg_cap: u32) -> Form {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut out = Form::zero(&self.chart);
        for (&ma, ea) in &self.terms {
            for (&mb, eb) in &other.terms {
                if ma & mb != 0 || (ma | mb).count_ones() > deg_cap {
                    continue;
                }
                let sign = merge_sign(ma, mb);
                let mut c = ea.mul(eb);
                if sign < 0 {
                    c = c.neg();
                }
                out.insert(ma | mb, c);
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(&self.chart);
        let coords = self.chart.coords();
        for (&m, e) in &self.terms {
            for (i, name) in coords.iter().enumerate() {
                let bit = 1u32 << i;
                if m & bit != 0 {
                    continue;
                }
                let de = e.diff(name);
                if de.is_zero() {
                    continue;
                }
                // dx_i moves past the bits of m below i.
                let sign = if (m & (bit - 1)).count_ones() % 2 == 1 {
                    -1
                } else {
                    1
                };
                out.insert(m | bit, if sign < 0 { de.neg() } else { de });
            }
        }
        out
    }

    /// Numeric value of every term's coefficient at a point.
    pub fn eval(&self, point: &HashMap<String, C64>) -> Result<BTreeMap<u32, C64>, ExprError> {
        let mut out = BTreeMap::new();
        for (&m, e) in &self.terms {
            out.insert(m, e.eval(point)?);
        }
        Ok(out)
    }

    /// The coefficient of the full top-degree basis monomial in
    /// declaration order, adjusted by the chart's orientation sign.
    pub fn top_coefficient(&self) -> Expr {
        let dim = self.chart.dimension();
        let mask = if dim == 32 { u32::MAX } else { (1u32 << dim) - 1 };
        let c = self.coefficient(mask);
        if self.chart.orientation_sign() < 0 {
            c.neg()
        } else {
            c
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let coords = self.chart.coords();
        let mut first = true;
        for (&m, e) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m == 0 {
                write!(f, "({})", e)?;
            } else {
                let basis: Vec<String> = (0..coords.len())
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| format!("d{}", coords[i]))
                    .collect();
                write!(f, "({}) {}", e, basis.join("^"))?;
            }
        }
        Ok(())
    }
}

/// Square matrix of forms on a common chart.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixForm {
    size: usize,
    chart: Arc<Chart>,
    entries: Vec<Form>, // row-major
}

impl MatrixForm {
    pub fn zero(chart: &Arc<Chart>, size: usize) -> MatrixForm {
        MatrixForm {
            size,
            chart: chart.clone(),
            entries: vec![Form::zero(chart); size * size],
        }
    }

    pub fn identity(chart: &Arc<Chart>, size: usize) -> MatrixForm {
        let mut m = MatrixForm::zero(chart, size);
        for i in 0..size {
            *m.at_mut(i, i) = Form::one(chart);
        }
        m
    }

    pub fn from_entries(chart: &Arc<Chart>, size: usize, entries: Vec<Form>) -> MatrixForm {
        assert_eq!(entries.len(), size * size);
        for e in &entries {
            assert_eq!(e.chart(), chart, "chart mismatch");
        }
        MatrixForm {
            size,
            chart: chart.clone(),
            entries,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn at(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.size + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Form {
        let n = self.size;
        &mut self.entries[i * n + j]
    }

    pub fn add(&self, other: &MatrixForm) -> MatrixForm {
        assert_eq!(self.size, other.size, "size mismatch");
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b);
        }
        out
    }

    pub fn neg(&self) -> MatrixForm {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn sub(&self, other: &MatrixForm) -> MatrixForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CRat) -> MatrixForm {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.scale(c);
        }
        out
    }

    pub fn scale_expr(&self, s: &Expr) -> MatrixForm {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.scale_expr(s);
        }
        out
    }

    /// Matrix product with entrywise wedge.
    pub fn mat_mul(&self, other: &MatrixForm) -> MatrixForm {
        assert_eq!(self.size, other.size, "size mismatch");
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let n = self.size;
        let mut out = MatrixForm::zero(&self.chart, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Form::zero(&self.chart);
                for k in 0..n {
                    acc = acc.add(&self.at(i, k).wedge(other.at(k, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> Form {
        let mut acc = Form::zero(&self.chart);
        for i in 0..self.size {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    /// Tr(self·other) without forming the off-diagonal entries of the
    /// product; much cheaper than mat_mul().trace() for matrices with
    /// expensive rational coefficients.
    pub fn trace_of_product(&self, other: &MatrixForm) -> Form {
        assert_eq!(self.size, other.size, "size mismatch");
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut acc = Form::zero(&self.chart);
        for i in 0..self.size {
            for k in 0..self.size {
                acc = acc.add(&self.at(i, k).wedge(other.at(k, i)));
            }
        }
        acc
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> MatrixForm {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.d();
        }
        out
    }

    pub fn transpose(&self) -> MatrixForm {
        let n = self.size;
        let mut out = MatrixForm::zero(&self.chart, n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(i, j) = self.at(j, i).clone();
            }
        }
        out
    }

    /// Block direct sum.
    pub fn direct_sum(&self, other: &MatrixForm) -> MatrixForm {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let n = self.size + other.size;
        let mut out = MatrixForm::zero(&self.chart, n);
        for i in 0..self.size {
            for j in 0..self.size {
                *out.at_mut(i, j) = self.at(i, j).clone();
            }
        }
        for i in 0..other.size {
            for j in 0..other.size {
                *out.at_mut(self.size + i, self.size + j) = other.at(i, j).clone();
            }
        }
        out
    }

    /// Conjugation P⁻¹·M·P by a constant basis-change matrix.
    pub fn conjugate_basis(&self, p: &MatrixForm, p_inv: &MatrixForm) -> MatrixForm {
        p_inv.mat_mul(self).mat_mul(p)
    }

    pub fn pow(&self, e: u32) -> MatrixForm {
        assert!(e >= 1);
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mat_mul(self);
        }
        acc
    }
}

/// Smooth map between charts given by one component expression (in the
/// source coordinates) per target coordinate.
#[derive(Clone, Debug)]
pub struct ChartMap {
    source: Arc<Chart>,
    target: Arc<Chart>,
    components: Vec<Expr>,
}

impl ChartMap {
    pub fn new(
        source: &Arc<Chart>,
        target: &Arc<Chart>,
        components: Vec<Expr>,
    ) -> Result<ChartMap, ExprError> {
        assert_eq!(
            components.len(),
            target.dimension(),
            "one component per target coordinate"
        );
        for c in &components {
            for v in c.vars() {
                if source.index_of(v).is_none() {
                    return Err(ExprError::UnboundCoordinate(v.clone()));
                }
            }
        }
        Ok(ChartMap {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(chart: &Arc<Chart>) -> ChartMap {
        let components = chart.coords().iter().map(|c| Expr::coord(c)).collect();
        ChartMap {
            source: chart.clone(),
            target: chart.clone(),
            components,
        }
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    fn bindings(&self) -> HashMap<String, Expr> {
        self.target
            .coords()
            .iter()
            .cloned()
            .zip(self.components.iter().cloned())
            .collect()
    }

    /// Pullback of a form on the target chart.
    pub fn pullback(&self, a: &Form) -> Result<Form, ExprError> {
        assert_eq!(a.chart(), &self.target, "form not on target chart");
        let bind = self.bindings();
        // d(component_i) as 1-forms on the source chart.
        let dcomp: Vec<Form> = self
            .components
            .iter()
            .map(|c| Form::from_expr(&self.source, c.clone()).d())
            .collect();
        let mut out = Form::zero(&self.source);
        for (m, e) in a.terms() {
            let mut t = Form::from_expr(&self.source, e.substitute(&bind)?);
            for i in 0..self.target.dimension() {
                if m & (1 << i) != 0 {
                    t = t.wedge(&dcomp[i]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &ChartMap) -> Result<ChartMap, ExprError> {
        assert_eq!(other.target, self.source, "chart mismatch in composition");
        let bind = other.bindings();
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(&bind))
            .collect::<Result<Vec<_>, _>>()?;
        ChartMap::new(&other.source, &self.target, components)
    }
}

/// Complex-coordinate sugar. `z = x + iy` expands eagerly into the real
/// coordinates; `dz = dx + i·dy`, `dz̄ = dx − i·dy`.
pub fn z_expr(x: &str, y: &str) -> Expr {
    Expr::coord(x).add(&Expr::coord(y).scale(&crat_i()))
}

pub fn zbar_expr(x: &str, y: &str) -> Expr {
    Expr::coord(x).sub(&Expr::coord(y).scale(&crat_i()))
}

pub fn dz(chart: &Arc<Chart>, x: &str, y: &str) -> Form {
    Form::dx(chart, x).add(&Form::dx(chart, y).scale(&crat_i()))
}

pub fn dzbar(chart: &Arc<Chart>, x: &str, y: &str) -> Form {
    Form::dx(chart, x).sub(&Form::dx(chart, y).scale(&crat_i()))
}

/// |z|² = x² + y² as an expression.
pub fn abs2_expr(x: &str, y: &str) -> Expr {
    let xe = Expr::coord(x);
    let ye = Expr::coord(y);
    xe.mul(&xe).add(&ye.mul(&ye))
}

pub use crate::expr::crat_from_rat;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ast::parse_expr;
    use crate::expr::crat_from_int;

    fn chart4() -> Arc<Chart> {
        Chart::new(vec!["x1", "y1", "x2", "y2"]).unwrap()
    }

    #[test]
    fn wedge_self_is_zero() {
        let c = chart4();
        let dx = Form::dx(&c, "x1");
        assert!(dx.wedge(&dx).is_zero());
    }

    #[test]
    fn wedge_anticommutes() {
        let c = chart4();
        let a = Form::dx(&c, "x1");
        let b = Form::dx(&c, "y2");
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
    }

    #[test]
    fn dz_wedge_dzbar() {
        // dz∧dz̄ = -2i dx∧dy
        let c = chart4();
        let w = dz(&c, "x1", "y1").wedge(&dzbar(&c, "x1", "y1"));
        let expect = Form::dx(&c, "x1")
            .wedge(&Form::dx(&c, "y1"))
            .scale(&(crat_from_int(-2) * crat_i()));
        assert_eq!(w, expect);
    }

    #[test]
    fn complex_volume_conversion() {
        // dz1∧dz̄1∧dz2∧dz̄2 = -4 dx1∧dy1∧dx2∧dy2
        let c = chart4();
        let w = dz(&c, "x1", "y1")
            .wedge(&dzbar(&c, "x1", "y1"))
            .wedge(&dz(&c, "x2", "y2"))
            .wedge(&dzbar(&c, "x2", "y2"));
        let vol = Form::dx(&c, "x1")
            .wedge(&Form::dx(&c, "y1"))
            .wedge(&Form::dx(&c, "x2"))
            .wedge(&Form::dx(&c, "y2"));
        assert_eq!(w, vol.scale(&crat_from_int(-4)));
    }

    #[test]
    fn d_of_x_dy() {
        let c = chart4();
        let a = Form::dx(&c, "y1").scale_expr(&Expr::coord("x1"));
        let expect = Form::dx(&c, "x1").wedge(&Form::dx(&c, "y1"));
        assert_eq!(a.d(), expect);
    }

    #[test]
    fn d_squared_zero() {
        let c = chart4();
        let f = parse_expr("(x1*y2 - y1^3)/(1 + x1^2 + x2^2)").unwrap();
        let a = Form::from_expr(&c, f)
            .wedge(&Form::dx(&c, "x2"))
            .add(&Form::dx(&c, "y2").scale_expr(&parse_expr("x1*x2").unwrap()));
        assert!(a.d().d().is_zero());
    }

    #[test]
    fn antiderivation_rule() {
        // d(a∧b) = da∧b + (-1)^{deg a} a∧db for a of degree 1
        let c = chart4();
        let a = Form::dx(&c, "x1").scale_expr(&parse_expr("y1*x2").unwrap());
        let b = Form::dx(&c, "y2").scale_expr(&parse_expr("x1 + y2^2").unwrap());
        let lhs = a.wedge(&b).d();
        let rhs = a.d().wedge(&b).sub(&a.wedge(&b.d()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_of_product_commutes_even_degree() {
        let c = chart4();
        // 2x2 matrices of 2-forms with expression coefficients
        let f = |s: &str, i: usize, j: usize| {
            Form::dx(&c, ["x1", "y1"][i])
                .wedge(&Form::dx(&c, ["x2", "y2"][j]))
                .scale_expr(&parse_expr(s).unwrap())
        };
        let a = MatrixForm::from_entries(
            &c,
            2,
            vec![f("x1", 0, 0), f("y1 - 2", 0, 1), f("x2*y2", 1, 0), f("1/(1+x1^2)", 1, 1)],
        );
        let b = MatrixForm::from_entries(
            &c,
            2,
            vec![f("y2", 1, 1), f("x1*x2", 1, 0), f("3", 0, 1), f("y1", 0, 0)],
        );
        assert_eq!(a.mat_mul(&b).trace(), b.mat_mul(&a).trace());
    }

    #[test]
    fn pullback_identity_and_composition() {
        let c = chart4();
        let id = ChartMap::identity(&c);
        let a = Form::dx(&c, "x1")
            .wedge(&Form::dx(&c, "y2"))
            .scale_expr(&parse_expr("x2/(1+y1^2)").unwrap());
        assert_eq!(id.pullback(&a).unwrap(), a);

        // φ: (u,v) -> (x1,y1,x2,y2) = (u, v, u*v, u - v), ψ: (s,t) -> (u,v) = (s+t, s*t)
        let uv = Chart::new(vec!["u", "v"]).unwrap();
        let st = Chart::new(vec!["s", "t"]).unwrap();
        let phi = ChartMap::new(
            &uv,
            &c,
            vec![
                parse_expr("u").unwrap(),
                parse_expr("v").unwrap(),
                parse_expr("u*v").unwrap(),
                parse_expr("u - v").unwrap(),
            ],
        )
        .unwrap();
        let psi = ChartMap::new(
            &st,
            &uv,
            vec![parse_expr("s + t").unwrap(), parse_expr("s*t").unwrap()],
        )
        .unwrap();
        let comp = phi.compose(&psi).unwrap();
        let lhs = comp.pullback(&a).unwrap();
        let rhs = psi.pullback(&phi.pullback(&a).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_commutes_with_d() {
        let c = chart4();
        let uv = Chart::new(vec!["u", "v"]).unwrap();
        let phi = ChartMap::new(
            &uv,
            &c,
            vec![
                parse_expr("u^2").unwrap(),
                parse_expr("v").unwrap(),
                parse_expr("u*v/(1+v^2)").unwrap(),
                parse_expr("u + v").unwrap(),
            ],
        )
        .unwrap();
        let a = Form::dx(&c, "x2").scale_expr(&parse_expr("x1*y2").unwrap());
        assert_eq!(
            phi.pullback(&a.d()).unwrap(),
            phi.pullback(&a).unwrap().d()
        );
    }

    #[test]
    fn degree_cap_drops_overflow() {
        let uv = Chart::new(vec!["u", "v"]).unwrap();
        let du = Form::dx(&uv, "u");
        let dv = Form::dx(&uv, "v");
        let top = du.wedge(&dv);
        assert!(top.wedge(&du).is_zero());
    }

    #[test]
    fn top_coefficient_orientation() {
        let c = Chart::with_orientation(
            vec!["u".into(), "v".into()],
            vec!["v".into(), "u".into()],
        )
        .unwrap();
        let du = Form::dx(&c, "u");
        let dv = Form::dx(&c, "v");
        // du∧dv has coefficient 1 in declaration order, orientation reversed.
        assert_eq!(du.wedge(&dv).top_coefficient(), Expr::int(-1));
    }
}
