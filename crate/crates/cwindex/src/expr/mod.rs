//! Exact expression kernel: rational functions in named real chart
//! coordinates with Gaussian-rational constants.
//!
//! Every [`Expr`] is kept in reduced normal form (coprime numerator and
//! denominator, monic denominator, graded-lexicographic monomial order),
//! so structural equality decides equality of rational functions. The
//! surface syntax lives in [`ast`]; [`ast::ExprAst::to_expr`] is the
//! normalization entry point for parsed input.

pub mod ast;
pub mod display;
pub mod poly;
pub mod ratio;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use poly::{crat_from_int, crat_from_rat, crat_i, crat_one, crat_to_c64, crat_zero, rat_from_f64, C64, CRat, Rat};
use poly::Poly;
use ratio::Ratio;

/// Absolute threshold below which an evaluated denominator is treated as zero.
pub const EVAL_DENOMINATOR_FLOOR: f64 = 1e-300;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("denominator reduces to the zero polynomial")]
    ZeroDenominator,
    #[error("coordinate `{0}` is not bound at the evaluation point")]
    UnboundCoordinate(String),
    #[error("denominator is numerically zero at the evaluation point")]
    NumericallySingularDenominator,
    #[error("chart map composition hits a pole of the expression")]
    MapHitsPole,
    #[error("duplicate coordinate name `{0}`")]
    DuplicateCoordinate(String),
    #[error("orientation list is not a permutation of the chart coordinates")]
    BadOrientation,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coordinate chart: ordered real coordinates plus an orientation order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chart {
    coords: Vec<String>,
    orientation: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(coords: Vec<S>) -> Result<Arc<Chart>, ExprError> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        let orientation = coords.clone();
        Self::with_orientation(coords, orientation)
    }

    pub fn with_orientation(
        coords: Vec<String>,
        orientation: Vec<String>,
    ) -> Result<Arc<Chart>, ExprError> {
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(ExprError::DuplicateCoordinate(c.clone()));
            }
        }
        if orientation.len() != coords.len()
            || !orientation.iter().all(|c| coords.contains(c))
        {
            return Err(ExprError::BadOrientation);
        }
        Ok(Arc::new(Chart {
            coords,
            orientation,
        }))
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn orientation(&self) -> &[String] {
        &self.orientation
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    /// Sign of the permutation taking declaration order to orientation order.
    pub fn orientation_sign(&self) -> i32 {
        let perm: Vec<usize> = self
            .orientation
            .iter()
            .map(|c| self.index_of(c).unwrap())
            .collect();
        permutation_sign(&perm)
    }
}

pub(crate) fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Rational-function expression in named real coordinates, always in
/// normal form.
#[derive(Clone, Debug)]
pub struct Expr {
    vars: Vec<String>, // sorted, deduplicated
    r: Ratio,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        let (_, a, b) = Expr::unify(self, other);
        a == b
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn zero() -> Expr {
        Expr {
            vars: vec![],
            r: Ratio::from_poly(Poly::zero(0)),
        }
    }

    pub fn one() -> Expr {
        Expr::constant(crat_one())
    }

    pub fn constant(c: CRat) -> Expr {
        Expr {
            vars: vec![],
            r: Ratio::from_poly(Poly::constant(c, 0)),
        }
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(crat_from_int(n))
    }

    pub fn rational(num: i64, den: i64) -> Expr {
        Expr::constant(crat_from_rat(num, den))
    }

    pub fn imaginary_unit() -> Expr {
        Expr::constant(crat_i())
    }

    pub fn coord(name: &str) -> Expr {
        Expr {
            vars: vec![name.to_string()],
            r: Ratio::from_poly(Poly::var(0, 1)),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub(crate) fn ratio(&self) -> &Ratio {
        &self.r
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn as_constant(&self) -> Option<CRat> {
        self.r.as_constant()
    }

    fn unify(a: &Expr, b: &Expr) -> (Vec<String>, Ratio, Ratio) {
        if a.vars == b.vars {
            return (a.vars.clone(), a.r.clone(), b.r.clone());
        }
        let mut vars = a.vars.clone();
        for v in &b.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars.sort();
        let map_a: Vec<usize> = a
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).unwrap())
            .collect();
        let map_b: Vec<usize> = b
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).unwrap())
            .collect();
        let n = vars.len();
        (vars, a.r.embed(&map_a, n), b.r.embed(&map_b, n))
    }

    /// Drops variables that no longer occur after reduction.
    fn compact(vars: Vec<String>, r: Ratio) -> Expr {
        let n = vars.len();
        let used: Vec<usize> = (0..n)
            .filter(|&v| r.num().uses_var(v) || r.den().uses_var(v))
            .collect();
        if used.len() == n {
            return Expr { vars, r };
        }
        let mut map = vec![0usize; n];
        for (new, &old) in used.iter().enumerate() {
            map[old] = new;
        }
        let new_vars: Vec<String> = used.iter().map(|&v| vars[v].clone()).collect();
        // Build a full map (unused vars mapped arbitrarily to 0; their
        // exponents are all zero so the target index is irrelevant).
        let r = r.embed(&map, new_vars.len().max(1));
        let r = if new_vars.is_empty() {
            // Fully constant: re-embed into zero variables.
            let c = r.as_constant().expect("constant expression");
            Ratio::from_poly(Poly::constant(c, 0))
        } else {
            r
        };
        Expr { vars: new_vars, r }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let (vars, a, b) = Expr::unify(self, other);
        Expr::compact(vars, a.add(&b))
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        let (vars, a, b) = Expr::unify(self, other);
        Expr::compact(vars, a.sub(&b))
    }

    pub fn neg(&self) -> Expr {
        Expr {
            vars: self.vars.clone(),
            r: self.r.neg(),
        }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        let (vars, a, b) = Expr::unify(self, other);
        Expr::compact(vars, a.mul(&b))
    }

    pub fn div(&self, other: &Expr) -> Result<Expr, ExprError> {
        let (vars, a, b) = Expr::unify(self, other);
        Ok(Expr::compact(vars, a.div(&b)?))
    }

    pub fn scale(&self, c: &CRat) -> Expr {
        Expr::compact(self.vars.clone(), self.r.scale(c))
    }

    pub fn powi(&self, e: i32) -> Result<Expr, ExprError> {
        Ok(Expr::compact(self.vars.clone(), self.r.powi(e)?))
    }

    /// Exact partial derivative; zero when the coordinate does not occur.
    pub fn diff(&self, coord: &str) -> Expr {
        match self.vars.iter().position(|v| v == coord) {
            None => Expr::zero(),
            Some(v) => Expr::compact(self.vars.clone(), self.r.diff(v)),
        }
    }

    /// Normalization entry point. Expressions are maintained in normal
    /// form, so this is the identity; it exists as the public contract
    /// and is exercised by the idempotence tests.
    pub fn normalize(&self) -> Expr {
        self.clone()
    }

    pub fn eval(&self, point: &HashMap<String, C64>) -> Result<C64, ExprError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match point.get(v) {
                Some(x) => vals.push(*x),
                None => return Err(ExprError::UnboundCoordinate(v.clone())),
            }
        }
        self.r.eval(&vals, EVAL_DENOMINATOR_FLOOR)
    }

    /// Evaluation against a chart-ordered coordinate slice.
    pub fn eval_on_chart(&self, chart: &Chart, point: &[C64]) -> Result<C64, ExprError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match chart.index_of(v) {
                Some(i) => vals.push(point[i]),
                None => return Err(ExprError::UnboundCoordinate(v.clone())),
            }
        }
        self.r.eval(&vals, EVAL_DENOMINATOR_FLOOR)
    }

    pub fn conj(&self) -> Expr {
        Expr {
            vars: self.vars.clone(),
            r: self.r.conj(),
        }
    }

    pub fn real_part(&self) -> Expr {
        let (re, _) = self.r.real_imag();
        Expr::compact(self.vars.clone(), re)
    }

    pub fn imag_part(&self) -> Expr {
        let (_, im) = self.r.real_imag();
        Expr::compact(self.vars.clone(), im)
    }

    /// Substitutes expressions for coordinates; coordinates not listed stay fixed.
    pub fn substitute(&self, bindings: &HashMap<String, Expr>) -> Result<Expr, ExprError> {
        let mut args: Vec<Expr> = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match bindings.get(v) {
                Some(e) => args.push(e.clone()),
                None => args.push(Expr::coord(v)),
            }
        }
        // Unify argument variable spaces.
        let mut vars: Vec<String> = vec![];
        for a in &args {
            for v in &a.vars {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        vars.sort();
        let n = vars.len().max(1);
        let ratios: Vec<Ratio> = args
            .iter()
            .map(|a| {
                let map: Vec<usize> = a
                    .vars
                    .iter()
                    .map(|v| vars.iter().position(|w| w == v).unwrap())
                    .collect();
                a.r.embed(&map, n)
            })
            .collect();
        let out = self.r.compose(&ratios)?;
        if vars.is_empty() {
            let c = out.as_constant().expect("constant expression");
            return Ok(Expr::constant(c));
        }
        Ok(Expr::compact(vars, out))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", display::expr_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_cancels() {
        // x * (1/x) -> 1
        let x = Expr::coord("x");
        let e = x.mul(&Expr::one().div(&x).unwrap());
        assert_eq!(e, Expr::one());
        // a + b - b -> a
        let a = Expr::coord("a");
        let b = Expr::coord("b");
        assert_eq!(a.add(&b).sub(&b), a);
    }

    #[test]
    fn diff_basics() {
        let x = Expr::coord("x");
        let e = x.powi(2).unwrap();
        assert_eq!(e.diff("x"), x.scale(&crat_from_int(2)));
        assert_eq!(Expr::int(7).diff("x"), Expr::zero());
    }

    #[test]
    fn mixed_partials_commute() {
        let x = Expr::coord("x");
        let y = Expr::coord("y");
        let one = Expr::one();
        let e = one
            .div(&one.add(&x.powi(2).unwrap()).add(&y.powi(2).unwrap()))
            .unwrap()
            .mul(&x.add(&y.powi(3).unwrap()));
        assert_eq!(e.diff("x").diff("y"), e.diff("y").diff("x"));
    }

    #[test]
    fn eval_unbound_errors() {
        let e = Expr::coord("x");
        let point = HashMap::new();
        assert!(matches!(
            e.eval(&point),
            Err(ExprError::UnboundCoordinate(_))
        ));
    }

    #[test]
    fn substitute_composes() {
        // f(x) = 1/(1+x^2), x -> y+1
        let x = Expr::coord("x");
        let y = Expr::coord("y");
        let f = Expr::one()
            .div(&Expr::one().add(&x.powi(2).unwrap()))
            .unwrap();
        let mut b = HashMap::new();
        b.insert("x".to_string(), y.add(&Expr::one()));
        let g = f.substitute(&b).unwrap();
        let expected = Expr::one()
            .div(&Expr::one().add(&y.add(&Expr::one()).powi(2).unwrap()))
            .unwrap();
        assert_eq!(g, expected);
    }
}
