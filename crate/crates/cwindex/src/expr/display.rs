//! Canonical string form for polynomials and expressions.
//!
//! Terms print in descending graded-lex order, Gaussian rationals as
//! `p/q`, `p/q*i` or `(a + b*i)`. The output parses back to the same
//! normal form via [`super::ast`].

use num::traits::{One, Signed, Zero};

use super::poly::{CRat, Mono, Poly, Rat};
use super::Expr;

fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Printed form of a coefficient with its leading sign split off:
/// returns (is_negative, magnitude string, needs_parens_when_multiplied).
fn crat_parts(c: &CRat) -> (bool, String, bool) {
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        (neg, rat_to_string(&c.re.abs()), false)
    } else if c.re.is_zero() {
        let neg = c.im.is_negative();
        let m = c.im.abs();
        let s = if m.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", rat_to_string(&m))
        };
        (neg, s, false)
    } else {
        let neg = c.re.is_negative();
        let (re, im) = if neg {
            ((-c.re.clone()).abs(), -c.im.clone())
        } else {
            (c.re.clone(), c.im.clone())
        };
        let im_sign = if im.is_negative() { "-" } else { "+" };
        let im_abs = im.abs();
        let im_str = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", rat_to_string(&im_abs))
        };
        (
            neg,
            format!("({} {} {})", rat_to_string(&re), im_sign, im_str),
            false,
        )
    }
}

fn mono_to_string(m: &Mono, names: Option<&[String]>) -> String {
    let mut parts = vec![];
    for (v, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = match names {
            Some(ns) => ns[v].clone(),
            None => format!("x{}", v),
        };
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{}^{}", name, e));
        }
    }
    parts.join("*")
}

pub fn poly_to_string(p: &Poly, names: Option<&[String]>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    // Descending graded-lex order.
    let terms: Vec<(&Mono, &CRat)> = p.terms().collect();
    for (k, (m, c)) in terms.iter().rev().enumerate() {
        let (neg, mag, _) = crat_parts(c);
        let ms = mono_to_string(m, names);
        let body = if ms.is_empty() {
            mag
        } else if mag == "1" {
            ms
        } else {
            format!("{}*{}", mag, ms)
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
            out.push_str(&body);
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    out
}

pub fn expr_to_string(e: &Expr) -> String {
    let names = e.vars();
    let r = e.ratio();
    let num = poly_to_string(r.num(), Some(names));
    if r.den().is_one() {
        num
    } else {
        format!(
            "({})/({})",
            num,
            poly_to_string(r.den(), Some(names))
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly::{crat_from_int, crat_from_rat, crat_i};
    use super::*;

    #[test]
    fn prints_canonical_terms() {
        let x = Expr::coord("x");
        let y = Expr::coord("y");
        let e = x
            .powi(2)
            .unwrap()
            .scale(&crat_from_int(-3))
            .add(&y.scale(&crat_i()))
            .add(&Expr::rational(1, 2));
        assert_eq!(e.to_string(), "-3*x^2 + i*y + 1/2");
    }

    #[test]
    fn prints_quotients() {
        let x = Expr::coord("x");
        let e = Expr::one()
            .div(&Expr::one().add(&x.powi(2).unwrap()))
            .unwrap();
        assert_eq!(e.to_string(), "(1)/(x^2 + 1)");
    }

    #[test]
    fn prints_mixed_complex_coefficient() {
        let x = Expr::coord("x");
        let c = crat_from_int(2) + crat_i() * crat_from_rat(-1, 3);
        let e = x.scale(&c);
        assert_eq!(e.to_string(), "(2 - 1/3*i)*x");
    }
}
