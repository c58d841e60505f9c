//! Surface syntax for expressions.
//!
//! Grammar (precedence low to high):
//! ```text
//! sum    := product (('+' | '-') product)*
//! product:= unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | 'i' | identifier | '(' sum ')'
//! ```
//! Rational constants like `3/4` come out of the division operator, so
//! the canonical printer's output is ordinary input. The AST keeps the
//! tree shape; [`ExprAst::to_expr`] normalizes, and [`ExprAst::eval`]
//! is a direct tree-walk evaluator used as an independent oracle.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::complex::Complex;
use num::traits::Zero;

use super::poly::{C64, Rat};
use super::{Expr, ExprError};

#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Int(BigInt),
    ImaginaryUnit,
    Coord(String),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i32),
}

impl ExprAst {
    /// Normalizes into the reduced rational-function form.
    pub fn to_expr(&self) -> Result<Expr, ExprError> {
        match self {
            ExprAst::Int(n) => Ok(Expr::constant(Complex::new(
                Rat::from_integer(n.clone()),
                Rat::zero(),
            ))),
            ExprAst::ImaginaryUnit => Ok(Expr::imaginary_unit()),
            ExprAst::Coord(name) => Ok(Expr::coord(name)),
            ExprAst::Neg(a) => Ok(a.to_expr()?.neg()),
            ExprAst::Add(a, b) => Ok(a.to_expr()?.add(&b.to_expr()?)),
            ExprAst::Sub(a, b) => Ok(a.to_expr()?.sub(&b.to_expr()?)),
            ExprAst::Mul(a, b) => Ok(a.to_expr()?.mul(&b.to_expr()?)),
            ExprAst::Div(a, b) => a.to_expr()?.div(&b.to_expr()?),
            ExprAst::Pow(a, e) => a.to_expr()?.powi(*e),
        }
    }

    /// Direct numeric evaluation of the tree, with no normalization.
    pub fn eval(&self, point: &HashMap<String, C64>) -> Result<C64, ExprError> {
        match self {
            ExprAst::Int(n) => {
                let r = Rat::from_integer(n.clone());
                Ok(C64::new(
                    num::traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN),
                    0.0,
                ))
            }
            ExprAst::ImaginaryUnit => Ok(C64::new(0.0, 1.0)),
            ExprAst::Coord(name) => point
                .get(name)
                .copied()
                .ok_or_else(|| ExprError::UnboundCoordinate(name.clone())),
            ExprAst::Neg(a) => Ok(-a.eval(point)?),
            ExprAst::Add(a, b) => Ok(a.eval(point)? + b.eval(point)?),
            ExprAst::Sub(a, b) => Ok(a.eval(point)? - b.eval(point)?),
            ExprAst::Mul(a, b) => Ok(a.eval(point)? * b.eval(point)?),
            ExprAst::Div(a, b) => {
                let d = b.eval(point)?;
                if d.norm() < super::EVAL_DENOMINATOR_FLOOR {
                    return Err(ExprError::NumericallySingularDenominator);
                }
                Ok(a.eval(point)? / d)
            }
            ExprAst::Pow(a, e) => Ok(a.eval(point)?.powi(*e)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Tok>, ExprError> {
    let mut toks = vec![];
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '/' => {
                chars.next();
                toks.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Int(s.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(s));
            }
            other => {
                return Err(ExprError::Parse(format!("unexpected character `{}`", other)));
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ExprError> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(ExprError::Parse(format!(
                "expected {:?}, found {:?}",
                t, got
            ))),
        }
    }

    fn sum(&mut self) -> Result<ExprAst, ExprError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = ExprAst::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = ExprAst::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<ExprAst, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = ExprAst::Mul(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = ExprAst::Div(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ExprAst, ExprError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ExprError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(ExprAst::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, ExprError> {
        let parenthesized = matches!(self.peek(), Some(Tok::LParen));
        if parenthesized {
            self.pos += 1;
        }
        let mut neg = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            neg = true;
        }
        let n = match self.next() {
            Some(Tok::Int(n)) => n,
            got => {
                return Err(ExprError::Parse(format!(
                    "expected integer exponent, found {:?}",
                    got
                )))
            }
        };
        if parenthesized {
            self.expect(Tok::RParen)?;
        }
        let mut e: i32 = num::traits::ToPrimitive::to_i32(&n)
            .ok_or_else(|| ExprError::Parse("exponent out of range".to_string()))?;
        if neg {
            e = -e;
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<ExprAst, ExprError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(ExprAst::Int(n)),
            Some(Tok::Ident(s)) => {
                if s == "i" {
                    Ok(ExprAst::ImaginaryUnit)
                } else {
                    Ok(ExprAst::Coord(s))
                }
            }
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            got => Err(ExprError::Parse(format!(
                "expected expression, found {:?}",
                got
            ))),
        }
    }
}

/// Parses the surface syntax into a raw tree.
pub fn parse_ast(input: &str) -> Result<ExprAst, ExprError> {
    let toks = tokenize(input)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::Parse(format!(
            "trailing input at token {:?}",
            p.toks[p.pos]
        )));
    }
    Ok(e)
}

/// Parses and normalizes in one step.
pub fn parse_expr(input: &str) -> Result<Expr, ExprError> {
    parse_ast(input)?.to_expr()
}

#[cfg(test)]
mod tests {
    use super::super::poly::crat_i;
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        let e = parse_expr("(x + y)^2 - x^2 - 2*x*y").unwrap();
        assert_eq!(e, parse_expr("y^2").unwrap());
    }

    #[test]
    fn rational_and_complex_constants() {
        let e = parse_expr("3/4 + 2*i").unwrap();
        assert_eq!(
            e.as_constant().unwrap(),
            super::super::poly::crat_from_rat(3, 4) + super::super::poly::crat_from_int(2) * crat_i()
        );
    }

    #[test]
    fn print_parse_round_trip() {
        let inputs = [
            "-3*x^2 + i*y + 1/2",
            "(1)/(x^2 + 1)",
            "(2 - 1/3*i)*x",
            "(x*y - 1)/(x^2 + y^2 + 1)",
        ];
        for s in inputs {
            let e = parse_expr(s).unwrap();
            let printed = e.to_string();
            let e2 = parse_expr(&printed).unwrap();
            assert_eq!(e, e2, "round trip failed for `{}` -> `{}`", s, printed);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_expr("x +"), Err(ExprError::Parse(_))));
        assert!(matches!(parse_expr("x $ y"), Err(ExprError::Parse(_))));
        assert!(matches!(parse_expr("(x"), Err(ExprError::Parse(_))));
        assert!(matches!(parse_expr("x^y"), Err(ExprError::Parse(_))));
    }

    #[test]
    fn division_by_zero_polynomial() {
        assert!(matches!(
            parse_expr("1/(x - x)"),
            Err(ExprError::DivisionByZero)
        ));
    }

    #[test]
    fn ast_eval_matches_normal_form_eval() {
        let src = "((x + i*y)^3 - 2)/(1 + x^2 + y^2) + x/(2 - i)";
        let ast = parse_ast(src).unwrap();
        let e = ast.to_expr().unwrap();
        let mut point = HashMap::new();
        point.insert("x".to_string(), C64::new(0.7, 0.0));
        point.insert("y".to_string(), C64::new(-1.3, 0.0));
        let a = ast.eval(&point).unwrap();
        let b = e.eval(&point).unwrap();
        assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
    }
}
