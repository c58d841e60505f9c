//! Reduced fractions of multivariate polynomials.
//!
//! Invariant: numerator and denominator are coprime, the denominator is
//! nonzero with graded-lex leading coefficient 1, and a zero numerator
//! forces denominator 1. This makes structural equality a decision
//! procedure for equality of rational functions.

use super::poly::{crat_one, gcd, Poly, C64, CRat};
use super::ExprError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ratio {
    num: Poly,
    den: Poly,
}

impl Ratio {
    pub fn reduced(num: Poly, den: Poly) -> Result<Ratio, ExprError> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        if num.is_zero() {
            let nv = num.nvars();
            return Ok(Ratio {
                num,
                den: Poly::one(nv),
            });
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().expect("nonzero denominator").1.clone();
        let inv = crat_one() / lc;
        Ok(Ratio {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Poly) -> Ratio {
        let nv = p.nvars();
        Ratio {
            num: p,
            den: Poly::one(nv),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<CRat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Ratio) -> Ratio {
        let d = gcd(&self.den, &other.den);
        let (da, db) = if d.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.div_exact(&d).unwrap(),
                other.den.div_exact(&d).unwrap(),
            )
        };
        let num = self.num.mul(&db).add(&other.num.mul(&da));
        let den = self.den.mul(&db);
        Ratio::reduced(num, den).expect("denominator product is nonzero")
    }

    pub fn neg(&self) -> Ratio {
        Ratio {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Ratio) -> Ratio {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Ratio) -> Ratio {
        if self.is_zero() || other.is_zero() {
            return Ratio::from_poly(Poly::zero(self.nvars()));
        }
        // Cross-cancel before multiplying to keep factors small.
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        Ratio::reduced(n1.mul(&n2), d1.mul(&d2)).expect("nonzero denominator")
    }

    pub fn div(&self, other: &Ratio) -> Result<Ratio, ExprError> {
        if other.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        self.mul(&Ratio::reduced(other.den.clone(), other.num.clone())?)
            .pipe_ok()
    }

    fn pipe_ok(self) -> Result<Ratio, ExprError> {
        Ok(self)
    }

    pub fn scale(&self, c: &CRat) -> Ratio {
        Ratio::reduced(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn powi(&self, e: i32) -> Result<Ratio, ExprError> {
        if e >= 0 {
            Ratio::reduced(self.num.pow(e as u32), self.den.pow(e as u32))
        } else {
            if self.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            let k = (-e) as u32;
            Ratio::reduced(self.den.pow(k), self.num.pow(k))
        }
    }

    /// Quotient-rule derivative with respect to variable `v`.
    pub fn diff(&self, v: usize) -> Ratio {
        let n = self.num.diff(v).mul(&self.den).sub(&self.num.mul(&self.den.diff(v)));
        let d = self.den.mul(&self.den);
        Ratio::reduced(n, d).expect("nonzero denominator")
    }

    pub fn eval(&self, point: &[C64], floor: f64) -> Result<C64, ExprError> {
        let d = self.den.eval(point);
        if d.norm() < floor {
            return Err(ExprError::NumericallySingularDenominator);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn conj(&self) -> Ratio {
        Ratio::reduced(self.num.conj(), self.den.conj()).expect("nonzero denominator")
    }

    /// Real and imaginary parts as rational functions with real coefficients.
    pub fn real_imag(&self) -> (Ratio, Ratio) {
        let dbar = self.den.conj();
        let n = self.num.mul(&dbar);
        let d = self.den.mul(&dbar);
        let (nr, ni) = n.real_imag();
        (
            Ratio::reduced(nr, d.clone()).expect("nonzero denominator"),
            Ratio::reduced(ni, d).expect("nonzero denominator"),
        )
    }

    /// Substitutes rational functions for the variables.
    pub fn compose(&self, args: &[Ratio]) -> Result<Ratio, ExprError> {
        assert_eq!(args.len(), self.nvars());
        let out_nvars = args.first().map(|r| r.nvars()).unwrap_or(0);
        // Evaluate num and den as polynomials in the args over the fraction field.
        let eval_poly = |p: &Poly| -> Ratio {
            let mut acc = Ratio::from_poly(Poly::zero(out_nvars));
            for (m, c) in p.terms() {
                let mut t = Ratio::from_poly(Poly::constant(c.clone(), out_nvars));
                for (v, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t = t.mul(&args[v].powi(e as i32).expect("positive power"));
                    }
                }
                acc = acc.add(&t);
            }
            acc
        };
        let n = eval_poly(&self.num);
        let d = eval_poly(&self.den);
        n.div(&d).map_err(|_| ExprError::MapHitsPole)
    }

    pub fn embed(&self, map: &[usize], new_nvars: usize) -> Ratio {
        Ratio {
            num: self.num.embed(map, new_nvars),
            den: self.den.embed(map, new_nvars),
        }
    }
}
