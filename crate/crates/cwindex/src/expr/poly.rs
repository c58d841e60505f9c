//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Monomials are ordered graded-lexicographically with respect to the
//! owning expression's variable list. All arithmetic is exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::complex::Complex;
use num::rational::BigRational;
use num::traits::{One, ToPrimitive, Zero};
use smallvec::SmallVec;

/// Exact rational scalar.
pub type Rat = BigRational;
/// Exact Gaussian-rational scalar.
pub type CRat = Complex<BigRational>;
/// Double-precision complex value.
pub type C64 = Complex<f64>;

pub fn crat_zero() -> CRat {
    Complex::new(Rat::zero(), Rat::zero())
}

pub fn crat_one() -> CRat {
    Complex::new(Rat::one(), Rat::zero())
}

pub fn crat_i() -> CRat {
    Complex::new(Rat::zero(), Rat::one())
}

pub fn crat_from_int(n: i64) -> CRat {
    Complex::new(Rat::from_integer(BigInt::from(n)), Rat::zero())
}

pub fn crat_from_rat(num: i64, den: i64) -> CRat {
    assert!(den != 0, "rational constant with zero denominator");
    Complex::new(
        Rat::new(BigInt::from(num), BigInt::from(den)),
        Rat::zero(),
    )
}

pub fn crat_to_c64(c: &CRat) -> C64 {
    Complex::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Lossless embedding of an `f64` into the rationals.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Exact rational k-th root, if one exists.
fn rat_nth_root(r: &Rat, k: u32) -> Option<Rat> {
    use num::traits::Signed;
    if r.is_negative() && k % 2 == 0 {
        return None;
    }
    let num = r.numer().nth_root(k);
    let den = r.denom().nth_root(k);
    let root = Rat::new(num, den);
    let mut back = Rat::one();
    for _ in 0..k {
        back *= root.clone();
    }
    if back == *r {
        Some(root)
    } else {
        None
    }
}

/// Monomial exponent vector under graded-lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Mono(pub SmallVec<[u16; 8]>);

impl Mono {
    pub fn unit(nvars: usize) -> Self {
        Mono(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut m = Self::unit(nvars);
        m.0[idx] = 1;
        m
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.0.len(), other.0.len());
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise division; `None` if any exponent would go negative.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `nvars` variables with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, CRat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CRat, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::unit(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(crat_one(), nvars)
    }

    pub fn var(idx: usize, nvars: usize) -> Self {
        assert!(idx < nvars);
        let mut p = Self::zero(nvars);
        p.terms.insert(Mono::var(nvars, idx), crat_one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CRat)> {
        self.terms.iter()
    }

    /// Returns the scalar value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<CRat> {
        if self.terms.is_empty() {
            return Some(crat_zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.total_degree() == 0 {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c == crat_one()).unwrap_or(false)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.0[v] as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    fn insert_term(&mut self, m: Mono, c: CRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &CRat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn diff(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[v] = e - 1;
            out.insert_term(m2, c.clone() * crat_from_int(e as i64));
        }
        out
    }

    pub fn eval(&self, point: &[C64]) -> C64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = crat_to_c64(c);
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[v].powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluates with polynomial values substituted for the variables.
    pub fn compose(&self, args: &[Poly]) -> Poly {
        assert_eq!(args.len(), self.nvars);
        let out_nvars = args.first().map(|p| p.nvars).unwrap_or(0);
        let mut acc = Poly::zero(out_nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone(), out_nvars);
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&args[v].pow(e as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn conj(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// Splits into real and imaginary coefficient parts.
    pub fn real_imag(&self) -> (Poly, Poly) {
        let mut re = Poly::zero(self.nvars);
        let mut im = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if !c.re.is_zero() {
                re.insert_term(m.clone(), Complex::new(c.re.clone(), Rat::zero()));
            }
            if !c.im.is_zero() {
                im.insert_term(m.clone(), Complex::new(c.im.clone(), Rat::zero()));
            }
        }
        (re, im)
    }

    /// Re-indexes variables into a larger variable set. `map[old] = new`.
    pub fn embed(&self, map: &[usize], new_nvars: usize) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut em = Mono::unit(new_nvars);
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    em.0[map[v]] = e;
                }
            }
            out.insert_term(em, c.clone());
        }
        out
    }

    pub fn leading(&self) -> Option<(&Mono, &CRat)> {
        self.terms.iter().next_back()
    }

    /// Divides by the graded-lex leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = crat_one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero(self.nvars));
        }
        if let Some(c) = d.as_constant() {
            let inv = crat_one() / c;
            return Some(self.scale(&inv));
        }
        let (dlm, dlc) = d.leading().unwrap();
        let dlm = dlm.clone();
        let dlc = dlc.clone();
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while !r.is_zero() {
            let (rlm, rlc) = {
                let (m, c) = r.leading().unwrap();
                (m.clone(), c.clone())
            };
            let qm = rlm.div(&dlm)?;
            let qc = rlc / dlc.clone();
            let mut t = Poly::zero(self.nvars);
            t.insert_term(qm, qc);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Exact evaluation of every variable except `v` at a rational point,
    /// leaving a univariate coefficient vector indexed by the exponent of
    /// `v` (trailing zeros trimmed).
    fn univariate_image(&self, v: usize, point: &[CRat]) -> Vec<CRat> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![crat_zero(); deg + 1];
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (w, &e) in m.0.iter().enumerate() {
                if w == v || e == 0 {
                    continue;
                }
                let mut base = point[w].clone();
                let mut acc = crat_one();
                let mut k = e;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = acc * base.clone();
                    }
                    k >>= 1;
                    if k > 0 {
                        base = base.clone() * base;
                    }
                }
                t = t * acc;
            }
            let slot = &mut out[m.0[v] as usize];
            *slot = slot.clone() + t;
        }
        while out.last().map(|c| c.is_zero()).unwrap_or(false) {
            out.pop();
        }
        out
    }

    /// Coefficients of `self` viewed as univariate in `v`, indexed by exponent.
    fn univariate_in(&self, v: usize) -> BTreeMap<u16, Poly> {
        let mut out: BTreeMap<u16, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[v];
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out.entry(e)
                .or_insert_with(|| Poly::zero(self.nvars))
                .insert_term(m2, c.clone());
        }
        out
    }

    /// Polynomial content with respect to `v` together with the primitive part.
    fn content_primitive(&self, v: usize) -> (Poly, Poly) {
        let uni = self.univariate_in(v);
        let mut content = Poly::zero(self.nvars);
        for p in uni.values() {
            content = gcd(&content, p);
            if content.is_one() {
                break;
            }
        }
        if content.is_one() {
            return (content, self.clone());
        }
        let pp = self
            .div_exact(&content)
            .expect("content must divide the polynomial");
        (content, pp)
    }

    /// Exact k-th root in graded-lex term order, if one exists. Terms of
    /// the root are peeled off the top: the leading term of self − p^k
    /// is k·(root leading)^{k−1} times the next root term.
    fn kth_root(&self, k: u32) -> Option<Poly> {
        if k < 2 {
            return None;
        }
        let (lm, lc) = self.leading()?;
        let mut root_m = Mono::unit(self.nvars);
        for (i, &e) in lm.0.iter().enumerate() {
            if e % (k as u16) != 0 {
                return None;
            }
            root_m.0[i] = e / k as u16;
        }
        if !lc.im.is_zero() {
            return None;
        }
        let c0 = rat_nth_root(&lc.re, k)?;
        let c0 = CRat::new(c0, Rat::zero());
        let mut p = Poly::zero(self.nvars);
        p.insert_term(root_m.clone(), c0.clone());
        let mut denom_m = Mono::unit(self.nvars);
        for (i, &e) in root_m.0.iter().enumerate() {
            denom_m.0[i] = e * (k - 1) as u16;
        }
        let mut denom_c = crat_from_int(k as i64);
        for _ in 0..k - 1 {
            denom_c = denom_c * c0.clone();
        }
        for _ in 0..=self.terms.len() {
            let diff = self.sub(&p.pow(k));
            if diff.is_zero() {
                return Some(p);
            }
            let (dm, dc) = diff.leading().unwrap();
            let qm = dm.div(&denom_m)?;
            if qm >= root_m {
                return None; // not shrinking: no exact root
            }
            p.insert_term(qm, dc.clone() / denom_c.clone());
        }
        None
    }

    /// Writes self as base^k with k maximal (≥ 2), if possible.
    fn perfect_power(&self) -> Option<(Poly, u32)> {
        let d = self.total_degree();
        for k in (2..=d).rev() {
            if d % k != 0 {
                continue;
            }
            if let Some(p) = self.kth_root(k) {
                return Some((p, k));
            }
        }
        None
    }

    /// Pseudo-remainder of `self` by `d` with respect to `v`.
    fn pseudo_rem(&self, d: &Poly, v: usize) -> Poly {
        let dd = d.degree_in(v);
        let duni = d.univariate_in(v);
        let lq = duni.get(&(dd as u16)).cloned().unwrap();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dd {
            let rd = r.degree_in(v);
            let runi = r.univariate_in(v);
            let lr = runi.get(&(rd as u16)).cloned().unwrap();
            // r <- lq*r - lr*x^(rd-dd)*d
            let mut shift = Poly::zero(self.nvars);
            shift.insert_term(Mono::var(self.nvars, v), crat_one());
            let shift = shift.pow(rd - dd);
            r = r.mul(&lq).sub(&lr.mul(&shift).mul(d));
        }
        r
    }
}

/// Univariate polynomial gcd over the Gaussian rationals, coefficients
/// indexed by exponent; returns the degree of the (monic) gcd.
fn univariate_gcd_degree(a: &[CRat], b: &[CRat]) -> usize {
    let trim = |v: &[CRat]| -> Vec<CRat> {
        let mut v = v.to_vec();
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    };
    let mut p = trim(a);
    let mut q = trim(b);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        // p mod q
        while p.len() >= q.len() && !p.is_empty() {
            let f = p.last().unwrap().clone() / q.last().unwrap().clone();
            let shift = p.len() - q.len();
            for (i, c) in q.iter().enumerate() {
                let t = p[shift + i].clone() - f.clone() * c.clone();
                p[shift + i] = t;
            }
            while p.last().map(|c| c.is_zero()).unwrap_or(false) {
                p.pop();
            }
        }
        std::mem::swap(&mut p, &mut q);
    }
    p.len().saturating_sub(1)
}

/// Polynomial gcd over the Gaussian rationals, normalized to graded-lex
/// monic leading coefficient. Primitive pseudo-remainder sequence, with
/// fast paths for equality, divisibility, and certified coprimality in
/// the main variable (evaluation image probe: when the main-variable
/// leading coefficient survives the evaluation, the gcd's main-variable
/// degree is bounded by the image gcd's degree).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.nvars(), b.nvars());
    let nvars = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one(nvars);
    }
    // Main variable: highest index used by both.
    let mut main = None;
    for v in (0..nvars).rev() {
        if a.uses_var(v) && b.uses_var(v) {
            main = Some(v);
            break;
        }
    }
    let v = match main {
        Some(v) => v,
        None => {
            // Disjoint variable supports: no nonconstant common divisor.
            return Poly::one(nvars);
        }
    };
    if a.div_exact(b).is_some() {
        return b.monic();
    }
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    // Evaluation probe: any common divisor G satisfies
    // lc_v(G) | lc_v(a), so if lc_v(a) is nonzero at the sample point,
    // deg_v(G(t)) = deg_v(G) and G(t) divides gcd(a(t), b(t)).
    for attempt in 0..3u64 {
        let point: Vec<CRat> = (0..nvars)
            .map(|w| {
                let x = 3 + ((attempt * 7 + w as u64 * 5 + attempt * w as u64) % 23) as i64;
                crat_from_int(x)
            })
            .collect();
        let a_img = a.univariate_image(v, &point);
        let b_img = b.univariate_image(v, &point);
        let a_deg = a.degree_in(v) as usize;
        if a_img.len() != a_deg + 1 || a_img.last().map(|c| c.is_zero()).unwrap_or(true) {
            continue; // leading coefficient vanished at the point
        }
        if b_img.iter().all(|c| c.is_zero()) {
            continue;
        }
        if univariate_gcd_degree(&a_img, &b_img) == 0 {
            // gcd has main-variable degree 0: it divides both contents.
            let (ca, _) = a.content_primitive(v);
            let (cb, _) = b.content_primitive(v);
            return gcd(&ca, &cb).monic();
        }
        break; // probe reports a nontrivial common factor: run the PRS
    }
    // Perfect-power fast path: if one side is p^k, peel factors of the
    // much smaller base p off the other side. Sound for any base since
    // gcd(x, p^k) = Π_i q_i^{min(k·e_i, m_i)} over the factors of p, and
    // each peel round removes one copy of every still-shared factor.
    for (x, y) in [(a, b), (b, a)] {
        // gcd is scalar-invariant, so strip the leading coefficient
        // before root extraction (4·u³ is as good as u³ here).
        if let Some((base, k)) = y.monic().perfect_power() {
            let mut acc = Poly::one(nvars);
            let mut r = x.clone();
            for _ in 0..k {
                let g = gcd(&r, &base);
                if g.as_constant().is_some() {
                    break;
                }
                r = r.div_exact(&g).expect("gcd divides its argument");
                acc = acc.mul(&g);
            }
            return acc.monic();
        }
    }
    let (ca, pa) = a.content_primitive(v);
    let (cb, pb) = b.content_primitive(v);
    let cg = gcd(&ca, &cb);

    let (mut p, mut q) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = p.pseudo_rem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = Poly::one(nvars);
            break;
        }
        p = q;
        let (_, pp) = r.content_primitive(v);
        q = pp.monic();
    }
    cg.mul(&q).monic()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::display::poly_to_string(self, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_x(nv: usize) -> Poly {
        Poly::var(0, nv)
    }
    fn p_y(nv: usize) -> Poly {
        Poly::var(1, nv)
    }

    #[test]
    fn gcd_univariate() {
        // gcd(x^2-1, x^2+2x+1) = x+1
        let x = p_x(1);
        let a = x.pow(2).sub(&Poly::one(1));
        let b = x.pow(2).add(&x.scale(&crat_from_int(2))).add(&Poly::one(1));
        let g = gcd(&a, &b);
        let expect = x.add(&Poly::one(1));
        assert_eq!(g, expect);
    }

    #[test]
    fn gcd_multivariate() {
        // gcd((x+y)^2 * x, (x+y)*y) = x+y
        let x = p_x(2);
        let y = p_y(2);
        let s = x.add(&y);
        let a = s.pow(2).mul(&x);
        let b = s.mul(&y);
        assert_eq!(gcd(&a, &b), s.monic());
    }

    #[test]
    fn div_exact_roundtrip() {
        let x = p_x(2);
        let y = p_y(2);
        let a = x.pow(3).add(&y.pow(2)).add(&Poly::one(2));
        let b = x.add(&y.scale(&crat_from_int(5)));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn perfect_power_detection() {
        let x = p_x(2);
        let y = p_y(2);
        let base = x.add(&y.scale(&crat_from_int(2))).add(&Poly::one(2));
        let cube = base.pow(3);
        let (b, k) = cube.perfect_power().expect("cube detected");
        assert_eq!(k, 3);
        assert_eq!(b.monic(), base.monic());
        // squares are found when no higher power applies
        let (b2, k2) = base.pow(2).perfect_power().expect("square detected");
        assert_eq!((b2.monic(), k2), (base.monic(), 2));
        // non-powers yield nothing
        assert!(x.pow(2).add(&y).perfect_power().is_none());
        assert!(x.mul(&y).add(&Poly::one(2)).perfect_power().is_none());
    }

    #[test]
    fn kth_root_requires_exact_power() {
        let x = p_x(2);
        let y = p_y(2);
        let base = x.add(&y);
        assert_eq!(base.pow(4).kth_root(2).unwrap(), base.pow(2));
        assert!(base.pow(3).add(&Poly::one(2)).kth_root(3).is_none());
    }

    #[test]
    fn gcd_peels_perfect_powers() {
        let x = p_x(2);
        let y = p_y(2);
        let u = x.add(&y);
        let f = x.pow(2).add(&Poly::one(2)); // coprime to u
        // gcd(f·u², u³) = u²; the cube argument takes the peel fast path
        assert_eq!(gcd(&f.mul(&u.pow(2)), &u.pow(3)), u.pow(2).monic());
        // scalar factors on the power are irrelevant
        let scaled = u.pow(3).scale(&crat_from_int(4));
        assert_eq!(gcd(&f.mul(&u.pow(2)), &scaled), u.pow(2).monic());
        // reducible bases peel correctly too: gcd(x²y, (xy)²) = x²y
        let xy = x.mul(&y);
        assert_eq!(gcd(&x.pow(2).mul(&y), &xy.pow(2)), x.pow(2).mul(&y).monic());
    }

    #[test]
    fn gaussian_coefficients() {
        // (x + i)(x - i) = x^2 + 1
        let x = p_x(1);
        let i = Poly::constant(crat_i(), 1);
        let prod = x.add(&i).mul(&x.sub(&i));
        assert_eq!(prod, x.pow(2).add(&Poly::one(1)));
    }
}
