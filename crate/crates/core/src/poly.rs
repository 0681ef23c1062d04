//! Polynomials over a field (exact rationals or binary64), rational
//! functions, and Sturm-sequence real-root counting over the rationals.
//!
//! Coefficients are stored in ascending degree order with no trailing
//! zeros; the zero polynomial has an empty coefficient vector.

use num::{BigRational, Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Coefficient field operations needed by the polynomial routines.
pub trait Field:
    Clone
    + PartialEq
    + num::Zero
    + num::One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + num::Zero
        + num::One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// x + c, handy for building products of linear factors.
    pub fn linear(c: T) -> Self {
        Poly::new(vec![c, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            out.push(a + b);
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().cloned().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.leading().unwrap().clone() / lead.clone();
            let shift = rd - dd;
            quot[shift] = f.clone();
            let mut sub = vec![T::zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c.clone() * f.clone()));
            rem = rem.sub(&Poly::new(sub));
        }
        (Poly::new(quot), rem)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        let mut k = T::one();
        for c in &self.coeffs[1..] {
            out.push(c.clone() * k.clone());
            k = k + T::one();
        }
        Poly::new(out)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Product of linear factors (x + c) over the given constants.
    pub fn from_roots_negated(cs: &[T]) -> Self {
        let mut p = Poly::constant(T::one());
        for c in cs {
            p = p.mul(&Poly::linear(c.clone()));
        }
        p
    }
}

impl Poly<BigRational> {
    pub fn to_float(&self) -> Poly<f64> {
        Poly::new(self.coeffs.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect())
    }

    /// Monic polynomial gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree part p / gcd(p, p').
    pub fn squarefree(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn sign_at(p: &Self, x: &SturmPoint) -> i8 {
        match x {
            SturmPoint::Value(v) => {
                let y = p.eval(v);
                if y.is_zero() {
                    0
                } else if y.is_positive() {
                    1
                } else {
                    -1
                }
            }
            SturmPoint::NegInfinity => match p.degree() {
                None => 0,
                Some(d) => {
                    let l = p.leading().unwrap();
                    let s = if l.is_positive() { 1 } else { -1 };
                    if d % 2 == 0 {
                        s
                    } else {
                        -s
                    }
                }
            },
            SturmPoint::PosInfinity => match p.leading() {
                None => 0,
                Some(l) => {
                    if l.is_positive() {
                        1
                    } else {
                        -1
                    }
                }
            },
        }
    }

    fn sign_variations(chain: &[Self], x: &SturmPoint) -> usize {
        let mut count = 0;
        let mut prev = 0i8;
        for p in chain {
            let s = Self::sign_at(p, x);
            if s != 0 {
                if prev != 0 && s != prev {
                    count += 1;
                }
                prev = s;
            }
        }
        count
    }

    /// Number of distinct real roots in the half-open interval (a, b],
    /// where either bound may be infinite. Requires a squarefree input
    /// for exact counts in the presence of repeated roots.
    pub fn count_real_roots(&self, a: SturmPoint, b: SturmPoint) -> usize {
        if self.is_zero() || self.degree() == Some(0) {
            return 0;
        }
        let chain = self.sturm_chain();
        let va = Self::sign_variations(&chain, &a);
        let vb = Self::sign_variations(&chain, &b);
        va.saturating_sub(vb)
    }

    /// Certifies that every complex root is real and non-positive.
    ///
    /// The squarefree part must have as many distinct real roots as its
    /// degree (all roots real), none of them in (0, infinity).
    pub fn all_roots_real_nonpositive(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == Some(0) {
            return true;
        }
        let sf = self.squarefree();
        let d = sf.degree().unwrap();
        let total = sf.count_real_roots(SturmPoint::NegInfinity, SturmPoint::PosInfinity);
        if total != d {
            return false;
        }
        let positive = sf.count_real_roots(
            SturmPoint::Value(BigRational::zero()),
            SturmPoint::PosInfinity,
        );
        positive == 0
    }
}

/// Evaluation point for Sturm sign variations.
#[derive(Debug, Clone)]
pub enum SturmPoint {
    NegInfinity,
    Value(BigRational),
    PosInfinity,
}

/// Coefficients of one side of a rational function: exact or float.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyCoeffs {
    Exact(Poly<BigRational>),
    Float(Poly<f64>),
}

impl PolyCoeffs {
    pub fn is_exact(&self) -> bool {
        matches!(self, PolyCoeffs::Exact(_))
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            PolyCoeffs::Exact(p) => p.degree(),
            PolyCoeffs::Float(p) => p.degree(),
        }
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        match self {
            PolyCoeffs::Exact(p) => p.to_float().eval(&s),
            PolyCoeffs::Float(p) => p.eval(&s),
        }
    }

    fn coeff_json(&self) -> Vec<serde_json::Value> {
        match self {
            PolyCoeffs::Exact(p) => p
                .coeffs()
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
            PolyCoeffs::Float(p) => p.coeffs().iter().map(|c| serde_json::json!(c)).collect(),
        }
    }
}

/// A quotient p/q of polynomials with q kept monic. The gcd of the two
/// sides is reported on demand and never cancelled silently.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: PolyCoeffs,
    den: PolyCoeffs,
}

impl RationalFunction {
    pub fn new_exact(num: Poly<BigRational>, den: Poly<BigRational>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let lead = den.leading().unwrap().clone();
        let inv = BigRational::new(lead.denom().clone(), lead.numer().clone());
        RationalFunction {
            num: PolyCoeffs::Exact(num.scale(&inv)),
            den: PolyCoeffs::Exact(den.monic()),
        }
    }

    pub fn new_float(num: Poly<f64>, den: Poly<f64>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let lead = *den.leading().unwrap();
        RationalFunction {
            num: PolyCoeffs::Float(num.scale(&(1.0 / lead))),
            den: PolyCoeffs::Float(den.monic()),
        }
    }

    pub fn num(&self) -> &PolyCoeffs {
        &self.num
    }

    pub fn den(&self) -> &PolyCoeffs {
        &self.den
    }

    pub fn is_exact(&self) -> bool {
        self.num.is_exact() && self.den.is_exact()
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        self.num.eval_f64(s) / self.den.eval_f64(s)
    }

    /// gcd of numerator and denominator (exact variant only).
    pub fn gcd(&self) -> Option<Poly<BigRational>> {
        match (&self.num, &self.den) {
            (PolyCoeffs::Exact(p), PolyCoeffs::Exact(q)) => Some(p.gcd(q)),
            _ => None,
        }
    }

    /// Sum with a common denominator; exactness survives only if both
    /// sides are exact.
    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        match (&self.num, &self.den, &other.num, &other.den) {
            (
                PolyCoeffs::Exact(p1),
                PolyCoeffs::Exact(q1),
                PolyCoeffs::Exact(p2),
                PolyCoeffs::Exact(q2),
            ) => {
                let num = p1.mul(q2).add(&p2.mul(q1));
                let den = q1.mul(q2);
                RationalFunction::new_exact(num, den)
            }
            _ => {
                let p1 = self.num.to_float_poly();
                let q1 = self.den.to_float_poly();
                let p2 = other.num.to_float_poly();
                let q2 = other.den.to_float_poly();
                RationalFunction::new_float(p1.mul(&q2).add(&p2.mul(&q1)), q1.mul(&q2))
            }
        }
    }

    /// JSON with coefficient lists in ascending degree order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "exact": self.is_exact(),
            "num": self.num.coeff_json(),
            "den": self.den.coeff_json(),
        })
    }
}

impl PolyCoeffs {
    fn to_float_poly(&self) -> Poly<f64> {
        match self {
            PolyCoeffs::Exact(p) => p.to_float(),
            PolyCoeffs::Float(p) => p.clone(),
        }
    }
}
