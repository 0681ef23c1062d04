//! Polya frequency functions and sequences as executable objects:
//! evaluation of the named families, exact rational bilateral Laplace
//! transforms of exponential polynomials, power-obstruction
//! certificates, Toeplitz checks for sequences, and the cosine/Jain
//! Hadamard-power test.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::kernel::KernelGrid;
use crate::matrix::{min_eigenvalue_sym, RationalMatrix, Verdict};
use crate::poly::{Poly, RationalFunction};
use crate::scalar::{Kind, Scalar};

/// One-sided supports vanish left of the origin; even supports are
/// symmetric in |x|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sides {
    OneSided,
    Even,
}

/// The function families of the Polya-frequency machinery.
#[derive(Debug, Clone)]
pub enum PffFamily {
    /// 0 for x < 0, d at 0, e^{-x} for x > 0; d in [0, 1].
    LambdaD { d: f64 },
    /// x e^{-x} on x >= 0.
    Phi,
    /// Normalized Gaussian exp(-x^2 / 4 gamma) / (2 sqrt(pi gamma)).
    GaussDensity { gamma: f64 },
    /// (alpha+1) e^{-alpha |x|} - alpha e^{-(alpha+1)|x|}.
    MAlpha { alpha: BigRational },
    /// c1 e^{-a1 x} + c2 e^{-a2 x} + c3 e^{-a3 x} on x >= 0, with
    /// c1 > 0, c1 + c2 + c3 = 0 and a1 c1 + a2 c2 + a3 c3 = 0.
    OneSidedN { a: [f64; 3], c: [f64; 3] },
    /// Exponential polynomial with exact rational data.
    ExpPoly {
        sides: Sides,
        terms: Vec<(BigRational, BigRational)>, // (coefficient, exponent)
    },
}

impl PffFamily {
    pub fn lambda(d: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::BadParameter(format!("d must lie in [0,1], got {d}")));
        }
        Ok(PffFamily::LambdaD { d })
    }

    pub fn m_alpha(alpha: BigRational) -> Result<Self, Error> {
        if !alpha.is_positive() {
            return Err(Error::BadParameter("alpha must be > 0".into()));
        }
        Ok(PffFamily::MAlpha { alpha })
    }

    /// Canonical coefficients c = (a3 - a2, -(a3 - a1), a2 - a1); the
    /// two linear constraints determine c up to positive scale.
    pub fn one_sided_n(a1: f64, a2: f64, a3: f64) -> Result<Self, Error> {
        if !(0.0 < a1 && a1 < a2 && a2 < a3) {
            return Err(Error::BadParameter(
                "exponents must satisfy 0 < a1 < a2 < a3".into(),
            ));
        }
        Ok(PffFamily::OneSidedN {
            a: [a1, a2, a3],
            c: [a3 - a2, -(a3 - a1), a2 - a1],
        })
    }

    pub fn gauss_density(gamma: f64) -> Result<Self, Error> {
        if gamma <= 0.0 {
            return Err(Error::BadParameter("gamma must be > 0".into()));
        }
        Ok(PffFamily::GaussDensity { gamma })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PffFamily::LambdaD { .. } => "lambda",
            PffFamily::Phi => "phi",
            PffFamily::GaussDensity { .. } => "gauss",
            PffFamily::MAlpha { .. } => "M",
            PffFamily::OneSidedN { .. } => "N",
            PffFamily::ExpPoly { .. } => "exppoly",
        }
    }
}

/// Pointwise value of a family member.
pub fn eval_pff(f: &PffFamily, x: f64) -> f64 {
    match f {
        PffFamily::LambdaD { d } => {
            if x < 0.0 {
                0.0
            } else if x == 0.0 {
                *d
            } else {
                (-x).exp()
            }
        }
        PffFamily::Phi => {
            if x <= 0.0 {
                0.0
            } else {
                x * (-x).exp()
            }
        }
        PffFamily::GaussDensity { gamma } => {
            (-x * x / (4.0 * gamma)).exp() / (2.0 * (std::f64::consts::PI * gamma).sqrt())
        }
        PffFamily::MAlpha { alpha } => {
            let a = alpha.to_f64().unwrap();
            (a + 1.0) * (-a * x.abs()).exp() - a * (-(a + 1.0) * x.abs()).exp()
        }
        PffFamily::OneSidedN { a, c } => {
            if x < 0.0 {
                0.0
            } else {
                c[0] * (-a[0] * x).exp() + c[1] * (-a[1] * x).exp() + c[2] * (-a[2] * x).exp()
            }
        }
        PffFamily::ExpPoly { sides, terms } => {
            let arg = match sides {
                Sides::OneSided => {
                    if x < 0.0 {
                        return 0.0;
                    }
                    x
                }
                Sides::Even => x.abs(),
            };
            terms
                .iter()
                .map(|(c, a)| c.to_f64().unwrap() * (-a.to_f64().unwrap() * arg).exp())
                .sum()
        }
    }
}

/// A bilateral Laplace transform together with the endpoints of its
/// strip of convergence.
#[derive(Debug, Clone)]
pub struct LaplaceTransform {
    pub rf: RationalFunction,
    pub strip: (f64, f64),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Transform of a one-sided sum: Sum c_i / (s + a_i), exact.
fn laplace_one_sided_exact(terms: &[(BigRational, BigRational)]) -> RationalFunction {
    let den = Poly::from_roots_negated(&terms.iter().map(|(_, a)| a.clone()).collect::<Vec<_>>());
    let mut num = Poly::zero();
    for (i, (c, _)) in terms.iter().enumerate() {
        let others: Vec<BigRational> = terms
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (_, a))| a.clone())
            .collect();
        num = num.add(&Poly::from_roots_negated(&others).scale(c));
    }
    RationalFunction::new_exact(num, den)
}

/// Transform of an even sum: Sum 2 a_i c_i / (a_i^2 - s^2), written
/// over the monic denominator Prod (s^2 - a_i^2).
fn laplace_even_exact(terms: &[(BigRational, BigRational)]) -> RationalFunction {
    // s^2 - a^2 factors.
    let factor = |a: &BigRational| Poly::new(vec![-(a * a), BigRational::zero(), rat(1)]);
    let mut den = Poly::constant(rat(1));
    for (_, a) in terms {
        den = den.mul(&factor(a));
    }
    let mut num = Poly::zero();
    for (i, (c, a)) in terms.iter().enumerate() {
        let mut others = Poly::constant(-(rat(2) * a * c));
        for (j, (_, aj)) in terms.iter().enumerate() {
            if j != i {
                others = others.mul(&factor(aj));
            }
        }
        num = num.add(&others);
    }
    RationalFunction::new_exact(num, den)
}

/// Exact rational bilateral Laplace transform of an exponential
/// polynomial family; the Gaussian family is rejected as the transform
/// is not rational.
pub fn laplace(f: &PffFamily) -> Result<LaplaceTransform, Error> {
    match f {
        PffFamily::GaussDensity { .. } => Err(Error::TranscendentalTransform),
        PffFamily::LambdaD { .. } => {
            // Integral of e^{-x(s+1)} over x >= 0.
            let rf = RationalFunction::new_exact(Poly::constant(rat(1)), Poly::linear(rat(1)));
            Ok(LaplaceTransform {
                rf,
                strip: (-1.0, f64::INFINITY),
            })
        }
        PffFamily::Phi => {
            let den = Poly::linear(rat(1)).mul(&Poly::linear(rat(1)));
            let rf = RationalFunction::new_exact(Poly::constant(rat(1)), den);
            Ok(LaplaceTransform {
                rf,
                strip: (-1.0, f64::INFINITY),
            })
        }
        PffFamily::MAlpha { alpha } => {
            let terms = vec![
                (alpha + rat(1), alpha.clone()),
                (-alpha.clone(), alpha + rat(1)),
            ];
            let rf = laplace_even_exact(&terms);
            let a = alpha.to_f64().unwrap();
            Ok(LaplaceTransform {
                rf,
                strip: (-a, a),
            })
        }
        PffFamily::OneSidedN { a, c } => {
            let den = Poly::new(vec![a[0], 1.0])
                .mul(&Poly::new(vec![a[1], 1.0]))
                .mul(&Poly::new(vec![a[2], 1.0]));
            let mut num = Poly::zero();
            for (i, &ci) in c.iter().enumerate() {
                let mut t = Poly::constant(ci);
                for (j, &aj) in a.iter().enumerate() {
                    if j != i {
                        t = t.mul(&Poly::new(vec![aj, 1.0]));
                    }
                }
                num = num.add(&t);
            }
            Ok(LaplaceTransform {
                rf: RationalFunction::new_float(num, den),
                strip: (-a[0], f64::INFINITY),
            })
        }
        PffFamily::ExpPoly { sides, terms } => {
            if terms.is_empty() {
                return Err(Error::BadParameter("empty exponential polynomial".into()));
            }
            let min_a = terms
                .iter()
                .map(|(_, a)| a.to_f64().unwrap())
                .fold(f64::INFINITY, f64::min);
            let (rf, strip) = match sides {
                Sides::OneSided => (laplace_one_sided_exact(terms), (-min_a, f64::INFINITY)),
                Sides::Even => (laplace_even_exact(terms), (-min_a, min_a)),
            };
            Ok(LaplaceTransform { rf, strip })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum ObstructionVerdict {
    PffCompatible,
    Obstructed,
}

/// One pole of q_n with the numerator value there; nonzero values
/// certify coprimality.
#[derive(Debug, Clone, Serialize)]
pub struct RootCheck {
    pub root: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub family: String,
    pub power: u32,
    /// p_n / q_n, exact for rational exponents.
    pub transform: RationalFunction,
    pub verdict: ObstructionVerdict,
    pub p_degree: Option<usize>,
    pub root_checks: Vec<RootCheck>,
    /// p_n(-n a3) / p_n(-n a1) for the one-sided family.
    pub gamma: Option<f64>,
}

impl Serialize for ObstructionReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ObstructionReport", 7)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("power", &self.power)?;
        st.serialize_field("transform", &self.transform.to_json())?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("p_degree", &self.p_degree)?;
        st.serialize_field("root_checks", &self.root_checks)?;
        st.serialize_field("gamma", &self.gamma)?;
        st.end()
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn multinomial(n: u32, i: u32, j: u32) -> f64 {
    // n! / (i! j! (n-i-j)!) for small n.
    let fact = |m: u32| -> f64 { (1..=m).map(|v| v as f64).product::<f64>().max(1.0) };
    fact(n) / (fact(i) * fact(j) * fact(n - i - j))
}

/// Exact transform data of M_alpha^n: the displayed partial-fraction
/// expansion with poles at +-(n alpha + k), k = 0..n.
fn m_alpha_power_transform(alpha: &BigRational, n: u32) -> (Poly<BigRational>, Poly<BigRational>) {
    let poles: Vec<BigRational> = (0..=n).map(|k| alpha * rat(n as i64) + rat(k as i64)).collect();
    let factor = |r: &BigRational| Poly::new(vec![-(r * r), BigRational::zero(), rat(1)]);
    let mut q = Poly::constant(rat(1));
    for r in &poles {
        q = q.mul(&factor(r));
    }
    let mut p = Poly::zero();
    for k in 0..=n {
        let sign = if (k + 1) % 2 == 0 { rat(1) } else { rat(-1) };
        let coeff = sign
            * BigRational::from_integer(binomial(n, k))
            * pow_rat(alpha, k)
            * pow_rat(&(alpha + rat(1)), n - k)
            * &poles[k as usize]
            * rat(2);
        let mut term = Poly::constant(coeff);
        for (j, r) in poles.iter().enumerate() {
            if j != k as usize {
                term = term.mul(&factor(r));
            }
        }
        p = p.add(&term);
    }
    (p, q)
}

fn pow_rat(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Certificate that the n-th power of the family is or is not
/// compatible with the Polya frequency property: the reciprocal
/// transform q_n / p_n must be a polynomial, which fails as soon as
/// p_n is non-constant and coprime to q_n.
pub fn power_obstruction(f: &PffFamily, n: u32) -> Result<ObstructionReport, Error> {
    if n < 1 {
        return Err(Error::BadParameter("power must be >= 1".into()));
    }
    match f {
        PffFamily::MAlpha { alpha } => {
            let (p, q) = m_alpha_power_transform(alpha, n);
            let poles: Vec<BigRational> =
                (0..=n).map(|k| alpha * rat(n as i64) + rat(k as i64)).collect();
            let mut root_checks = Vec::new();
            let mut coprime = true;
            for r in &poles {
                for s in [r.clone(), -r.clone()] {
                    let v = p.eval(&s);
                    if v.is_zero() {
                        coprime = false;
                    }
                    root_checks.push(RootCheck {
                        root: s.to_f64().unwrap(),
                        p_value: v.to_f64().unwrap(),
                    });
                }
            }
            let compatible = p.divides(&q);
            let p_degree = p.degree();
            let verdict = if compatible {
                ObstructionVerdict::PffCompatible
            } else {
                ObstructionVerdict::Obstructed
            };
            if verdict == ObstructionVerdict::Obstructed && !(coprime && p_degree >= Some(1)) {
                return Err(Error::BadParameter(
                    "obstruction certificate failed: p_n shares a root with q_n".into(),
                ));
            }
            Ok(ObstructionReport {
                family: "M".into(),
                power: n,
                transform: RationalFunction::new_exact(p, q),
                verdict,
                p_degree,
                root_checks,
                gamma: None,
            })
        }
        PffFamily::OneSidedN { a, c } => one_sided_obstruction(a, c, n),
        _ => Err(Error::BadParameter(
            "power obstruction applies to the M and N families".into(),
        )),
    }
}

fn one_sided_obstruction(a: &[f64; 3], c: &[f64; 3], n: u32) -> Result<ObstructionReport, Error> {
    // Multi-indices (i, j, k) with i + j + k = n, lexicographic.
    let mut idx = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            idx.push((i, j, n - i - j));
        }
    }
    let pole = |t: &(u32, u32, u32)| t.0 as f64 * a[0] + t.1 as f64 * a[1] + t.2 as f64 * a[2];

    // Reject coincident poles: rational dependence among the exponents.
    let scale = n as f64 * a[2];
    for (u, t1) in idx.iter().enumerate() {
        for t2 in idx.iter().skip(u + 1) {
            if (pole(t1) - pole(t2)).abs() <= 1e-9 * scale {
                return Err(Error::CoincidentPoles);
            }
        }
    }

    // p_n at the pole -(i a1 + j a2 + k a3) via the product formula;
    // no cancellation, unlike evaluating the expanded polynomial.
    let p_at = |t: &(u32, u32, u32)| -> f64 {
        let mut v = multinomial(n, t.0, t.1)
            * c[0].powi(t.0 as i32)
            * c[1].powi(t.1 as i32)
            * c[2].powi(t.2 as i32);
        for t2 in &idx {
            if t2 != t {
                v *= pole(t2) - pole(t);
            }
        }
        v
    };

    let mut root_checks = Vec::new();
    for t in &idx {
        let v = p_at(t);
        if v == 0.0 || !v.is_finite() {
            return Err(Error::CoincidentPoles);
        }
        root_checks.push(RootCheck {
            root: -pole(t),
            p_value: v,
        });
    }
    // gamma_n = p_n(-n a3) / p_n(-n a1).
    let gamma = p_at(&(0, 0, n)) / p_at(&(n, 0, 0));

    // Expanded float polynomials for the report.
    let mut q = Poly::new(vec![1.0f64]);
    for t in &idx {
        q = q.mul(&Poly::new(vec![pole(t), 1.0]));
    }
    let mut p = Poly::<f64>::zero();
    for t in &idx {
        let coeff = multinomial(n, t.0, t.1)
            * c[0].powi(t.0 as i32)
            * c[1].powi(t.1 as i32)
            * c[2].powi(t.2 as i32);
        let mut term = Poly::new(vec![coeff]);
        for t2 in &idx {
            if t2 != t {
                term = term.mul(&Poly::new(vec![pole(t2), 1.0]));
            }
        }
        p = p.add(&term);
    }

    let verdict = if n == 1 {
        ObstructionVerdict::PffCompatible
    } else if (gamma.abs() - 1.0).abs() > 1e-6 {
        ObstructionVerdict::Obstructed
    } else {
        return Err(Error::BadParameter(
            "cannot certify non-constant p_n: gamma ratio is too close to 1".into(),
        ));
    };
    Ok(ObstructionReport {
        family: "N".into(),
        power: n,
        transform: RationalFunction::new_float(p, q),
        verdict,
        p_degree: None,
        root_checks,
        gamma: Some(gamma),
    })
}

/// A finitely supported (bi-infinite) sequence: terms start at `offset`
/// and vanish elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct PfSequence {
    pub offset: i64,
    pub terms: Vec<Scalar>,
}

impl PfSequence {
    pub fn new(offset: i64, terms: Vec<Scalar>) -> Result<Self, Error> {
        if terms.is_empty() || terms.iter().all(|t| t.is_zero()) {
            return Err(Error::BadParameter("sequence needs a nonzero term".into()));
        }
        let kind = terms[0].kind();
        if terms.iter().any(|t| t.kind() != kind) {
            return Err(Error::MixedKinds);
        }
        Ok(PfSequence { offset, terms })
    }

    pub fn from_ints(terms: &[i64]) -> Self {
        PfSequence::new(0, terms.iter().map(|&t| Scalar::from_int(t)).collect()).unwrap()
    }

    pub fn kind(&self) -> Kind {
        self.terms[0].kind()
    }

    /// a_m with zeros outside the stored window.
    pub fn term(&self, m: i64) -> Scalar {
        let i = m - self.offset;
        if i < 0 || i as usize >= self.terms.len() {
            match self.kind() {
                Kind::Exact => Scalar::Exact(BigRational::zero()),
                Kind::Float => Scalar::Float(0.0),
            }
        } else {
            self.terms[i as usize].clone()
        }
    }

    /// The Toeplitz matrix (a_{i-j}) over a square index window.
    pub fn toeplitz(&self, window: usize) -> RationalMatrix {
        match self.kind() {
            Kind::Exact => RationalMatrix::from_fn_exact(window, window, |i, j| {
                self.term(i as i64 - j as i64)
                    .as_exact()
                    .unwrap()
                    .clone()
            }),
            Kind::Float => RationalMatrix::from_fn_f64(window, window, |i, j| {
                self.term(i as i64 - j as i64).to_f64()
            }),
        }
    }
}

/// Lax minor check of the sequence's Toeplitz matrix over the window.
/// The window must be large enough to expose every minor of order <= p
/// touching the support.
pub fn pf_sequence_check(a: &PfSequence, p: usize, window: usize) -> Result<Verdict, Error> {
    let needed = a.terms.len() + p - 1;
    if window < needed {
        return Err(Error::BadParameter(format!(
            "window {window} too small; need at least {needed} for order {p}"
        )));
    }
    let t = a.toeplitz(window);
    let tol = match a.kind() {
        Kind::Exact => 0.0,
        Kind::Float => 1e-9,
    };
    t.check(p, false, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratingPolyReport {
    pub pass: bool,
    pub degree: usize,
    pub same_sign_coeffs: bool,
    pub distinct_real_roots: usize,
    pub positive_real_roots: usize,
}

/// PASS iff all roots of the generating polynomial are real and
/// non-positive, certified by Sturm sequences over the rationals;
/// same-sign coefficients are necessary and checked first.
pub fn generating_poly_pf_check(coeffs: &[BigRational]) -> Result<GeneratingPolyReport, Error> {
    let p = Poly::new(coeffs.to_vec());
    if p.is_zero() {
        return Err(Error::BadParameter("zero polynomial".into()));
    }
    let degree = p.degree().unwrap();
    let pos = p.coeffs().iter().any(|c| c.is_positive());
    let neg = p.coeffs().iter().any(|c| c.is_negative());
    let same_sign_coeffs = !(pos && neg);
    let sf = p.squarefree();
    let distinct_real_roots = sf.count_real_roots(
        crate::poly::SturmPoint::NegInfinity,
        crate::poly::SturmPoint::PosInfinity,
    );
    let positive_real_roots = sf.count_real_roots(
        crate::poly::SturmPoint::Value(BigRational::zero()),
        crate::poly::SturmPoint::PosInfinity,
    );
    let pass = same_sign_coeffs && p.all_roots_real_nonpositive();
    Ok(GeneratingPolyReport {
        pass,
        degree,
        same_sign_coeffs,
        distinct_real_roots,
        positive_real_roots,
    })
}

/// Samples a family at n/N over the inclusive window of integer indices.
pub fn discretize_pff(f: &PffFamily, big_n: u32, window: (i64, i64)) -> Result<PfSequence, Error> {
    if big_n < 1 {
        return Err(Error::BadParameter("N must be >= 1".into()));
    }
    if window.0 > window.1 {
        return Err(Error::BadParameter("empty window".into()));
    }
    let terms: Vec<Scalar> = (window.0..=window.1)
        .map(|k| Scalar::Float(eval_pff(f, k as f64 / big_n as f64)))
        .collect();
    PfSequence::new(window.0, terms)
}

#[derive(Debug, Clone, Serialize)]
pub struct JainReport {
    pub n: usize,
    pub theta: f64,
    pub alpha: f64,
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub tn: Verdict,
    /// Largest |3x3 minor| of the base cosine matrix; zero up to float
    /// noise because the kernel has rank two.
    pub max_abs_3x3_minor: f64,
    /// Largest deviation of 2x2 minors from sin((i2-i1) t) sin((j2-j1) t).
    pub rank2_identity_dev: f64,
}

/// Builds A = (cos((i-j) theta)), takes its Hadamard alpha-power, and
/// decides positive semidefiniteness (eigenvalue threshold) and total
/// non-negativity (minor check); also verifies the rank-two structure
/// of the base matrix.
pub fn cosine_jain(n: usize, theta: f64, alpha: f64) -> Result<(RationalMatrix, JainReport), Error> {
    if n < 2 {
        return Err(Error::BadParameter("n must be >= 2".into()));
    }
    let limit = std::f64::consts::PI / (2.0 * n as f64 - 2.0);
    if !(0.0 < theta && theta < limit) {
        return Err(Error::BadParameter(format!(
            "theta must lie in (0, pi/(2n-2)) = (0, {limit}), got {theta}"
        )));
    }
    if alpha < 0.0 {
        return Err(Error::BadParameter("alpha must be >= 0".into()));
    }
    let base = RationalMatrix::from_fn_f64(n, n, |i, j| {
        ((i as f64 - j as f64) * theta).cos()
    });
    let power = base.apply_entrywise(&crate::matrix::TransformSpec::power(1.0, alpha))?;

    let min_eigenvalue = min_eigenvalue_sym(&power);
    let mut max_entry: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            max_entry = max_entry.max(power.get_f64(i, j).abs());
        }
    }
    let psd = min_eigenvalue >= -1e-9 * max_entry * n as f64;
    let tn = power.check(n, false, 1e-9)?;

    let mut max_abs_3x3_minor: f64 = 0.0;
    if n >= 3 {
        for (idx, v) in base.minors(3)?.filter(|(i, _)| i.order() == 3) {
            let _ = idx;
            max_abs_3x3_minor = max_abs_3x3_minor.max(v.to_f64().abs());
        }
    }
    let mut rank2_identity_dev: f64 = 0.0;
    for (idx, v) in base.minors(2)?.filter(|(i, _)| i.order() == 2) {
        let want = ((idx.rows[1] - idx.rows[0]) as f64 * theta).sin()
            * ((idx.cols[1] - idx.cols[0]) as f64 * theta).sin();
        rank2_identity_dev = rank2_identity_dev.max((v.to_f64() - want).abs());
    }

    let report = JainReport {
        n,
        theta,
        alpha,
        psd,
        min_eigenvalue,
        tn,
        max_abs_3x3_minor,
        rank2_identity_dev,
    };
    Ok((base, report))
}

/// Finite-atom moment kernel K(x, y) = Sum c_k u_k^{x+y} sampled on a
/// grid; TN by construction with sampled rank at most the atom count.
pub fn moment_hankel(atoms: &[f64], weights: &[f64], grid: &[f64]) -> Result<KernelGrid, Error> {
    if atoms.is_empty() || atoms.len() != weights.len() {
        return Err(Error::BadParameter(
            "need equally many atoms and weights".into(),
        ));
    }
    if atoms.iter().any(|&u| u <= 0.0) || weights.iter().any(|&c| c <= 0.0) {
        return Err(Error::BadParameter("atoms and weights must be > 0".into()));
    }
    for (i, &u) in atoms.iter().enumerate() {
        for &v in &atoms[i + 1..] {
            if u == v {
                return Err(Error::BadParameter("atoms must be distinct".into()));
            }
        }
    }
    KernelGrid::from_fn(grid.to_vec(), grid.to_vec(), |x, y| {
        atoms
            .iter()
            .zip(weights)
            .map(|(&u, &c)| c * u.powf(x + y))
            .sum()
    })
}
