//! Explicit TP completions: embedding a TP 2x2 matrix into a positive
//! multiple of a generalized Vandermonde matrix at any placement, and a
//! symmetric TP 2x2 into a TP continuous Hankel kernel.
//!
//! Every TP 2x2 matrix equals lambda^{-1} (u_i^{a_j}) for positive
//! lambda, u and real exponents a, with both sequences increasing or
//! both decreasing; the decreasing case flips sign in exponential
//! coordinates. The construction branches on entry equalities because
//! the generic closed form divides by log(v/x).

use serde::Serialize;

use crate::error::Error;
use crate::kernel::KernelGrid;
use crate::matrix::RationalMatrix;

/// Tolerance for strict certification of materialized embeddings.
/// High-order minors of smooth TP kernels sit orders of magnitude
/// below their Hadamard bound, while float determinant noise is around
/// 1e-14 of it; 1e-12 separates the two for orders up to seven.
pub const CERT_TOL: f64 = 1e-12;

/// Which branch of the case analysis produced the embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompletionCase {
    /// Three equal entries; the label picks the position of the odd one.
    A1,
    A2,
    A3,
    A4,
    /// A constant row or column.
    A5,
    A6,
    A7,
    A8,
    /// The lambda / alpha2 closed form.
    Generic,
}

/// Affine map t -> slope * t + intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    pub slope: f64,
    pub intercept: f64,
}

impl AffineMap {
    fn through(t0: f64, v0: f64, t1: f64, v1: f64) -> Self {
        let slope = (v1 - v0) / (t1 - t0);
        AffineMap {
            slope,
            intercept: v0 - slope * t0,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }
}

/// A scaled generalized Vandermonde embedding of a TP 2x2 matrix:
/// entry (r, c) of the materialized matrix is
/// lambda^{-1} exp(phi_x(r) * phi_y(c)).
#[derive(Debug, Clone, Serialize)]
pub struct VandermondeEmbedding {
    pub lambda: f64,
    /// Exponential row coordinates at the two placement rows (ascending).
    pub alpha: (f64, f64),
    /// Exponential column coordinates at the two placement columns.
    pub beta: (f64, f64),
    pub phi_x: AffineMap,
    pub phi_y: AffineMap,
    pub shape: (usize, usize),
    pub placement: ((usize, usize), (usize, usize)),
    pub case: CompletionCase,
    /// The branch's raw scale and (u, exponent) data before the
    /// ascending normalization.
    pub raw_lambda: f64,
    pub raw_u: (f64, f64),
    pub raw_exponents: (f64, f64),
}

fn is_tp_2x2(v: f64, w: f64, x: f64, y: f64) -> bool {
    v > 0.0 && w > 0.0 && x > 0.0 && y > 0.0 && v * y - w * x > 0.0
}

/// Raw branch output: lambda A = (u_i^{alpha_j}) with consistent
/// ordering (both ascending or both descending).
struct RawForm {
    case: CompletionCase,
    lambda: f64,
    u: (f64, f64),
    a: (f64, f64),
}

/// Equality of entries decides the branch: exact matrices compare
/// exactly (equal rationals convert to identical floats), float ones
/// within relative 1e-12, since the generic formula divides by
/// log(v/x).
fn raw_form(v: f64, w: f64, x: f64, y: f64, exact: bool) -> RawForm {
    let eq = move |p: f64, q: f64| {
        if exact {
            p == q
        } else {
            (p - q).abs() <= 1e-12 * p.abs().max(q.abs())
        }
    };

    // Three equal entries. TP rules out v = w = x = y.
    if eq(w, x) && eq(x, y) {
        // [[t, 1], [1, 1]] pattern, t > 1.
        let t = v / w;
        return RawForm {
            case: CompletionCase::A1,
            lambda: 1.0 / w,
            u: (t, 1.0),
            a: (1.0, 0.0),
        };
    }
    if eq(v, x) && eq(x, y) {
        // [[1, t], [1, 1]], t < 1.
        let t = w / v;
        return RawForm {
            case: CompletionCase::A2,
            lambda: 1.0 / v,
            u: (t, 1.0),
            a: (0.0, 1.0),
        };
    }
    if eq(v, w) && eq(w, y) {
        // [[1, 1], [t, 1]], t < 1.
        let t = x / v;
        return RawForm {
            case: CompletionCase::A3,
            lambda: 1.0 / v,
            u: (1.0, t),
            a: (1.0, 0.0),
        };
    }
    if eq(v, w) && eq(w, x) {
        // [[1, 1], [1, t]], t > 1.
        let t = y / v;
        return RawForm {
            case: CompletionCase::A4,
            lambda: 1.0 / v,
            u: (1.0, t),
            a: (0.0, 1.0),
        };
    }

    // A constant row or column.
    if eq(v, w) {
        // [[1, 1], [X, Y]]: u = (1, X), exponents (1, log Y / log X).
        let (xx, yy) = (x / v, y / v);
        return RawForm {
            case: CompletionCase::A5,
            lambda: 1.0 / v,
            u: (1.0, xx),
            a: (1.0, yy.ln() / xx.ln()),
        };
    }
    if eq(x, y) {
        // [[V, W], [1, 1]]: u = (V, 1), exponents (1, log W / log V).
        let (vv, ww) = (v / x, w / x);
        return RawForm {
            case: CompletionCase::A6,
            lambda: 1.0 / x,
            u: (vv, 1.0),
            a: (1.0, ww.ln() / vv.ln()),
        };
    }
    if eq(w, y) {
        // [[V, 1], [X, 1]]: second exponent 0.
        let (vv, xx) = (v / w, x / w);
        return RawForm {
            case: CompletionCase::A7,
            lambda: 1.0 / w,
            u: (vv, xx),
            a: (1.0, 0.0),
        };
    }
    if eq(v, x) {
        // [[1, W], [1, Y]]: first exponent 0.
        let (ww, yy) = (w / v, y / v);
        return RawForm {
            case: CompletionCase::A8,
            lambda: 1.0 / v,
            u: (ww, yy),
            a: (0.0, 1.0),
        };
    }

    // Generic: solve (L+V)(L+Y) = (L+W)(L+X) for L = log lambda.
    let (lv, lw, lx, ly) = (v.ln(), w.ln(), x.ln(), y.ln());
    let lambda = ((lw * lx - lv * ly) / (lv + ly - lw - lx)).exp();
    let u1 = lambda * v;
    let u2 = lambda * x;
    let a2 = (w / y).ln() / (v / x).ln();
    RawForm {
        case: CompletionCase::Generic,
        lambda,
        u: (u1, u2),
        a: (1.0, a2),
    }
}

/// Embeds a TP 2x2 matrix [[v, w], [x, y]] into an m x n positive
/// multiple of a generalized Vandermonde matrix so that the placement
/// rows (i1 < i2) and columns (j1 < j2) reproduce the input. Indices
/// are zero-based.
pub fn embed_tp_2x2(
    a: &RationalMatrix,
    m: usize,
    n: usize,
    i1: usize,
    i2: usize,
    j1: usize,
    j2: usize,
) -> Result<(VandermondeEmbedding, RationalMatrix), Error> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::NotTp2x2);
    }
    let (v, w) = (a.get_f64(0, 0), a.get_f64(0, 1));
    let (x, y) = (a.get_f64(1, 0), a.get_f64(1, 1));
    if !is_tp_2x2(v, w, x, y) {
        return Err(Error::NotTp2x2);
    }
    if !(i1 < i2 && i2 < m && j1 < j2 && j2 < n) {
        return Err(Error::BadParameter(format!(
            "placement ({i1},{i2})x({j1},{j2}) does not fit in {m}x{n}"
        )));
    }

    let raw = raw_form(v, w, x, y, a.kind() == crate::scalar::Kind::Exact);
    // Exponential coordinates: lambda A = (exp(alpha_i beta_j)) with
    // alpha_i = log u_i, beta_j = the exponents. Descending pairs flip
    // to ascending without changing any entry.
    let (mut a1, mut a2) = (raw.u.0.ln(), raw.u.1.ln());
    let (mut b1, mut b2) = raw.a;
    if a1 > a2 {
        (a1, a2, b1, b2) = (-a1, -a2, -b1, -b2);
    }
    debug_assert!(a1 < a2 && b1 < b2, "ordering after normalization");

    let phi_x = AffineMap::through(i1 as f64, a1, i2 as f64, a2);
    let phi_y = AffineMap::through(j1 as f64, b1, j2 as f64, b2);
    let lambda = raw.lambda;
    let mat = RationalMatrix::from_fn_f64(m, n, |r, c| {
        (phi_x.eval(r as f64) * phi_y.eval(c as f64)).exp() / lambda
    });
    let emb = VandermondeEmbedding {
        lambda,
        alpha: (a1, a2),
        beta: (b1, b2),
        phi_x,
        phi_y,
        shape: (m, n),
        placement: ((i1, i2), (j1, j2)),
        case: raw.case,
        raw_lambda: raw.lambda,
        raw_u: raw.u,
        raw_exponents: raw.a,
    };
    Ok((emb, mat))
}

/// Continuous Hankel embedding of a symmetric TP 2x2 matrix
/// [[a, b], [b, c]]: the kernel a exp(alpha (x+y)^2 + beta (x+y))
/// reproduces the matrix at (0, 1), then an affine change of variables
/// moves the placement to (x1, x2).
#[derive(Debug, Clone, Serialize)]
pub struct HankelEmbedding {
    pub scale: f64,
    pub alpha: f64,
    pub beta: f64,
    pub placement: (f64, f64),
}

impl HankelEmbedding {
    /// Kernel value at (x, y); Hankel in x + y.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (x1, x2) = self.placement;
        let s = ((x - x1) + (y - x1)) / (x2 - x1);
        self.scale * (self.alpha * s * s + self.beta * s).exp()
    }

    /// Samples the kernel on a grid.
    pub fn sample(&self, coords: &[f64]) -> Result<KernelGrid, Error> {
        KernelGrid::from_fn(coords.to_vec(), coords.to_vec(), |x, y| self.eval(x, y))
    }
}

/// alpha = log(ac/b^2)/2 and beta = log(b^4/(a^3 c))/2.
pub fn embed_sym_2x2(a: &RationalMatrix, x1: f64, x2: f64) -> Result<HankelEmbedding, Error> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::NotSymTp2x2);
    }
    let (aa, b1) = (a.get_f64(0, 0), a.get_f64(0, 1));
    let (b2, cc) = (a.get_f64(1, 0), a.get_f64(1, 1));
    if b1 != b2 || aa <= 0.0 || b1 <= 0.0 || cc <= 0.0 || aa * cc <= b1 * b1 {
        return Err(Error::NotSymTp2x2);
    }
    if x1 >= x2 {
        return Err(Error::BadParameter("placement needs x1 < x2".into()));
    }
    let alpha = 0.5 * (aa * cc / (b1 * b1)).ln();
    let beta = 0.5 * (b1.powi(4) / (aa.powi(3) * cc)).ln();
    Ok(HankelEmbedding {
        scale: aa,
        alpha,
        beta,
        placement: (x1, x2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat2(v: f64, w: f64, x: f64, y: f64) -> RationalMatrix {
        RationalMatrix::from_f64(vec![vec![v, w], vec![x, y]]).unwrap()
    }

    fn assert_round_trip(emb_mat: &RationalMatrix, a: &RationalMatrix, p: ((usize, usize), (usize, usize))) {
        let ((i1, i2), (j1, j2)) = p;
        for (pi, r) in [i1, i2].into_iter().enumerate() {
            for (pj, c) in [j1, j2].into_iter().enumerate() {
                let got = emb_mat.get_f64(r, c);
                let want = a.get_f64(pi, pj);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "entry ({r},{c}): got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn three_equal_case_a1() {
        // [[3, 1], [1, 1]]: u = (3, 1), exponents (1, 0), lambda = 1.
        let a = mat2(3.0, 1.0, 1.0, 1.0);
        let (emb, mat) = embed_tp_2x2(&a, 3, 3, 0, 1, 0, 1).unwrap();
        assert_eq!(emb.case, CompletionCase::A1);
        assert_eq!(emb.raw_lambda, 1.0);
        assert_eq!(emb.raw_u, (3.0, 1.0));
        assert_eq!(emb.raw_exponents, (1.0, 0.0));
        assert_round_trip(&mat, &a, emb.placement);
        assert!(mat.fekete_tp(1e-9).unwrap().passed());
    }

    #[test]
    fn generic_sign_flip_example() {
        // [[e, 1], [1, e]]: lambda = e^{-1/2}, alpha_2 = -1 before the
        // flip; entries survive the flip unchanged.
        let e = std::f64::consts::E;
        let a = mat2(e, 1.0, 1.0, e);
        let (emb, mat) = embed_tp_2x2(&a, 4, 4, 1, 2, 1, 2).unwrap();
        assert_eq!(emb.case, CompletionCase::Generic);
        assert!((emb.raw_lambda - (-0.5f64).exp()).abs() < 1e-14);
        assert!((emb.raw_exponents.1 - (-1.0)).abs() < 1e-14);
        assert!(emb.alpha.0 < emb.alpha.1 && emb.beta.0 < emb.beta.1);
        assert_round_trip(&mat, &a, emb.placement);
        assert!(mat.fekete_tp(1e-9).unwrap().passed());
    }

    #[test]
    fn all_branches_reachable() {
        let e = std::f64::consts::E;
        let cases = [
            (mat2(3.0, 1.0, 1.0, 1.0), CompletionCase::A1),
            (mat2(1.0, 0.5, 1.0, 1.0), CompletionCase::A2),
            (mat2(1.0, 1.0, 0.5, 1.0), CompletionCase::A3),
            (mat2(1.0, 1.0, 1.0, 4.0), CompletionCase::A4),
            (mat2(2.0, 2.0, 1.0, 3.0), CompletionCase::A5),
            (mat2(3.0, 2.0, 1.5, 1.5), CompletionCase::A6),
            (mat2(3.0, 2.0, 0.5, 2.0), CompletionCase::A7),
            (mat2(2.0, 1.0, 2.0, 3.0), CompletionCase::A8),
            (mat2(e, 1.0, 1.0, e), CompletionCase::Generic),
        ];
        for (a, want) in cases {
            let (emb, mat) = embed_tp_2x2(&a, 4, 5, 1, 2, 2, 3).unwrap();
            assert_eq!(emb.case, want, "matrix {a:?}");
            assert_round_trip(&mat, &a, emb.placement);
            assert!(
                mat.fekete_tp(1e-9).unwrap().passed(),
                "not TP for case {want:?}"
            );
        }
    }

    #[test]
    fn rejects_non_tp() {
        assert!(embed_tp_2x2(&mat2(1.0, 2.0, 3.0, 4.0), 3, 3, 0, 1, 0, 1).is_err());
        assert!(embed_tp_2x2(&mat2(1.0, 1.0, 1.0, 1.0), 3, 3, 0, 1, 0, 1).is_err());
        assert!(embed_tp_2x2(&mat2(1.0, 0.0, 0.0, 1.0), 3, 3, 0, 1, 0, 1).is_err());
    }

    #[test]
    fn sym_embedding_formulas() {
        // [[2, 1], [1, 2]]: alpha = log 2, beta = -2 log 2.
        let a = mat2(2.0, 1.0, 1.0, 2.0);
        let emb = embed_sym_2x2(&a, 0.0, 1.0).unwrap();
        assert!((emb.alpha - 2f64.ln()).abs() < 1e-14);
        assert!((emb.beta + 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((emb.eval(0.0, 0.0) - 2.0).abs() < 1e-12);
        assert!((emb.eval(0.0, 1.0) - 1.0).abs() < 1e-12);
        assert!((emb.eval(1.0, 1.0) - 2.0).abs() < 1e-12);

        // [[1, 1/2], [1/2, 1]]: alpha = log(4)/2, beta = log(1/16)/2.
        let b = mat2(1.0, 0.5, 0.5, 1.0);
        let emb = embed_sym_2x2(&b, 0.0, 1.0).unwrap();
        assert!((emb.alpha - 0.5 * 4f64.ln()).abs() < 1e-14);
        assert!((emb.beta - 0.5 * (1.0 / 16.0f64).ln()).abs() < 1e-14);

        // [[1, 1/e], [1/e, 1]]: alpha = 1, beta = -2.
        let e = std::f64::consts::E;
        let c = mat2(1.0, 1.0 / e, 1.0 / e, 1.0);
        let emb = embed_sym_2x2(&c, 0.0, 1.0).unwrap();
        assert!((emb.alpha - 1.0).abs() < 1e-14);
        assert!((emb.beta + 2.0).abs() < 1e-14);
    }

    #[test]
    fn sym_embedding_respects_placement() {
        let a = mat2(2.0, 1.0, 1.0, 3.0);
        let emb = embed_sym_2x2(&a, -1.5, 2.5).unwrap();
        assert!((emb.eval(-1.5, -1.5) - 2.0).abs() < 1e-12);
        assert!((emb.eval(-1.5, 2.5) - 1.0).abs() < 1e-12);
        assert!((emb.eval(2.5, 2.5) - 3.0).abs() < 1e-12);
        // Sampled grids through the placement are strictly TP. High
        // orders of smooth kernels have minors far below the Hadamard
        // bound, hence the certification tolerance.
        let grid = emb.sample(&[-4.0, -1.5, 0.5, 2.5, 5.0, 8.0]).unwrap();
        let v = grid.check(6, true, CERT_TOL).unwrap();
        assert!(v.passed(), "witness: {:?}", v.witness);
    }

    #[test]
    fn sym_rejects_bad_input() {
        assert!(embed_sym_2x2(&mat2(1.0, 2.0, 2.0, 1.0), 0.0, 1.0).is_err());
        assert!(embed_sym_2x2(&mat2(1.0, 0.5, 0.4, 1.0), 0.0, 1.0).is_err());
    }
}
