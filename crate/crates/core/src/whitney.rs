//! Discretized Gaussian convolution, the delta-perturbation rank lift,
//! and the two approximation schemes that turn bounded TN_p kernels
//! into nearby TP_p kernels.
//!
//! The convolution operator is
//!   T(K)(x, y) = sum_j sum_k G(x, z_j) K(z_j, w_k) G(w_k, y)
//! over fixed node vectors z, w, with G the Gaussian kernel. Applying
//! T once makes the kernel TP up to the rank of K at the nodes; each
//! delta perturbation round then raises that rank by one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::kernel::KernelGrid;
use crate::matrix::Verdict;

/// exp(-kappa (x - y)^2); symmetric, values in (0, 1].
pub fn gauss(kappa: f64, x: f64, y: f64) -> Result<f64, Error> {
    if kappa <= 0.0 || !kappa.is_finite() {
        return Err(Error::BadParameter(format!("kappa must be > 0, got {kappa}")));
    }
    Ok((-kappa * (x - y) * (x - y)).exp())
}

fn gauss_unchecked(kappa: f64, x: f64, y: f64) -> f64 {
    (-kappa * (x - y) * (x - y)).exp()
}

/// Node data for the convolution operator: kappa and the two strictly
/// increasing node vectors. The perturbation weight is e^{-kappa}.
#[derive(Debug, Clone)]
pub struct ConvolutionPlan {
    pub kappa: f64,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
}

impl ConvolutionPlan {
    pub fn new(kappa: f64, z: Vec<f64>, w: Vec<f64>) -> Result<Self, Error> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(Error::BadParameter(format!("kappa must be > 0, got {kappa}")));
        }
        if z.is_empty() || w.is_empty() {
            return Err(Error::PlanTooSmall { nodes: 0, p: 1 });
        }
        if !z.windows(2).all(|p| p[0] < p[1]) || !w.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::NotIncreasing);
        }
        Ok(ConvolutionPlan { kappa, z, w })
    }

    pub fn weight(&self) -> f64 {
        (-self.kappa).exp()
    }

    /// Indices of the plan nodes on the kernel's coordinate vectors.
    fn node_indices(&self, k: &KernelGrid) -> Result<(Vec<usize>, Vec<usize>), Error> {
        let zi = self
            .z
            .iter()
            .map(|&v| k.x_index(v).ok_or(Error::NodeOffGrid(v)))
            .collect::<Result<Vec<_>, _>>()?;
        let wi = self
            .w
            .iter()
            .map(|&v| k.y_index(v).ok_or(Error::NodeOffGrid(v)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((zi, wi))
    }
}

/// One application of T evaluated at (x, y): the double sum exactly as
/// displayed, ascending j then k.
pub fn convolve_step(k: &KernelGrid, plan: &ConvolutionPlan, x: f64, y: f64) -> Result<f64, Error> {
    let (zi, wi) = plan.node_indices(k)?;
    let mut acc = 0.0;
    for (j, &zj) in plan.z.iter().enumerate() {
        let gx = gauss_unchecked(plan.kappa, x, zj);
        let mut inner = 0.0;
        for (kk, &wk) in plan.w.iter().enumerate() {
            inner += k.value(zi[j], wi[kk]) * gauss_unchecked(plan.kappa, wk, y);
        }
        acc += gx * inner;
    }
    Ok(acc)
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, m) = (a.len(), b[0].len());
    let inner = b.len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn gauss_matrix(kappa: f64, rows: &[f64], cols: &[f64]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|&r| cols.iter().map(|&c| gauss_unchecked(kappa, r, c)).collect())
        .collect()
}

/// Numeric rank: singular values below 1e-10 times the largest count
/// as zero.
pub fn numeric_rank(m: &[Vec<f64>]) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let dm = nalgebra::DMatrix::from_fn(rows, cols, |i, j| m[i][j]);
    let sv = dm.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * smax).count()
}

/// Outcome bookkeeping for a lift: sampled rank at the nodes and the
/// number of convolution rounds applied.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LiftInfo {
    pub rank: usize,
    pub m: usize,
    pub p: usize,
}

/// Lifts a TN_p kernel to a TP_p one on its grid:
/// r = rank K[z; w], m = max(0, p - r) + 1, and
/// K^(m) = T^m(K) + e^{-kappa} * sum_{j=1..m-1} T^j(delta_(z1,w1)).
pub fn tp_lift(
    k: &KernelGrid,
    p: usize,
    plan: &ConvolutionPlan,
) -> Result<(KernelGrid, LiftInfo), Error> {
    if plan.z.len() < p || plan.w.len() < p {
        return Err(Error::PlanTooSmall {
            nodes: plan.z.len().min(plan.w.len()),
            p,
        });
    }
    let verdict = k.check(p, false, 1e-9)?;
    if !verdict.passed() {
        let w = verdict.witness.unwrap();
        return Err(Error::NotTn {
            p,
            rows: w.index.rows,
            cols: w.index.cols,
            value: w.value.to_f64(),
        });
    }
    let (zi, wi) = plan.node_indices(k)?;

    let v0: Vec<Vec<f64>> = zi
        .iter()
        .map(|&i| wi.iter().map(|&j| k.value(i, j)).collect())
        .collect();
    let rank = numeric_rank(&v0);
    let m = p.saturating_sub(rank) + 1;

    let gz = gauss_matrix(plan.kappa, &plan.z, &plan.z);
    let gw = gauss_matrix(plan.kappa, &plan.w, &plan.w);

    // Node-level iterates of T^{m-1}(K), plus the accumulated delta
    // terms sum_{j=1..m-1} T^{j-1}(delta) at the nodes.
    let mut v = v0;
    for _ in 0..m - 1 {
        v = mat_mul(&mat_mul(&gz, &v), &gw);
    }
    let mut dsum = vec![vec![0.0; plan.w.len()]; plan.z.len()];
    if m >= 2 {
        let mut d = vec![vec![0.0; plan.w.len()]; plan.z.len()];
        d[0][0] = 1.0;
        for _ in 1..m {
            for (row_s, row_d) in dsum.iter_mut().zip(d.iter()) {
                for (s, &x) in row_s.iter_mut().zip(row_d.iter()) {
                    *s += x;
                }
            }
            d = mat_mul(&mat_mul(&gz, &d), &gw);
        }
    }
    let weight = plan.weight();
    let combined: Vec<Vec<f64>> = v
        .iter()
        .zip(dsum.iter())
        .map(|(rv, rd)| rv.iter().zip(rd.iter()).map(|(&a, &b)| a + weight * b).collect())
        .collect();

    // Final application of T maps node values to the full grid.
    let a = gauss_matrix(plan.kappa, k.xs(), &plan.z);
    let b = gauss_matrix(plan.kappa, &plan.w, k.ys());
    let out_vals = mat_mul(&mat_mul(&a, &combined), &b);
    let out = KernelGrid::new(
        k.xs().to_vec(),
        k.ys().to_vec(),
        out_vals.into_iter().flatten().collect(),
    )?;
    Ok((out, LiftInfo { rank, m, p }))
}

/// The tridiagonal matrix with 2 on the diagonal (1 in the last slot)
/// and -1 off it; its determinant is 1 for every size.
pub fn q_matrix(m: usize) -> Vec<Vec<f64>> {
    let mut q = vec![vec![0.0; m]; m];
    for i in 0..m {
        q[i][i] = if i + 1 == m { 1.0 } else { 2.0 };
        if i + 1 < m {
            q[i][i + 1] = -1.0;
            q[i + 1][i] = -1.0;
        }
    }
    q
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussianProduct {
    pub mu: Vec<f64>,
    pub v: Vec<Vec<f64>>,
    pub det_v: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

/// Verifies prod_j G_kappa(x_{j-1}, x_j) = e^{-kappa x_0^2} g_{mu,V}(x_1..x_m)
/// with mu = x_0 * 1 and V = 2 kappa Q_m, and reports det V = (2 kappa)^m.
pub fn gaussian_product_identity(kappa: f64, xs: &[f64]) -> Result<GaussianProduct, Error> {
    if xs.len() < 2 {
        return Err(Error::BadParameter("need x_0..x_m with m >= 1".into()));
    }
    if kappa <= 0.0 {
        return Err(Error::BadParameter("kappa must be > 0".into()));
    }
    let m = xs.len() - 1;
    let x0 = xs[0];
    let mu = vec![x0; m];
    let v: Vec<Vec<f64>> = q_matrix(m)
        .into_iter()
        .map(|row| row.into_iter().map(|x| 2.0 * kappa * x).collect())
        .collect();
    let det_v = (2.0 * kappa).powi(m as i32);

    let mut lhs = 1.0;
    for j in 1..=m {
        lhs *= gauss_unchecked(kappa, xs[j - 1], xs[j]);
    }
    // g_{mu,V}(x) = exp(-x'Vx/2 + x'V mu)
    let x = &xs[1..];
    let mut quad = 0.0;
    let mut lin = 0.0;
    for i in 0..m {
        for j in 0..m {
            quad += x[i] * v[i][j] * x[j];
            lin += x[i] * v[i][j] * mu[j];
        }
    }
    let rhs = (-kappa * x0 * x0).exp() * (-0.5 * quad + lin).exp();
    let rel_error = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(GaussianProduct {
        mu,
        v,
        det_v,
        lhs,
        rhs,
        rel_error,
    })
}

/// Dyadic node vector (-n, -n + 2^-n, ..., n) with n 2^{n+1} + 1 terms.
pub fn dyadic_nodes(n: u32) -> Vec<f64> {
    let h = 2f64.powi(-(n as i32));
    let count = (n as usize) * (1usize << (n + 1)) + 1;
    (0..count).map(|i| -(n as f64) + i as f64 * h).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Finite first factor {1..d} against the dyadic line grid.
    Fc,
    /// Dyadic line grid on both factors.
    Cc,
}

/// Input kernel for the approximation schemes. Values must be bounded
/// on the sampled window.
pub enum ApproxKernel {
    /// K : {1..d} x R -> R; the closure receives the 1-based line index.
    FiniteByLine {
        d: usize,
        f: Box<dyn Fn(usize, f64) -> f64 + Sync>,
    },
    /// K : R x R -> R.
    Plane { f: Box<dyn Fn(f64, f64) -> f64 + Sync> },
}

impl ApproxKernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            ApproxKernel::FiniteByLine { f, .. } => f(x.round() as usize, y),
            ApproxKernel::Plane { f } => f(x, y),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApproxOptions {
    pub p: usize,
    pub n: u32,
    pub mode: Mode,
    /// User-declared continuity points; the tool never infers them.
    pub continuity_points: Vec<(f64, f64)>,
    /// Nodes per axis in the sampled strict check.
    pub sample_count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointError {
    pub x: f64,
    pub y: f64,
    pub scaled: f64,
    pub target: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxReport {
    pub mode: Mode,
    pub n: u32,
    pub p: usize,
    pub rank: usize,
    pub m: usize,
    pub scale: f64,
    pub points: Vec<PointError>,
    pub max_abs_error: f64,
    pub tp_sampled: Verdict,
}

impl ApproxReport {
    /// CSV rows (point, n, scaled value, target, abs error).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,n,scaled,target,abs_error\n");
        for p in &self.points {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.x, p.y, self.n, p.scaled, p.target, p.abs_error
            ));
        }
        s
    }
}

/// Multiplies a (rows x N) block by the symmetric Toeplitz Gaussian
/// matrix of the uniform dyadic grid, exploiting the constant spacing.
fn toeplitz_right_mul(block: &[Vec<f64>], trow: &[f64]) -> Vec<Vec<f64>> {
    let n = trow.len();
    block
        .iter()
        .map(|row| {
            (0..n)
                .map(|b| {
                    let mut acc = 0.0;
                    for (k, &v) in row.iter().enumerate() {
                        let d = k.abs_diff(b);
                        acc += v * trow[d];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Approximation run: builds the mode's node vectors, applies the lift
/// with kappa = n, scales by the mode's exact constant, and reports
/// per-point errors plus a strict check on sampled tuples.
pub fn approximate(
    kernel: &ApproxKernel,
    opts: &ApproxOptions,
) -> Result<(ApproxReport, KernelGrid), Error> {
    let n = opts.n;
    let p = opts.p;
    match opts.mode {
        Mode::Fc => {
            if n > 10 {
                return Err(Error::BadParameter("fc mode caps n at 10".into()));
            }
        }
        Mode::Cc => {
            if n > 6 {
                return Err(Error::BadParameter(
                    "cc mode caps n at 6 (node count grows as n 2^{n+1})".into(),
                ));
            }
        }
    }
    if (n as usize) < p {
        return Err(Error::PlanTooSmall { nodes: n as usize, p });
    }
    let kappa = n as f64;
    let w = dyadic_nodes(n);
    let nn = w.len();
    let h = 2f64.powi(-(n as i32));
    let trow: Vec<f64> = (0..nn)
        .map(|d| (-kappa * (d as f64 * h) * (d as f64 * h)).exp())
        .collect();

    let (z, d_lines): (Vec<f64>, usize) = match (opts.mode, kernel) {
        (Mode::Fc, ApproxKernel::FiniteByLine { d, .. }) => {
            if *d < p {
                return Err(Error::PlanTooSmall { nodes: *d, p });
            }
            ((1..=*d).map(|i| i as f64).collect(), *d)
        }
        (Mode::Cc, ApproxKernel::Plane { .. }) => (w.clone(), 0),
        _ => {
            return Err(Error::BadParameter(
                "fc mode takes a finite-by-line kernel, cc a plane kernel".into(),
            ))
        }
    };

    // Node values of K.
    let mut v: Vec<Vec<f64>> = z
        .iter()
        .map(|&zv| w.iter().map(|&wv| kernel.eval(zv, wv)).collect())
        .collect();
    if v.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteEntry(f64::NAN));
    }
    let rank = numeric_rank(&v);
    let m = p.saturating_sub(rank) + 1;

    // Left Gaussian factor: dense for fc (tiny), Toeplitz for cc.
    let gz_dense = match opts.mode {
        Mode::Fc => Some(gauss_matrix(kappa, &z, &z)),
        Mode::Cc => None,
    };
    let left_mul = |block: &[Vec<f64>]| -> Vec<Vec<f64>> {
        match &gz_dense {
            Some(g) => mat_mul(g, block),
            // Toeplitz on the left: right-multiply the transpose, then
            // transpose back, using symmetry of the Gaussian kernel.
            None => {
                let nt = block[0].len();
                let cols: Vec<Vec<f64>> = (0..nt)
                    .map(|j| block.iter().map(|r| r[j]).collect())
                    .collect();
                let mixed = toeplitz_right_mul(&cols, &trow);
                let rows = block.len();
                (0..rows)
                    .map(|i| (0..nt).map(|j| mixed[j][i]).collect())
                    .collect()
            }
        }
    };

    let mut dsum = vec![vec![0.0; nn]; z.len()];
    if m >= 2 {
        let mut d = vec![vec![0.0; nn]; z.len()];
        d[0][0] = 1.0;
        for _ in 1..m {
            for (rs, rd) in dsum.iter_mut().zip(d.iter()) {
                for (s, &x) in rs.iter_mut().zip(rd.iter()) {
                    *s += x;
                }
            }
            d = left_mul(&toeplitz_right_mul(&d, &trow));
        }
    }
    for _ in 0..m - 1 {
        v = left_mul(&toeplitz_right_mul(&v, &trow));
    }
    let weight = (-kappa).exp();
    for (rv, rd) in v.iter_mut().zip(dsum.iter()) {
        for (a, &b) in rv.iter_mut().zip(rd.iter()) {
            *a += weight * b;
        }
    }

    let scale = match opts.mode {
        Mode::Fc => {
            2f64.powi(-((m as i32) * (n as i32)))
                * (kappa / std::f64::consts::PI).powf(m as f64 / 2.0)
        }
        Mode::Cc => {
            4f64.powi(-((m as i32) * (n as i32)))
                * (kappa / std::f64::consts::PI).powi(m as i32)
        }
    };

    // K^(m) at an arbitrary point: g_x' (V + e^-k D) g_y.
    let eval_lift = |x: f64, y: f64| -> f64 {
        let gx: Vec<f64> = z.iter().map(|&zv| gauss_unchecked(kappa, x, zv)).collect();
        let gy: Vec<f64> = w.iter().map(|&wv| gauss_unchecked(kappa, wv, y)).collect();
        let mut acc = 0.0;
        for (j, &gxj) in gx.iter().enumerate() {
            if gxj == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for (k, &gyk) in gy.iter().enumerate() {
                inner += v[j][k] * gyk;
            }
            acc += gxj * inner;
        }
        acc
    };

    let mut points = Vec::with_capacity(opts.continuity_points.len());
    let mut max_abs_error: f64 = 0.0;
    for &(px, py) in &opts.continuity_points {
        let scaled = scale * eval_lift(px, py);
        let target = kernel.eval(px, py);
        let abs_error = (scaled - target).abs();
        max_abs_error = max_abs_error.max(abs_error);
        points.push(PointError {
            x: px,
            y: py,
            scaled,
            target,
            abs_error,
        });
    }

    // Strict check on sampled tuples: evenly spaced nodes inside the
    // window spanned by the continuity points (padded by 1), plus a few
    // seeded extras. The window keeps sampled values away from the far
    // tail where everything underflows.
    let (lo, hi) = opts
        .continuity_points
        .iter()
        .map(|&(_, y)| y)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let (lo, hi) = if lo.is_finite() {
        ((lo - 1.0).max(-(n as f64)), (hi + 1.0).min(n as f64))
    } else {
        (-1.0, 1.0)
    };
    let mut ys_sample = sample_window(&w, lo, hi, opts.sample_count, opts.seed);
    ys_sample.sort_by(f64::total_cmp);
    ys_sample.dedup();
    let xs_sample: Vec<f64> = match opts.mode {
        Mode::Fc => (1..=d_lines).map(|i| i as f64).collect(),
        Mode::Cc => ys_sample.clone(),
    };
    let mut vals = Vec::with_capacity(xs_sample.len() * ys_sample.len());
    for &sx in &xs_sample {
        for &sy in &ys_sample {
            vals.push(scale * eval_lift(sx, sy));
        }
    }
    let sampled = KernelGrid::new(xs_sample, ys_sample, vals)?;
    let tp_sampled = sampled.check(p, true, 1e-9)?;

    let report = ApproxReport {
        mode: opts.mode,
        n,
        p,
        rank,
        m,
        scale,
        points,
        max_abs_error,
        tp_sampled,
    };
    Ok((report, sampled))
}

fn sample_window(nodes: &[f64], lo: f64, hi: f64, count: usize, seed: u64) -> Vec<f64> {
    let in_window: Vec<f64> = nodes.iter().cloned().filter(|&v| lo <= v && v <= hi).collect();
    if in_window.len() <= count {
        return in_window;
    }
    let mut out = Vec::with_capacity(count + 2);
    let step = (in_window.len() - 1) as f64 / (count - 1).max(1) as f64;
    for i in 0..count {
        out.push(in_window[(i as f64 * step).round() as usize]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2 {
        out.push(in_window[rng.gen_range(0..in_window.len())]);
    }
    out
}
