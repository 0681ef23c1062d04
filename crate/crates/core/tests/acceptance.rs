//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with --nocapture to see them) and enforcing its runtime budget.

mod common;

use std::time::Instant;

use common::{det_f64, increasing_tuples};
use num::{BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use totpos_core::completion::{embed_sym_2x2, embed_tp_2x2, CERT_TOL};
use totpos_core::polya::{
    cosine_jain, generating_poly_pf_check, laplace, pf_sequence_check, power_obstruction,
    ObstructionVerdict, PffFamily, PfSequence,
};
use totpos_core::poly::PolyCoeffs;
use totpos_core::preservers::{
    default_grid, harness_transform, make_family, n4_det_expansion, search_counterexample,
    test_power_preserver, FamilyId, FamilyKind,
};
use totpos_core::whitney::{
    approximate, convolve_step, gauss, tp_lift, ApproxKernel, ApproxOptions, ConvolutionPlan, Mode,
};
use totpos_core::{KernelGrid, RationalMatrix, Scalar, TransformSpec};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(num::BigInt::from(n), num::BigInt::from(d))
}

fn budget(name: &str, t0: Instant, limit_s: f64) {
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < limit_s, "{name} took {dt:.2} s, budget {limit_s} s");
    println!("ACCEPTANCE {name}: PASS ({dt:.2} s)");
}

fn c3() -> RationalMatrix {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    RationalMatrix::from_f64(vec![
        vec![1.0, r, 0.0],
        vec![r, 1.0, r],
        vec![0.0, r, 1.0],
    ])
    .unwrap()
}

#[test]
fn acceptance_01_c_matrix_obstruction() {
    let t0 = Instant::now();
    for alpha in [0.5, 1.0, 2.0] {
        let image = c3().apply_entrywise(&TransformSpec::power(1.0, alpha)).unwrap();
        let det = image.det().unwrap().to_f64();
        let want = 1.0 - 2f64.powf(1.0 - alpha);
        assert!(
            (det - want).abs() <= 1e-12,
            "alpha = {alpha}: det {det} vs {want}"
        );
        if alpha == 0.5 {
            assert!((det + 0.414214).abs() < 1e-6);
        }
    }
    budget("1 (C-matrix obstruction)", t0, 1.0);
}

#[test]
fn acceptance_02_n4_family() {
    let t0 = Instant::now();
    // Lax TN at order 4 across a 25x25 rational grid of (eps, x) in
    // (0,1) x (0,1], decided exactly.
    for i in 1..=25i64 {
        for j in 1..=25i64 {
            let id = FamilyId::new(
                FamilyKind::N4,
                vec![Scalar::Exact(rat(i, 26)), Scalar::Exact(rat(j, 25))],
            );
            let m = make_family(&id).unwrap();
            let v = m.check(4, false, 0.0).unwrap();
            assert!(v.passed(), "eps = {i}/26, x = {j}/25: {:?}", v.witness);
        }
    }

    // Grid search at alpha = 1.25 over eps, x <= 0.1 finds a negative
    // determinant.
    let grid: Vec<f64> = (0..12)
        .map(|k| 10f64.powf(-4.0 + 3.0 * k as f64 / 11.0))
        .collect();
    let f = TransformSpec::power(1.0, 1.25);
    let hit = search_counterexample(&f, FamilyKind::N4, &grid)
        .unwrap()
        .expect("no negative determinant found");
    assert!(hit.value < 0.0);
    assert!(hit.params.iter().all(|&p| p <= 0.1));

    // The numeric determinant tracks the displayed cubic + quartic
    // expansion: < 10% at x = 1e-3 and < 1% at x = 1e-4.
    let eps = 0.05;
    for (x, bound) in [(1e-3, 0.10), (1e-4, 0.01)] {
        let id = FamilyId::new(
            FamilyKind::N4,
            vec![Scalar::Float(eps), Scalar::Float(x)],
        );
        let image = make_family(&id)
            .unwrap()
            .apply_entrywise(&f)
            .unwrap();
        // Exact determinant of the float entries; float elimination
        // noise would swamp the 1e-15-scale value at x = 1e-4.
        let det = image.to_exact().det().unwrap().to_f64();
        let approx = n4_det_expansion(eps, x, 1.25);
        let rel = (det - approx).abs() / det.abs();
        assert!(rel < bound, "x = {x}: rel error {rel}");
    }
    budget("2 (N(eps,x) family)", t0, 10.0);
}

#[test]
fn acceptance_03_t5_symmetric_obstruction() {
    let t0 = Instant::now();
    // Log grid over (0, 1e-1]; the Hadamard square is exact on dyadic
    // points, so the tiny negative determinant is decided rigorously.
    let grid: Vec<f64> = (0..16)
        .map(|k| 10f64.powf(-5.0 + 4.0 * k as f64 / 15.0))
        .collect();
    let f = harness_transform(1.0, 2.0);
    let hit = search_counterexample(&f, FamilyKind::T5, &grid)
        .unwrap()
        .expect("no negative minor found for the squared family");
    assert!(hit.value < 0.0);
    // The upper-right 4x4 block is negative at the found x, decided in
    // exact arithmetic (the value sits near 1e-11).
    let id = FamilyId::new(
        FamilyKind::T5,
        vec![Scalar::Exact(totpos_core::scalar::f64_to_rational(
            hit.params[0],
        ))],
    );
    let image = make_family(&id).unwrap().apply_entrywise(&f).unwrap();
    let ur = image.submatrix(&[0, 1, 2, 3], &[1, 2, 3, 4]).det().unwrap();
    assert!(ur.is_negative(), "upper-right det = {ur}");
    budget("3 (T(x) symmetric obstruction)", t0, 5.0);
}

#[test]
fn acceptance_04_preserver_consistency_matrix() {
    let t0 = Instant::now();
    let grid = default_grid();
    let mut reports = 0;
    for alpha in [0.5, 1.0, 1.5, 2.0, 3.0] {
        for d in 2..=5 {
            for symmetric in [false, true] {
                let r = test_power_preserver(alpha, 1.0, d, symmetric, &grid).unwrap();
                assert!(
                    r.consistent,
                    "inconsistent at alpha={alpha}, d={d}, sym={symmetric}: {:?}",
                    r.empirical
                );
                assert!(r.recheck().unwrap());
                reports += 1;
            }
        }
    }
    assert_eq!(reports, 40);
    budget("4 (preserver consistency matrix)", t0, 60.0);
}

#[test]
fn acceptance_05_whitney_lift_and_cauchy_binet() {
    let t0 = Instant::now();

    // Zero and step kernels on 3-5 point grids lift to strict TP_p.
    let grids: Vec<Vec<f64>> = vec![
        vec![-1.0, 0.0, 1.0],
        vec![-1.5, -0.5, 0.5, 1.5],
        vec![-2.0, -1.0, 0.0, 1.0, 2.0],
    ];
    for xs in &grids {
        for p in 2..=3usize {
            let zero = KernelGrid::from_fn(xs.clone(), xs.clone(), |_, _| 0.0).unwrap();
            let step = KernelGrid::from_fn(xs.clone(), xs.clone(), |x, y| {
                if x >= 0.0 && y >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            })
            .unwrap();
            // kappa = 0.4 keeps the delta rounds visible across the
            // widest grid; larger bandwidths push the far-corner minors
            // of the lifted step kernel under the tolerance gate.
            let plan = ConvolutionPlan::new(0.4, xs.clone(), xs.clone()).unwrap();
            for k in [&zero, &step] {
                let (lifted, _) = tp_lift(k, p, &plan).unwrap();
                let v = lifted.check(p, true, 1e-9).unwrap();
                assert!(v.passed(), "p = {p}, grid {xs:?}: {:?}", v.witness);
            }
        }
    }

    // Cauchy-Binet: det T(K)[x; y] equals the tuple triple-sum on all
    // node counts up to 4 and orders up to 3.
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for nx in 2..=4usize {
        for ny in 2..=4usize {
            let mut xs: Vec<f64> = (0..nx).map(|i| i as f64 + rng.gen_range(0.0..0.3)).collect();
            let mut ys: Vec<f64> = (0..ny).map(|i| i as f64 + rng.gen_range(0.0..0.3)).collect();
            xs.sort_by(f64::total_cmp);
            ys.sort_by(f64::total_cmp);
            let k =
                KernelGrid::from_fn(xs.clone(), ys.clone(), |_, _| rng.gen_range(-1.0..2.0))
                    .unwrap();
            let kappa = rng.gen_range(0.5..1.5);
            let plan = ConvolutionPlan::new(kappa, xs.clone(), ys.clone()).unwrap();
            for m in 1..=3.min(nx).min(ny) {
                let xt: Vec<f64> = xs[..m].to_vec();
                let yt: Vec<f64> = ys[..m].to_vec();
                let direct: Vec<Vec<f64>> = xt
                    .iter()
                    .map(|&x| {
                        yt.iter()
                            .map(|&y| convolve_step(&k, &plan, x, y).unwrap())
                            .collect()
                    })
                    .collect();
                let lhs = det_f64(&direct);
                let mut rhs = 0.0;
                let g = |a: f64, b: f64| gauss(kappa, a, b).unwrap();
                for jt in increasing_tuples(nx, m) {
                    for kt in increasing_tuples(ny, m) {
                        let gx: Vec<Vec<f64>> = xt
                            .iter()
                            .map(|&x| jt.iter().map(|&j| g(x, xs[j])).collect())
                            .collect();
                        let kk: Vec<Vec<f64>> = jt
                            .iter()
                            .map(|&j| kt.iter().map(|&t| k.value(j, t)).collect())
                            .collect();
                        let gy: Vec<Vec<f64>> = kt
                            .iter()
                            .map(|&tt| yt.iter().map(|&y| g(ys[tt], y)).collect())
                            .collect();
                        rhs += det_f64(&gx) * det_f64(&kk) * det_f64(&gy);
                    }
                }
                let scale = lhs.abs().max(rhs.abs()).max(1e-30);
                assert!(
                    (lhs - rhs).abs() / scale < 1e-10,
                    "nx={nx}, ny={ny}, m={m}: {lhs} vs {rhs}"
                );
            }
        }
    }
    budget("5 (Whitney lift + Cauchy-Binet)", t0, 30.0);
}

#[test]
fn acceptance_06_whitney_convergence_trend() {
    let t0 = Instant::now();
    let kernel = ApproxKernel::FiniteByLine {
        d: 2,
        f: Box::new(|_, y| if (-1.0..=1.0).contains(&y) { 1.0 } else { 0.0 }),
    };
    let points: Vec<(f64, f64)> = vec![
        (1.0, -0.25),
        (1.0, 0.0),
        (1.0, 0.25),
        (2.0, -0.25),
        (2.0, 0.25),
    ];
    let mut prev = f64::INFINITY;
    let mut last = f64::NAN;
    for n in 5..=8u32 {
        let opts = ApproxOptions {
            p: 2,
            n,
            mode: Mode::Fc,
            continuity_points: points.clone(),
            sample_count: 8,
            seed: 0,
        };
        let (report, _) = approximate(&kernel, &opts).unwrap();
        assert!(
            report.max_abs_error < prev,
            "n = {n}: {} !< {prev}",
            report.max_abs_error
        );
        prev = report.max_abs_error;
        last = report.max_abs_error;
    }
    assert!(last < 0.05, "error at n = 8 is {last}");
    budget("6 (Whitney convergence trend)", t0, 120.0);
}

#[test]
fn acceptance_07_completion_round_trips() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..100 {
        // Vandermonde: random TP 2x2 with spread bounded away from
        // degeneracy so binary64 certification is decisive.
        let u1: f64 = rng.gen_range(0.5..1.5);
        let u2 = u1 * rng.gen_range(0.8f64..2.0).exp();
        let a1: f64 = rng.gen_range(-1.0..0.0);
        let a2 = a1 + rng.gen_range(0.8..2.0);
        let lambda: f64 = rng.gen_range(0.5..2.0);
        let a = RationalMatrix::from_f64(vec![
            vec![u1.powf(a1) / lambda, u1.powf(a2) / lambda],
            vec![u2.powf(a1) / lambda, u2.powf(a2) / lambda],
        ])
        .unwrap();
        let (_, mat) = embed_tp_2x2(&a, 5, 7, 1, 3, 2, 5).unwrap();
        for (pi, r) in [1usize, 3].into_iter().enumerate() {
            for (pj, c) in [2usize, 5].into_iter().enumerate() {
                let got = mat.get_f64(r, c);
                let want = a.get_f64(pi, pj);
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "trial {trial}");
            }
        }
        let v = mat.fekete_tp(CERT_TOL).unwrap();
        assert!(v.passed(), "trial {trial}: {:?}", v.witness);

        // Hankel: random symmetric TP 2x2.
        let aa: f64 = rng.gen_range(0.5..3.0);
        let cc: f64 = rng.gen_range(0.5..3.0);
        let bb = (aa * cc).sqrt() * rng.gen_range(0.2..0.9);
        let sym = RationalMatrix::from_f64(vec![vec![aa, bb], vec![bb, cc]]).unwrap();
        let emb = embed_sym_2x2(&sym, 0.0, 1.0).unwrap();
        for (x, y, want) in [(0.0, 0.0, aa), (0.0, 1.0, bb), (1.0, 1.0, cc)] {
            assert!((emb.eval(x, y) - want).abs() <= 1e-12 * want.max(1.0), "trial {trial}");
        }
        let s = (1.0 / emb.alpha.sqrt()).max(1.0);
        let coords = [-0.9 * s, -0.4 * s, 0.0, 1.0, 1.0 + 0.5 * s, 1.0 + s];
        let grid = emb.sample(&coords).unwrap();
        let v = grid.check(6, true, CERT_TOL).unwrap();
        assert!(v.passed(), "trial {trial}: {:?}", v.witness);
    }
    budget("7 (completion round-trips)", t0, 10.0);
}

#[test]
fn acceptance_08_laplace_certificates() {
    let t0 = Instant::now();
    let m1 = PffFamily::m_alpha(BigRational::one()).unwrap();
    let l = laplace(&m1).unwrap();
    match (l.rf.num(), l.rf.den()) {
        (PolyCoeffs::Exact(p), PolyCoeffs::Exact(q)) => {
            assert_eq!(p.coeffs(), &[rat(12, 1)]);
            assert_eq!(
                q.coeffs(),
                &[rat(4, 1), rat(0, 1), rat(-5, 1), rat(0, 1), rat(1, 1)]
            );
        }
        _ => panic!("transform of M_1 must be exact"),
    }

    let r1 = power_obstruction(&m1, 1).unwrap();
    assert_eq!(r1.verdict, ObstructionVerdict::PffCompatible);
    for n in 2..=4 {
        let r = power_obstruction(&m1, n).unwrap();
        assert_eq!(r.verdict, ObstructionVerdict::Obstructed, "n = {n}");
        assert!(r.p_degree >= Some(1));
        assert!(r.root_checks.iter().all(|rc| rc.p_value != 0.0));
    }

    let nfam = PffFamily::one_sided_n(1.0, 2f64.sqrt(), 3f64.sqrt()).unwrap();
    for n in 2..=3 {
        let r = power_obstruction(&nfam, n).unwrap();
        assert_eq!(r.verdict, ObstructionVerdict::Obstructed, "n = {n}");
        let g = r.gamma.unwrap();
        assert!((g.abs() - 1.0).abs() > 1e-6);
        assert!(r.root_checks.iter().all(|rc| rc.p_value != 0.0));
    }
    budget("8 (Laplace certificates)", t0, 5.0);
}

#[test]
fn acceptance_09_pf_sequences_and_jain() {
    let t0 = Instant::now();
    let report = generating_poly_pf_check(&[rat(1, 1), rat(2, 1), rat(1, 1)]).unwrap();
    assert!(report.pass);
    let seq = PfSequence::from_ints(&[1, 2, 1]);
    let v = pf_sequence_check(&seq, 4, 8).unwrap();
    assert!(v.passed(), "witness: {:?}", v.witness);

    let theta = std::f64::consts::PI / 10.0;
    for alpha in [0.0, 1.0, 2.0, 3.0, 4.0] {
        let (_, r) = cosine_jain(5, theta, alpha).unwrap();
        assert!(r.psd, "alpha = {alpha}: min eig {}", r.min_eigenvalue);
    }
    for alpha in [0.5, 1.5, 2.5] {
        let (_, r) = cosine_jain(5, theta, alpha).unwrap();
        assert!(!r.psd, "alpha = {alpha}: min eig {}", r.min_eigenvalue);
    }
    budget("9 (PF sequences + Jain powers)", t0, 5.0);
}

#[test]
fn acceptance_10_cosine_rank_two() {
    let t0 = Instant::now();
    let theta = std::f64::consts::PI / 16.0;
    for n in 3..=6usize {
        let (base, report) = cosine_jain(n, theta, 1.0).unwrap();
        assert!(
            report.max_abs_3x3_minor <= 1e-10,
            "n = {n}: {}",
            report.max_abs_3x3_minor
        );
        for (idx, v) in base.minors(2).unwrap() {
            if idx.order() == 2 {
                assert!(v.to_f64() > 0.0, "n = {n}, minor {idx:?}");
            }
        }
    }
    budget("10 (cosine rank-2 structure)", t0, 2.0);
}
