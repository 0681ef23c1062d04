//! Executable preserver experiments: base families stay TN, the
//! classification tables are never contradicted on the default grids,
//! and every refutation witness survives a fresh recheck.

mod common;

use totpos_core::preservers::{
    default_grid, expected_verdict, families_for, make_family, n4_det_expansion, pad_to,
    search_counterexample, test_power_preserver, Empirical, Expectation, FamilyId, FamilyKind,
    harness_transform,
};
use totpos_core::{RationalMatrix, Scalar, TransformSpec};

fn float_id(kind: FamilyKind, params: &[f64]) -> FamilyId {
    FamilyId::new(kind, params.iter().map(|&p| Scalar::Float(p)).collect())
}

#[test]
fn base_families_are_tn_over_the_grid() {
    let grid: Vec<f64> = default_grid().into_iter().step_by(4).collect();
    for kind in families_for(5, false) {
        let insts: Vec<Vec<f64>> = match kind.arity() {
            0 => vec![vec![]],
            1 => grid.iter().map(|&x| vec![x]).collect(),
            2 => grid
                .iter()
                .flat_map(|&a| grid.iter().map(move |&b| vec![a, b.max(a)]))
                .collect(),
            _ => unreachable!(),
        };
        for params in insts {
            let m = make_family(&float_id(kind, &params)).unwrap();
            let v = m.check(m.rows().min(m.cols()), false, 1e-9).unwrap();
            assert!(
                v.passed(),
                "{} at {params:?} not TN: {:?}",
                kind.name(),
                v.witness
            );
        }
    }
}

#[test]
fn alpha_below_one_refuted_by_c3_at_dim_3() {
    let report = test_power_preserver(0.5, 1.0, 3, false, &default_grid()).unwrap();
    assert_eq!(report.expected, Expectation::Fails);
    let Empirical::Refuted { witness } = &report.empirical else {
        panic!("expected a refutation");
    };
    assert_eq!(witness.family, "C3");
    // det F[C] = 1 - 2^{1 - alpha} at alpha = 1/2.
    let want = 1.0 - 2f64.sqrt();
    assert!((witness.value - want).abs() < 1e-12, "got {}", witness.value);
    assert!(report.consistent);
    assert!(report.recheck().unwrap());
}

#[test]
fn alpha_three_halves_passes_at_dim_3() {
    // Powers >= 1 preserve TN and TP on 3x3 matrices.
    let report = test_power_preserver(1.5, 1.0, 3, false, &default_grid()).unwrap();
    assert_eq!(report.expected, Expectation::Preserves);
    assert_eq!(report.empirical, Empirical::PassGridRelative);
    assert!(report.consistent);
}

#[test]
fn alpha_in_one_two_refuted_by_moment_at_dim_4_symmetric() {
    let report = test_power_preserver(1.5, 1.0, 4, true, &default_grid()).unwrap();
    assert_eq!(report.expected, Expectation::Fails);
    let Empirical::Refuted { witness } = &report.empirical else {
        panic!("expected a refutation");
    };
    assert_eq!(witness.family, "MOMENT4");
    assert!(report.consistent);
    assert!(report.recheck().unwrap());
}

#[test]
fn dilation_never_refuted() {
    let f = TransformSpec::power(2.0, 1.0);
    let grid: Vec<f64> = default_grid().into_iter().step_by(3).collect();
    for kind in families_for(5, false) {
        let hit = search_counterexample(&f, kind, &grid).unwrap();
        assert!(hit.is_none(), "{}: {:?}", kind.name(), hit);
    }
}

#[test]
fn square_power_on_t5_hits_upper_right_block() {
    // x in a log grid over (0, 0.1]: the refuting minor is the upper
    // right 4x4 submatrix.
    let grid: Vec<f64> = (0..20)
        .map(|k| 10f64.powf(-5.0 + 4.0 * k as f64 / 20.0))
        .collect();
    let f = harness_transform(1.0, 2.0);
    let hit = search_counterexample(&f, FamilyKind::T5, &grid)
        .unwrap()
        .expect("T5 squared must lose TN for small x");
    assert_eq!(hit.minor.rows, vec![0, 1, 2, 3]);
    assert_eq!(hit.minor.cols, vec![1, 2, 3, 4]);
    assert!(hit.value < 0.0);
}

#[test]
fn n4_determinant_tracks_displayed_expansion() {
    // Relative error of the cubic + quartic expansion shrinks as x
    // drops through 1e-2, 1e-3, 1e-4.
    let (eps, alpha) = (0.3, 1.25);
    let mut errs = Vec::new();
    for x in [1e-2, 1e-3, 1e-4] {
        let id = float_id(FamilyKind::N4, &[eps, x]);
        let m = make_family(&id).unwrap();
        let image = m.apply_entrywise(&TransformSpec::power(1.0, alpha)).unwrap();
        // Exact determinant of the float entries: the cancellation in
        // this determinant is far below float elimination noise.
        let det = image.to_exact().det().unwrap().to_f64();
        let approx = n4_det_expansion(eps, x, alpha);
        errs.push((det - approx).abs() / det.abs());
    }
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "errors {errs:?}");
    assert!(errs[2] < 1e-3);
}

#[test]
fn consistency_matrix_on_refutable_ranges() {
    // The ranges the implemented families must refute, beyond the full
    // acceptance sweep: alpha < 1 at d = 3, alpha in (1,2) symmetric
    // d = 4, alpha > 1 at d = 4 plain and d = 5 symmetric.
    let grid = default_grid();
    let cases = [
        (0.7, 3, false),
        (0.9, 3, true),
        (1.3, 4, true),
        (1.7, 4, true),
        (1.2, 4, false),
        (2.5, 4, false),
        (1.5, 5, true),
        (2.0, 5, true),
    ];
    for (alpha, d, sym) in cases {
        let report = test_power_preserver(alpha, 1.0, d, sym, &grid).unwrap();
        assert_eq!(report.expected, Expectation::Fails, "{alpha}, {d}, {sym}");
        assert!(
            matches!(report.empirical, Empirical::Refuted { .. }),
            "no witness for alpha={alpha}, d={d}, sym={sym}"
        );
        assert!(report.consistent);
        assert!(report.recheck().unwrap(), "{alpha}, {d}, {sym}");
    }
}

#[test]
fn witnesses_recheck_via_make_family_and_entrywise() {
    // Soundness: re-materialize each witness and re-evaluate its minor.
    let grid = default_grid();
    for (alpha, d, sym) in [(0.5, 3, false), (2.0, 4, false), (1.5, 4, true)] {
        let report = test_power_preserver(alpha, 1.0, d, sym, &grid).unwrap();
        let Empirical::Refuted { witness } = &report.empirical else {
            panic!("expected refutation");
        };
        let kind = FamilyKind::from_name(&witness.family).unwrap();
        let base = pad_to(&make_family(&float_id(kind, &witness.params)).unwrap(), d);
        let image = base
            .apply_entrywise(&TransformSpec::power(1.0, alpha))
            .unwrap();
        let minor: RationalMatrix = image.submatrix(&witness.minor.rows, &witness.minor.cols);
        assert!(minor.det().unwrap().to_f64() < 0.0);
        assert!(report.recheck().unwrap());
    }
}

#[test]
fn step_function_preserves_dim_2_but_not_dim_3() {
    // F(x) = 1_{x > 0} is a TN preserver in dimension two; the corner
    // matrix kills it in dimension three (its 0/1 image has a negative
    // determinant).
    let f = TransformSpec::Step {
        c: Scalar::from_int(1),
    };
    let grid: Vec<f64> = default_grid().into_iter().step_by(4).collect();
    for kind in [
        FamilyKind::A2,
        FamilyKind::B2,
        FamilyKind::Sym2,
        FamilyKind::Mono2,
    ] {
        assert!(search_counterexample(&f, kind, &grid).unwrap().is_none());
    }
    let hit = search_counterexample(&f, FamilyKind::C3, &grid)
        .unwrap()
        .expect("step image of the corner matrix loses TN");
    assert_eq!(hit.minor.rows, vec![0, 1, 2]);
    assert!(hit.value < 0.0);
}

#[test]
fn expected_verdict_table_rows() {
    assert_eq!(expected_verdict(2.0, 4, true, false), Expectation::Preserves);
    assert_eq!(expected_verdict(1.0, 100, false, false), Expectation::Preserves);
    assert_eq!(expected_verdict(1.5, 4, false, false), Expectation::Fails);
}
