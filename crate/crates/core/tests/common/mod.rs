#![allow(dead_code)]

//! Shared oracles for the integration suites. Everything here is
//! independent of the library's elimination-based determinant path.

use num::{BigInt, BigRational, Signed, Zero};
use rand::Rng;
use totpos_core::{RationalMatrix, Scalar};

/// Laplace (cofactor) expansion along the first row; exponential time,
/// used as the exact oracle for sizes up to five.
pub fn det_cofactor(m: &RationalMatrix) -> BigRational {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 1 {
        return m.get(0, 0).as_exact().unwrap().clone();
    }
    let mut acc = BigRational::zero();
    let rows: Vec<usize> = (1..n).collect();
    for j in 0..n {
        let a = m.get(0, j).as_exact().unwrap().clone();
        if a.is_zero() {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let sub = m.submatrix(&rows, &cols);
        let term = a * det_cofactor(&sub);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_rational_matrix(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=10)))
                .collect()
        })
        .collect();
    RationalMatrix::from_exact(rows).unwrap()
}

/// Generalized Vandermonde sample (u_i^{a_j}) with random increasing
/// positive bases and increasing exponents; totally positive.
pub fn random_tp_matrix(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..4.0)).collect();
    u.sort_by(f64::total_cmp);
    for i in 1..n {
        if u[i] - u[i - 1] < 0.15 {
            u[i] = u[i - 1] + 0.15;
        }
    }
    let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
    a.sort_by(f64::total_cmp);
    for i in 1..n {
        if a[i] - a[i - 1] < 0.15 {
            a[i] = a[i - 1] + 0.15;
        }
    }
    RationalMatrix::from_fn_f64(n, n, |i, j| u[i].powf(a[j]))
}

/// Exhaustive minor scan: strictly positive (TP) verdict by direct
/// enumeration, for exact matrices.
pub fn is_tp_by_enumeration(m: &RationalMatrix) -> bool {
    let p = m.rows().min(m.cols());
    m.minors(p)
        .unwrap()
        .all(|(_, v)| v.as_exact().map(|r| r.is_positive()).unwrap_or(v.to_f64() > 0.0))
}

pub fn is_tn_by_enumeration(m: &RationalMatrix) -> bool {
    let p = m.rows().min(m.cols());
    m.minors(p)
        .unwrap()
        .all(|(_, v)| v.as_exact().map(|r| !r.is_negative()).unwrap_or(v.to_f64() >= 0.0))
}

pub fn exact_scalars(values: &[(i64, i64)]) -> Vec<Scalar> {
    values.iter().map(|&(n, d)| Scalar::Exact(rat(n, d))).collect()
}

/// Strictly increasing tuples of length m drawn from 0..n.
pub fn increasing_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

pub fn det_f64(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let m = RationalMatrix::from_f64(rows.to_vec()).unwrap();
    assert_eq!(n, m.cols());
    m.det().unwrap().to_f64()
}
