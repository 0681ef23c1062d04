//! Dense matrices with exact-rational or float entries, determinant
//! machinery, minor enumeration, and TN/TP verdicts.
//!
//! Exact determinants use fraction-free (Bareiss) elimination after
//! clearing denominators; float determinants use partial-pivot LU.
//! Minor enumeration order is fixed: ascending order k, then
//! lexicographic row tuple, then lexicographic column tuple, so the
//! first violating minor is reproducible across runs.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::scalar::{Kind, Scalar};

/// Row/column index tuples selecting a minor. Tuples are strictly
/// increasing, zero-based, and of equal length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn order(&self) -> usize {
        self.rows.len()
    }
}

/// Outcome status of a TN/TP check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "TN")]
    Tn,
    #[serde(rename = "TP")]
    Tp,
    #[serde(rename = "FAIL")]
    Fail,
}

/// The offending minor of a failed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub index: MinorIndex,
    pub value: Scalar,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("rows", &self.index.rows)?;
        st.serialize_field("cols", &self.index.cols)?;
        match &self.value {
            Scalar::Exact(r) => st.serialize_field("value", &r.to_string())?,
            Scalar::Float(x) => st.serialize_field("value", x)?,
        }
        st.end()
    }
}

/// Verdict of a TN/TP/Hankel check: status, order tested, optional
/// witness, and the tolerance used. `ambiguous` is set when a float
/// minor fell within ten times the tolerance gate, meaning the verdict
/// could flip under a slightly different gate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub order: usize,
    pub witness: Option<Witness>,
    pub tol: f64,
    pub ambiguous: bool,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Data {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Dense matrix, homogeneous in scalar kind, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Data,
}

impl RationalMatrix {
    pub fn from_exact(rows: Vec<Vec<BigRational>>) -> Result<Self, Error> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let cols = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::RaggedRows {
                    row: i,
                    got: r.len(),
                    expected: cols,
                });
            }
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            data: Data::Exact(rows.into_iter().flatten().collect()),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        Self::from_exact(data).expect("literal matrix is well formed")
    }

    pub fn from_f64(rows: Vec<Vec<f64>>) -> Result<Self, Error> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let cols = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::RaggedRows {
                    row: i,
                    got: r.len(),
                    expected: cols,
                });
            }
            if let Some(&bad) = r.iter().find(|x| !x.is_finite()) {
                return Err(Error::NonFiniteEntry(bad));
            }
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            data: Data::Float(rows.into_iter().flatten().collect()),
        })
    }

    pub fn from_fn_exact(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            data: Data::Exact(data),
        }
    }

    pub fn from_fn_f64(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            data: Data::Float(data),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> Kind {
        match self.data {
            Data::Exact(_) => Kind::Exact,
            Data::Float(_) => Kind::Float,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match &self.data {
            Data::Exact(v) => Scalar::Exact(v[i * self.cols + j].clone()),
            Data::Float(v) => Scalar::Float(v[i * self.cols + j]),
        }
    }

    pub fn get_f64(&self, i: usize, j: usize) -> f64 {
        match &self.data {
            Data::Exact(v) => v[i * self.cols + j].to_f64().unwrap_or(0.0),
            Data::Float(v) => v[i * self.cols + j],
        }
    }

    /// Submatrix selected by (not necessarily contiguous) index tuples.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        match &self.data {
            Data::Exact(v) => {
                let data = rows
                    .iter()
                    .flat_map(|&i| cols.iter().map(move |&j| v[i * self.cols + j].clone()))
                    .collect();
                RationalMatrix {
                    rows: rows.len(),
                    cols: cols.len(),
                    data: Data::Exact(data),
                }
            }
            Data::Float(v) => {
                let data = rows
                    .iter()
                    .flat_map(|&i| cols.iter().map(move |&j| v[i * self.cols + j]))
                    .collect();
                RationalMatrix {
                    rows: rows.len(),
                    cols: cols.len(),
                    data: Data::Float(data),
                }
            }
        }
    }

    /// Matrix with both row and column order reversed.
    pub fn reversed(&self) -> RationalMatrix {
        let ri: Vec<usize> = (0..self.rows).rev().collect();
        let ci: Vec<usize> = (0..self.cols).rev().collect();
        self.submatrix(&ri, &ci)
    }

    pub fn transpose(&self) -> RationalMatrix {
        match &self.data {
            Data::Exact(v) => RationalMatrix::from_fn_exact(self.cols, self.rows, |i, j| {
                v[j * self.cols + i].clone()
            }),
            Data::Float(v) => {
                RationalMatrix::from_fn_f64(self.cols, self.rows, |i, j| v[j * self.cols + i])
            }
        }
    }

    /// Converts a float matrix to exact entries without rounding; exact
    /// matrices are returned unchanged. Useful when a determinant with
    /// heavy cancellation must be computed from float data.
    pub fn to_exact(&self) -> RationalMatrix {
        match &self.data {
            Data::Exact(_) => self.clone(),
            Data::Float(v) => RationalMatrix {
                rows: self.rows,
                cols: self.cols,
                data: Data::Exact(v.iter().map(|&x| crate::scalar::f64_to_rational(x)).collect()),
            },
        }
    }

    /// Determinant: Bareiss for exact entries, partial-pivot LU for floats.
    pub fn det(&self) -> Result<Scalar, Error> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        match &self.data {
            Data::Exact(v) => Ok(Scalar::Exact(det_bareiss(v, self.rows))),
            Data::Float(v) => Ok(Scalar::Float(det_lu(v, self.rows))),
        }
    }

    /// Streams every minor of order <= p; enumeration is ascending in
    /// order, then lexicographic in (rows, cols).
    pub fn minors(&self, p: usize) -> Result<MinorIter<'_>, Error> {
        let max = self.rows.min(self.cols);
        if p < 1 || p > max {
            return Err(Error::OrderOutOfRange { p, max });
        }
        Ok(MinorIter {
            m: self,
            p,
            k: 1,
            rows: Some(vec![0]),
            cols: vec![0],
        })
    }

    /// TN_p / TP_p verdict. Strict mode demands every minor greater than
    /// the tolerance gate; lax mode demands every minor at least minus
    /// the gate. The gate for a minor is `tol` times the Hadamard bound
    /// of its submatrix, so it scales with the data.
    pub fn check(&self, p: usize, strict: bool, tol: f64) -> Result<Verdict, Error> {
        self.validate_tol(tol)?;
        let mut ambiguous = false;
        for (idx, value) in self.minors(p)? {
            let sub = self.submatrix(&idx.rows, &idx.cols);
            let gate = tol * hadamard_bound(&sub);
            if self.kind() == Kind::Float {
                let v = match value {
                    Scalar::Float(x) => x,
                    Scalar::Exact(_) => unreachable!(),
                };
                // gate = 0 means a structurally zero minor (zero row),
                // not a borderline one.
                if gate > 0.0 && v.abs() <= 10.0 * gate {
                    ambiguous = true;
                }
                let bad = if strict { v <= gate } else { v < -gate };
                if bad {
                    return Ok(Verdict {
                        status: Status::Fail,
                        order: p,
                        witness: Some(Witness {
                            index: idx,
                            value: Scalar::Float(v),
                        }),
                        tol,
                        ambiguous,
                    });
                }
            } else {
                let r = value.as_exact().expect("exact kind");
                let bad = if strict {
                    !r.is_positive()
                } else {
                    r.is_negative()
                };
                if bad {
                    return Ok(Verdict {
                        status: Status::Fail,
                        order: p,
                        witness: Some(Witness {
                            index: idx,
                            value,
                        }),
                        tol,
                        ambiguous: false,
                    });
                }
            }
        }
        Ok(Verdict {
            status: if strict { Status::Tp } else { Status::Tn },
            order: p,
            witness: None,
            tol,
            ambiguous,
        })
    }

    /// Full-order TP test via Fekete's criterion: all contiguous minors
    /// positive. The PASS direction relies on Fekete; a FAIL reports the
    /// first failing contiguous minor in (order, row, col) position.
    pub fn fekete_tp(&self, tol: f64) -> Result<Verdict, Error> {
        self.validate_tol(tol)?;
        let full = self.rows.min(self.cols);
        let mut ambiguous = false;
        for k in 1..=full {
            for i in 0..=(self.rows - k) {
                for j in 0..=(self.cols - k) {
                    let rows: Vec<usize> = (i..i + k).collect();
                    let cols: Vec<usize> = (j..j + k).collect();
                    let sub = self.submatrix(&rows, &cols);
                    let d = sub.det()?;
                    let gate = tol * hadamard_bound(&sub);
                    let bad = match &d {
                        Scalar::Exact(r) => !r.is_positive(),
                        Scalar::Float(x) => {
                            if gate > 0.0 && x.abs() <= 10.0 * gate {
                                ambiguous = true;
                            }
                            *x <= gate
                        }
                    };
                    if bad {
                        return Ok(Verdict {
                            status: Status::Fail,
                            order: full,
                            witness: Some(Witness {
                                index: MinorIndex { rows, cols },
                                value: d,
                            }),
                            tol,
                            ambiguous,
                        });
                    }
                }
            }
        }
        Ok(Verdict {
            status: Status::Tp,
            order: full,
            witness: None,
            tol,
            ambiguous,
        })
    }

    /// Entrywise image under a transform, preserving exactness whenever
    /// the transform is exactly representable over the rationals.
    pub fn apply_entrywise(&self, f: &TransformSpec) -> Result<RationalMatrix, Error> {
        f.apply(self)
    }

    fn validate_tol(&self, tol: f64) -> Result<(), Error> {
        if tol < 0.0 || !tol.is_finite() {
            return Err(Error::NegativeTolerance(tol));
        }
        if self.kind() == Kind::Exact && tol != 0.0 {
            return Err(Error::ToleranceWithExact(tol));
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        let rows: Vec<Vec<serde_json::Value>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| match self.get(i, j) {
                        Scalar::Exact(r) => serde_json::Value::String(r.to_string()),
                        Scalar::Float(x) => serde_json::json!(x),
                    })
                    .collect()
            })
            .collect();
        let kind = match self.kind() {
            Kind::Exact => "exact",
            Kind::Float => "float",
        };
        serde_json::json!({ "kind": kind, "rows": rows }).to_string()
    }

    /// Parses the matrix interchange format:
    /// `{"kind": "exact"|"float", "rows": [[entry, ...], ...]}` with
    /// exact entries as `"p/q"` strings (plain integers also accepted).
    pub fn from_json_str(s: &str) -> Result<Self, Error> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| Error::Parse("missing \"kind\"".into()))?;
        let rows = v
            .get("rows")
            .and_then(|r| r.as_array())
            .ok_or_else(|| Error::Parse("missing \"rows\" array".into()))?;
        match kind {
            "exact" => {
                let mut out = Vec::new();
                for row in rows {
                    let row = row
                        .as_array()
                        .ok_or_else(|| Error::Parse("row is not an array".into()))?;
                    let mut r = Vec::new();
                    for e in row {
                        let s = match e {
                            serde_json::Value::String(s) => Scalar::parse_exact(s)?,
                            serde_json::Value::Number(n) if n.is_i64() => {
                                Scalar::from_int(n.as_i64().unwrap())
                            }
                            other => {
                                return Err(Error::Parse(format!(
                                    "exact entry must be \"p/q\" string or integer, got {other}"
                                )))
                            }
                        };
                        match s {
                            Scalar::Exact(q) => r.push(q),
                            Scalar::Float(_) => unreachable!(),
                        }
                    }
                    out.push(r);
                }
                RationalMatrix::from_exact(out)
            }
            "float" => {
                let mut out = Vec::new();
                for row in rows {
                    let row = row
                        .as_array()
                        .ok_or_else(|| Error::Parse("row is not an array".into()))?;
                    let mut r = Vec::new();
                    for e in row {
                        let x = e
                            .as_f64()
                            .ok_or_else(|| Error::Parse(format!("float entry expected, got {e}")))?;
                        r.push(x);
                    }
                    out.push(r);
                }
                RationalMatrix::from_f64(out)
            }
            other => Err(Error::Parse(format!("unknown kind \"{other}\""))),
        }
    }
}

/// Hadamard bound of a square submatrix: product of the Euclidean row
/// norms, evaluated in binary64. Used to scale the float tolerance gate.
pub fn hadamard_bound(m: &RationalMatrix) -> f64 {
    let mut h = 1.0;
    for i in 0..m.rows() {
        let mut s = 0.0;
        for j in 0..m.cols() {
            let x = m.get_f64(i, j);
            s += x * x;
        }
        h *= s.sqrt();
    }
    h
}

/// Iterator over minors of order <= p in canonical order.
pub struct MinorIter<'a> {
    m: &'a RationalMatrix,
    p: usize,
    k: usize,
    rows: Option<Vec<usize>>,
    cols: Vec<usize>,
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - (k - i) {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for MinorIter<'_> {
    type Item = (MinorIndex, Scalar);

    fn next(&mut self) -> Option<Self::Item> {
        let rows = self.rows.as_ref()?.clone();
        let cols = self.cols.clone();
        let sub = self.m.submatrix(&rows, &cols);
        let value = sub.det().expect("minor submatrix is square");
        let item = (MinorIndex { rows, cols }, value);

        // Advance: columns, then rows, then order.
        if !next_combination(&mut self.cols, self.m.cols()) {
            let rows = self.rows.as_mut().unwrap();
            if next_combination(rows, self.m.rows()) {
                self.cols = (0..self.k).collect();
            } else if self.k < self.p {
                self.k += 1;
                self.rows = Some((0..self.k).collect());
                self.cols = (0..self.k).collect();
            } else {
                self.rows = None;
            }
        }
        Some(item)
    }
}

/// Hankel verdict from an odd-length moment sequence. The n x n Hankel
/// matrix A with A_ij = moments[i+j] is TP iff A and A^(1) (drop first
/// row, last column) are positive definite, and TN iff both are
/// positive semidefinite. Exact kind decides definiteness by principal
/// minors; float kind by an eigenvalue threshold.
pub fn hankel_check(moments: &[Scalar], strict: bool, tol: f64) -> Result<Verdict, Error> {
    if moments.is_empty() || moments.len().is_multiple_of(2) {
        return Err(Error::EvenMoments(moments.len()));
    }
    let n = moments.len().div_ceil(2);
    let kind = moments[0].kind();
    if moments.iter().any(|m| m.kind() != kind) {
        return Err(Error::MixedKinds);
    }
    let a = hankel_from_moments(moments, 0, n)?;
    a.validate_tol(tol)?;
    let order = n;

    let mut ambiguous = false;
    let mut run = |m: &RationalMatrix, row_shift: usize| -> Result<Option<Witness>, Error> {
        let r = if strict {
            positive_definite_witness(m, tol, &mut ambiguous)?
        } else {
            positive_semidefinite_witness(m, tol, &mut ambiguous)?
        };
        Ok(r.map(|w| Witness {
            index: MinorIndex {
                rows: w.index.rows.iter().map(|i| i + row_shift).collect(),
                // Column indices refer to the full Hankel matrix A.
                cols: w.index.cols,
            },
            value: w.value,
        }))
    };

    if let Some(w) = run(&a, 0)? {
        return Ok(Verdict {
            status: Status::Fail,
            order,
            witness: Some(w),
            tol,
            ambiguous,
        });
    }
    if n > 1 {
        let a1 = hankel_from_moments(moments, 1, n - 1)?;
        if let Some(w) = run(&a1, 1)? {
            return Ok(Verdict {
                status: Status::Fail,
                order,
                witness: Some(w),
                tol,
                ambiguous,
            });
        }
    }
    Ok(Verdict {
        status: if strict { Status::Tp } else { Status::Tn },
        order,
        witness: None,
        tol,
        ambiguous,
    })
}

fn hankel_from_moments(moments: &[Scalar], shift: usize, n: usize) -> Result<RationalMatrix, Error> {
    match moments[0] {
        Scalar::Exact(_) => {
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| moments[i + j + shift].as_exact().unwrap().clone())
                        .collect()
                })
                .collect();
            RationalMatrix::from_exact(rows)
        }
        Scalar::Float(_) => {
            let rows = (0..n)
                .map(|i| (0..n).map(|j| moments[i + j + shift].to_f64()).collect())
                .collect();
            RationalMatrix::from_f64(rows)
        }
    }
}

/// Positive definiteness by Sylvester's criterion (exact) or smallest
/// eigenvalue (float). Returns the violating leading principal minor.
fn positive_definite_witness(
    m: &RationalMatrix,
    tol: f64,
    ambiguous: &mut bool,
) -> Result<Option<Witness>, Error> {
    match m.kind() {
        Kind::Exact => {
            for k in 1..=m.rows() {
                let idx: Vec<usize> = (0..k).collect();
                let sub = m.submatrix(&idx, &idx);
                let d = sub.det()?;
                if !d.as_exact().unwrap().is_positive() {
                    return Ok(Some(Witness {
                        index: MinorIndex {
                            rows: idx.clone(),
                            cols: idx,
                        },
                        value: d,
                    }));
                }
            }
            Ok(None)
        }
        Kind::Float => {
            let gate = tol * sym_eigen_scale(m);
            let lam = min_eigenvalue_sym(m);
            if lam.abs() <= 10.0 * gate && tol > 0.0 {
                *ambiguous = true;
            }
            if lam > gate {
                return Ok(None);
            }
            // Report the first non-positive leading principal minor.
            for k in 1..=m.rows() {
                let idx: Vec<usize> = (0..k).collect();
                let sub = m.submatrix(&idx, &idx);
                let d = sub.det()?.to_f64();
                if d <= tol * hadamard_bound(&sub) {
                    return Ok(Some(Witness {
                        index: MinorIndex {
                            rows: idx.clone(),
                            cols: idx,
                        },
                        value: Scalar::Float(d),
                    }));
                }
            }
            let idx: Vec<usize> = (0..m.rows()).collect();
            Ok(Some(Witness {
                index: MinorIndex {
                    rows: idx.clone(),
                    cols: idx,
                },
                value: Scalar::Float(lam),
            }))
        }
    }
}

/// Positive semidefiniteness: every principal minor non-negative
/// (exact; leading minors alone do not decide PSD) or eigenvalue
/// threshold (float).
fn positive_semidefinite_witness(
    m: &RationalMatrix,
    tol: f64,
    ambiguous: &mut bool,
) -> Result<Option<Witness>, Error> {
    match m.kind() {
        Kind::Exact => {
            let n = m.rows();
            for k in 1..=n {
                let mut idx: Vec<usize> = (0..k).collect();
                loop {
                    let sub = m.submatrix(&idx, &idx);
                    let d = sub.det()?;
                    if d.as_exact().unwrap().is_negative() {
                        return Ok(Some(Witness {
                            index: MinorIndex {
                                rows: idx.clone(),
                                cols: idx,
                            },
                            value: d,
                        }));
                    }
                    if !next_combination(&mut idx, n) {
                        break;
                    }
                }
            }
            Ok(None)
        }
        Kind::Float => {
            let gate = tol * sym_eigen_scale(m);
            let lam = min_eigenvalue_sym(m);
            if lam.abs() <= 10.0 * gate && tol > 0.0 {
                *ambiguous = true;
            }
            if lam >= -gate {
                return Ok(None);
            }
            let n = m.rows();
            for k in 1..=n {
                let mut idx: Vec<usize> = (0..k).collect();
                loop {
                    let sub = m.submatrix(&idx, &idx);
                    let d = sub.det()?.to_f64();
                    if d < -tol * hadamard_bound(&sub) {
                        return Ok(Some(Witness {
                            index: MinorIndex {
                                rows: idx.clone(),
                                cols: idx,
                            },
                            value: Scalar::Float(d),
                        }));
                    }
                    if !next_combination(&mut idx, n) {
                        break;
                    }
                }
            }
            let idx: Vec<usize> = (0..n).collect();
            Ok(Some(Witness {
                index: MinorIndex {
                    rows: idx.clone(),
                    cols: idx,
                },
                value: Scalar::Float(lam),
            }))
        }
    }
}

fn sym_eigen_scale(m: &RationalMatrix) -> f64 {
    let mut mx: f64 = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            mx = mx.max(m.get_f64(i, j).abs());
        }
    }
    mx * m.rows() as f64
}

/// Smallest eigenvalue of a symmetric matrix (symmetrized if needed).
pub fn min_eigenvalue_sym(m: &RationalMatrix) -> f64 {
    let n = m.rows();
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * (m.get_f64(i, j) + m.get_f64(j, i)));
    let ev = a.symmetric_eigenvalues();
    ev.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Entrywise transform menu: constants, scaled powers (with the
/// convention 0^0 = 1), step and atom indicators, and polynomials with
/// rational coefficients.
#[derive(Debug, Clone)]
pub enum TransformSpec {
    Constant(Scalar),
    Power { c: Scalar, alpha: f64 },
    Step { c: Scalar },
    Atom { c: Scalar },
    Polynomial { coeffs: Vec<BigRational> },
}

impl TransformSpec {
    pub fn power(c: f64, alpha: f64) -> Self {
        TransformSpec::Power {
            c: Scalar::Float(c),
            alpha,
        }
    }

    pub fn power_exact(c: BigRational, alpha: f64) -> Self {
        TransformSpec::Power {
            c: Scalar::Exact(c),
            alpha,
        }
    }

    /// Scalar image of a single value, float path.
    pub fn eval_f64(&self, x: f64) -> Result<f64, Error> {
        Ok(match self {
            TransformSpec::Constant(c) => c.to_f64(),
            TransformSpec::Power { c, alpha } => {
                if x == 0.0 && *alpha == 0.0 {
                    c.to_f64()
                } else if x < 0.0 && alpha.fract() != 0.0 {
                    return Err(Error::NegativeBase {
                        base: x,
                        alpha: *alpha,
                    });
                } else if x == 0.0 && *alpha < 0.0 {
                    return Err(Error::BadParameter(format!("0^{alpha} undefined")));
                } else {
                    c.to_f64() * x.powf(*alpha)
                }
            }
            TransformSpec::Step { c } => {
                if x > 0.0 {
                    c.to_f64()
                } else {
                    0.0
                }
            }
            TransformSpec::Atom { c } => {
                if x == 0.0 {
                    c.to_f64()
                } else {
                    0.0
                }
            }
            TransformSpec::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for c in coeffs.iter().rev() {
                    acc = acc * x + c.to_f64().unwrap_or(0.0);
                }
                acc
            }
        })
    }

    /// Whether the transform maps exact inputs to exact outputs.
    fn preserves_exact(&self) -> bool {
        match self {
            TransformSpec::Constant(c) | TransformSpec::Step { c } | TransformSpec::Atom { c } => {
                c.kind() == Kind::Exact
            }
            TransformSpec::Power { c, alpha } => {
                c.kind() == Kind::Exact && alpha.fract() == 0.0 && alpha.abs() < 2e9
            }
            TransformSpec::Polynomial { .. } => true,
        }
    }

    fn eval_exact(&self, x: &BigRational) -> Result<BigRational, Error> {
        Ok(match self {
            TransformSpec::Constant(c) => c.as_exact().unwrap().clone(),
            TransformSpec::Power { c, alpha } => {
                let k = *alpha as i32;
                if x.is_zero() && k == 0 {
                    c.as_exact().unwrap().clone()
                } else if x.is_zero() && k < 0 {
                    return Err(Error::BadParameter(format!("0^{k} undefined")));
                } else {
                    c.as_exact().unwrap() * x.pow(k)
                }
            }
            TransformSpec::Step { c } => {
                if x.is_positive() {
                    c.as_exact().unwrap().clone()
                } else {
                    BigRational::zero()
                }
            }
            TransformSpec::Atom { c } => {
                if x.is_zero() {
                    c.as_exact().unwrap().clone()
                } else {
                    BigRational::zero()
                }
            }
            TransformSpec::Polynomial { coeffs } => {
                let mut acc = BigRational::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
        })
    }

    fn apply(&self, m: &RationalMatrix) -> Result<RationalMatrix, Error> {
        if m.kind() == Kind::Exact && self.preserves_exact() {
            let mut rows = Vec::with_capacity(m.rows());
            for i in 0..m.rows() {
                let mut r = Vec::with_capacity(m.cols());
                for j in 0..m.cols() {
                    let x = m.get(i, j);
                    r.push(self.eval_exact(x.as_exact().unwrap())?);
                }
                rows.push(r);
            }
            RationalMatrix::from_exact(rows)
        } else {
            let mut rows = Vec::with_capacity(m.rows());
            for i in 0..m.rows() {
                let mut r = Vec::with_capacity(m.cols());
                for j in 0..m.cols() {
                    r.push(self.eval_f64(m.get_f64(i, j))?);
                }
                rows.push(r);
            }
            RationalMatrix::from_f64(rows)
        }
    }
}

fn det_bareiss(data: &[BigRational], n: usize) -> BigRational {
    if n == 0 {
        return BigRational::one();
    }
    // Clear denominators row by row so elimination runs over integers.
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = BigInt::one();
        for j in 0..n {
            lcm = num::integer::lcm(lcm, data[i * n + j].denom().clone());
        }
        let row: Vec<BigInt> = (0..n)
            .map(|j| {
                let e = &data[i * n + j];
                e.numer() * (&lcm / e.denom())
            })
            .collect();
        scale *= &lcm;
        a.push(row);
    }

    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by Bareiss
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut det = BigRational::new(a[n - 1][n - 1].clone(), scale);
    if sign < 0 {
        det = -det;
    }
    det
}

fn det_lu(data: &[f64], n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut a = data.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].abs();
        for r in k + 1..n {
            let v = a[r * n + k].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for r in k + 1..n {
            let f = a[r * n + k] / pivot;
            for j in k + 1..n {
                a[r * n + j] -= f * a[k * n + j];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn det_identity_1x1() {
        let m = RationalMatrix::from_i64(&[&[1]]);
        assert_eq!(m.det().unwrap(), Scalar::from_int(1));
    }

    #[test]
    fn det_rank_one_family_vanishes() {
        // A(2,3) = [[2, 6], [1, 3]] is rank one by construction.
        let m = RationalMatrix::from_i64(&[&[2, 6], &[1, 3]]);
        assert_eq!(m.det().unwrap(), Scalar::from_int(0));
    }

    #[test]
    fn det_requires_square() {
        let m = RationalMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(m.det(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn det_with_rational_entries() {
        let m = RationalMatrix::from_exact(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4), rat(1, 5)],
        ])
        .unwrap();
        // 1/10 - 1/12 = 1/60
        assert_eq!(m.det().unwrap(), Scalar::from_ratio(1, 60));
    }

    #[test]
    fn minor_counts() {
        let m = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let ones: Vec<_> = m.minors(1).unwrap().collect();
        assert_eq!(ones.len(), 4);
        assert_eq!(ones[0].1, Scalar::from_int(1));
        assert_eq!(ones[3].1, Scalar::from_int(4));

        let m3 = RationalMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(m3.minors(2).unwrap().count(), 9 + 9);
        assert_eq!(m3.minors(3).unwrap().count(), 9 + 9 + 1);
    }

    #[test]
    fn minor_enumeration_order() {
        let m = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let idx: Vec<MinorIndex> = m.minors(2).unwrap().map(|(i, _)| i).collect();
        let expect: Vec<(Vec<usize>, Vec<usize>)> = vec![
            (vec![0], vec![0]),
            (vec![0], vec![1]),
            (vec![1], vec![0]),
            (vec![1], vec![1]),
            (vec![0, 1], vec![0, 1]),
        ];
        let got: Vec<_> = idx.into_iter().map(|i| (i.rows, i.cols)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn check_antidiagonal_fails_with_witness() {
        let m = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let v = m.check(2, false, 0.0).unwrap();
        assert_eq!(v.status, Status::Fail);
        let w = v.witness.unwrap();
        assert_eq!(w.index.rows, vec![0, 1]);
        assert_eq!(w.value, Scalar::from_int(-1));
    }

    #[test]
    fn check_vandermonde_strict_tp3() {
        // (u_i^{alpha_j}) at u = (1,2,3), alpha = (0,1,2).
        let m = RationalMatrix::from_i64(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 9]]);
        let v = m.check(3, true, 0.0).unwrap();
        assert_eq!(v.status, Status::Tp);
    }

    #[test]
    fn check_rejects_bad_tolerances() {
        let exact = RationalMatrix::from_i64(&[&[1]]);
        assert!(matches!(
            exact.check(1, false, 1e-9),
            Err(Error::ToleranceWithExact(_))
        ));
        let float = RationalMatrix::from_f64(vec![vec![1.0]]).unwrap();
        assert!(matches!(
            float.check(1, false, -1.0),
            Err(Error::NegativeTolerance(_))
        ));
    }

    #[test]
    fn fekete_all_ones_fails_on_contiguous_2x2() {
        let m = RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let v = m.fekete_tp(0.0).unwrap();
        assert_eq!(v.status, Status::Fail);
        let w = v.witness.unwrap();
        assert_eq!(w.index.rows, vec![0, 1]);
        assert_eq!(w.value, Scalar::from_int(0));
    }

    #[test]
    fn hankel_rejects_even_length() {
        let m = vec![Scalar::from_int(1), Scalar::from_int(2)];
        assert!(matches!(
            hankel_check(&m, false, 0.0),
            Err(Error::EvenMoments(2))
        ));
    }

    #[test]
    fn hankel_alternating_moments_fail_tn() {
        // moments (1,0,1,0,1): A^(1) has leading 2x2 minor -1.
        let m: Vec<Scalar> = [1, 0, 1, 0, 1].iter().map(|&x| Scalar::from_int(x)).collect();
        let v = hankel_check(&m, false, 0.0).unwrap();
        assert_eq!(v.status, Status::Fail);
        let w = v.witness.unwrap();
        assert_eq!(w.value, Scalar::from_int(-1));
        assert_eq!(w.index.rows, vec![1, 2]);
    }

    #[test]
    fn entrywise_square_exact() {
        let m = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let f = TransformSpec::power_exact(BigRational::one(), 2.0);
        let out = m.apply_entrywise(&f).unwrap();
        assert_eq!(out.kind(), Kind::Exact);
        assert_eq!(out.get(1, 1), Scalar::from_int(16));
    }

    #[test]
    fn entrywise_zero_power_convention() {
        let m = RationalMatrix::from_i64(&[&[0, 2]]);
        let f = TransformSpec::power_exact(BigRational::one(), 0.0);
        let out = m.apply_entrywise(&f).unwrap();
        assert_eq!(out.get(0, 0), Scalar::from_int(1));
        assert_eq!(out.get(0, 1), Scalar::from_int(1));
    }

    #[test]
    fn entrywise_sqrt_goes_float() {
        let m = RationalMatrix::from_i64(&[&[4, 9]]);
        let f = TransformSpec::power(1.0, 0.5);
        let out = m.apply_entrywise(&f).unwrap();
        assert_eq!(out.kind(), Kind::Float);
        assert_eq!(out.get_f64(0, 1), 3.0);
    }

    #[test]
    fn entrywise_negative_base_rejected() {
        let m = RationalMatrix::from_f64(vec![vec![-1.0]]).unwrap();
        let f = TransformSpec::power(1.0, 0.5);
        assert!(matches!(
            m.apply_entrywise(&f),
            Err(Error::NegativeBase { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = RationalMatrix::from_exact(vec![
            vec![rat(1, 2), rat(3, 1)],
            vec![rat(0, 1), rat(-2, 5)],
        ])
        .unwrap();
        let s = m.to_json_string();
        let back = RationalMatrix::from_json_str(&s).unwrap();
        assert_eq!(m, back);

        let f = RationalMatrix::from_f64(vec![vec![0.5, 3.0]]).unwrap();
        let fs = f.to_json_string();
        assert_eq!(f, RationalMatrix::from_json_str(&fs).unwrap());
    }
}
