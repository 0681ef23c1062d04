//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("order {p} out of range 1..={max}")]
    OrderOutOfRange { p: usize, max: usize },

    #[error("non-finite entry {0}")]
    NonFiniteEntry(f64),

    #[error("negative tolerance {0}")]
    NegativeTolerance(f64),

    #[error("exact matrices take tolerance 0, got {0}")]
    ToleranceWithExact(f64),

    #[error("mixed scalar kinds in one matrix")]
    MixedKinds,

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("moment sequence must have odd length, got {0}")]
    EvenMoments(usize),

    #[error("negative base {base} with non-integer power {alpha}")]
    NegativeBase { base: f64, alpha: f64 },

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("coordinates must be strictly increasing")]
    NotIncreasing,

    #[error("grid is {rows}x{cols} but coordinates have lengths {xs}, {ys}")]
    GridShape {
        rows: usize,
        cols: usize,
        xs: usize,
        ys: usize,
    },

    #[error("plan node {0} does not lie on the kernel grid")]
    NodeOffGrid(f64),

    #[error("plan too small: {nodes} nodes for target order {p}")]
    PlanTooSmall { nodes: usize, p: usize },

    #[error("kernel is not TN_{p}: minor [{rows:?};{cols:?}] = {value}")]
    NotTn {
        p: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        value: f64,
    },

    #[error("input 2x2 matrix is not totally positive")]
    NotTp2x2,

    #[error("input is not a symmetric TP 2x2 matrix")]
    NotSymTp2x2,

    #[error("bilateral Laplace transform of a Gaussian family is not rational")]
    TranscendentalTransform,

    #[error("coincident transform poles; exponents are rationally dependent")]
    CoincidentPoles,

    #[error("{0}")]
    Parse(String),
}
