//! Executable total-positivity mathematics: exact TN/TP verdicts for
//! matrices and sampled kernels, the counterexample families behind the
//! fixed-dimension preserver classifications, discretized-Gaussian TP
//! lifts of TN kernels, explicit 2x2 TP completions, and Polya
//! frequency function/sequence certificates via rational bilateral
//! Laplace transforms.

pub mod completion;
pub mod error;
pub mod kernel;
pub mod matrix;
pub mod poly;
pub mod polya;
pub mod preservers;
pub mod scalar;
pub mod whitney;

pub use error::Error;
pub use kernel::KernelGrid;
pub use matrix::{hankel_check, MinorIndex, RationalMatrix, Status, TransformSpec, Verdict, Witness};
pub use scalar::{Kind, Scalar};
