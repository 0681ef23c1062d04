//! Kernels sampled on finite ordered grids.

use crate::error::Error;
use crate::matrix::{RationalMatrix, Verdict};

/// A kernel sampled on X x Y: strictly increasing coordinate vectors
/// and a row-major float value grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<f64>,
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl KernelGrid {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, values: Vec<f64>) -> Result<Self, Error> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if !strictly_increasing(&xs) || !strictly_increasing(&ys) {
            return Err(Error::NotIncreasing);
        }
        if values.len() != xs.len() * ys.len() {
            return Err(Error::GridShape {
                rows: values.len() / ys.len().max(1),
                cols: ys.len(),
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry(bad));
        }
        Ok(Self { xs, ys, values })
    }

    pub fn from_fn(
        xs: Vec<f64>,
        ys: Vec<f64>,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self, Error> {
        let mut values = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                values.push(f(x, y));
            }
        }
        Self::new(xs, ys, values)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ys.len() + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Position of a coordinate on the x-axis, if it is a grid node.
    pub fn x_index(&self, x: f64) -> Option<usize> {
        self.xs.iter().position(|&v| v == x)
    }

    pub fn y_index(&self, y: f64) -> Option<usize> {
        self.ys.iter().position(|&v| v == y)
    }

    /// The full value grid as a float matrix.
    pub fn to_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_fn_f64(self.nx(), self.ny(), |i, j| self.value(i, j))
    }

    /// TN_p / TP_p verdict of the sampled kernel.
    pub fn check(&self, p: usize, strict: bool, tol: f64) -> Result<Verdict, Error> {
        self.to_matrix().check(p, strict, tol)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.xs != self.ys {
            return false;
        }
        for i in 0..self.nx() {
            for j in 0..self.ny() {
                if (self.value(i, j) - self.value(j, i)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}
