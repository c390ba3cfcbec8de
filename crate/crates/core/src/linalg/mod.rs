//! Sparse matrices and the ground-state eigensolver.

mod csr;
mod lanczos;
mod tridiag;

pub use csr::{CsrMatrix, Triplets};
pub use lanczos::{lowest_eigenpair, EigenPair, LanczosConfig};
pub use tridiag::symmetric_tridiagonal_eigen;

/// A real symmetric operator applied matrix-free.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y ← A x`
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// `y ← y + s x`
pub(crate) fn axpy(s: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

pub(crate) fn scale(s: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= s;
    }
}
