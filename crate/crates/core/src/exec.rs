//! Evaluation strategy for embarrassingly parallel grids.
//!
//! The core crate has no thread pool of its own. Callers that do can plug one
//! in by implementing [`GridMap`]; results must come back in input order.

use alloc::vec::Vec;

pub trait GridMap {
    fn map_grid<T, F>(&self, xs: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send;
}

/// Evaluates grid points one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl GridMap for Sequential {
    fn map_grid<T, F>(&self, xs: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send,
    {
        xs.iter().map(|&x| f(x)).collect()
    }
}
