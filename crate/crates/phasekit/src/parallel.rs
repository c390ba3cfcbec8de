use phasekit_core::GridMap;
use rayon::prelude::*;

/// Grid evaluation on the current rayon pool; output keeps input order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl GridMap for Rayon {
    fn map_grid<T, F>(&self, xs: &[f64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64) -> T + Sync + Send,
    {
        xs.par_iter().map(|&x| f(x)).collect()
    }
}

/// Thread pool with `threads` workers, or rayon's default when `None`.
pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build()
}
