use alloc::vec::Vec;

use super::LinearOperator;

/// Coordinate-list accumulator; duplicate entries are summed on conversion.
#[derive(Debug, Clone, Default)]
pub struct Triplets {
    dim: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl Triplets {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, cap: usize) -> Self {
        Self {
            dim,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.dim && col < self.dim);
        if value != 0.0 {
            self.entries.push((row as u32, col as u32, value));
        }
    }

    pub fn into_csr(mut self) -> CsrMatrix {
        self.entries.sort_unstable_by_key(|a| (a.0, a.1));
        let mut row_ptr = Vec::with_capacity(self.dim + 1);
        let mut cols = Vec::with_capacity(self.entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(self.entries.len());
        row_ptr.push(0);
        let mut row = 0u32;
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in self.entries {
            while row < r {
                row_ptr.push(cols.len());
                row += 1;
            }
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                last = Some((r, c));
            }
        }
        while row_ptr.len() <= self.dim {
            row_ptr.push(cols.len());
        }
        CsrMatrix {
            dim: self.dim,
            row_ptr,
            cols,
            vals,
        }
    }
}

/// Square compressed-sparse-row matrix.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        self.cols[range.clone()]
            .binary_search(&(col as u32))
            .map(|k| self.vals[range.start + k])
            .unwrap_or(0.0)
    }

    /// Largest `|A_ij − A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in 0..self.dim {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                let col = self.cols[k] as usize;
                worst = worst.max((self.vals[k] - self.get(col, row)).abs());
            }
        }
        worst
    }

    /// `⟨x|A|x⟩`
    pub fn expectation(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (row, xr) in x.iter().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                s += self.vals[k] * x[self.cols[k] as usize];
            }
            acc += xr * s;
        }
        acc
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (row, yr) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                s += self.vals[k] * x[self.cols[k] as usize];
            }
            *yr = s;
        }
    }
}
