use alloc::vec;
use alloc::vec::Vec;

use super::{axpy, dot, norm, scale, symmetric_tridiagonal_eigen, LinearOperator};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosConfig {
    /// Target for `‖A x − λ x‖` with `‖x‖ = 1`.
    pub tol: f64,
    /// Krylov basis size per restart cycle.
    pub max_basis: usize,
    pub max_restarts: usize,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_basis: 120,
            max_restarts: 40,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    /// Distance to the next Ritz value of the final Krylov space, if any.
    pub gap: Option<f64>,
    pub matvecs: usize,
}

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
///
/// Each cycle builds a Krylov basis from the current vector and restarts from
/// the lowest Ritz vector until the true residual meets `cfg.tol`. The result
/// is a deterministic function of `start`.
pub fn lowest_eigenpair<A>(op: &A, start: &[f64], cfg: &LanczosConfig) -> Result<EigenPair>
where
    A: LinearOperator + ?Sized,
{
    let n = op.dim();
    assert_eq!(start.len(), n);
    let mut x = start.to_vec();
    let nx = norm(&x);
    assert!(nx > 0.0, "zero start vector");
    scale(1.0 / nx, &mut x);

    let mut ax = vec![0.0; n];
    let mut matvecs = 0;
    let mut last_residual = f64::INFINITY;

    if n == 1 {
        op.apply(&x, &mut ax);
        return Ok(EigenPair {
            value: ax[0] / x[0],
            vector: x,
            residual: 0.0,
            gap: None,
            matvecs: 1,
        });
    }

    let m_max = cfg.max_basis.min(n).max(2);
    for _ in 0..cfg.max_restarts {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_max);
        let mut alphas: Vec<f64> = Vec::with_capacity(m_max);
        let mut betas: Vec<f64> = Vec::with_capacity(m_max);
        basis.push(x.clone());
        let mut w = vec![0.0; n];

        let mut ritz: Option<(Vec<f64>, Vec<f64>)> = None;
        for j in 0..m_max {
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&basis[j], &w);
            alphas.push(a);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let b = norm(&w);
            let exhausted = b <= 1e-13 * (a.abs() + 1.0);
            let check = exhausted || j + 1 == m_max || (j + 1) % 8 == 0;
            if check {
                let (vals, vecs) = symmetric_tridiagonal_eigen(&alphas, &betas)?;
                let k = alphas.len();
                let est = (b * vecs[(k - 1) * k]).abs();
                let done = exhausted || est < 0.1 * cfg.tol || j + 1 == m_max;
                if done {
                    ritz = Some((vals, vecs));
                    break;
                }
            }
            betas.push(b);
            let mut next = w.clone();
            scale(1.0 / b, &mut next);
            basis.push(next);
        }

        let (vals, vecs) = ritz.expect("Lanczos cycle ends with a Ritz solve");
        let k = vals.len();
        let mut y = vec![0.0; n];
        for (i, v) in basis.iter().take(k).enumerate() {
            axpy(vecs[i * k], v, &mut y);
        }
        let ny = norm(&y);
        scale(1.0 / ny, &mut y);
        op.apply(&y, &mut ax);
        matvecs += 1;
        let value = dot(&y, &ax);
        axpy(-value, &y, &mut ax);
        let residual = norm(&ax);
        x = y;
        last_residual = residual;
        if residual <= cfg.tol {
            let gap = (k > 1).then(|| vals[1] - vals[0]);
            // fix the overall sign so the largest-magnitude component is positive
            let pivot = x
                .iter()
                .copied()
                .max_by(|a, b| a.abs().total_cmp(&b.abs()))
                .unwrap_or(1.0);
            if pivot < 0.0 {
                scale(-1.0, &mut x);
            }
            return Ok(EigenPair {
                value,
                vector: x,
                residual,
                gap,
                matvecs,
            });
        }
    }
    Err(Error::Eigensolver {
        residual: last_residual,
        iterations: matvecs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Triplets;
    use core::f64::consts::PI;

    fn laplacian(n: usize) -> crate::linalg::CsrMatrix {
        let mut t = Triplets::new(n);
        for i in 0..n {
            t.push(i, i, 2.0);
            if i + 1 < n {
                t.push(i, i + 1, -1.0);
                t.push(i + 1, i, -1.0);
            }
        }
        t.into_csr()
    }

    #[test]
    fn lowest_laplacian_mode() {
        let n = 300;
        let a = laplacian(n);
        let start = vec![1.0; n];
        let cfg = LanczosConfig {
            max_basis: 60,
            max_restarts: 400,
            ..LanczosConfig::default()
        };
        let ep = lowest_eigenpair(&a, &start, &cfg).unwrap();
        let exact = 2.0 - 2.0 * libm::cos(PI / (n + 1) as f64);
        assert!((ep.value - exact).abs() < 1e-12);
        assert!(ep.residual <= 1e-10);
    }

    #[test]
    fn diagonal_operator_converges_immediately() {
        let mut t = Triplets::new(5);
        for (i, d) in [3.0, -1.0, 2.0, -1.0, 5.0].iter().enumerate() {
            t.push(i, i, *d);
        }
        let a = t.into_csr();
        let ep = lowest_eigenpair(&a, &[1.0; 5], &LanczosConfig::default()).unwrap();
        assert!((ep.value + 1.0).abs() < 1e-14);
        // symmetric combination of the degenerate pair
        assert!((ep.vector[1] - ep.vector[3]).abs() < 1e-12);
    }
}
