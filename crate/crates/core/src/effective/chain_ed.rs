//! Exact diagonalization of the periodic chain
//! `ε Σ s^z − 4J Σ s^z_i s^z_{i+1} − h Σ s^x` in the zero-momentum sector.
//!
//! For `h > 0` every off-diagonal element is negative, so the ground state is
//! nodeless and translation invariant; restricting to `k = 0` loses nothing.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{lowest_eigenpair, CsrMatrix, LanczosConfig, LinearOperator, Triplets};
use crate::{Error, Result};

use super::ChainSample;

pub const MIN_SITES: usize = 4;
pub const MAX_SITES: usize = 20;

/// Translation-invariant basis of an `n_sites` ring, independent of the
/// couplings.
///
/// Each basis state is the normalized sum over one translation orbit of
/// z-basis configurations (bit set = spin up), represented by the smallest
/// configuration in the orbit.
#[derive(Debug, Clone)]
pub struct ChainSector {
    n_sites: usize,
    reps: Vec<u32>,
    periods: Vec<u32>,
    /// `Σ s^z` per basis state.
    z: Vec<f64>,
    /// `Σ s^z_i s^z_{i+1}` per basis state.
    zz: Vec<f64>,
    /// `(Σ (−1)^i s^z_i)²` per basis state.
    stag2: Vec<f64>,
    /// `Σ s^x` restricted to the sector.
    x: CsrMatrix,
}

fn rotate(state: u32, n: usize) -> u32 {
    let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    ((state << 1) | (state >> (n - 1))) & mask
}

impl ChainSector {
    pub fn new(n_sites: usize) -> Result<Self> {
        if !n_sites.is_multiple_of(2) || !(MIN_SITES..=MAX_SITES).contains(&n_sites) {
            return Err(Error::InvalidParameter(
                "n_sites must be even and between 4 and 20",
            ));
        }
        let n = n_sites;
        let full = 1usize << n;
        const NONE: u32 = u32::MAX;
        let mut index = vec![NONE; full];
        let mut reps = Vec::new();
        let mut periods = Vec::new();
        for s in 0..full as u32 {
            if index[s as usize] != NONE {
                continue;
            }
            // s is the smallest member of a new orbit
            let id = reps.len() as u32;
            let mut t = s;
            let mut period = 0;
            loop {
                index[t as usize] = id;
                period += 1;
                t = rotate(t, n);
                if t == s {
                    break;
                }
            }
            reps.push(s);
            periods.push(period);
        }
        let dim = reps.len();

        let mut z = Vec::with_capacity(dim);
        let mut zz = Vec::with_capacity(dim);
        let mut stag2 = Vec::with_capacity(dim);
        for &r in &reps {
            let sz = |i: usize| if (r >> i) & 1 == 1 { 0.5 } else { -0.5 };
            let mut zs = 0.0;
            let mut bonds = 0.0;
            let mut st = 0.0;
            for i in 0..n {
                zs += sz(i);
                bonds += sz(i) * sz((i + 1) % n);
                st += if i % 2 == 0 { sz(i) } else { -sz(i) };
            }
            z.push(zs);
            zz.push(bonds);
            stag2.push(st * st);
        }

        let mut t = Triplets::with_capacity(dim, dim * n);
        for (col, &r) in reps.iter().enumerate() {
            let pc = periods[col] as f64;
            for i in 0..n {
                let row = index[(r ^ (1 << i)) as usize] as usize;
                let pr = periods[row] as f64;
                t.push(row, col, 0.5 * libm::sqrt(pc / pr));
            }
        }
        Ok(Self {
            n_sites,
            reps,
            periods,
            z,
            zz,
            stag2,
            x: t.into_csr(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Orbit representatives, ascending.
    pub fn representatives(&self) -> &[u32] {
        &self.reps
    }

    pub fn periods(&self) -> &[u32] {
        &self.periods
    }
}

/// Couplings of the chain Hamiltonian for one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainParams {
    pub eps: f64,
    pub j: f64,
    pub h: f64,
}

/// The chain Hamiltonian on a [`ChainSector`], applied matrix-free.
pub struct ChainHamiltonian<'a> {
    sector: &'a ChainSector,
    diag: Vec<f64>,
    h: f64,
}

impl<'a> ChainHamiltonian<'a> {
    pub fn new(sector: &'a ChainSector, c: ChainParams) -> Self {
        let diag = sector
            .z
            .iter()
            .zip(&sector.zz)
            .map(|(z, zz)| c.eps * z - 4.0 * c.j * zz)
            .collect();
        Self {
            sector,
            diag,
            h: c.h,
        }
    }
}

impl LinearOperator for ChainHamiltonian<'_> {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.sector.x.apply(x, y);
        for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.diag) {
            *yi = d * xi - self.h * *yi;
        }
    }
}

/// Ritz gaps below this mark the ground state as degenerate.
const DEGENERATE_GAP: f64 = 1e-12;

fn expectation(weights: &[f64], values: &[f64]) -> f64 {
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

/// Ground state of the chain: energy per site, `m_x`, `m_z` and the
/// staggered structure factor `⟨(Σ (−1)^i s^z_i)²⟩/N²`.
///
/// A negative `h` is solved as `|h|` with `m_x` reflected. At `h = 0` a tied
/// diagonal minimum is returned as the equal-weight superposition of the tied
/// orbits with the degeneracy flag set.
pub fn ed_chain_ground(
    sector: &ChainSector,
    c: ChainParams,
    cfg: &LanczosConfig,
) -> Result<ChainSample> {
    if !(c.eps.is_finite() && c.j.is_finite() && c.h.is_finite()) {
        return Err(Error::InvalidParameter("couplings must be finite"));
    }
    let n = sector.n_sites as f64;
    let sign = if c.h < 0.0 { -1.0 } else { 1.0 };
    let ham = ChainHamiltonian::new(sector, ChainParams { h: c.h.abs(), ..c });

    if c.h == 0.0 {
        let e_min = ham.diag.iter().copied().fold(f64::INFINITY, f64::min);
        let tie = 1e-12 * (1.0 + e_min.abs());
        let tied: Vec<usize> = (0..sector.dim())
            .filter(|&i| ham.diag[i] - e_min <= tie)
            .collect();
        let multiplicity: u32 = tied.iter().map(|&i| sector.periods[i]).sum();
        let w = 1.0 / tied.len() as f64;
        let avg = |v: &[f64]| tied.iter().map(|&i| v[i]).sum::<f64>() * w;
        return Ok(ChainSample {
            energy: e_min / n,
            mx: 0.0,
            mz: avg(&sector.z) / n,
            s_pi: avg(&sector.stag2) / (n * n),
            degenerate: multiplicity > 1,
        });
    }

    let start = vec![1.0; sector.dim()];
    let pair = lowest_eigenpair(&ham, &start, cfg)?;
    let weights: Vec<f64> = pair.vector.iter().map(|v| v * v).collect();
    let x_mean = sector.x.expectation(&pair.vector);
    Ok(ChainSample {
        energy: pair.value / n,
        mx: sign * x_mean / n,
        mz: expectation(&weights, &sector.z) / n,
        s_pi: expectation(&weights, &sector.stag2) / (n * n),
        degenerate: pair.gap.is_some_and(|g| g < DEGENERATE_GAP),
    })
}
