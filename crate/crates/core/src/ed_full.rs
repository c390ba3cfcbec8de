//! Exact diagonalization of the full Hamiltonian with the photon Fock space
//! truncated at `n_max` quanta.
//!
//! At finite `N` the ground state is a parity eigenstate, so `⟨a + a†⟩`
//! vanishes identically even deep in the superradiant regime. Superradiance
//! shows up in the photon density `⟨a†a⟩/N` and the quadrature fluctuation
//! `⟨(a + a†)²⟩/N` instead.

use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

use crate::linalg::{lowest_eigenpair, CsrMatrix, LanczosConfig, LinearOperator, Triplets};
use crate::model::{validate_params, ModelParams, OrderParams, ToleranceSet};
use crate::{Error, Result};

pub const DEFAULT_DIM_CAP: usize = 1 << 22;
pub const MIN_NMAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EDConfig {
    pub n_spins: usize,
    /// Photon occupations `0..=n_max` are kept.
    pub n_max: usize,
    pub eig_tol: f64,
    /// Shift `a → a + √N·α` applied before truncation, with `α` per `√N`
    /// (typically the mean-field amplitude).
    pub displaced_frame: Option<f64>,
    pub dim_cap: usize,
}

impl Default for EDConfig {
    fn default() -> Self {
        Self {
            n_spins: 8,
            n_max: 16,
            eig_tol: 1e-10,
            displaced_frame: None,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

impl EDConfig {
    /// Shifts the photon by the mean-field amplitude at `p`.
    pub fn with_mean_field_shift(self, p: ModelParams, t: ToleranceSet) -> Result<Self> {
        let mf = crate::mean_field::mf_minimize(p, t, crate::mean_field::DEFAULT_STARTS)?;
        Ok(Self {
            displaced_frame: Some(mf.ansatz.alpha),
            ..self
        })
    }

    pub fn dim(&self) -> usize {
        (1usize << self.n_spins) * (self.n_max + 1)
    }

    pub fn validate(self) -> Result<Self> {
        if !self.n_spins.is_multiple_of(2) || !(4..=12).contains(&self.n_spins) {
            return Err(Error::InvalidParameter(
                "n_spins must be even and between 4 and 12",
            ));
        }
        if self.n_max < MIN_NMAX {
            return Err(Error::InvalidParameter("n_max must be at least 8"));
        }
        if !(self.eig_tol > 0.0) {
            return Err(Error::InvalidParameter("eig_tol must be positive"));
        }
        if self.displaced_frame.is_some_and(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("frame shift must be finite"));
        }
        if self.dim() > self.dim_cap {
            return Err(Error::DimensionCap {
                dim: self.dim(),
                cap: self.dim_cap,
            });
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EDResult {
    pub energy_per_site: f64,
    /// `⟨a†a⟩/N`
    pub photon_density: f64,
    /// `⟨(a + a†)²⟩/N`
    pub quad_fluct: f64,
    /// `⟨a + a†⟩/√N`, zero up to the eigensolver tolerance for a parity
    /// eigenstate.
    pub quad_mean: f64,
    /// `⟨Σ s^x⟩/N`
    pub m_x: f64,
    /// `sqrt(⟨(Σ s^x)²⟩)/N`
    pub m_x_rms: f64,
    /// `⟨Σ s^z⟩/N`
    pub m_z: f64,
    /// `⟨(Σ (−1)^i s^z_i)²⟩/N²`
    pub s_pi: f64,
    /// `⟨(−1)^{a†a} Π 2s^z_i⟩`; not a symmetry in a displaced frame.
    pub parity: Option<f64>,
    /// Distance to the lowest state of the other parity sector.
    pub gap: Option<f64>,
    /// Weight of the highest kept Fock level.
    pub top_fock_weight: f64,
    pub nmax_converged: bool,
    pub n_spins: usize,
    pub n_max: usize,
    pub displaced_frame: Option<f64>,
}

struct SpinTables {
    z: Vec<f64>,
    zz: Vec<f64>,
    stag2: Vec<f64>,
    /// `(−1)^{#down}`
    sign: Vec<f64>,
}

fn spin_tables(n: usize) -> SpinTables {
    let full = 1usize << n;
    let mut t = SpinTables {
        z: Vec::with_capacity(full),
        zz: Vec::with_capacity(full),
        stag2: Vec::with_capacity(full),
        sign: Vec::with_capacity(full),
    };
    for s in 0..full {
        let sz = |i: usize| if (s >> i) & 1 == 1 { 0.5 } else { -0.5 };
        let (mut z, mut zz, mut st) = (0.0, 0.0, 0.0);
        for i in 0..n {
            z += sz(i);
            zz += sz(i) * sz((i + 1) % n);
            st += if i % 2 == 0 { sz(i) } else { -sz(i) };
        }
        let down = n - (s as u32).count_ones() as usize;
        t.z.push(z);
        t.zz.push(zz);
        t.stag2.push(st * st);
        t.sign.push(if down.is_multiple_of(2) { 1.0 } else { -1.0 });
    }
    t
}

/// Sparse Hamiltonian in the basis `index = spin · (n_max + 1) + n`.
pub fn build_hamiltonian(p: ModelParams, c: EDConfig) -> Result<CsrMatrix> {
    let p = validate_params(p)?;
    let c = c.validate()?;
    let tables = spin_tables(c.n_spins);
    Ok(assemble(&p, &c, &tables))
}

fn assemble(p: &ModelParams, c: &EDConfig, tables: &SpinTables) -> CsrMatrix {
    let n = c.n_spins;
    let m = c.n_max + 1;
    let dim = c.dim();
    let beta = c.displaced_frame.map(|a| a * sqrt(n as f64)).unwrap_or(0.0);
    let coupling = p.g / sqrt(n as f64);
    let mut t = Triplets::with_capacity(dim, dim * (2 * n + 3));
    for s in 0..(1usize << n) {
        let spin_diag = p.eps * tables.z[s] - 4.0 * p.j * tables.zz[s];
        for k in 0..m {
            let row = s * m + k;
            t.push(
                row,
                row,
                p.omega * k as f64 + spin_diag + p.omega * beta * beta,
            );
            if k + 1 < m {
                let b = sqrt((k + 1) as f64);
                t.push(row + 1, row, p.omega * beta * b);
                t.push(row, row + 1, p.omega * beta * b);
            }
            for i in 0..n {
                let flipped = (s ^ (1 << i)) * m;
                if k + 1 < m {
                    // (2g/√N) s^x (a + a†), s^x flip element 1/2
                    let v = coupling * sqrt((k + 1) as f64);
                    t.push(flipped + k + 1, row, v);
                    t.push(row, flipped + k + 1, v);
                }
                if beta != 0.0 {
                    t.push(flipped + k, row, 2.0 * coupling * beta);
                }
            }
        }
    }
    t.into_csr()
}

/// Restriction of an operator to one parity sector.
struct Sector<'a> {
    op: &'a CsrMatrix,
    keep: &'a [bool],
}

impl LinearOperator for Sector<'_> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.op.apply(x, y);
        for (yi, &k) in y.iter_mut().zip(self.keep) {
            if !k {
                *yi = 0.0;
            }
        }
    }
}

/// Ground-state energies closer than this in the two parity sectors count as
/// degenerate; the even sector is then reported.
const PARITY_TIE: f64 = 1e-12;

/// Lowest eigenstate of the truncated Hamiltonian and its observables.
///
/// Without a frame shift each parity sector is solved separately from the
/// all-ones vector restricted to the sector, and the lower one is returned.
pub fn ed_full_ground(p: ModelParams, c: EDConfig) -> Result<EDResult> {
    let p = validate_params(p)?;
    let c = c.validate()?;
    let tables = spin_tables(c.n_spins);
    let h = assemble(&p, &c, &tables);
    let m = c.n_max + 1;
    let dim = c.dim();
    let lanczos = LanczosConfig {
        tol: c.eig_tol,
        max_basis: 80,
        max_restarts: 200,
    };

    let (vector, energy, gap) = if c.displaced_frame.is_some() {
        let pair = lowest_eigenpair(&h, &vec![1.0; dim], &lanczos)?;
        (pair.vector, pair.value, None)
    } else {
        let parity_of = |idx: usize| {
            tables.sign[idx / m]
                * if (idx % m).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
        };
        let mut best: Option<(Vec<f64>, f64, f64)> = None;
        let mut energies = [0.0; 2];
        for (slot, target) in [1.0, -1.0].into_iter().enumerate() {
            let keep: Vec<bool> = (0..dim).map(|i| parity_of(i) == target).collect();
            let start: Vec<f64> = keep.iter().map(|&k| if k { 1.0 } else { 0.0 }).collect();
            let pair = lowest_eigenpair(
                &Sector {
                    op: &h,
                    keep: &keep,
                },
                &start,
                &lanczos,
            )?;
            energies[slot] = pair.value;
            let better = match &best {
                None => true,
                Some((_, e, _)) => pair.value < *e - PARITY_TIE * (1.0 + e.abs()),
            };
            if better {
                best = Some((pair.vector, pair.value, target));
            }
        }
        let (v, e, _) = best.expect("two sectors solved");
        (v, e, Some((energies[0] - energies[1]).abs()))
    };
    Ok(observables(&c, &tables, &vector, energy, gap))
}

fn observables(
    c: &EDConfig,
    tables: &SpinTables,
    psi: &[f64],
    energy: f64,
    gap: Option<f64>,
) -> EDResult {
    let n = c.n_spins;
    let nf = n as f64;
    let m = c.n_max + 1;
    let beta = c.displaced_frame.map(|a| a * sqrt(nf)).unwrap_or(0.0);

    let (mut num, mut x_mean, mut x_sq, mut sz, mut st2, mut par, mut top) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let mut sx_mean = 0.0;
    let mut sx_vec = vec![0.0; psi.len()];
    for s in 0..(1usize << n) {
        for k in 0..m {
            let idx = s * m + k;
            let a = psi[idx];
            let w = a * a;
            num += k as f64 * w;
            sz += tables.z[s] * w;
            st2 += tables.stag2[s] * w;
            par += tables.sign[s] * if k % 2 == 0 { w } else { -w };
            if k + 1 == m {
                top += w;
            }
            // (a + a†) ψ, truncated
            let mut xpsi = 0.0;
            if k > 0 {
                xpsi += sqrt(k as f64) * psi[idx - 1];
            }
            if k + 1 < m {
                xpsi += sqrt((k + 1) as f64) * psi[idx + 1];
            }
            x_mean += a * xpsi;
            x_sq += xpsi * xpsi;
            for i in 0..n {
                let j = (s ^ (1 << i)) * m + k;
                sx_vec[j] += 0.5 * a;
            }
        }
    }
    for (a, b) in psi.iter().zip(&sx_vec) {
        sx_mean += a * b;
    }
    let sx_sq: f64 = sx_vec.iter().map(|v| v * v).sum();

    // back to the unshifted photon, a = b + β
    let photons = num + beta * x_mean + beta * beta;
    let quad_sq = x_sq + 4.0 * beta * x_mean + 4.0 * beta * beta;
    let quad_mean = x_mean + 2.0 * beta;
    EDResult {
        energy_per_site: energy / nf,
        photon_density: photons / nf,
        quad_fluct: quad_sq / nf,
        quad_mean: quad_mean / sqrt(nf),
        m_x: sx_mean / nf,
        m_x_rms: sqrt(sx_sq) / nf,
        m_z: sz / nf,
        s_pi: st2 / (nf * nf),
        parity: c.displaced_frame.is_none().then_some(par),
        gap,
        top_fock_weight: top,
        nmax_converged: false,
        n_spins: n,
        n_max: c.n_max,
        displaced_frame: c.displaced_frame,
    }
}

/// Doubles `n_max` from the template's value until successive energies per
/// site differ by less than `energy_tol` or the top Fock level is empty.
///
/// Hitting the dimension cap returns the last result unconverged.
pub fn converge_nmax(p: ModelParams, template: EDConfig, energy_tol: f64) -> Result<EDResult> {
    if !(energy_tol > 0.0) {
        return Err(Error::InvalidParameter("energy_tol must be positive"));
    }
    let mut c = template.validate()?;
    let mut prev: Option<EDResult> = None;
    loop {
        if c.dim() > c.dim_cap {
            return match prev {
                Some(r) => Ok(r),
                None => Err(Error::DimensionCap {
                    dim: c.dim(),
                    cap: c.dim_cap,
                }),
            };
        }
        let mut r = ed_full_ground(p, c)?;
        if let Some(last) = &prev {
            let slack = 1e-12 * (1.0 + last.energy_per_site.abs());
            if r.energy_per_site > last.energy_per_site + slack {
                return Err(Error::TruncationMonotonicity {
                    previous: last.energy_per_site,
                    current: r.energy_per_site,
                    n_max: c.n_max,
                });
            }
            if last.energy_per_site - r.energy_per_site < energy_tol {
                r.nmax_converged = true;
                return Ok(r);
            }
        }
        if r.top_fock_weight < 1e-15 {
            r.nmax_converged = true;
            return Ok(r);
        }
        prev = Some(r);
        c.n_max *= 2;
    }
}

/// Growth of the quadrature fluctuation over a reference state computed
/// with the same spin count, truncation and frame.
pub fn superradiance_indicator(r: &EDResult, baseline: &EDResult) -> Result<f64> {
    if r.n_spins != baseline.n_spins {
        return Err(Error::ConfigMismatch("n_spins differs from the baseline"));
    }
    if r.n_max != baseline.n_max {
        return Err(Error::ConfigMismatch("n_max differs from the baseline"));
    }
    if r.displaced_frame != baseline.displaced_frame {
        return Err(Error::ConfigMismatch(
            "frame shift differs from the baseline",
        ));
    }
    Ok(r.quad_fluct - baseline.quad_fluct)
}

/// Order parameters for labelling a finite-size result.
///
/// The cavity counts as superradiant once it holds more than one photon;
/// the photon amplitude is then `−sqrt(⟨a†a⟩/N)` and `m_x` the rms collective
/// spin. Staggered order needs `s_pi` above five times its uncorrelated value
/// `1/(4N)`.
pub fn finite_size_orders(r: &EDResult) -> OrderParams {
    let n = r.n_spins as f64;
    let superradiant = r.photon_density * n > 1.0;
    let afm = r.s_pi > 5.0 / (4.0 * n);
    OrderParams {
        photon_displacement: if superradiant {
            -sqrt(r.photon_density)
        } else {
            0.0
        },
        mx: if superradiant { r.m_x_rms } else { 0.0 },
        mz: r.m_z,
        m_stag: if afm { sqrt(r.s_pi) } else { 0.0 },
    }
}

/// Default tolerances are fine for [`finite_size_orders`] output.
pub fn finite_size_label(r: &EDResult, t: ToleranceSet) -> Result<crate::model::PhaseLabel> {
    crate::model::classify_orders(finite_size_orders(r), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PhaseLabel;

    fn cfg(n_spins: usize, n_max: usize) -> EDConfig {
        EDConfig {
            n_spins,
            n_max,
            ..EDConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(8, 8).validate().is_ok());
        assert!(cfg(7, 8).validate().is_err());
        assert!(cfg(8, 4).validate().is_err());
        let capped = EDConfig {
            dim_cap: 100,
            ..cfg(4, 8)
        };
        assert_eq!(
            capped.validate().unwrap_err(),
            Error::DimensionCap { dim: 144, cap: 100 }
        );
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let p = ModelParams::unit(0.6, -0.2);
        let h = build_hamiltonian(p, cfg(4, 8)).unwrap();
        assert!(h.asymmetry() < 1e-14);
        let shifted = EDConfig {
            displaced_frame: Some(-0.3),
            ..cfg(4, 8)
        };
        assert!(build_hamiltonian(p, shifted).unwrap().asymmetry() < 1e-14);
    }

    #[test]
    fn decoupled_examples() {
        let r = ed_full_ground(ModelParams::unit(0.0, 0.0), cfg(8, 8)).unwrap();
        assert!((r.energy_per_site + 0.5).abs() < 1e-12);
        assert!(r.photon_density.abs() < 1e-20);
        assert!((r.parity.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(
            finite_size_label(&r, ToleranceSet::default()).unwrap(),
            PhaseLabel::PmN
        );

        let r = ed_full_ground(ModelParams::unit(0.0, -0.5), cfg(8, 8)).unwrap();
        assert!((r.energy_per_site + 0.5).abs() < 1e-12);
        assert!((r.s_pi - 0.25).abs() < 1e-12);
        assert_eq!(
            finite_size_label(&r, ToleranceSet::default()).unwrap(),
            PhaseLabel::AfmN
        );
    }

    #[test]
    fn g_zero_converges_immediately() {
        let r = converge_nmax(ModelParams::unit(0.0, 0.3), cfg(4, 8), 1e-10).unwrap();
        assert!(r.nmax_converged);
        assert_eq!(r.n_max, 8);
    }

    #[test]
    fn indicator_needs_matching_configs() {
        let a = ed_full_ground(ModelParams::unit(0.0, 0.0), cfg(4, 8)).unwrap();
        let b = ed_full_ground(ModelParams::unit(0.7, 0.0), cfg(4, 10)).unwrap();
        assert!(matches!(
            superradiance_indicator(&b, &a),
            Err(Error::ConfigMismatch(_))
        ));
        assert_eq!(superradiance_indicator(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn displaced_frame_reproduces_the_spectrum() {
        let p = ModelParams::unit(0.8, 0.0);
        let plain = ed_full_ground(p, cfg(4, 40)).unwrap();
        let shifted = ed_full_ground(
            p,
            EDConfig {
                displaced_frame: Some(-0.4),
                ..cfg(4, 40)
            },
        )
        .unwrap();
        assert!((plain.energy_per_site - shifted.energy_per_site).abs() < 1e-9);
        assert!(shifted.parity.is_none());
    }
}
