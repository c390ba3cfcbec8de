//! Photon elimination: the cavity is replaced by a self-consistent
//! transverse field `h` acting on the bare Ising chain,
//!
//! ```text
//! e_eff(h) = e_chain(h) + ω h² / (16 g²),    e_chain from  ε Σ s^z − 4J Σ s^z s^z − h Σ s^x
//! ```
//!
//! which is exact for `N → ∞` because the photon couples only to the
//! collective `Σ s^x`. Stationary points satisfy `h = 8 g² m_x(h) / ω`,
//! and `h = −4 g α` relates `h` to the mean-field photon amplitude.
//!
//! The chain energy comes from one of two solvers: the free-fermion solution
//! (exact, thermodynamic limit, `ε = 0` or `J = 0`) or exact diagonalization
//! of a periodic ring of `n_sites` spins in its zero-momentum sector.

use alloc::sync::Arc;
use alloc::vec::Vec;

use libm::sqrt;

use crate::exec::GridMap;
use crate::linalg::LanczosConfig;
use crate::model::{
    classify_orders, validate_params, ModelParams, OrderParams, PhaseLabel, ToleranceSet,
};
use crate::optimize::{bisect_predicate, golden_section};
use crate::transition::{
    classify_jump, one_sided_limit, CoexistingMinimum, ScanAxis, SizeTrend, SolverTag,
    TransitionOrder, TransitionPoint,
};
use crate::{Error, Result};

pub mod chain_ed;
pub mod free_fermion;

pub use chain_ed::{ed_chain_ground, ChainHamiltonian, ChainParams, ChainSector};
pub use free_fermion::{ff_dispersion, ff_ground_energy, ff_mx, ff_staggered_structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ChainBackend {
    FreeFermion,
    ChainEd { n_sites: usize },
}

impl ChainBackend {
    pub fn tag(self) -> SolverTag {
        match self {
            ChainBackend::FreeFermion => SolverTag::FreeFermion,
            ChainBackend::ChainEd { n_sites } => SolverTag::ChainEd { n_sites },
        }
    }
}

/// Ground-state data of the chain at one field value.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainSample {
    /// Energy per site.
    pub energy: f64,
    pub mx: f64,
    pub mz: f64,
    /// Staggered structure factor `⟨(Σ (−1)^i s^z_i)²⟩/N²`.
    pub s_pi: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
enum Kind {
    FreeFermion,
    Ed {
        sector: Arc<ChainSector>,
        lanczos: LanczosConfig,
    },
}

/// A chain solver bound to fixed `(ε, J)`.
#[derive(Debug, Clone)]
pub struct ChainSolver {
    eps: f64,
    j: f64,
    kind: Kind,
}

impl ChainSolver {
    /// Free-fermion solver; admissible for `ε = 0`, and for `J = 0` where
    /// the chain is a set of free spins.
    pub fn free_fermion(eps: f64, j: f64) -> Result<Self> {
        if !(eps.is_finite() && j.is_finite()) {
            return Err(Error::InvalidParameter("couplings must be finite"));
        }
        if eps != 0.0 && j != 0.0 {
            return Err(Error::BackendMismatch { eps, j });
        }
        Ok(Self {
            eps,
            j,
            kind: Kind::FreeFermion,
        })
    }

    pub fn chain_ed(sector: Arc<ChainSector>, eps: f64, j: f64) -> Result<Self> {
        if !(eps.is_finite() && j.is_finite()) {
            return Err(Error::InvalidParameter("couplings must be finite"));
        }
        Ok(Self {
            eps,
            j,
            kind: Kind::Ed {
                sector,
                lanczos: LanczosConfig::default(),
            },
        })
    }

    pub fn new(backend: ChainBackend, eps: f64, j: f64) -> Result<Self> {
        match backend {
            ChainBackend::FreeFermion => Self::free_fermion(eps, j),
            ChainBackend::ChainEd { n_sites } => {
                Self::chain_ed(Arc::new(ChainSector::new(n_sites)?), eps, j)
            }
        }
    }

    /// Same backend (sharing any ED basis) at another Ising coupling.
    pub fn with_j(&self, j: f64) -> Result<Self> {
        match &self.kind {
            Kind::FreeFermion => Self::free_fermion(self.eps, j),
            Kind::Ed { .. } => Ok(Self { j, ..self.clone() }),
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn backend(&self) -> ChainBackend {
        match &self.kind {
            Kind::FreeFermion => ChainBackend::FreeFermion,
            Kind::Ed { sector, .. } => ChainBackend::ChainEd {
                n_sites: sector.n_sites(),
            },
        }
    }

    pub fn sample(&self, h: f64) -> Result<ChainSample> {
        match &self.kind {
            Kind::FreeFermion => free_fermion::ff_sample(self.eps, self.j, h),
            Kind::Ed { sector, lanczos } => ed_chain_ground(
                sector,
                ChainParams {
                    eps: self.eps,
                    j: self.j,
                    h,
                },
                lanczos,
            ),
        }
    }

    /// Staggered magnetization used for labelling.
    ///
    /// A finite ring has no broken symmetry, so the ED solver reports order
    /// once `s_pi` exceeds five times its uncorrelated value `1/(4N)`.
    fn staggered_order(&self, s_pi: f64) -> f64 {
        match &self.kind {
            Kind::FreeFermion => sqrt(s_pi),
            Kind::Ed { sector, .. } => {
                if s_pi > 5.0 / (4.0 * sector.n_sites() as f64) {
                    sqrt(s_pi)
                } else {
                    0.0
                }
            }
        }
    }

    fn check(&self, p: &ModelParams) -> Result<()> {
        if p.eps != self.eps || p.j != self.j {
            return Err(Error::ConfigMismatch(
                "model couplings differ from the chain solver's",
            ));
        }
        Ok(())
    }
}

/// `e_eff(h)` per site.
pub fn effective_energy(p: ModelParams, solver: &ChainSolver, h: f64) -> Result<f64> {
    let p = validate_params(p)?;
    solver.check(&p)?;
    let e = solver.sample(h)?.energy;
    if h == 0.0 {
        return Ok(e);
    }
    if p.g == 0.0 {
        return Err(Error::InvalidParameter("a nonzero field needs g > 0"));
    }
    Ok(e + photon_cost(p.omega, p.g, h))
}

fn photon_cost(omega: f64, g: f64, h: f64) -> f64 {
    omega * h * h / (16.0 * g * g)
}

/// Default grid spacing in `h`.
pub const DEFAULT_DH: f64 = 1e-2;

/// Default `h_max` covering couplings up to `g`.
pub fn default_h_max(eps: f64, j: f64, omega: f64, g: f64) -> f64 {
    4.0 * eps.max(4.0 * j.abs()).max(2.0 * g * g / omega).max(0.25)
}

/// Finite-difference step for `χ = −e''(0)`.
const CURVATURE_STEP: f64 = 1e-4;

/// `−e_chain''(0)` by central differences at steps `δ` and `δ/2`, Richardson
/// extrapolated.
fn susceptibility(solver: &ChainSolver) -> Result<f64> {
    let e0 = solver.sample(0.0)?.energy;
    let second = |d: f64| -> Result<f64> {
        let ep = solver.sample(d)?.energy;
        let em = solver.sample(-d)?.energy;
        Ok((ep - 2.0 * e0 + em) / (d * d))
    };
    let coarse = second(CURVATURE_STEP)?;
    let fine = second(0.5 * CURVATURE_STEP)?;
    Ok(-(4.0 * fine - coarse) / 3.0)
}

/// Chain ground-state data sampled on a uniform grid `h = 0, Δh, 2Δh, …`.
///
/// It does not depend on `g` or `ω`, so one landscape serves every coupling
/// at fixed `(ε, J)`.
#[derive(Debug, Clone)]
pub struct ChainLandscape {
    eps: f64,
    j: f64,
    backend: ChainBackend,
    dh: f64,
    chi: f64,
    h: Vec<f64>,
    samples: Vec<ChainSample>,
}

impl ChainLandscape {
    pub fn sample<G: GridMap>(solver: &ChainSolver, h_max: f64, grid: &G) -> Result<Self> {
        if !(h_max > 0.0 && h_max.is_finite()) {
            return Err(Error::InvalidParameter("h_max must be positive"));
        }
        let mut l = Self {
            eps: solver.eps,
            j: solver.j,
            backend: solver.backend(),
            dh: DEFAULT_DH,
            chi: susceptibility(solver)?,
            h: Vec::new(),
            samples: Vec::new(),
        };
        l.grow(solver, h_max, grid)?;
        Ok(l)
    }

    /// Landscape wide enough for couplings up to `g_max`.
    pub fn covering<G: GridMap>(
        solver: &ChainSolver,
        omega: f64,
        g_max: f64,
        grid: &G,
    ) -> Result<Self> {
        Self::sample(
            solver,
            default_h_max(solver.eps, solver.j, omega, g_max),
            grid,
        )
    }

    fn grow<G: GridMap>(&mut self, solver: &ChainSolver, h_max: f64, grid: &G) -> Result<()> {
        self.check(solver)?;
        let n_new = libm::ceil(h_max / self.dh) as usize + 1;
        let start = self.h.len();
        if n_new <= start {
            return Ok(());
        }
        let hs: Vec<f64> = (start..n_new).map(|i| i as f64 * self.dh).collect();
        let fresh = grid.map_grid(&hs, |h| solver.sample(h));
        for (h, s) in hs.into_iter().zip(fresh) {
            self.h.push(h);
            self.samples.push(s?);
        }
        Ok(())
    }

    /// Doubles `h_max`.
    pub fn extend<G: GridMap>(&mut self, solver: &ChainSolver, grid: &G) -> Result<()> {
        let target = 2.0 * self.h_max();
        self.grow(solver, target, grid)
    }

    /// Grows the grid until it covers couplings up to `g`.
    pub fn ensure_covers<G: GridMap>(
        &mut self,
        solver: &ChainSolver,
        omega: f64,
        g: f64,
        grid: &G,
    ) -> Result<()> {
        let target = default_h_max(self.eps, self.j, omega, g);
        if target > self.h_max() {
            self.grow(solver, target, grid)?;
        }
        Ok(())
    }

    pub fn h_max(&self) -> f64 {
        self.h.last().copied().unwrap_or(0.0)
    }

    pub fn h_grid(&self) -> &[f64] {
        &self.h
    }

    pub fn samples(&self) -> &[ChainSample] {
        &self.samples
    }

    /// `χ = −∂²e_chain/∂h²` at `h = 0`.
    pub fn susceptibility(&self) -> f64 {
        self.chi
    }

    fn check(&self, solver: &ChainSolver) -> Result<()> {
        if solver.eps != self.eps || solver.j != self.j || solver.backend() != self.backend {
            return Err(Error::ConfigMismatch(
                "landscape was sampled with a different chain solver",
            ));
        }
        Ok(())
    }
}

/// A refined local minimum of `e_eff`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EffectiveMinimum {
    pub h: f64,
    pub energy: f64,
    pub chain: ChainSample,
}

/// `e_eff` at one coupling `g`, stored for `h ≥ 0` (it is even in `h`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EffectiveLandscape {
    pub g: f64,
    pub h_grid: Vec<f64>,
    pub e_values: Vec<f64>,
    /// Refined local minima, lowest energy first.
    pub minimizers: Vec<EffectiveMinimum>,
    pub global: EffectiveMinimum,
    /// The two lowest minima tie within [`COEXIST_TOL`].
    pub degenerate: bool,
}

/// Energy window within which two minima count as coexisting.
pub const COEXIST_TOL: f64 = 1e-8;
/// Golden-section bracket width before the stationarity polish.
const COARSE_TOL: f64 = 1e-5;
/// Golden-section bracket width when the polish stalls.
const REFINE_TOL: f64 = 1e-8;
/// Refined minimizers below this are the normal solution `h = 0`.
const ZERO_SNAP: f64 = 1e-7;
/// Minimizers closer than this are the same minimum.
const MERGE_TOL: f64 = 1e-6;
/// Bound on `|h − 8g² m_x/ω|` at an accepted minimum.
pub const STATIONARITY_TOL: f64 = 1e-6;

struct Eval<'a> {
    solver: &'a ChainSolver,
    omega: f64,
    g: f64,
}

impl Eval<'_> {
    fn at(&self, h: f64) -> Result<(f64, ChainSample)> {
        let s = self.solver.sample(h)?;
        Ok((s.energy + photon_cost(self.omega, self.g, h), s))
    }

    /// `∂e_eff/∂h` from the Hellmann-Feynman `m_x`.
    fn slope(&self, h: f64, s: &ChainSample) -> f64 {
        self.omega * h / (8.0 * self.g * self.g) - s.mx
    }

    fn residual(&self, m: &EffectiveMinimum) -> f64 {
        (m.h - 8.0 * self.g * self.g * m.chain.mx / self.omega).abs()
    }

    /// Minimum of `e_eff` on `[lo, hi]`.
    fn refine(&self, lo: f64, hi: f64) -> Result<EffectiveMinimum> {
        let energy = |h: f64| self.at(h).map(|r| r.0);
        let (h0, _) = golden_section(energy, lo, hi, COARSE_TOL)?;
        let mut best = self.polish(h0, lo, hi)?;
        let scale = 8.0 * self.g * self.g / self.omega;
        if best.h > 0.0 && self.slope(best.h, &best.chain).abs() * scale > 1e-3 * STATIONARITY_TOL {
            let a = (best.h - COARSE_TOL).max(lo);
            let b = (best.h + COARSE_TOL).min(hi);
            let (h1, _) = golden_section(energy, a, b, REFINE_TOL)?;
            let (e1, s1) = self.at(h1)?;
            if e1 <= best.energy {
                best = EffectiveMinimum {
                    h: h1,
                    energy: e1,
                    chain: s1,
                };
            }
        }
        if lo == 0.0 && best.h < ZERO_SNAP {
            let (e, s) = self.at(0.0)?;
            if e <= best.energy + COEXIST_TOL {
                best = EffectiveMinimum {
                    h: 0.0,
                    energy: e,
                    chain: s,
                };
            }
        }
        Ok(best)
    }

    /// Secant iteration on `∂e_eff/∂h = 0` from `h`, kept inside `[lo, hi]`
    /// and never raising the energy.
    fn polish(&self, h: f64, lo: f64, hi: f64) -> Result<EffectiveMinimum> {
        let (e, s) = self.at(h)?;
        let mut best = EffectiveMinimum {
            h,
            energy: e,
            chain: s,
        };
        if h <= 0.0 {
            return Ok(best);
        }
        let slack = 1e-14 * (1.0 + e.abs());
        let mut best_slope = self.slope(h, &s).abs();
        let (mut h0, mut f0) = (h, self.slope(h, &s));
        let step = if h + 1e-6 <= hi { 1e-6 } else { -1e-6 };
        let mut h1 = h + step;
        let (e1, s1) = self.at(h1)?;
        let mut f1 = self.slope(h1, &s1);
        if f1.abs() < best_slope && e1 <= best.energy + slack {
            best = EffectiveMinimum {
                h: h1,
                energy: e1,
                chain: s1,
            };
            best_slope = f1.abs();
        }
        for _ in 0..8 {
            if f1 == f0 || best_slope < 1e-15 {
                break;
            }
            let h2 = h1 - f1 * (h1 - h0) / (f1 - f0);
            if !(h2 >= lo && h2 <= hi && h2 > 0.0) {
                break;
            }
            let (e2, s2) = self.at(h2)?;
            let f2 = self.slope(h2, &s2);
            if f2.abs() < best_slope && e2 <= best.energy + slack {
                best = EffectiveMinimum {
                    h: h2,
                    energy: e2,
                    chain: s2,
                };
                best_slope = f2.abs();
            }
            (h0, f0, h1, f1) = (h1, f1, h2, f2);
        }
        Ok(best)
    }
}

/// Samples `e_eff` on the landscape grid and refines every local minimum.
pub fn effective_landscape(
    p: ModelParams,
    solver: &ChainSolver,
    chain: &ChainLandscape,
) -> Result<EffectiveLandscape> {
    let p = validate_params(p)?;
    solver.check(&p)?;
    chain.check(solver)?;
    if p.g == 0.0 {
        return Err(Error::InvalidParameter(
            "the effective landscape needs g > 0",
        ));
    }
    let n = chain.h.len();
    if n < 3 {
        return Err(Error::InvalidParameter("landscape grid too short"));
    }
    let e_values: Vec<f64> = chain
        .h
        .iter()
        .zip(&chain.samples)
        .map(|(&h, s)| s.energy + photon_cost(p.omega, p.g, h))
        .collect();
    if e_values[n - 1] < e_values[n - 2] {
        return Err(Error::LandscapeEdge {
            h_max: chain.h_max(),
        });
    }

    let ev = Eval {
        solver,
        omega: p.omega,
        g: p.g,
    };
    // h = 0 is stationary; its curvature decides whether it is a minimum
    let normal_stable = p.omega / (8.0 * p.g * p.g) > chain.chi;
    let mut minimizers: Vec<EffectiveMinimum> = Vec::new();
    for i in 0..n - 1 {
        let is_min = if i == 0 {
            e_values[0] <= e_values[1]
        } else {
            e_values[i] <= e_values[i - 1] && e_values[i] <= e_values[i + 1]
        };
        if !is_min {
            continue;
        }
        let m = if i == 0 && normal_stable {
            EffectiveMinimum {
                h: 0.0,
                energy: chain.samples[0].energy,
                chain: chain.samples[0],
            }
        } else {
            let lo = if i == 0 { 0.0 } else { chain.h[i - 1] };
            ev.refine(lo, chain.h[i + 1])?
        };
        if !minimizers.iter().any(|o| (o.h - m.h).abs() < MERGE_TOL) {
            minimizers.push(m);
        }
    }
    if normal_stable && !minimizers.iter().any(|m| m.h == 0.0) {
        // a stable normal solution hidden between grid points
        minimizers.push(EffectiveMinimum {
            h: 0.0,
            energy: chain.samples[0].energy,
            chain: chain.samples[0],
        });
    }
    minimizers.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.h.total_cmp(&b.h)));
    let global = minimizers[0];
    let degenerate = minimizers.len() > 1 && minimizers[1].energy - global.energy <= COEXIST_TOL;
    Ok(EffectiveLandscape {
        g: p.g,
        h_grid: chain.h.clone(),
        e_values,
        minimizers,
        global,
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SelfConsistentSolution {
    pub h_star: f64,
    /// `e_eff(h*)` per site.
    pub energy: f64,
    /// `|h* − (8g²/ω) m_x(h*)|`
    pub residual: f64,
    pub orders: OrderParams,
    pub s_pi: f64,
    pub label: PhaseLabel,
    /// Two minima within [`COEXIST_TOL`] of each other.
    pub coexistent: bool,
    /// The chain ground state at `h*` is degenerate.
    pub chain_degenerate: bool,
    /// All refined local minima, lowest first.
    pub minima: Vec<CoexistingMinimum>,
}

fn solution_from(
    p: &ModelParams,
    solver: &ChainSolver,
    m: EffectiveMinimum,
    residual: f64,
    minima: Vec<CoexistingMinimum>,
    coexistent: bool,
    t: ToleranceSet,
) -> Result<SelfConsistentSolution> {
    let alpha = if m.h == 0.0 { 0.0 } else { -m.h / (4.0 * p.g) };
    let orders = OrderParams {
        photon_displacement: alpha,
        mx: m.chain.mx,
        mz: m.chain.mz,
        m_stag: solver.staggered_order(m.chain.s_pi),
    };
    Ok(SelfConsistentSolution {
        h_star: m.h,
        energy: m.energy,
        residual,
        orders,
        s_pi: m.chain.s_pi,
        label: classify_orders(orders, t)?,
        coexistent,
        chain_degenerate: m.chain.degenerate,
        minima,
    })
}

/// Global minimizer of `e_eff` over `h` on a sampled chain landscape.
pub fn minimize_h(
    p: ModelParams,
    solver: &ChainSolver,
    chain: &ChainLandscape,
    t: ToleranceSet,
) -> Result<SelfConsistentSolution> {
    let p = validate_params(p)?;
    let t = t.validate()?;
    solver.check(&p)?;
    if p.g == 0.0 {
        let s = solver.sample(0.0)?;
        let m = EffectiveMinimum {
            h: 0.0,
            energy: s.energy,
            chain: s,
        };
        let minima = alloc::vec![CoexistingMinimum {
            h: 0.0,
            energy: s.energy
        }];
        return solution_from(&p, solver, m, 0.0, minima, false, t);
    }
    let land = effective_landscape(p, solver, chain)?;
    let ev = Eval {
        solver,
        omega: p.omega,
        g: p.g,
    };
    let residual = ev.residual(&land.global);
    if !(residual < STATIONARITY_TOL) {
        return Err(Error::SelfConsistency {
            residual,
            h_star: land.global.h,
        });
    }
    let minima = land
        .minimizers
        .iter()
        .map(|m| CoexistingMinimum {
            h: m.h,
            energy: m.energy,
        })
        .collect();
    solution_from(
        &p,
        solver,
        land.global,
        residual,
        minima,
        land.degenerate,
        t,
    )
}

/// Edge doublings tried before giving up.
const MAX_EXTENSIONS: usize = 6;

/// [`minimize_h`], doubling the landscape while its edge is still
/// descending.
pub fn solve_effective<G: GridMap>(
    p: ModelParams,
    solver: &ChainSolver,
    chain: &mut ChainLandscape,
    t: ToleranceSet,
    grid: &G,
) -> Result<SelfConsistentSolution> {
    for _ in 0..MAX_EXTENSIONS {
        match minimize_h(p, solver, chain, t) {
            Err(Error::LandscapeEdge { .. }) => chain.extend(solver, grid)?,
            other => return other,
        }
    }
    minimize_h(p, solver, chain, t)
}

/// Coupling at which the normal solution `h = 0` turns unstable,
/// `sqrt(ω/(8χ))`.
pub fn spinodal_g(solver: &ChainSolver, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter("omega must be positive"));
    }
    let chi = susceptibility(solver)?;
    if !(chi > 0.0) {
        return Err(Error::Curvature { chi });
    }
    Ok(sqrt(omega / (8.0 * chi)))
}

/// Bracket width of the label bisection.
pub const BOUNDARY_WIDTH: f64 = 1e-6;
/// Distance from the boundary of the samples behind the jump estimate.
const JUMP_OFFSET: f64 = 1e-4;
/// Target `|ΔE|` when refining a first-order point to the energy crossing.
const CROSSING_TOL: f64 = 1e-10;

/// Brackets the normal-to-superradiant boundary at the template's `J`:
/// slightly above the spinodal, then down by factors of 0.9 until `h* = 0`.
pub fn auto_g_bracket<G: GridMap>(
    template: ModelParams,
    solver: &ChainSolver,
    chain: &mut ChainLandscape,
    t: ToleranceSet,
    grid: &G,
) -> Result<(f64, f64)> {
    let hi = 1.01 * spinodal_g(solver, template.omega)?;
    chain.ensure_covers(solver, template.omega, hi, grid)?;
    let top = solve_effective(template.with_g(hi), solver, chain, t, grid)?;
    if top.h_star == 0.0 {
        return Err(Error::Bracket {
            lo: hi,
            hi,
            detail: "no superradiant solution above the spinodal".into(),
        });
    }
    let mut upper = hi;
    for _ in 0..60 {
        let g = 0.9 * upper;
        if solve_effective(template.with_g(g), solver, chain, t, grid)?.h_star == 0.0 {
            return Ok((g, upper));
        }
        upper = g;
    }
    Err(Error::Bracket {
        lo: upper,
        hi,
        detail: "no normal solution found below the spinodal".into(),
    })
}

/// Locates the phase boundary in `g` at the template's `J`.
///
/// Bisection on the phase label to [`BOUNDARY_WIDTH`]; the `h*` jump is the
/// difference of its one-sided limits. First-order points are moved to the
/// energy crossing of the two competing minima, which are reported as
/// coexisting.
pub fn locate_transition_g<G: GridMap>(
    template: ModelParams,
    solver: &ChainSolver,
    chain: &mut ChainLandscape,
    g_bracket: Option<(f64, f64)>,
    t: ToleranceSet,
    grid: &G,
) -> Result<TransitionPoint> {
    let template = validate_params(template)?;
    solver.check(&template)?;
    let (g_lo, g_hi) = match g_bracket {
        Some(b) => b,
        None => auto_g_bracket(template, solver, chain, t, grid)?,
    };
    chain.ensure_covers(solver, template.omega, g_hi + 4.0 * JUMP_OFFSET, grid)?;
    let mut at = |g: f64| solve_effective(template.with_g(g), solver, chain, t, grid);

    let lo = at(g_lo)?;
    let hi = at(g_hi)?;
    if lo.label == hi.label {
        return Err(Error::Bracket {
            lo: g_lo,
            hi: g_hi,
            detail: alloc::format!("label {} at both ends", lo.label),
        });
    }
    let below = lo.label;
    let (a, b) = bisect_predicate(
        |g| Ok::<_, Error>(at(g)?.label != below),
        g_lo,
        g_hi,
        BOUNDARY_WIDTH,
    )?;
    let sol_a = at(a)?;
    let sol_b = at(b)?;
    let above = sol_b.label;
    let mid = 0.5 * (a + b);
    let up = side_limit(&mut at, mid, 1.0, above)?;
    let down = side_limit(&mut at, mid, -1.0, below)?;
    let mut jump = (up - down).abs();
    let mut g_c = mid;
    let mut coexisting = Vec::new();

    if classify_jump(jump, t.tol_jump) == TransitionOrder::First {
        let ev_for = |g: f64| Eval {
            solver,
            omega: template.omega,
            g,
        };
        if let Some((gc, lo_min, hi_min)) =
            energy_crossing(&ev_for, chain, (a, sol_a.h_star), (b, sol_b.h_star))?
        {
            g_c = gc;
            jump = (hi_min.h - lo_min.h).abs();
            coexisting.push(CoexistingMinimum {
                h: lo_min.h,
                energy: lo_min.energy,
            });
            coexisting.push(CoexistingMinimum {
                h: hi_min.h,
                energy: hi_min.energy,
            });
        }
    }

    Ok(TransitionPoint {
        j: template.j,
        g_c,
        axis: ScanAxis::G,
        bracket: [a, b],
        order: classify_jump(jump, t.tol_jump),
        jump,
        bracket_jump: (sol_b.h_star - sol_a.h_star).abs(),
        below,
        above,
        backend: solver.backend().tag(),
        coexisting,
        size_trend: Vec::new(),
    })
}

fn side_limit<F>(at: &mut F, x: f64, dir: f64, expected: PhaseLabel) -> Result<f64>
where
    F: FnMut(f64) -> Result<SelfConsistentSolution>,
{
    let mut d = JUMP_OFFSET;
    while d >= 1e-7 {
        let near = at(x + dir * d)?;
        let far = at(x + dir * 4.0 * d)?;
        if near.label == expected && far.label == expected {
            return Ok(one_sided_limit(near.h_star, far.h_star).max(0.0));
        }
        d *= 0.1;
    }
    Ok(at(x + dir * 1e-7)?.h_star)
}

/// Local minimum of `e_eff` tracked from `h_guess`.
fn branch_minimum(ev: &Eval<'_>, chain: &ChainLandscape, h_guess: f64) -> Result<EffectiveMinimum> {
    if h_guess == 0.0 {
        let (e, s) = ev.at(0.0)?;
        return Ok(EffectiveMinimum {
            h: 0.0,
            energy: e,
            chain: s,
        });
    }
    let w = 2.0 * chain.dh;
    ev.refine((h_guess - w).max(0.0), h_guess + w)
}

/// Bisection in `g` on the energy difference of the branches whose minima
/// sit at `h_a` (at `g = a`) and `h_b` (at `g = b`). Returns `None` when a
/// branch cannot be followed across the bracket.
#[allow(clippy::type_complexity)]
fn energy_crossing<'s, E>(
    ev_for: &E,
    chain: &ChainLandscape,
    (a, h_a): (f64, f64),
    (b, h_b): (f64, f64),
) -> Result<Option<(f64, EffectiveMinimum, EffectiveMinimum)>>
where
    E: Fn(f64) -> Eval<'s>,
{
    let pair = |g: f64, ga: f64, gb: f64| -> Result<(EffectiveMinimum, EffectiveMinimum)> {
        let ev = ev_for(g);
        Ok((
            branch_minimum(&ev, chain, ga)?,
            branch_minimum(&ev, chain, gb)?,
        ))
    };
    let (mut lo, mut hi) = (a, b);
    let (mut track_a, mut track_b) = (h_a, h_b);
    let (la, lb) = pair(lo, track_a, track_b)?;
    if (la.h - lb.h).abs() < MERGE_TOL || lb.energy < la.energy {
        return Ok(None);
    }
    let mut best = None;
    for _ in 0..80 {
        let g = 0.5 * (lo + hi);
        let (ma, mb) = pair(g, track_a, track_b)?;
        if (ma.h - mb.h).abs() < MERGE_TOL {
            return Ok(None);
        }
        track_a = ma.h;
        track_b = mb.h;
        let de = mb.energy - ma.energy;
        best = Some((g, ma, mb));
        if de.abs() < CROSSING_TOL || hi - lo < 1e-15 * g {
            break;
        }
        if de > 0.0 {
            lo = g;
        } else {
            hi = g;
        }
    }
    Ok(best)
}

/// Adds the finite-size trend of a chain-ED transition over `sizes`.
pub fn record_size_trend<G: GridMap>(
    tp: &mut TransitionPoint,
    template: ModelParams,
    sizes: &[usize],
    t: ToleranceSet,
    grid: &G,
) -> Result<()> {
    for &n in sizes {
        let solver = ChainSolver::new(
            ChainBackend::ChainEd { n_sites: n },
            template.eps,
            template.j,
        )?;
        let mut chain = ChainLandscape::covering(&solver, template.omega, tp.bracket[1], grid)?;
        let other = locate_transition_g(template, &solver, &mut chain, None, t, grid)?;
        tp.size_trend.push(SizeTrend {
            n_sites: n,
            g_c: other.g_c,
            jump: other.jump,
        });
    }
    Ok(())
}

/// Transition at one `J`, with a fresh landscape and automatic bracket.
pub fn transition_at_j<G: GridMap>(
    template: ModelParams,
    solver: &ChainSolver,
    t: ToleranceSet,
    grid: &G,
) -> Result<TransitionPoint> {
    let solver = solver.with_j(template.j)?;
    let g_sp = spinodal_g(&solver, template.omega)?;
    let mut chain = ChainLandscape::covering(&solver, template.omega, 1.1 * g_sp, grid)?;
    locate_transition_g(template, &solver, &mut chain, None, t, grid)
}

/// Result of the multicritical search.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MulticriticalPoint {
    pub j_mc: f64,
    pub bracket: [f64; 2],
    /// Every transition located along the way, in probe order.
    pub probes: Vec<TransitionPoint>,
}

/// Bracket width of the multicritical bisection.
pub const MULTICRITICAL_WIDTH: f64 = 0.02;

/// Bisection on the transition order over `J`.
pub fn locate_multicritical<G: GridMap>(
    template: ModelParams,
    solver: &ChainSolver,
    j_bracket: (f64, f64),
    t: ToleranceSet,
    grid: &G,
) -> Result<MulticriticalPoint> {
    let (mut lo, mut hi) = j_bracket;
    let mut probes = Vec::new();
    let tp_lo = transition_at_j(template.with_j(lo), solver, t, grid)?;
    let tp_hi = transition_at_j(template.with_j(hi), solver, t, grid)?;
    let order_lo = tp_lo.order;
    if tp_lo.order == tp_hi.order {
        return Err(Error::OrderBracket {
            lo,
            hi,
            order: order_lo,
            jump_lo: tp_lo.jump,
            jump_hi: tp_hi.jump,
        });
    }
    probes.push(tp_lo);
    probes.push(tp_hi);
    while hi - lo > MULTICRITICAL_WIDTH {
        let mid = 0.5 * (lo + hi);
        let tp = transition_at_j(template.with_j(mid), solver, t, grid)?;
        if tp.order == order_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        probes.push(tp);
    }
    Ok(MulticriticalPoint {
        j_mc: 0.5 * (lo + hi),
        bracket: [lo, hi],
        probes,
    })
}

/// Minimum `h*` for a point to count toward the AFM-S window.
pub const AFM_S_MIN_FIELD: f64 = 1e-2;
/// Minimum `s_pi` enhancement over the PM-S background.
pub const AFM_S_ENHANCEMENT: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowSample {
    pub g: f64,
    pub h_star: f64,
    pub s_pi: f64,
    pub label: PhaseLabel,
}

/// Couplings where superradiance and enhanced staggered correlations
/// coexist.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AfmSWindow {
    pub j: f64,
    pub g_lo: f64,
    pub g_hi: f64,
    /// `s_pi` at the largest scanned `g`, inside PM-S.
    pub background: f64,
    pub peak_enhancement: f64,
    pub samples: Vec<WindowSample>,
}

/// Scans `gs` (ascending) and reports the first run of couplings with
/// `h* >` [`AFM_S_MIN_FIELD`] and `s_pi ≥` [`AFM_S_ENHANCEMENT`] times the
/// background at the last coupling.
pub fn afm_s_window<G: GridMap>(
    template: ModelParams,
    solver: &ChainSolver,
    gs: &[f64],
    t: ToleranceSet,
    grid: &G,
) -> Result<Option<AfmSWindow>> {
    let solver = solver.with_j(template.j)?;
    let g_top = gs
        .last()
        .copied()
        .ok_or(Error::InvalidParameter("empty coupling list"))?;
    if gs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("couplings must be ascending"));
    }
    let mut chain = ChainLandscape::covering(&solver, template.omega, g_top, grid)?;
    let top = solve_effective(template.with_g(g_top), &solver, &mut chain, t, grid)?;
    if top.h_star <= AFM_S_MIN_FIELD || top.label.is_antiferromagnetic() {
        return Err(Error::Bracket {
            lo: gs[0],
            hi: g_top,
            detail: "the scan must end inside PM-S".into(),
        });
    }
    let background = top.s_pi;
    let chain = &chain;
    let solver = &solver;
    let sols = grid.map_grid(gs, |g| minimize_h(template.with_g(g), solver, chain, t));
    let mut samples = Vec::with_capacity(gs.len());
    for (&g, s) in gs.iter().zip(sols) {
        let s = s?;
        samples.push(WindowSample {
            g,
            h_star: s.h_star,
            s_pi: s.s_pi,
            label: s.label,
        });
    }
    let inside =
        |s: &WindowSample| s.h_star > AFM_S_MIN_FIELD && s.s_pi >= AFM_S_ENHANCEMENT * background;
    let Some(first) = samples.iter().position(inside) else {
        return Ok(None);
    };
    let len = samples[first..].iter().take_while(|s| inside(s)).count();
    let run = &samples[first..first + len];
    let peak = run.iter().map(|s| s.s_pi).fold(0.0, f64::max);
    Ok(Some(AfmSWindow {
        j: template.j,
        g_lo: run[0].g,
        g_hi: run[len - 1].g,
        background,
        peak_enhancement: if background > 0.0 {
            peak / background
        } else {
            f64::INFINITY
        },
        samples,
    }))
}
