//! Parameter-grid scans.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use phasekit_core::ed_full::{converge_nmax, finite_size_label, finite_size_orders, EDConfig};
use phasekit_core::effective::{
    minimize_h, solve_effective, ChainBackend, ChainLandscape, ChainSector, ChainSolver,
    SelfConsistentSolution,
};
use phasekit_core::mean_field::{mf_minimize, DEFAULT_STARTS};
use phasekit_core::{
    validate_params, Error, ModelParams, OrderParams, PhaseLabel, Sequential, ToleranceSet,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::fmt_sig;
use crate::parallel::Rayon;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("{axis} axis: {reason}")]
    Axis {
        axis: &'static str,
        reason: &'static str,
    },
    #[error(transparent)]
    Model(#[from] Error),
}

/// Evenly spaced coupling values, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    /// A single coupling.
    pub fn point(x: f64) -> Self {
        Self::new(x, x, 1)
    }

    /// At least two points over a nondecreasing range, or exactly one point
    /// when the range is empty.
    pub fn validate(self, axis: &'static str) -> Result<Self, SpecError> {
        let err = |reason| Err(SpecError::Axis { axis, reason });
        if !(self.min.is_finite() && self.max.is_finite()) {
            return err("range must be finite");
        }
        if self.max < self.min {
            return err("max is below min");
        }
        match (self.steps, self.min == self.max) {
            (1, true) => Ok(self),
            (1, false) => err("a single step needs min = max"),
            (0, _) => err("steps must be positive"),
            (_, true) => err("an empty range takes exactly one step"),
            _ => Ok(self),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MeanField,
    Effective(ChainBackend),
    EdFull(EDConfig),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::MeanField => f.write_str("mean-field"),
            Method::Effective(b) => write!(f, "effective/{}", b.tag()),
            Method::EdFull(c) => write!(f, "ed-full({},{})", c.n_spins, c.n_max),
        }
    }
}

/// Energy tolerance for the `n_max` doubling of grid ED points.
pub const ED_ENERGY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub j: Axis,
    pub g: Axis,
    pub omega: f64,
    pub eps: f64,
    pub method: Method,
    pub tol: ToleranceSet,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        self.j.validate("J")?;
        self.g.validate("g")?;
        self.tol.validate()?;
        for j in [self.j.min, self.j.max] {
            for g in [self.g.min, self.g.max] {
                validate_params(self.params(g, j))?;
            }
        }
        if let Method::EdFull(c) = self.method {
            c.validate()?;
        }
        Ok(())
    }

    fn params(&self, g: f64, j: f64) -> ModelParams {
        ModelParams {
            omega: self.omega,
            eps: self.eps,
            g,
            j,
        }
    }

    pub fn len(&self) -> usize {
        self.j.steps * self.g.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointFlag {
    /// Competing minima within the coexistence tolerance.
    Coexist,
    /// Degenerate ground state (tied minima, classical tie, or a closed
    /// finite-size gap).
    Degenerate,
    /// Photon truncation hit the dimension cap before converging.
    Unconverged,
    Error(String),
}

impl fmt::Display for PointFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointFlag::Coexist => f.write_str("coexist"),
            PointFlag::Degenerate => f.write_str("degenerate"),
            PointFlag::Unconverged => f.write_str("unconverged"),
            PointFlag::Error(e) => write!(f, "error: {e}"),
        }
    }
}

/// One grid point. `alpha_or_h` holds the photon amplitude per `√N` for
/// mean-field and ED scans and the self-consistent field `h*` for
/// effective-chain scans; `stag` is the staggered order used for labelling.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub j: f64,
    pub g: f64,
    pub energy: f64,
    pub alpha_or_h: f64,
    pub m_x: f64,
    pub m_z: f64,
    pub stag: f64,
    pub label: Option<PhaseLabel>,
    pub method: Method,
    pub flags: Vec<PointFlag>,
}

impl ScanRecord {
    fn failed(j: f64, g: f64, method: Method, e: impl fmt::Display) -> Self {
        Self {
            j,
            g,
            energy: f64::NAN,
            alpha_or_h: f64::NAN,
            m_x: f64::NAN,
            m_z: f64::NAN,
            stag: f64::NAN,
            label: None,
            method,
            flags: vec![PointFlag::Error(e.to_string())],
        }
    }

    pub fn is_error(&self) -> bool {
        self.flags.iter().any(|f| matches!(f, PointFlag::Error(_)))
    }

    /// Order parameters as emitted, with `h*` turned back into an amplitude.
    pub fn orders(&self) -> OrderParams {
        let photon_displacement = match self.method {
            Method::Effective(_) if self.alpha_or_h == 0.0 => 0.0,
            Method::Effective(_) => -self.alpha_or_h / (4.0 * self.g),
            _ => self.alpha_or_h,
        };
        OrderParams {
            photon_displacement,
            mx: self.m_x,
            mz: self.m_z,
            m_stag: self.stag,
        }
    }

    pub fn flags_field(&self) -> String {
        if self.flags.is_empty() {
            return "ok".into();
        }
        self.flags
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Evaluates every grid point once, rows of constant `J` in ascending
/// order. Per-point failures end up in the record's flags.
///
/// Work is spread over the current rayon pool; the result does not depend
/// on the number of threads.
pub fn run_scan(spec: &ScanSpec) -> Result<Vec<ScanRecord>, SpecError> {
    spec.validate()?;
    let js = spec.j.values();
    let gs = spec.g.values();
    let grid: Vec<(f64, f64)> = js
        .iter()
        .flat_map(|&j| gs.iter().map(move |&g| (j, g)))
        .collect();
    let records = match spec.method {
        Method::MeanField => grid
            .par_iter()
            .map(|&(j, g)| mean_field_point(spec, j, g))
            .collect(),
        Method::EdFull(c) => grid
            .par_iter()
            .map(|&(j, g)| ed_point(spec, c, j, g))
            .collect(),
        Method::Effective(backend) => {
            let factory = SolverFactory::new(backend)?;
            let rows: Vec<Vec<ScanRecord>> = js
                .par_iter()
                .map(|&j| effective_row(spec, &factory, j, &gs))
                .collect();
            rows.into_iter().flatten().collect()
        }
    };
    Ok(records)
}

fn mean_field_point(spec: &ScanSpec, j: f64, g: f64) -> ScanRecord {
    match mf_minimize(spec.params(g, j), spec.tol, DEFAULT_STARTS) {
        Ok(s) => {
            let mut flags = Vec::new();
            if s.coexistence {
                flags.push(PointFlag::Coexist);
            }
            if s.degenerate {
                flags.push(PointFlag::Degenerate);
            }
            ScanRecord {
                j,
                g,
                energy: s.energy,
                alpha_or_h: s.ansatz.alpha,
                m_x: s.orders.mx,
                m_z: s.orders.mz,
                stag: s.orders.m_stag,
                label: Some(s.label),
                method: spec.method,
                flags,
            }
        }
        Err(e) => ScanRecord::failed(j, g, spec.method, e),
    }
}

/// Gap below which a finite-size ground state is flagged degenerate.
const ED_GAP_TOL: f64 = 1e-8;

fn ed_point(spec: &ScanSpec, c: EDConfig, j: f64, g: f64) -> ScanRecord {
    let r = match converge_nmax(spec.params(g, j), c, ED_ENERGY_TOL) {
        Ok(r) => r,
        Err(e) => return ScanRecord::failed(j, g, spec.method, e),
    };
    let label = match finite_size_label(&r, spec.tol) {
        Ok(l) => l,
        Err(e) => return ScanRecord::failed(j, g, spec.method, e),
    };
    let o = finite_size_orders(&r);
    let mut flags = Vec::new();
    if r.gap.is_some_and(|gap| gap < ED_GAP_TOL) {
        flags.push(PointFlag::Degenerate);
    }
    if !r.nmax_converged {
        flags.push(PointFlag::Unconverged);
    }
    ScanRecord {
        j,
        g,
        energy: r.energy_per_site,
        alpha_or_h: o.photon_displacement,
        m_x: o.mx,
        m_z: o.mz,
        stag: o.m_stag,
        label: Some(label),
        method: spec.method,
        flags,
    }
}

/// Builds chain solvers at any `(ε, J)`, sharing one ED basis.
#[derive(Debug, Clone)]
pub struct SolverFactory {
    backend: ChainBackend,
    sector: Option<Arc<ChainSector>>,
}

impl SolverFactory {
    pub fn new(backend: ChainBackend) -> Result<Self, Error> {
        let sector = match backend {
            ChainBackend::FreeFermion => None,
            ChainBackend::ChainEd { n_sites } => Some(Arc::new(ChainSector::new(n_sites)?)),
        };
        Ok(Self { backend, sector })
    }

    pub fn backend(&self) -> ChainBackend {
        self.backend
    }

    pub fn solver(&self, eps: f64, j: f64) -> Result<ChainSolver, Error> {
        match &self.sector {
            None => ChainSolver::free_fermion(eps, j),
            Some(s) => ChainSolver::chain_ed(s.clone(), eps, j),
        }
    }
}

fn effective_row(spec: &ScanSpec, factory: &SolverFactory, j: f64, gs: &[f64]) -> Vec<ScanRecord> {
    let fail_all = |e: Error| {
        gs.iter()
            .map(|&g| ScanRecord::failed(j, g, spec.method, &e))
            .collect()
    };
    let solver = match factory.solver(spec.eps, j) {
        Ok(s) => s,
        Err(e) => return fail_all(e),
    };
    let g_top = gs.iter().copied().fold(0.0, f64::max);
    let chain = match ChainLandscape::covering(&solver, spec.omega, g_top, &Rayon) {
        Ok(c) => c,
        Err(e) => return fail_all(e),
    };
    gs.par_iter()
        .map(|&g| {
            let p = spec.params(g, j);
            let sol = match minimize_h(p, &solver, &chain, spec.tol) {
                Err(Error::LandscapeEdge { .. }) => {
                    let mut wider = chain.clone();
                    solve_effective(p, &solver, &mut wider, spec.tol, &Sequential)
                }
                other => other,
            };
            match sol {
                Ok(s) => effective_record(spec, j, g, &s),
                Err(e) => ScanRecord::failed(j, g, spec.method, e),
            }
        })
        .collect()
}

fn effective_record(spec: &ScanSpec, j: f64, g: f64, s: &SelfConsistentSolution) -> ScanRecord {
    let mut flags = Vec::new();
    if s.coexistent {
        flags.push(PointFlag::Coexist);
    }
    if s.chain_degenerate {
        flags.push(PointFlag::Degenerate);
    }
    ScanRecord {
        j,
        g,
        energy: s.energy,
        alpha_or_h: s.h_star,
        m_x: s.orders.mx,
        m_z: s.orders.mz,
        stag: s.orders.m_stag,
        label: Some(s.label),
        method: spec.method,
        flags,
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "j",
    "g",
    "energy",
    "alpha_or_h",
    "m_x",
    "m_z",
    "stag",
    "label",
    "method",
    "flags",
];

pub fn write_csv<W: Write>(records: &[ScanRecord], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in records {
        out.write_record([
            fmt_sig(r.j),
            fmt_sig(r.g),
            fmt_sig(r.energy),
            fmt_sig(r.alpha_or_h),
            fmt_sig(r.m_x),
            fmt_sig(r.m_z),
            fmt_sig(r.stag),
            r.label.map(|l| l.as_str().to_string()).unwrap_or_default(),
            r.method.to_string(),
            r.flags_field(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
