//! Boundary tracing over a list of Ising couplings.

use phasekit_core::effective::{transition_at_j, ChainBackend};
use phasekit_core::mean_field::{
    mf_boundary_bisect, mf_intermediate_window, mf_minimize, DEFAULT_STARTS,
};
use phasekit_core::transition::TransitionPoint;
use phasekit_core::{Error, ModelParams, ToleranceSet};
use rayon::prelude::*;
use serde::Serialize;

use crate::parallel::Rayon;
use crate::scan::{Axis, SolverFactory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceMethod {
    /// Label changes on the coarse `g` grid are bisected; on the AFM side
    /// the intermediate window is searched first.
    MeanField { coarse: Axis },
    /// The normal-to-superradiant transition at each `J`.
    Effective(ChainBackend),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub j: f64,
    pub points: Vec<TransitionPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TraceEntry {
    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }
}

/// Boundary points for every `J` in `js`, in the same order. A failure at
/// one `J` is reported in its entry only.
pub fn trace_boundary(
    template: ModelParams,
    method: TraceMethod,
    js: &[f64],
    t: ToleranceSet,
) -> Vec<TraceEntry> {
    let factory = match method {
        TraceMethod::Effective(b) => Some(SolverFactory::new(b)),
        TraceMethod::MeanField { .. } => None,
    };
    js.par_iter()
        .map(|&j| {
            let p = template.with_j(j);
            let found = match (&method, &factory) {
                (TraceMethod::MeanField { coarse }, _) => mean_field_points(p, *coarse, t),
                (_, Some(Ok(f))) => f
                    .solver(p.eps, j)
                    .and_then(|s| transition_at_j(p, &s, t, &Rayon))
                    .map(|tp| vec![tp]),
                (_, Some(Err(e))) => Err(e.clone()),
                (_, None) => unreachable!("effective tracing always has a factory"),
            };
            match found {
                Ok(points) => TraceEntry {
                    j,
                    points,
                    error: None,
                },
                Err(e) => TraceEntry {
                    j,
                    points: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn mean_field_points(
    p: ModelParams,
    coarse: Axis,
    t: ToleranceSet,
) -> Result<Vec<TransitionPoint>, Error> {
    if p.j < 0.0 {
        if let Some(w) = mf_intermediate_window(p, t)? {
            return Ok(vec![w.lower, w.upper]);
        }
    }
    let gs = coarse.values();
    let labels = gs
        .iter()
        .map(|&g| mf_minimize(p.with_g(g), t, DEFAULT_STARTS).map(|s| s.label))
        .collect::<Result<Vec<_>, _>>()?;
    let mut points = Vec::new();
    for k in 1..gs.len() {
        if labels[k] != labels[k - 1] {
            points.push(mf_boundary_bisect(p, (gs[k - 1], gs[k]), t)?);
        }
    }
    Ok(points)
}
