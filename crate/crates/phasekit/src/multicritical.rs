//! Multicritical search report.

use phasekit_core::effective::{
    locate_multicritical, ChainBackend, ChainSolver, MulticriticalPoint,
};
use phasekit_core::transition::{SolverTag, TransitionOrder};
use phasekit_core::{Error, ModelParams, ToleranceSet};
use serde::Serialize;

use crate::parallel::Rayon;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchFailure {
    pub message: String,
    /// Order found at both ends when the bracket does not straddle the
    /// multicritical point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<TransitionOrder>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_jumps: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticriticalReport {
    pub backend: SolverTag,
    pub omega: f64,
    pub eps: f64,
    pub j_bracket: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<MulticriticalPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<SearchFailure>,
}

impl MulticriticalReport {
    pub fn is_error(&self) -> bool {
        self.failure.is_some()
    }
}

/// Runs the order bisection over `j_bracket` and wraps the outcome, success
/// or failure, in a report.
pub fn find_multicritical(
    template: ModelParams,
    backend: ChainBackend,
    j_bracket: (f64, f64),
    t: ToleranceSet,
) -> MulticriticalReport {
    let outcome = ChainSolver::new(backend, template.eps, j_bracket.0)
        .and_then(|s| locate_multicritical(template, &s, j_bracket, t, &Rayon));
    let (result, failure) = match outcome {
        Ok(mc) => (Some(mc), None),
        Err(e) => (None, Some(failure_of(e))),
    };
    MulticriticalReport {
        backend: backend.tag(),
        omega: template.omega,
        eps: template.eps,
        j_bracket: [j_bracket.0, j_bracket.1],
        result,
        failure,
    }
}

fn failure_of(e: Error) -> SearchFailure {
    let (order, end_jumps) = match &e {
        Error::OrderBracket {
            order,
            jump_lo,
            jump_hi,
            ..
        } => (Some(*order), Some([*jump_lo, *jump_hi])),
        _ => (None, None),
    };
    SearchFailure {
        message: e.to_string(),
        order,
        end_jumps,
    }
}
