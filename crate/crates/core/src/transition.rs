//! Located phase-boundary points and the jump estimator shared by the
//! mean-field and effective-chain boundary searches.

use alloc::vec::Vec;
use core::fmt;

use crate::model::PhaseLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum TransitionOrder {
    First,
    Second,
}

impl fmt::Display for TransitionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransitionOrder::First => "first",
            TransitionOrder::Second => "second",
        })
    }
}

/// Which solver produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SolverTag {
    MeanField,
    FreeFermion,
    ChainEd { n_sites: usize },
}

impl fmt::Display for SolverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverTag::MeanField => f.write_str("mean-field"),
            SolverTag::FreeFermion => f.write_str("free-fermion"),
            SolverTag::ChainEd { n_sites } => write!(f, "chain-ed({n_sites})"),
        }
    }
}

/// Coupling swept by a boundary search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ScanAxis {
    G,
    J,
}

/// A degenerate minimum of the effective energy at a first-order point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoexistingMinimum {
    pub h: f64,
    pub energy: f64,
}

/// Finite-size record of a transition located with the chain-ED solver.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SizeTrend {
    pub n_sites: usize,
    pub g_c: f64,
    pub jump: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransitionPoint {
    pub j: f64,
    pub g_c: f64,
    pub axis: ScanAxis,
    /// Final bisection bracket along `axis`.
    pub bracket: [f64; 2],
    pub order: TransitionOrder,
    /// Discontinuity of the order parameter (|α| for mean field, `h*` for
    /// the effective chain) extrapolated to zero distance from the boundary.
    pub jump: f64,
    /// Order-parameter difference between the two ends of `bracket`.
    pub bracket_jump: f64,
    pub below: PhaseLabel,
    pub above: PhaseLabel,
    pub backend: SolverTag,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Vec::is_empty")
    )]
    pub coexisting: Vec<CoexistingMinimum>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Vec::is_empty")
    )]
    pub size_trend: Vec<SizeTrend>,
}

/// Limit of an order parameter at the boundary from samples at distances `d`
/// and `4d` on one side.
///
/// Assumes `m(d) = m₀ + b√d + O(d)`, which covers both a square-root onset
/// (`m₀ = 0`) and a finite discontinuity (`m₀ > 0`, `b = 0`).
pub fn one_sided_limit(at_d: f64, at_4d: f64) -> f64 {
    2.0 * at_d - at_4d
}

pub(crate) fn classify_jump(jump: f64, tol_jump: f64) -> TransitionOrder {
    if jump > tol_jump {
        TransitionOrder::First
    } else {
        TransitionOrder::Second
    }
}
