use alloc::string::String;
use alloc::vec::Vec;

use crate::model::PhaseLabel;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("contradictory superradiance indicators: alpha = {alpha:e}, m_x = {mx:e}")]
    InconsistentIndicators { alpha: f64, mx: f64 },

    #[error("bracket [{lo}, {hi}] does not enclose a phase change: {detail}")]
    Bracket { lo: f64, hi: f64, detail: String },

    #[error("non-monotone phase sequence along the scan: {0:?}")]
    NonMonotoneSequence(Vec<PhaseLabel>),

    #[error("quadrature did not converge: estimated error {achieved:e} > {target:e}")]
    Quadrature { achieved: f64, target: f64 },

    #[error("eigensolver did not converge: residual {residual:e} after {iterations} iterations")]
    Eigensolver { residual: f64, iterations: usize },

    #[error("Hilbert-space dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("free-fermion chain solver requires eps = 0 or J = 0 (got eps = {eps}, J = {j})")]
    BackendMismatch { eps: f64, j: f64 },

    #[error("effective energy still decreasing at h_max = {h_max}; enlarge the h grid")]
    LandscapeEdge { h_max: f64 },

    #[error("self-consistency residual {residual:e} at h* = {h_star}")]
    SelfConsistency { residual: f64, h_star: f64 },

    #[error("non-positive susceptibility estimate {chi:e}")]
    Curvature { chi: f64 },

    #[error("ground energy increased from {previous} to {current} when n_max grew to {n_max}")]
    TruncationMonotonicity {
        previous: f64,
        current: f64,
        n_max: usize,
    },

    #[error("results come from different configurations: {0}")]
    ConfigMismatch(&'static str),

    #[error("transition order is {order} at both ends of the J bracket [{lo}, {hi}] (jumps {jump_lo:e}, {jump_hi:e})")]
    OrderBracket {
        lo: f64,
        hi: f64,
        order: crate::transition::TransitionOrder,
        jump_lo: f64,
        jump_hi: f64,
    },
}
