//! Model parameters, order parameters and phase labels.

use core::fmt;

use crate::{Error, Result};

/// Couplings of the Dicke-Ising chain.
///
/// `j > 0` is ferromagnetic: the Ising term `−4J s^z s^z` rewards aligned
/// neighbours. The antiferromagnetic side of the phase diagram lives at
/// `j < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParams {
    pub omega: f64,
    pub eps: f64,
    pub g: f64,
    pub j: f64,
}

impl ModelParams {
    /// Unit convention `ω = ε = 1`.
    pub fn unit(g: f64, j: f64) -> Self {
        Self {
            omega: 1.0,
            eps: 1.0,
            g,
            j,
        }
    }

    pub fn with_g(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn with_j(self, j: f64) -> Self {
        Self { j, ..self }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::unit(0.0, 0.0)
    }
}

pub fn validate_params(p: ModelParams) -> Result<ModelParams> {
    if !(p.omega.is_finite() && p.eps.is_finite() && p.g.is_finite() && p.j.is_finite()) {
        return Err(Error::InvalidParameter("couplings must be finite"));
    }
    if p.omega <= 0.0 {
        return Err(Error::InvalidParameter("omega must be positive"));
    }
    if p.eps < 0.0 {
        return Err(Error::InvalidParameter("eps must be nonnegative"));
    }
    if p.g < 0.0 {
        return Err(Error::InvalidParameter("g must be nonnegative"));
    }
    Ok(p)
}

/// Per-site order parameters.
///
/// `photon_displacement` is the coherent amplitude per `√N`; `m_stag` is half
/// the difference of the two sublattice `⟨s^z⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderParams {
    pub photon_displacement: f64,
    pub mx: f64,
    pub mz: f64,
    pub m_stag: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PhaseLabel {
    #[cfg_attr(feature = "serde", serde(rename = "PM-N"))]
    PmN,
    #[cfg_attr(feature = "serde", serde(rename = "PM-S"))]
    PmS,
    #[cfg_attr(feature = "serde", serde(rename = "AFM-N"))]
    AfmN,
    #[cfg_attr(feature = "serde", serde(rename = "AFM-S"))]
    AfmS,
}

impl PhaseLabel {
    pub const ALL: [PhaseLabel; 4] = [
        PhaseLabel::PmN,
        PhaseLabel::PmS,
        PhaseLabel::AfmN,
        PhaseLabel::AfmS,
    ];

    pub fn from_flags(antiferromagnetic: bool, superradiant: bool) -> Self {
        match (antiferromagnetic, superradiant) {
            (false, false) => PhaseLabel::PmN,
            (false, true) => PhaseLabel::PmS,
            (true, false) => PhaseLabel::AfmN,
            (true, true) => PhaseLabel::AfmS,
        }
    }

    pub fn is_superradiant(self) -> bool {
        matches!(self, PhaseLabel::PmS | PhaseLabel::AfmS)
    }

    pub fn is_antiferromagnetic(self) -> bool {
        matches!(self, PhaseLabel::AfmN | PhaseLabel::AfmS)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::PmN => "PM-N",
            PhaseLabel::PmS => "PM-S",
            PhaseLabel::AfmN => "AFM-N",
            PhaseLabel::AfmS => "AFM-S",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.as_str() == s)
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Numerical thresholds shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ToleranceSet {
    /// An order parameter above this magnitude counts as nonzero.
    pub tol_order_param: f64,
    /// Minimizer convergence (gradient norm, energy ties).
    pub tol_energy: f64,
    /// Minimum discontinuity for a first-order transition.
    pub tol_jump: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            tol_order_param: 1e-6,
            tol_energy: 1e-10,
            tol_jump: 1e-2,
        }
    }
}

impl ToleranceSet {
    pub fn validate(self) -> Result<Self> {
        if !(self.tol_order_param > 0.0 && self.tol_energy > 0.0 && self.tol_jump > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive"));
        }
        if self.tol_jump <= self.tol_order_param {
            return Err(Error::InvalidParameter(
                "tol_jump must exceed tol_order_param",
            ));
        }
        Ok(self)
    }
}

/// Ground state of the diagonal `g = 0` Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassicalGround {
    pub energy: f64,
    pub label: PhaseLabel,
    /// Polarized and Néel configurations tie.
    pub degenerate: bool,
}

/// Energy per site of the all-down configuration at `g = 0`.
pub fn polarized_energy(eps: f64, j: f64) -> f64 {
    -0.5 * eps - j
}

/// Energy per site of the Néel configuration at `g = 0`.
pub fn neel_energy(j: f64) -> f64 {
    j
}

const TIE_TOL: f64 = 1e-14;

/// Exact ground state at `g = 0` on an even periodic chain.
///
/// The only candidates are the fully polarized and the Néel configuration;
/// the two cross at `J = −ε/4`, where the tie breaks toward `PM-N`.
pub fn classical_ground(p: ModelParams) -> Result<ClassicalGround> {
    let p = validate_params(p)?;
    if p.g != 0.0 {
        return Err(Error::InvalidParameter("classical_ground requires g = 0"));
    }
    let e_pol = polarized_energy(p.eps, p.j);
    let e_neel = neel_energy(p.j);
    let scale = 1.0 + e_pol.abs().max(e_neel.abs());
    let degenerate = (e_pol - e_neel).abs() <= TIE_TOL * scale;
    let (energy, label) = if degenerate || e_pol < e_neel {
        (e_pol.min(e_neel), PhaseLabel::PmN)
    } else {
        (e_neel, PhaseLabel::AfmN)
    };
    Ok(ClassicalGround {
        energy,
        label,
        degenerate,
    })
}

/// Indicators disagreeing by more than this factor times the tolerance are
/// reported as a solver inconsistency.
const INDICATOR_MARGIN: f64 = 100.0;

pub fn classify_orders(o: OrderParams, t: ToleranceSet) -> Result<PhaseLabel> {
    let tol = t.tol_order_param;
    let alpha = o.photon_displacement.abs();
    let mx = o.mx.abs();
    let alpha_on = alpha > tol;
    let mx_on = mx > tol;
    if alpha_on != mx_on && alpha.max(mx) > INDICATOR_MARGIN * tol {
        return Err(Error::InconsistentIndicators {
            alpha: o.photon_displacement,
            mx: o.mx,
        });
    }
    Ok(PhaseLabel::from_flags(o.m_stag.abs() > tol, alpha_on))
}
