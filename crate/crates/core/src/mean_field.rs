//! Two-sublattice product-state mean field.
//!
//! The variational state is a coherent photon with real amplitude `α√N`
//! times spins on sublattices A and B pointing at polar angles `θ_a`, `θ_b`
//! in the x-z plane (`⟨s^z⟩ = cos θ / 2`, `⟨s^x⟩ = sin θ / 2`). Per site,
//!
//! ```text
//! e = ω α² + (ε/4)(cos θ_a + cos θ_b) + g α (sin θ_a + sin θ_b) − J cos θ_a cos θ_b
//! ```
//!
//! The photon amplitude is eliminated analytically and the remaining
//! two-angle landscape is minimized from a grid of starts.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use libm::{cos, sin, sqrt};

use crate::model::{
    classical_ground, classify_orders, validate_params, ModelParams, OrderParams, PhaseLabel,
    ToleranceSet,
};
use crate::optimize::bisect_predicate;
use crate::transition::{
    classify_jump, one_sided_limit, ScanAxis, SolverTag, TransitionOrder, TransitionPoint,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanFieldAnsatz {
    pub alpha: f64,
    pub theta_a: f64,
    pub theta_b: f64,
}

impl MeanFieldAnsatz {
    pub fn orders(&self) -> OrderParams {
        let (sa, ca) = (sin(self.theta_a), cos(self.theta_a));
        let (sb, cb) = (sin(self.theta_b), cos(self.theta_b));
        OrderParams {
            photon_displacement: self.alpha,
            mx: snap(0.25 * (sa + sb)),
            mz: snap(0.25 * (ca + cb)),
            m_stag: snap(0.25 * (ca - cb)),
        }
    }

    /// Fixes the parity and sublattice-exchange gauge: `α ≤ 0` (equivalently
    /// `sin θ_a + sin θ_b ≥ 0`) and `θ_a ≥ θ_b`, angles in `(−π, π]`.
    pub fn canonical(self) -> Self {
        let mut a = wrap_angle(self.theta_a);
        let mut b = wrap_angle(self.theta_b);
        let mut alpha = self.alpha;
        let s = sin(a) + sin(b);
        if alpha > 0.0 || (alpha == 0.0 && s < 0.0) {
            alpha = -alpha;
            a = wrap_angle(-a);
            b = wrap_angle(-b);
        }
        if a < b {
            core::mem::swap(&mut a, &mut b);
        }
        Self {
            alpha: if alpha == 0.0 { 0.0 } else { alpha },
            theta_a: a,
            theta_b: b,
        }
    }
}

/// Maps an angle into `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta - two_pi * libm::floor(theta / two_pi + 0.5);
    if t <= -PI {
        t += two_pi;
    } else if t > PI {
        t -= two_pi;
    }
    t
}

fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Variational energy per site.
pub fn mf_energy(p: &ModelParams, a: &MeanFieldAnsatz) -> f64 {
    let (sa, ca) = (sin(a.theta_a), cos(a.theta_a));
    let (sb, cb) = (sin(a.theta_b), cos(a.theta_b));
    p.omega * a.alpha * a.alpha + 0.25 * p.eps * (ca + cb) + p.g * a.alpha * (sa + sb)
        - p.j * ca * cb
}

/// Zeroes rounding residue such as `sin(π)`.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// Optimal photon amplitude for fixed spin angles.
pub fn mf_alpha_opt(p: &ModelParams, theta_a: f64, theta_b: f64) -> f64 {
    let s = snap(sin(theta_a) + sin(theta_b));
    if s == 0.0 {
        return 0.0;
    }
    -p.g * s / (2.0 * p.omega)
}

/// Energy with α eliminated, its gradient and Hessian in `(θ_a, θ_b)`.
struct Reduced {
    energy: f64,
    grad: [f64; 2],
    hess: [[f64; 2]; 2],
}

fn reduced(p: &ModelParams, ta: f64, tb: f64) -> Reduced {
    let (sa, ca) = (sin(ta), cos(ta));
    let (sb, cb) = (sin(tb), cos(tb));
    let k = p.g * p.g / p.omega;
    let sum = sa + sb;
    let q = 0.25 * p.eps;
    let energy = -0.25 * k * sum * sum + q * (ca + cb) - p.j * ca * cb;
    let grad = [
        -0.5 * k * sum * ca - q * sa + p.j * sa * cb,
        -0.5 * k * sum * cb - q * sb + p.j * ca * sb,
    ];
    let haa = -0.5 * k * (ca * ca - sum * sa) - q * ca + p.j * ca * cb;
    let hbb = -0.5 * k * (cb * cb - sum * sb) - q * cb + p.j * ca * cb;
    let hab = -0.5 * k * ca * cb - p.j * sa * sb;
    Reduced {
        energy,
        grad,
        hess: [[haa, hab], [hab, hbb]],
    }
}

fn reduced_energy(p: &ModelParams, ta: f64, tb: f64) -> f64 {
    reduced(p, ta, tb).energy
}

/// Eigenvalues (ascending) of a symmetric 2×2 matrix and the eigenvector of
/// the lower one.
fn eig2(h: [[f64; 2]; 2]) -> (f64, f64, [f64; 2]) {
    let (a, b, c) = (h[0][0], h[0][1], h[1][1]);
    let m = 0.5 * (a + c);
    let r = libm::hypot(0.5 * (a - c), b);
    let lo = m - r;
    let v1 = [b, lo - a];
    let v2 = [lo - c, b];
    let n1 = libm::hypot(v1[0], v1[1]);
    let n2 = libm::hypot(v2[0], v2[1]);
    let v = if n1 >= n2 && n1 > 0.0 {
        [v1[0] / n1, v1[1] / n1]
    } else if n2 > 0.0 {
        [v2[0] / n2, v2[1] / n2]
    } else if a <= c {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    };
    (lo, m + r, v)
}

const MAX_ITERS: usize = 400;
const MAX_STEP: f64 = 1.0;

/// Descends from `start` to a local minimum of the reduced energy.
///
/// Newton steps where the Hessian is positive definite, gradient plus
/// negative-curvature steps elsewhere. Returns `None` if no minimum with
/// gradient below `grad_tol` was reached.
fn refine(p: &ModelParams, start: [f64; 2], grad_tol: f64) -> Option<[f64; 2]> {
    let mut x = start;
    let mut polish = 0;
    for _ in 0..MAX_ITERS {
        let r = reduced(p, x[0], x[1]);
        let gn = libm::hypot(r.grad[0], r.grad[1]);
        let (lo, hi, v) = eig2(r.hess);
        let scale = 1.0 + r.energy.abs();

        if lo > 0.0 {
            let det = r.hess[0][0] * r.hess[1][1] - r.hess[0][1] * r.hess[1][0];
            let mut d = [
                -(r.hess[1][1] * r.grad[0] - r.hess[0][1] * r.grad[1]) / det,
                -(-r.hess[1][0] * r.grad[0] + r.hess[0][0] * r.grad[1]) / det,
            ];
            let dn = libm::hypot(d[0], d[1]);
            if gn < grad_tol {
                // a few pure Newton steps pin the minimum in flat directions
                if dn < 1e-13 || polish >= 8 {
                    return Some(x);
                }
                polish += 1;
                x = [x[0] + d[0], x[1] + d[1]];
                continue;
            }
            if dn > MAX_STEP {
                d = [d[0] * MAX_STEP / dn, d[1] * MAX_STEP / dn];
            }
            let predicted = -(r.grad[0] * d[0] + r.grad[1] * d[1]);
            if predicted <= 1e-14 * scale {
                x = [x[0] + d[0], x[1] + d[1]];
                continue;
            }
            match line_search(p, x, d, r.energy, predicted) {
                Some(nx) => x = nx,
                None => {
                    x = [x[0] + d[0], x[1] + d[1]];
                }
            }
        } else {
            if gn < grad_tol && lo > -1e-12 * (1.0 + hi.abs()) {
                return Some(x);
            }
            let mut d = [-r.grad[0], -r.grad[1]];
            if lo < 0.0 {
                let sign = if v[0] * r.grad[0] + v[1] * r.grad[1] > 0.0 {
                    -1.0
                } else {
                    1.0
                };
                let w = sqrt(-lo).max(gn).max(1e-3);
                d = [d[0] + sign * w * v[0], d[1] + sign * w * v[1]];
            }
            let dn = libm::hypot(d[0], d[1]);
            if dn > MAX_STEP {
                d = [d[0] * MAX_STEP / dn, d[1] * MAX_STEP / dn];
            }
            let predicted = (-(r.grad[0] * d[0] + r.grad[1] * d[1])).max(0.0)
                - 0.5 * lo * (d[0] * d[0] + d[1] * d[1]);
            match line_search(p, x, d, r.energy, predicted) {
                Some(nx) => x = nx,
                None => return (gn < grad_tol).then_some(x),
            }
        }
        x = [wrap_angle(x[0]), wrap_angle(x[1])];
    }
    let r = reduced(p, x[0], x[1]);
    (libm::hypot(r.grad[0], r.grad[1]) < grad_tol).then_some(x)
}

fn line_search(
    p: &ModelParams,
    x: [f64; 2],
    d: [f64; 2],
    e0: f64,
    predicted: f64,
) -> Option<[f64; 2]> {
    let mut t = 1.0;
    while t > 1e-12 {
        let trial = [x[0] + t * d[0], x[1] + t * d[1]];
        if reduced_energy(p, trial[0], trial[1]) <= e0 - 1e-4 * t * predicted {
            return Some(trial);
        }
        t *= 0.5;
    }
    None
}

/// A distinct local minimum reached from the start grid.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanFieldMinimum {
    pub ansatz: MeanFieldAnsatz,
    pub energy: f64,
    pub label: PhaseLabel,
    /// Number of starts that converged here.
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanFieldSolution {
    pub ansatz: MeanFieldAnsatz,
    pub energy: f64,
    pub orders: OrderParams,
    pub label: PhaseLabel,
    pub n_starts_agreeing: usize,
    /// More than one distinct local minimum was found (metastability, the
    /// signature of a first-order region).
    pub coexistence: bool,
    /// Two distinct minima tie in energy; the label broke toward the
    /// less ordered phase.
    pub degenerate: bool,
    /// All distinct local minima, lowest energy first.
    pub minima: Vec<MeanFieldMinimum>,
}

/// Energies closer than this (relative) count as a tie.
const TIE_TOL: f64 = 1e-12;
/// Canonical minima closer than this in both angles are identified.
const SAME_MINIMUM: f64 = 1e-4;

fn label_of(p: &ModelParams, a: &MeanFieldAnsatz, t: ToleranceSet) -> Result<PhaseLabel> {
    let mut o = a.orders();
    if p.g == 0.0 {
        // decoupled spins may tilt freely on a degenerate manifold without
        // any photon response
        o.mx = 0.0;
    }
    classify_orders(o, t)
}

fn start_points(n: usize) -> Vec<[f64; 2]> {
    let mut starts = Vec::with_capacity(n * n + 3);
    starts.push([PI, PI]);
    starts.push([0.0, PI]);
    starts.push([FRAC_PI_2, FRAC_PI_2]);
    let step = 2.0 * PI / n as f64;
    for i in 0..n {
        for k in 0..n {
            starts.push([-PI + (i as f64 + 0.5) * step, -PI + (k as f64 + 0.5) * step]);
        }
    }
    starts
}

/// Global minimum of the mean-field energy.
///
/// `n_starts` is the number of grid starts per angle (`n_starts²` grid
/// starts plus the polarized, Néel and x-polarized states).
pub fn mf_minimize(p: ModelParams, t: ToleranceSet, n_starts: usize) -> Result<MeanFieldSolution> {
    let p = validate_params(p)?;
    let t = t.validate()?;
    if n_starts < 8 {
        return Err(Error::InvalidParameter("n_starts must be at least 8"));
    }

    let mut minima: Vec<MeanFieldMinimum> = Vec::new();
    for start in start_points(n_starts) {
        let Some(x) = refine(&p, start, t.tol_energy) else {
            continue;
        };
        let ansatz = MeanFieldAnsatz {
            alpha: mf_alpha_opt(&p, x[0], x[1]),
            theta_a: x[0],
            theta_b: x[1],
        }
        .canonical();
        let energy = mf_energy(&p, &ansatz);
        if let Some(m) = minima.iter_mut().find(|m| {
            angle_distance(m.ansatz.theta_a, ansatz.theta_a) < SAME_MINIMUM
                && angle_distance(m.ansatz.theta_b, ansatz.theta_b) < SAME_MINIMUM
        }) {
            m.hits += 1;
            if energy < m.energy {
                m.energy = energy;
                m.ansatz = ansatz;
            }
            continue;
        }
        let label = label_of(&p, &ansatz, t)?;
        minima.push(MeanFieldMinimum {
            ansatz,
            energy,
            label,
            hits: 1,
        });
    }
    if minima.is_empty() {
        return Err(Error::InvalidParameter("no start converged to a minimum"));
    }
    for m in &mut minima {
        m.label = label_of(&p, &m.ansatz, t)?;
    }
    minima.sort_by(|a, b| a.energy.total_cmp(&b.energy));

    let e_min = minima[0].energy;
    let tie = TIE_TOL * (1.0 + e_min.abs());
    let tied = minima
        .iter()
        .take_while(|m| m.energy - e_min <= tie)
        .count();
    let chosen = minima[..tied]
        .iter()
        .min_by_key(|m| m.label)
        .copied()
        .expect("nonempty");

    Ok(MeanFieldSolution {
        ansatz: chosen.ansatz,
        energy: chosen.energy,
        orders: chosen.ansatz.orders(),
        label: chosen.label,
        n_starts_agreeing: chosen.hits,
        coexistence: minima.len() > 1,
        degenerate: tied > 1,
        minima,
    })
}

/// Default per-angle start count.
pub const DEFAULT_STARTS: usize = 8;

/// Bisection tolerance for boundaries.
pub const BOUNDARY_WIDTH: f64 = 1e-6;

/// Distance from the boundary of the samples behind the jump estimate.
const JUMP_OFFSET: f64 = 1e-4;

fn solve(p: ModelParams, t: ToleranceSet) -> Result<MeanFieldSolution> {
    mf_minimize(p, t, DEFAULT_STARTS)
}

/// Sample `|α|` at distances `d` and `4d` from `x` on one side, requiring
/// the label to stay `expected`; `d` shrinks when a neighbouring boundary is
/// too close.
fn side_limit<F>(mut at: F, x: f64, dir: f64, expected: PhaseLabel) -> Result<f64>
where
    F: FnMut(f64) -> Result<MeanFieldSolution>,
{
    let mut d = JUMP_OFFSET;
    while d >= 1e-7 {
        let near = at(x + dir * d)?;
        let far = at(x + dir * 4.0 * d)?;
        if near.label == expected && far.label == expected {
            return Ok(one_sided_limit(near.ansatz.alpha.abs(), far.ansatz.alpha.abs()).max(0.0));
        }
        d *= 0.1;
    }
    Ok(at(x + dir * 1e-7)?.ansatz.alpha.abs())
}

/// Bisects the phase boundary in `g` at fixed `J` inside `g_bracket`.
pub fn mf_boundary_bisect(
    template: ModelParams,
    g_bracket: (f64, f64),
    t: ToleranceSet,
) -> Result<TransitionPoint> {
    let (g_lo, g_hi) = g_bracket;
    let at = |g: f64| solve(template.with_g(g), t);
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
    let up = side_limit(at, mid, 1.0, above)?;
    let down = side_limit(at, mid, -1.0, below)?;
    let jump = (up - down).abs();
    Ok(TransitionPoint {
        j: template.j,
        g_c: mid,
        axis: ScanAxis::G,
        bracket: [a, b],
        order: classify_jump(jump, t.tol_jump),
        jump,
        bracket_jump: (sol_b.ansatz.alpha.abs() - sol_a.ansatz.alpha.abs()).abs(),
        below,
        above,
        backend: SolverTag::MeanField,
        coexisting: Vec::new(),
        size_trend: Vec::new(),
    })
}

/// Bisects the phase boundary in `J` at fixed `g` inside `j_bracket`
/// to bracket width `width`.
pub fn mf_boundary_bisect_j(
    template: ModelParams,
    j_bracket: (f64, f64),
    width: f64,
    t: ToleranceSet,
) -> Result<TransitionPoint> {
    let (j_lo, j_hi) = j_bracket;
    let at = |j: f64| solve(template.with_j(j), t);
    let lo = at(j_lo)?;
    let hi = at(j_hi)?;
    if lo.label == hi.label {
        return Err(Error::Bracket {
            lo: j_lo,
            hi: j_hi,
            detail: alloc::format!("label {} at both ends", lo.label),
        });
    }
    let below = lo.label;
    let (a, b) = bisect_predicate(|j| Ok::<_, Error>(at(j)?.label != below), j_lo, j_hi, width)?;
    let sol_a = at(a)?;
    let sol_b = at(b)?;
    let jump = (sol_b.ansatz.alpha.abs() - sol_a.ansatz.alpha.abs()).abs();
    Ok(TransitionPoint {
        j: 0.5 * (a + b),
        g_c: template.g,
        axis: ScanAxis::J,
        bracket: [a, b],
        order: classify_jump(jump, t.tol_jump),
        jump,
        bracket_jump: jump,
        below,
        above: sol_b.label,
        backend: SolverTag::MeanField,
        coexisting: Vec::new(),
        size_trend: Vec::new(),
    })
}

/// The AFM-S window between the AFM-N and PM-S phases at fixed `J`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntermediateWindow {
    /// AFM-N → AFM-S
    pub lower: TransitionPoint,
    /// AFM-S → PM-S
    pub upper: TransitionPoint,
}

impl IntermediateWindow {
    pub fn width(&self) -> f64 {
        self.upper.g_c - self.lower.g_c
    }
}

/// Coarse scan step used to locate the window boundaries.
const WINDOW_SCAN_STEP: f64 = 2e-3;

/// Phase sequence allowed along increasing `g` on the AFM side.
const AFM_SEQUENCE: [PhaseLabel; 3] = [PhaseLabel::AfmN, PhaseLabel::AfmS, PhaseLabel::PmS];

/// Locates the intermediate AFM-S window at the template's `J`, or `None`
/// when the `g = 0` state is not antiferromagnetic or no window exists.
pub fn mf_intermediate_window(
    template: ModelParams,
    t: ToleranceSet,
) -> Result<Option<IntermediateWindow>> {
    let template = validate_params(template.with_g(0.0))?;
    if classical_ground(template)?.label != PhaseLabel::AfmN {
        return Ok(None);
    }
    let at = |g: f64| solve(template.with_g(g), t);
    let g_max = 2.0 * sqrt(template.omega * (0.25 * template.eps + template.j.abs())) + 1.0;

    // coarse scan up to the first PM-S point
    let mut seq: Vec<(f64, PhaseLabel)> = Vec::new();
    let mut g = 0.0;
    loop {
        let label = at(g)?.label;
        if seq.last().map(|s| s.1) != Some(label) {
            seq.push((g, label));
        }
        if label == PhaseLabel::PmS || g > g_max {
            break;
        }
        g += WINDOW_SCAN_STEP;
    }
    let labels: Vec<PhaseLabel> = seq.iter().map(|s| s.1).collect();
    let mut k = 0;
    for l in &labels {
        match AFM_SEQUENCE[k..].iter().position(|a| a == l) {
            Some(off) => k += off,
            None => return Err(Error::NonMonotoneSequence(labels)),
        }
    }
    let Some(first_change) = seq.get(1) else {
        return Ok(None);
    };
    let lower = mf_boundary_bisect(
        template,
        (first_change.0 - WINDOW_SCAN_STEP, first_change.0),
        t,
    )?;
    let window_start = if lower.above == PhaseLabel::AfmS {
        Some(lower.bracket[1])
    } else {
        // a window narrower than the scan step shows up right above the boundary
        let mut found = None;
        for off in [1e-6, 1e-5, 1e-4, 1e-3] {
            let g = lower.bracket[1] + off;
            if at(g)?.label == PhaseLabel::AfmS {
                found = Some(g);
                break;
            }
        }
        found
    };
    let Some(gs) = window_start else {
        return Ok(None);
    };
    let lower = if lower.above == PhaseLabel::AfmS {
        lower
    } else {
        mf_boundary_bisect(template, (lower.bracket[0], gs), t)?
    };
    let mut g_end = gs;
    while at(g_end)?.label != PhaseLabel::PmS {
        g_end += WINDOW_SCAN_STEP;
        if g_end > g_max {
            return Err(Error::Bracket {
                lo: gs,
                hi: g_end,
                detail: "no PM-S phase above the AFM-S window".into(),
            });
        }
    }
    let upper = mf_boundary_bisect(template, (gs, g_end), t)?;
    if upper.below != PhaseLabel::AfmS || upper.above != PhaseLabel::PmS {
        return Err(Error::NonMonotoneSequence(alloc::vec![
            lower.below,
            lower.above,
            upper.below,
            upper.above
        ]));
    }
    Ok(Some(IntermediateWindow { lower, upper }))
}

/// Order of the mean-field boundary at `(J, g_c)`.
pub fn transition_order(tp: &TransitionPoint) -> TransitionOrder {
    tp.order
}
