//! Quick invariant checks run by `phasekit selfcheck`.

use phasekit_core::ed_full::{ed_full_ground, EDConfig};
use phasekit_core::effective::{
    effective_energy, ff_ground_energy, ff_mx, ChainBackend, ChainSolver,
};
use phasekit_core::mean_field::{mf_boundary_bisect, mf_boundary_bisect_j};
use phasekit_core::{classify_orders, ModelParams, PhaseLabel, ToleranceSet};

use crate::scan::{run_scan, Axis, Method, ScanSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<String, String>;

const CHECKS: [(&str, Check); 7] = [
    ("mean-field threshold at J = 0", threshold),
    ("classical boundary at J = -eps/4", classical_boundary),
    (
        "Hellmann-Feynman for the free-fermion chain",
        hellmann_feynman,
    ),
    ("effective energy even in h", evenness),
    (
        "chain-ED agrees with free fermions",
        chain_ed_vs_free_fermion,
    ),
    ("ED energy monotone in n_max", truncation),
    ("scan completeness and label consistency", scan_consistency),
];

pub fn run_selfcheck() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            let (passed, detail) = match check() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

/// Weyl sequence in `[0, 1)`: reproducible sample points without an RNG.
fn weyl(k: usize, dim: usize) -> f64 {
    const ALPHAS: [f64; 3] = [
        0.618_033_988_749_895,
        0.414_213_562_373_095,
        0.732_050_807_568_877,
    ];
    (ALPHAS[dim] * (k + 1) as f64).fract()
}

fn ensure(ok: bool, msg: String) -> Result<String, String> {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn threshold() -> Result<String, String> {
    let tp = mf_boundary_bisect(
        ModelParams::unit(0.0, 0.0),
        (0.3, 0.7),
        ToleranceSet::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure((tp.g_c - 0.5).abs() < 1e-4, format!("g_c = {:.8}", tp.g_c))
}

fn classical_boundary() -> Result<String, String> {
    let tp = mf_boundary_bisect_j(
        ModelParams::unit(0.0, 0.0),
        (-0.6, 0.2),
        1e-10,
        ToleranceSet::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure((tp.j + 0.25).abs() < 1e-10, format!("J = {:.12}", tp.j))
}

fn hellmann_feynman() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let j = 0.05 + 1.4 * weyl(k, 0);
        let h = 0.01 + 5.0 * weyl(k, 1);
        let d = 1e-5;
        let e = |x| ff_ground_energy(j, x).map_err(|e| e.to_string());
        let fd = (e(h + d)? - e(h - d)?) / (2.0 * d);
        let mx = ff_mx(j, h).map_err(|e| e.to_string())?;
        worst = worst.max((mx + fd).abs());
    }
    ensure(worst < 1e-6, format!("max deviation {worst:.2e}"))
}

fn evenness() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let j = -1.0 + 2.0 * weyl(k, 0);
        let h = 4.0 * weyl(k, 1);
        let g = 0.1 + weyl(k, 2);
        let s = ChainSolver::free_fermion(0.0, j).map_err(|e| e.to_string())?;
        let p = ModelParams {
            omega: 1.0,
            eps: 0.0,
            g,
            j,
        };
        let a = effective_energy(p, &s, h).map_err(|e| e.to_string())?;
        let b = effective_energy(p, &s, -h).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).abs());
    }
    ensure(worst < 1e-10, format!("max asymmetry {worst:.2e}"))
}

fn chain_ed_vs_free_fermion() -> Result<String, String> {
    let s = ChainSolver::new(ChainBackend::ChainEd { n_sites: 12 }, 0.0, 0.25)
        .map_err(|e| e.to_string())?;
    let ed = s.sample(0.5).map_err(|e| e.to_string())?.energy;
    let ff = ff_ground_energy(0.25, 0.5).map_err(|e| e.to_string())?;
    ensure(
        (ed - ff).abs() < 2e-2,
        format!("|e_ED - e_ff| = {:.2e} at N = 12", (ed - ff).abs()),
    )
}

fn truncation() -> Result<String, String> {
    let p = ModelParams::unit(0.8, 0.0);
    let mut energies = Vec::new();
    for n_max in [8, 16, 32] {
        let c = EDConfig {
            n_spins: 4,
            n_max,
            ..EDConfig::default()
        };
        energies.push(
            ed_full_ground(p, c)
                .map_err(|e| e.to_string())?
                .energy_per_site,
        );
    }
    let ok = energies.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    ensure(ok, format!("energies {energies:?}"))
}

fn scan_consistency() -> Result<String, String> {
    let spec = ScanSpec {
        j: Axis::new(-0.6, 0.6, 13),
        g: Axis::new(0.0, 1.0, 11),
        omega: 1.0,
        eps: 1.0,
        method: Method::MeanField,
        tol: ToleranceSet::default(),
    };
    let rows = run_scan(&spec).map_err(|e| e.to_string())?;
    if rows.len() != spec.len() {
        return Err(format!("{} records for {} points", rows.len(), spec.len()));
    }
    let mut seen = Vec::new();
    for r in &rows {
        let label = r
            .label
            .ok_or_else(|| format!("failed point ({}, {})", r.j, r.g))?;
        let again = classify_orders(r.orders(), spec.tol).map_err(|e| e.to_string())?;
        if again != label {
            return Err(format!(
                "label {label} re-classified as {again} at ({}, {})",
                r.j, r.g
            ));
        }
        if !seen.contains(&label) {
            seen.push(label);
        }
    }
    let all = PhaseLabel::ALL.iter().all(|l| seen.contains(l));
    ensure(all, format!("{} records, labels {seen:?}", rows.len()))
}
