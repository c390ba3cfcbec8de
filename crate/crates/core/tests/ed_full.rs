mod oracle;

use phasekit_core::ed_full::*;
use phasekit_core::effective::{ed_chain_ground, ChainParams, ChainSector};
use phasekit_core::linalg::{LanczosConfig, LinearOperator};
use phasekit_core::*;

fn cfg(n_spins: usize, n_max: usize) -> EDConfig {
    EDConfig {
        n_spins,
        n_max,
        ..EDConfig::default()
    }
}

fn params(eps: f64, g: f64, j: f64) -> ModelParams {
    ModelParams {
        omega: 1.0,
        eps,
        g,
        j,
    }
}

#[test]
fn sparse_matches_dense_oracle() {
    let cases = [
        (6, 24, params(1.0, 0.3, 0.0)),
        (4, 24, params(1.0, 0.7, 0.2)),
        (4, 24, params(0.5, 0.45, -0.4)),
        (4, 40, params(1.0, 0.9, 0.5)),
    ];
    for (n, n_max, p) in cases {
        let r = ed_full_ground(p, cfg(n, n_max)).unwrap();
        let d = oracle::dense_full(p.omega, p.eps, p.g, p.j, n, n_max);
        assert!((r.energy_per_site - d.energy).abs() < 1e-8, "{p:?}");
        assert!((r.photon_density - d.photon_density).abs() < 1e-8);
        assert!((r.quad_fluct - d.quad_fluct).abs() < 1e-8);
        assert!((r.s_pi - d.s_pi).abs() < 1e-8);
        assert!((r.m_z - d.m_z).abs() < 1e-8);
        // the reported gap is to the other parity sector, never below the full one
        assert!(r.gap.unwrap() >= d.gap - 1e-8);
    }
}

#[test]
fn hamiltonian_matches_dense_elementwise() {
    let p = params(0.8, 0.6, -0.3);
    let h = build_hamiltonian(p, cfg(4, 8)).unwrap();
    let d = oracle::dicke_ising(p.omega, p.eps, p.g, p.j, 4, 8);
    let dim = d.nrows();
    let mut x = vec![0.0; dim];
    let mut y = vec![0.0; dim];
    for col in 0..dim {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[col] = 1.0;
        h.apply(&x, &mut y);
        for row in 0..dim {
            assert!((y[row] - d[(row, col)]).abs() < 1e-13);
        }
    }
}

#[test]
fn truncation_is_monotone() {
    for p in [
        params(1.0, 0.3, 0.0),
        params(1.0, 0.7, 0.0),
        params(1.0, 0.9, -0.3),
    ] {
        let e: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&m| ed_full_ground(p, cfg(6, m)).unwrap().energy_per_site)
            .collect();
        assert!(e[0] >= e[1] - 1e-12 && e[1] >= e[2] - 1e-12, "{e:?}");
    }
}

#[test]
fn superradiant_side_needs_more_photons() {
    let weak = converge_nmax(params(1.0, 0.3, 0.0), cfg(6, 8), 1e-10).unwrap();
    let strong = converge_nmax(params(1.0, 0.7, 0.0), cfg(6, 8), 1e-10).unwrap();
    assert!(weak.nmax_converged && strong.nmax_converged);
    assert!(strong.n_max > weak.n_max);

    // the finite-size ground state stays a parity cat, so a shifted frame
    // changes the truncation but not the energy
    let shifted = EDConfig {
        displaced_frame: Some(-0.3),
        ..cfg(6, 8)
    };
    let framed = converge_nmax(params(1.0, 0.7, 0.0), shifted, 1e-10).unwrap();
    assert!(framed.nmax_converged);
    assert!((framed.energy_per_site - strong.energy_per_site).abs() < 1e-8);
}

#[test]
fn displaced_frame_reproduces_observables() {
    let p = params(1.0, 0.7, 0.1);
    let plain = ed_full_ground(p, cfg(6, 40)).unwrap();
    let framed = ed_full_ground(
        p,
        EDConfig {
            displaced_frame: Some(-0.35),
            ..cfg(6, 40)
        },
    )
    .unwrap();
    assert!((plain.energy_per_site - framed.energy_per_site).abs() < 1e-8);
    assert!((plain.s_pi - framed.s_pi).abs() < 1e-6);
    assert!((plain.photon_density - framed.photon_density).abs() < 1e-6);
    assert!((plain.quad_fluct - framed.quad_fluct).abs() < 1e-6);
    assert!(framed.parity.is_none());
}

#[test]
fn indicator_grows_past_threshold() {
    let base = ed_full_ground(params(1.0, 0.0, 0.0), cfg(8, 24)).unwrap();
    let at = |g| {
        let r = ed_full_ground(params(1.0, g, 0.0), cfg(8, 24)).unwrap();
        superradiance_indicator(&r, &base).unwrap()
    };
    let (lo, hi) = (at(0.3), at(0.7));
    assert!(lo >= 0.0 && hi > lo);
    assert!(superradiance_indicator(
        &base,
        &ed_full_ground(params(1.0, 0.0, 0.0), cfg(6, 24)).unwrap()
    )
    .is_err());
}

#[test]
fn parity_eigenstates() {
    for p in [
        params(1.0, 0.3, 0.0),
        params(1.0, 0.5, 0.3),
        params(0.6, 0.4, -0.5),
    ] {
        let r = ed_full_ground(p, cfg(6, 24)).unwrap();
        if r.gap.unwrap() > 1e-8 {
            assert!((r.parity.unwrap().abs() - 1.0).abs() < 1e-8);
        }
        assert!(r.quad_mean.abs() < 1e-8);
        assert!(r.m_x.abs() < 1e-8);
    }
}

#[test]
fn decoupled_limit_reduces_to_spin_chain() {
    let sector = ChainSector::new(8).unwrap();
    for (eps, j) in [(1.0, 0.3), (1.0, -0.4), (0.2, -0.1)] {
        let r = ed_full_ground(params(eps, 0.0, j), cfg(8, 8)).unwrap();
        let chain = ed_chain_ground(
            &sector,
            ChainParams { eps, j, h: 0.0 },
            &LanczosConfig::default(),
        )
        .unwrap();
        let classical = classical_ground(params(eps, 0.0, j)).unwrap();
        assert!((r.energy_per_site - chain.energy).abs() < 1e-10);
        assert!((r.energy_per_site - classical.energy).abs() < 1e-10);
        assert!(r.photon_density < 1e-20);
        assert_eq!(
            finite_size_label(&r, ToleranceSet::default()).unwrap(),
            classical.label
        );
    }
}

#[test]
fn finite_size_labels_follow_coupling() {
    let t = ToleranceSet::default();
    let label = |g: f64, j: f64| {
        let r = converge_nmax(params(1.0, g, j), cfg(8, 16), 1e-9).unwrap();
        finite_size_label(&r, t).unwrap()
    };
    assert_eq!(label(0.2, 0.0), PhaseLabel::PmN);
    assert_eq!(label(1.0, 0.0), PhaseLabel::PmS);
    assert_eq!(label(0.1, -0.6), PhaseLabel::AfmN);
}

#[test]
fn invalid_configs_are_rejected() {
    let p = params(1.0, 0.3, 0.0);
    assert!(ed_full_ground(p, cfg(5, 8)).is_err());
    assert!(ed_full_ground(p, cfg(14, 8)).is_err());
    assert!(ed_full_ground(p, cfg(6, 4)).is_err());
    let capped = EDConfig {
        dim_cap: 100,
        ..cfg(6, 8)
    };
    assert!(matches!(
        ed_full_ground(p, capped),
        Err(Error::DimensionCap { .. })
    ));
    assert!(ed_full_ground(params(1.0, -0.1, 0.0), cfg(6, 8)).is_err());
}
