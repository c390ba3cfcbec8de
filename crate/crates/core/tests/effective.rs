mod oracle;

use std::f64::consts::FRAC_1_PI;
use std::sync::Arc;

use phasekit_core::effective::*;
use phasekit_core::linalg::LanczosConfig;
use phasekit_core::transition::TransitionOrder;
use phasekit_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> ToleranceSet {
    ToleranceSet::default()
}

fn eps0(g: f64, j: f64) -> ModelParams {
    ModelParams {
        omega: 1.0,
        eps: 0.0,
        g,
        j,
    }
}

// (J, h, e, m_x) from the closed-form elliptic-integral energy and direct
// quadrature of the m_x integral
const FF_REFERENCE: [(f64, f64, f64, f64); 5] = [
    (0.5, 0.7, -0.563_414_333_793_485_5, 0.188_419_988_608_268_56),
    (0.25, 0.5, -FRAC_1_PI, FRAC_1_PI),
    (1.0, 3.1, -1.716_012_907_355_123_1, 0.442_986_345_053_532_4),
    (
        0.75,
        0.2,
        -0.753_337_053_613_260_2,
        0.033_407_905_857_435_95,
    ),
    (0.3, 2.0, -1.022_629_514_920_858_9, 0.488_552_665_530_792_6),
];

#[test]
fn free_fermion_matches_reference_values() {
    for (j, h, e, mx) in FF_REFERENCE {
        assert!(
            (ff_ground_energy(j, h).unwrap() - e).abs() < 1e-12,
            "e({j},{h})"
        );
        assert!((ff_mx(j, h).unwrap() - mx).abs() < 1e-10, "mx({j},{h})");
        assert!((oracle::tfim_energy(j, h) - e).abs() < 1e-12);
    }
}

#[test]
fn free_fermion_matches_agm_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let j = rng.gen_range(-1.5..1.5);
        let h = rng.gen_range(0.0..6.0);
        let e = ff_ground_energy(j, h).unwrap();
        assert!((e - oracle::tfim_energy(j, h)).abs() < 1e-11, "({j},{h})");
    }
}

#[test]
fn hellmann_feynman_free_fermion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let j = rng.gen_range(0.05..1.5);
        let h = rng.gen_range(0.01..5.0);
        let d = 1e-5;
        let fd =
            (ff_ground_energy(j, h + d).unwrap() - ff_ground_energy(j, h - d).unwrap()) / (2.0 * d);
        assert!((ff_mx(j, h).unwrap() + fd).abs() < 1e-6, "({j},{h})");
    }
}

#[test]
fn hellmann_feynman_chain_ed() {
    let sector = Arc::new(ChainSector::new(10).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let eps = rng.gen_range(0.0..1.5);
        let j = rng.gen_range(-1.0..1.0);
        let h = rng.gen_range(0.05..4.0);
        let s = ChainSolver::chain_ed(sector.clone(), eps, j).unwrap();
        let d = 1e-4;
        let fd = (s.sample(h + d).unwrap().energy - s.sample(h - d).unwrap().energy) / (2.0 * d);
        assert!(
            (s.sample(h).unwrap().mx + fd).abs() < 1e-5,
            "({eps},{j},{h})"
        );
    }
}

#[test]
fn sector_ed_matches_full_space_dense() {
    let sector = ChainSector::new(8).unwrap();
    let cfg = LanczosConfig::default();
    for (eps, j, h) in [
        (1.0, 0.3, 0.7),
        (0.0, 0.5, 1.1),
        (1.0, -0.4, 0.3),
        (0.5, -1.0, 2.5),
    ] {
        let r = ed_chain_ground(&sector, ChainParams { eps, j, h }, &cfg).unwrap();
        let (e0, v, _) = oracle::ground(oracle::chain(eps, j, h, 8));
        let ops = oracle::spin_ops(8);
        assert!((r.energy - e0 / 8.0).abs() < 1e-12);
        assert!((r.mx - oracle::expect(&ops.x, &v).abs() / 8.0).abs() < 1e-9);
        assert!((r.mz - oracle::expect(&ops.z, &v) / 8.0).abs() < 1e-9);
        let s2 = &ops.stag * &ops.stag;
        assert!((r.s_pi - oracle::expect(&s2, &v) / 64.0).abs() < 1e-9);
    }
}

#[test]
fn chain_ed_approaches_free_fermion_with_size() {
    let cfg = LanczosConfig::default();
    for (j, h) in [(0.25, 0.5), (0.5, 0.7), (0.3, 2.0)] {
        let exact = ff_ground_energy(j, h).unwrap();
        let diffs: Vec<f64> = [8, 12, 16]
            .iter()
            .map(|&n| {
                let s = ChainSector::new(n).unwrap();
                let r = ed_chain_ground(&s, ChainParams { eps: 0.0, j, h }, &cfg).unwrap();
                (r.energy - exact).abs()
            })
            .collect();
        assert!(diffs[0] >= diffs[1] && diffs[1] >= diffs[2], "{diffs:?}");
    }
    let s = ChainSector::new(12).unwrap();
    let r = ed_chain_ground(
        &s,
        ChainParams {
            eps: 0.0,
            j: 0.25,
            h: 0.5,
        },
        &cfg,
    )
    .unwrap();
    assert!((r.energy - ff_ground_energy(0.25, 0.5).unwrap()).abs() < 2e-2);
}

#[test]
fn sublattice_mapping_in_ed() {
    let sector = Arc::new(ChainSector::new(12).unwrap());
    for (j, h) in [(0.4, 0.6), (0.8, 1.9)] {
        let a = ChainSolver::chain_ed(sector.clone(), 0.0, j)
            .unwrap()
            .sample(h)
            .unwrap();
        let b = ChainSolver::chain_ed(sector.clone(), 0.0, -j)
            .unwrap()
            .sample(h)
            .unwrap();
        assert!((a.energy - b.energy).abs() < 1e-12);
        assert!((a.mx - b.mx).abs() < 1e-9);
    }
}

#[test]
fn normal_point_is_stationary() {
    for solver in [
        ChainSolver::free_fermion(0.0, 0.6).unwrap(),
        ChainSolver::new(ChainBackend::ChainEd { n_sites: 8 }, 0.7, 0.3).unwrap(),
    ] {
        assert_eq!(solver.sample(0.0).unwrap().mx, 0.0);
    }
}

#[test]
fn dicke_threshold_in_both_backends() {
    let ff = ChainSolver::free_fermion(1.0, 0.0).unwrap();
    let tp = transition_at_j(ModelParams::unit(0.0, 0.0), &ff, tol(), &Sequential).unwrap();
    assert!((tp.g_c - 0.5).abs() < 1e-5);
    assert_eq!(tp.order, TransitionOrder::Second);

    let ed = ChainSolver::new(ChainBackend::ChainEd { n_sites: 12 }, 1.0, 0.0).unwrap();
    let tp = transition_at_j(ModelParams::unit(0.0, 0.0), &ed, tol(), &Sequential).unwrap();
    assert!((tp.g_c - 0.5).abs() < 0.02);
    assert_eq!(tp.order, TransitionOrder::Second);
}

// Energy crossing of the normal and superradiant minima at ε = 0, located
// with the closed-form energy and a bounded scalar minimizer
const FIRST_ORDER_GC: [(f64, f64, f64); 3] = [
    (0.5, 0.646_754_827_009_392_7, 1.452_491_183),
    (0.75, 0.792_109_657_427_508_2, 2.178_736_805),
    (1.0, 0.914_649_447_886_948, 2.904_982_450),
];

#[test]
fn first_order_line_without_longitudinal_field() {
    for (j, gc, h_jump) in FIRST_ORDER_GC {
        let s = ChainSolver::free_fermion(0.0, j).unwrap();
        let tp = transition_at_j(eps0(0.0, j), &s, tol(), &Sequential).unwrap();
        assert_eq!(tp.order, TransitionOrder::First);
        assert!((tp.g_c - gc).abs() < 1e-8, "{} vs {gc}", tp.g_c);
        assert!((tp.jump - h_jump).abs() < 1e-6);
        let g_sp = spinodal_g(&s, 1.0).unwrap();
        // χ = 1/(8J) for the ordered chain
        assert!((g_sp - j.sqrt()).abs() < 1e-6);
        assert!(tp.g_c < g_sp - 1e-3);
        assert_eq!(tp.coexisting.len(), 2);
        assert!((tp.coexisting[0].energy - tp.coexisting[1].energy).abs() < 1e-8);
        assert!((tp.coexisting[0].h - tp.coexisting[1].h).abs() > tol().tol_jump);
    }
}

#[test]
fn h_star_jumps_across_first_order_point() {
    let j = 0.5;
    let s = ChainSolver::free_fermion(0.0, j).unwrap();
    let chain = ChainLandscape::covering(&s, 1.0, 1.0, &Sequential).unwrap();
    let gc = FIRST_ORDER_GC[0].1;
    let below = minimize_h(eps0(gc - 1e-4, j), &s, &chain, tol()).unwrap();
    let above = minimize_h(eps0(gc + 1e-4, j), &s, &chain, tol()).unwrap();
    assert_eq!(below.h_star, 0.0);
    assert!(above.h_star > 1.4);
    assert!(above.residual < 1e-6);
    // metastable minima on both sides
    assert!(below.minima.len() == 2 && above.minima.len() == 2);
    let at = minimize_h(eps0(gc, j), &s, &chain, tol()).unwrap();
    assert!(at.coexistent);
}

#[test]
fn spinodal_scales_with_sqrt_omega() {
    let s = ChainSolver::free_fermion(0.0, 0.5).unwrap();
    let a = spinodal_g(&s, 1.0).unwrap();
    let b = spinodal_g(&s, 4.0).unwrap();
    assert!((b - 2.0 * a).abs() < 1e-12);
}

#[test]
fn effective_matches_mean_field_at_zero_coupling() {
    // at J = 0 the product ansatz is exact, so h* = −4gα
    let s = ChainSolver::free_fermion(1.0, 0.0).unwrap();
    let chain = ChainLandscape::covering(&s, 1.0, 1.2, &Sequential).unwrap();
    for g in [0.55, 0.8, 1.1] {
        let eff = minimize_h(ModelParams::unit(g, 0.0), &s, &chain, tol()).unwrap();
        let mf = mean_field::mf_minimize(ModelParams::unit(g, 0.0), tol(), 8).unwrap();
        assert!((eff.h_star + 4.0 * g * mf.ansatz.alpha).abs() < 1e-7);
        assert!((eff.energy - mf.energy).abs() < 1e-12);
    }
}

#[test]
fn multicritical_bracket_error_when_orders_agree() {
    let s = ChainSolver::new(ChainBackend::ChainEd { n_sites: 8 }, 1.0, 0.0).unwrap();
    let err = locate_multicritical(
        ModelParams::unit(0.0, 0.0),
        &s,
        (0.05, 0.2),
        tol(),
        &Sequential,
    )
    .unwrap_err();
    match err {
        Error::OrderBracket { order, .. } => assert_eq!(order, TransitionOrder::Second),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn effective_energy_is_even(j in -1.0..1.0f64, h in 0.0..4.0f64, g in 0.1..1.5f64) {
        let ff = ChainSolver::free_fermion(0.0, j).unwrap();
        let p = eps0(g, j);
        let a = effective_energy(p, &ff, h).unwrap();
        let b = effective_energy(p, &ff, -h).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn effective_energy_is_even_in_ed(eps in 0.0..1.5f64, j in -1.0..1.0f64, h in 0.0..4.0f64) {
        let ed = ChainSolver::new(ChainBackend::ChainEd { n_sites: 8 }, eps, j).unwrap();
        let p = ModelParams { omega: 1.0, eps, g: 0.6, j };
        let a = effective_energy(p, &ed, h).unwrap();
        let b = effective_energy(p, &ed, -h).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn sublattice_identity_free_fermion(j in 0.0..1.5f64, h in 0.0..4.0f64) {
        prop_assert_eq!(ff_ground_energy(j, h).unwrap(), ff_ground_energy(-j, h).unwrap());
    }
}
