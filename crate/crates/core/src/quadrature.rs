//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use alloc::vec::Vec;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let dx = h * XGK[k];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_panels: usize,
    /// Uniform panels to start from.
    pub initial_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            max_panels: 4000,
            initial_panels: 4,
        }
    }
}

/// Integral of `f` over `[a, b]` with the panel of largest error estimate
/// bisected until the summed estimate falls below `cfg.abs_tol`.
///
/// Returns the value and the achieved error estimate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let n0 = cfg.initial_panels.max(1);
    let w = (b - a) / n0 as f64;
    let mut panels: Vec<Panel> = (0..n0)
        .map(|i| {
            let lo = a + w * i as f64;
            let hi = if i + 1 == n0 { b } else { lo + w };
            gk15(&f, lo, hi)
        })
        .collect();

    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        if total_err <= cfg.abs_tol {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if panels.len() >= cfg.max_panels || !(mid > p.a && mid < p.b) {
            return Err(Error::Quadrature {
                achieved: total_err,
                target: cfg.abs_tol,
            });
        }
        panels[worst] = gk15(&f, p.a, mid);
        panels.push(gk15(&f, mid, p.b));
    }
    // sum in position order so the result does not depend on refinement history
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok((value, error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_high_degree_polynomials() {
        // Kronrod 15 is exact through degree 22 on [-1, 1]
        for deg in [0u32, 5, 12, 22] {
            let p = gk15(&|x: f64| libm::pow(x, deg as f64), -1.0, 1.0);
            let exact = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert!((p.value - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn adaptive_handles_square_root_cusp() {
        // ∫_0^π sqrt(1 − cos k) dk = 2√2
        let (v, err) = integrate(
            |k| libm::sqrt(1.0 - libm::cos(k)),
            0.0,
            PI,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((v - 2.0 * core::f64::consts::SQRT_2).abs() < 1e-12, "{v}");
        assert!(err <= 1e-13);
        let (v, _) = integrate(libm::sqrt, 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-30,
            max_panels: 8,
            initial_panels: 1,
        };
        let r = integrate(libm::sqrt, 0.0, 1.0, &cfg);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
