//! Adaptive Gauss–Kronrod (7/15) integration of complex-valued integrands.
//!
//! Panels are bisected until the Kronrod–Gauss difference on every panel is
//! below its share of the absolute tolerance. Callers split the domain at
//! known discontinuities before calling, so each panel sees a smooth
//! integrand.

use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

/// Default panel budget for a single integral.
pub const DEFAULT_MAX_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("adaptive quadrature on [{lower}, {upper}] exhausted {panels} panels with error estimate {estimate:e} > {tol:e}")]
pub struct QuadratureError {
    pub lower: f64,
    pub upper: f64,
    pub panels: usize,
    pub estimate: f64,
    pub tol: f64,
}

// Kronrod abscissae on [-1, 1] (non-negative half) and weights; every odd
// index is also a Gauss–Legendre 7-point node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7/K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
fn gk15<F: Fn(f64) -> Complex64>(f: &F, lower: f64, upper: f64) -> (Complex64, f64) {
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Integrates `f` over `[lower, upper]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    lower: f64,
    upper: f64,
    tol: f64,
    max_panels: usize,
) -> Result<Complex64, QuadratureError> {
    let total = upper - lower;
    if total == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut panels = 0usize;
    let mut worst = 0.0f64;
    let mut stack: Vec<(f64, f64)> = Vec::with_capacity(64);
    stack.push((lower, upper));
    while let Some((lo, hi)) = stack.pop() {
        panels += 1;
        let (value, err) = gk15(&f, lo, hi);
        let share = tol * ((hi - lo) / total).abs();
        let mid = 0.5 * (lo + hi);
        let splittable = mid > lo.min(hi) && mid < lo.max(hi);
        if err <= share || !splittable {
            sum += value;
            worst = worst.max(err - share);
            continue;
        }
        if panels + stack.len() >= max_panels {
            return Err(QuadratureError {
                lower,
                upper,
                panels,
                estimate: err,
                tol,
            });
        }
        // Right half first so the left half is summed first.
        stack.push((mid, hi));
        stack.push((lo, mid));
    }
    if worst > tol {
        return Err(QuadratureError {
            lower,
            upper,
            panels,
            estimate: worst,
            tol,
        });
    }
    Ok(sum)
}

/// Integrates over consecutive panels `[breaks[i], breaks[i+1]]`, splitting the
/// tolerance in proportion to panel length.
pub fn integrate_piecewise<F: Fn(f64) -> Complex64>(
    f: F,
    breaks: &[f64],
    tol: f64,
    max_panels: usize,
) -> Result<Complex64, QuadratureError> {
    let total = breaks.last().copied().unwrap_or(0.0) - breaks.first().copied().unwrap_or(0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        let share = if total != 0.0 {
            tol * ((w[1] - w[0]) / total).abs()
        } else {
            tol
        };
        sum += integrate(&f, w[0], w[1], share, max_panels)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| Complex64::new(x.powi(5) - 2.0 * x, x * x);
        let v = integrate(f, 0.0, 2.0, 1e-13, 100).unwrap();
        assert!((v.re - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
        assert!((v.im - 8.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand_converges() {
        // ∫_0^π sin(40x)^2 dx = π/2
        let f = |x: f64| Complex64::new((40.0 * x).sin().powi(2), 0.0);
        let v = integrate(f, 0.0, PI, 1e-12, DEFAULT_MAX_PANELS).unwrap();
        assert!((v.re - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn piecewise_constant_across_breaks() {
        let f = |x: f64| Complex64::new(if x < 0.3 { 1.0 } else { 5.0 }, 0.0);
        let v = integrate_piecewise(f, &[0.0, 0.3, 1.0], 1e-12, 100).unwrap();
        assert!((v.re - (0.3 + 3.5)).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let f = |x: f64| Complex64::new(if x < 0.123_456_7 { 0.0 } else { 1.0 }, 0.0);
        let err = integrate(f, 0.0, 1.0, 1e-14, 8).unwrap_err();
        assert_eq!(err.tol, 1e-14);
    }
}
