//! Independent checks of the matrix method.
//!
//! For real stripe potentials the `y` problem can be solved directly: inside
//! each stripe `ψ'' = −k_i² ψ` with `k_i² = E − V_i − π² nx0² / a²`. The
//! solution vanishing at `y = 0` is propagated up to `b/2`, the one vanishing
//! at `y = b` down to `b/2`, and the energies are the zeros of their
//! Wronskian there. `k_i` is taken as a complex square root, which turns the
//! oscillatory solutions into hyperbolic ones in classically forbidden
//! stripes without special cases. Matching in the middle keeps the
//! determinant well conditioned when a barrier separates two wells.

use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

use crate::assembly::{assemble_by_quadrature, assemble_combined, assemble_striped};
use crate::eigen::{solve_eigenvalues, SolveError};
use crate::model::{BoxGeometry, RydbergUnits, SpectralBasisConfig, StripePotentials, UniformField};
use crate::quadrature::QuadratureError;

/// Energy samples per 100 Ry in the initial root scan.
pub const SCAN_SAMPLES_PER_100_RY: usize = 2000;
/// Sub-samples per interval in the refinement pass around near-touches.
const REFINE_SAMPLES: usize = 64;
pub const DEFAULT_E_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("direct method needs real potentials; stripe {stripe} has Im V = {imag}")]
    NonRealPotential { stripe: usize, imag: f64 },
    #[error("energy window must satisfy e_min < e_max (got {e_min} .. {e_max})")]
    InvalidWindow { e_min: f64, e_max: f64 },
    #[error("tolerance must be positive, got {value}")]
    InvalidTolerance { value: f64 },
    #[error("matrix eigensolver failed: {0}")]
    Solve(#[from] SolveError),
    #[error("direct method found {found} roots below {e_max}, expected at least {expected}")]
    MissingRoots { found: usize, expected: usize, e_max: f64 },
    #[error("matrix spectrum has {available} levels, {requested} requested")]
    TooFewLevels { requested: usize, available: usize },
}

fn real_values(potentials: &StripePotentials) -> Result<[f64; 4], ValidationError> {
    let mut out = [0.0; 4];
    for (i, v) in potentials.values().iter().enumerate() {
        if v.im != 0.0 {
            return Err(ValidationError::NonRealPotential { stripe: i + 1, imag: v.im });
        }
        out[i] = v.re;
    }
    Ok(out)
}

/// `(cos kL, sin(kL)/k)`, with a series for small `|kL|`.
fn cos_sinc(k: Complex64, length: f64) -> (Complex64, Complex64) {
    let kl = k * length;
    let c = kl.cos();
    let s = if kl.norm() < 1e-4 {
        let k2 = k * k;
        (Complex64::new(1.0, 0.0) - k2 * (length * length / 6.0)) * length
    } else {
        kl.sin() / k
    };
    (c, s)
}

/// Matching determinant `E ↦ W(E)`, the Wronskian at `b/2` of the
/// solutions satisfying the left and right wall conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingDeterminant {
    geometry: BoxGeometry,
    potentials: [f64; 4],
    nx0: usize,
}

type State = (Complex64, Complex64);

impl MatchingDeterminant {
    pub fn new(geometry: BoxGeometry, potentials: &StripePotentials, nx0: usize) -> Result<Self, ValidationError> {
        Ok(Self {
            geometry,
            potentials: real_values(potentials)?,
            nx0,
        })
    }

    /// Complex wave numbers `k_i` at energy `e`.
    pub fn wave_numbers(&self, e: f64) -> [Complex64; 4] {
        let offset = RydbergUnits::transverse_energy(&self.geometry, self.nx0);
        self.potentials
            .map(|v| Complex64::new((e - v - offset) / RydbergUnits::KINETIC_PREFACTOR, 0.0).sqrt())
    }

    /// `(ψ, ψ')` at `0, b1, b/2` for `ψ(0) = 0, ψ'(0) = 1`.
    pub fn propagate_left(&self, e: f64) -> [State; 3] {
        let k = self.wave_numbers(e);
        let edges = self.geometry.edges();
        let mut out = [(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)); 3];
        for i in 0..2 {
            let (c, s) = cos_sinc(k[i], edges[i + 1] - edges[i]);
            let (psi, dpsi) = out[i];
            out[i + 1] = (c * psi + s * dpsi, -(k[i] * k[i]) * s * psi + c * dpsi);
        }
        out
    }

    /// `(ψ, ψ')` at `b, b3, b/2` for `ψ(b) = 0, ψ'(b) = −1`.
    pub fn propagate_right(&self, e: f64) -> [State; 3] {
        let k = self.wave_numbers(e);
        let edges = self.geometry.edges();
        let mut out = [(Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)); 3];
        for (step, i) in [3usize, 2].into_iter().enumerate() {
            let (c, s) = cos_sinc(k[i], edges[i + 1] - edges[i]);
            let (psi, dpsi) = out[step];
            out[step + 1] = (c * psi - s * dpsi, (k[i] * k[i]) * s * psi + c * dpsi);
        }
        out
    }

    /// `W = ψ_L ψ_R' − ψ_L' ψ_R` at `b/2`; real for real potentials.
    pub fn evaluate(&self, e: f64) -> f64 {
        let (pl, dl) = self.propagate_left(e)[2];
        let (pr, dr) = self.propagate_right(e)[2];
        (pl * dr - dl * pr).re
    }
}

/// Roots of the matching determinant in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectRoots {
    pub roots: Vec<f64>,
    /// Intervals where `|W|` dips without changing sign even after
    /// refinement; a root pair may hide there.
    pub suspicious: Vec<(f64, f64)>,
}

fn bisect(det: &MatchingDeterminant, mut lo: f64, mut hi: f64, mut f_lo: f64, e_tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= e_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = det.evaluate(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn sample(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|k| if k == count { hi } else { lo + (hi - lo) * k as f64 / count as f64 })
        .collect()
}

/// Sign-change roots of `values` over `energies`, bisected to `e_tol`.
fn roots_in(det: &MatchingDeterminant, energies: &[f64], values: &[f64], e_tol: f64, roots: &mut Vec<f64>) {
    for i in 0..energies.len() - 1 {
        let (f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            roots.push(energies[i]);
        } else if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(det, energies[i], energies[i + 1], f0, e_tol));
        }
    }
    if values[values.len() - 1] == 0.0 {
        roots.push(energies[energies.len() - 1]);
    }
}

/// Real eigenvalues of the direct problem in `[e_min, e_max]`, each located to `e_tol`.
pub fn direct_eigenvalues(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    nx0: usize,
    e_min: f64,
    e_max: f64,
    e_tol: f64,
) -> Result<DirectRoots, ValidationError> {
    if !(e_min.is_finite() && e_max.is_finite() && e_min < e_max) {
        return Err(ValidationError::InvalidWindow { e_min, e_max });
    }
    if !(e_tol > 0.0) {
        return Err(ValidationError::InvalidTolerance { value: e_tol });
    }
    let det = MatchingDeterminant::new(*geometry, potentials, nx0)?;
    let count = ((e_max - e_min) / 100.0 * SCAN_SAMPLES_PER_100_RY as f64).ceil().max(16.0) as usize;
    let energies = sample(e_min, e_max, count);
    let values: Vec<f64> = energies.iter().map(|&e| det.evaluate(e)).collect();
    let mut roots = Vec::new();
    roots_in(&det, &energies, &values, e_tol, &mut roots);

    // Refinement pass: interior local minima of |W| with no sign change
    // on either side.
    let mut suspicious = Vec::new();
    for i in 1..energies.len() - 1 {
        let (l, m, r) = (values[i - 1], values[i], values[i + 1]);
        let same_sign = (l < 0.0) == (m < 0.0) && (m < 0.0) == (r < 0.0) && l != 0.0 && m != 0.0 && r != 0.0;
        if !(same_sign && m.abs() < l.abs() && m.abs() < r.abs()) {
            continue;
        }
        let fine = sample(energies[i - 1], energies[i + 1], 2 * REFINE_SAMPLES);
        let fine_values: Vec<f64> = fine.iter().map(|&e| det.evaluate(e)).collect();
        let before = roots.len();
        roots_in(&det, &fine, &fine_values, e_tol, &mut roots);
        if roots.len() == before {
            suspicious.push((energies[i - 1], energies[i + 1]));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= e_tol);
    Ok(DirectRoots { roots, suspicious })
}

/// Direct-method eigenfunction in regional form, each stripe's trigonometric
/// pair anchored at a stripe edge so evanescent stripes do not cancel:
/// `A sin(k1 y)`, `B sin(k2 (y − b1)) + C cos(k2 (y − b1))`,
/// `F sin(k3 (y − b3)) + G cos(k3 (y − b3))`, `H sin(k4 (y − b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectEigenfunction {
    pub geometry: BoxGeometry,
    pub energy: f64,
    pub k: [Complex64; 4],
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub f: Complex64,
    pub g: Complex64,
    pub h: Complex64,
}

impl DirectEigenfunction {
    /// Uses the left solution in stripes 1–2 and the right solution in
    /// stripes 3–4, scaled to agree at `b/2`.
    pub fn new(det: &MatchingDeterminant, energy: f64) -> Self {
        let k = det.wave_numbers(energy);
        let left = det.propagate_left(energy);
        let right = det.propagate_right(energy);
        let k_max = k.iter().map(|k| k.norm()).fold(1.0, f64::max);
        let (pl, dl) = left[2];
        let (pr, dr) = right[2];
        let scale = if pl.norm() >= dl.norm() / k_max { pl / pr } else { dl / dr };
        Self {
            geometry: det.geometry,
            energy,
            k,
            a: Complex64::new(1.0, 0.0) / k[0],
            b: left[1].1 / k[1],
            c: left[1].0,
            f: right[1].1 * scale / k[2],
            g: right[1].0 * scale,
            h: -scale / k[3],
        }
    }

    /// `(ψ, ψ')` from the formula of stripe `region` (0-based) at `y`.
    pub fn evaluate_in(&self, region: usize, y: f64) -> (Complex64, Complex64) {
        let k = self.k[region];
        let sin_cos = |p: Complex64, q: Complex64, t: Complex64| {
            let (s, c) = (t.sin(), t.cos());
            (p * s + q * c, k * (p * c - q * s))
        };
        match region {
            0 => sin_cos(self.a, Complex64::new(0.0, 0.0), k * y),
            1 => sin_cos(self.b, self.c, k * (y - self.geometry.b1())),
            2 => sin_cos(self.f, self.g, k * (y - self.geometry.b3())),
            _ => sin_cos(self.h, Complex64::new(0.0, 0.0), k * (y - self.geometry.b())),
        }
    }

    pub fn evaluate(&self, y: f64) -> Complex64 {
        match self.geometry.stripe_of(y) {
            Some(region) => self.evaluate_in(region, y).0,
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Largest jump of `ψ` or `ψ'/k_max` across the three interfaces,
    /// relative to the largest such value at the interfaces.
    pub fn interface_mismatch(&self) -> f64 {
        let k_max = self.k.iter().map(|k| k.norm()).fold(1.0, f64::max);
        let mut scale = f64::MIN_POSITIVE;
        let mut jump = 0.0f64;
        for (i, &y) in self.geometry.interfaces().iter().enumerate() {
            let (pl, dl) = self.evaluate_in(i, y);
            let (pr, dr) = self.evaluate_in(i + 1, y);
            scale = scale.max(pl.norm()).max(pr.norm()).max(dl.norm() / k_max).max(dr.norm() / k_max);
            jump = jump.max((pl - pr).norm()).max((dl - dr).norm() / k_max);
        }
        jump / scale
    }
}

/// Matrix and direct energies for one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelComparison {
    pub index: usize,
    pub matrix: f64,
    pub direct: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidationReport {
    pub levels: Vec<LevelComparison>,
    pub max_delta: f64,
    pub e_tol: f64,
    pub passed: bool,
    pub suspicious: Vec<(f64, f64)>,
}

/// Compares the lowest `levels` matrix eigenvalues with the direct roots.
pub fn cross_validate(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    basis: &SpectralBasisConfig,
    e_tol: f64,
    levels: usize,
) -> Result<CrossValidationReport, ValidationError> {
    if !(e_tol > 0.0) {
        return Err(ValidationError::InvalidTolerance { value: e_tol });
    }
    real_values(potentials)?;
    let matrix = solve_eigenvalues(&assemble_striped(geometry, potentials, basis))?;
    if matrix.len() < levels {
        return Err(ValidationError::TooFewLevels {
            requested: levels,
            available: matrix.len(),
        });
    }
    // Truncated Ritz values bound the exact levels from above, and every
    // level lies above min V plus the two lowest kinetic terms.
    let v_min = potentials.values().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    let e_min = v_min + RydbergUnits::box_energy(geometry, basis.nx0(), 1) - 1.0;
    let e_max = matrix.get(levels.saturating_sub(1)).map_or(e_min + 1.0, |e| e.re) + 1.0;
    let direct = direct_eigenvalues(geometry, potentials, basis.nx0(), e_min, e_max, 1e-10)?;
    if direct.roots.len() < levels {
        return Err(ValidationError::MissingRoots {
            found: direct.roots.len(),
            expected: levels,
            e_max,
        });
    }
    let comparisons: Vec<LevelComparison> = (0..levels)
        .map(|i| LevelComparison {
            index: i,
            matrix: matrix[i].re,
            direct: direct.roots[i],
            delta: (matrix[i].re - direct.roots[i]).abs(),
        })
        .collect();
    let max_delta = comparisons.iter().map(|c| c.delta).fold(0.0, f64::max);
    Ok(CrossValidationReport {
        levels: comparisons,
        max_delta,
        e_tol,
        passed: max_delta <= e_tol,
        suspicious: direct.suspicious,
    })
}

/// Largest entrywise difference between the closed-form matrix and one
/// assembled by adaptive quadrature.
pub fn quadrature_discrepancy(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    field: &UniformField,
    basis: &SpectralBasisConfig,
    quad_tol: f64,
) -> Result<f64, QuadratureError> {
    let closed = assemble_combined(geometry, potentials, field, basis);
    let numeric = assemble_by_quadrature(geometry, potentials, field, basis, quad_tol)?;
    Ok(closed.entries().max_abs_diff(numeric.entries()))
}
