//! Real-space wave functions `ψ(x, y) = u_{nx0}(x) Σ_n C_n u_n(y)` and their
//! probability densities on uniform grids.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::eigen::Spectrum;
use crate::linalg::vector_norm;
use crate::model::BoxGeometry;

pub const DEFAULT_GRID_SAMPLES: usize = 201;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavefunctionError {
    #[error("coefficient vector is empty")]
    EmptyCoefficients,
    #[error("coefficient vector has zero or non-finite norm {norm}")]
    BadNorm { norm: f64 },
    #[error("x quantum number must be at least 1")]
    InvalidNx0,
    #[error("grid needs at least 2 samples per axis, got {nx} × {ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("level {level} requested but the spectrum has {available} levels")]
    LevelOutOfRange { level: usize, available: usize },
}

/// A normalized eigenstate in real space.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionField {
    geometry: BoxGeometry,
    nx0: usize,
    coefficients: Vec<Complex64>,
}

impl WavefunctionField {
    /// Normalizes `coefficients` to unit Euclidean norm.
    pub fn new(geometry: BoxGeometry, nx0: usize, coefficients: Vec<Complex64>) -> Result<Self, WavefunctionError> {
        if nx0 == 0 {
            return Err(WavefunctionError::InvalidNx0);
        }
        if coefficients.is_empty() {
            return Err(WavefunctionError::EmptyCoefficients);
        }
        let norm = vector_norm(&coefficients);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(WavefunctionError::BadNorm { norm });
        }
        let coefficients = coefficients.into_iter().map(|c| c / norm).collect();
        Ok(Self {
            geometry,
            nx0,
            coefficients,
        })
    }

    /// Level `level` (in the spectrum's own order).
    pub fn from_spectrum(
        geometry: BoxGeometry,
        nx0: usize,
        spectrum: &Spectrum,
        level: usize,
    ) -> Result<Self, WavefunctionError> {
        let vector = spectrum.vectors.get(level).ok_or(WavefunctionError::LevelOutOfRange {
            level,
            available: spectrum.len(),
        })?;
        Self::new(geometry, nx0, vector.clone())
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    pub fn nx0(&self) -> usize {
        self.nx0
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `√(2/a) sin(nx0 π x / a)`, zero outside `[0, a]` and at its ends.
    pub fn x_factor(&self, x: f64) -> f64 {
        let a = self.geometry.a();
        if !(x > 0.0 && x < a) {
            return 0.0;
        }
        (2.0 / a).sqrt() * (self.nx0 as f64 * PI * x / a).sin()
    }

    /// `Σ_n C_n √(2/b) sin(nπy/b)`, zero outside `(0, b)`.
    pub fn y_factor(&self, y: f64) -> Complex64 {
        let b = self.geometry.b();
        if !(y > 0.0 && y < b) {
            return Complex64::new(0.0, 0.0);
        }
        let scale = (2.0 / b).sqrt();
        let theta = PI * y / b;
        // sin(nθ) by the Chebyshev recurrence.
        let two_cos = 2.0 * theta.cos();
        let (mut s_prev, mut s) = (0.0, theta.sin());
        let mut sum = Complex64::new(0.0, 0.0);
        for c in &self.coefficients {
            sum += c * s;
            let next = two_cos * s - s_prev;
            s_prev = s;
            s = next;
        }
        sum * scale
    }

    pub fn evaluate(&self, x: f64, y: f64) -> Complex64 {
        let fx = self.x_factor(x);
        if fx == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.y_factor(y) * fx
    }

    pub fn density(&self, x: f64, y: f64) -> f64 {
        self.evaluate(x, y).norm_sqr()
    }
}

/// `|ψ|²` (1/Bohr²) on a uniform grid including the box edges. `values` is
/// row-major with one row per `y` sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub nx_samples: usize,
    pub ny_samples: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

fn axis(length: f64, samples: usize) -> Vec<f64> {
    let last = samples - 1;
    (0..samples)
        .map(|k| if k == last { length } else { length * k as f64 / last as f64 })
        .collect()
}

pub fn density_grid(wf: &WavefunctionField, nx_samples: usize, ny_samples: usize) -> Result<DensityGrid, WavefunctionError> {
    if nx_samples < 2 || ny_samples < 2 {
        return Err(WavefunctionError::GridTooSmall {
            nx: nx_samples,
            ny: ny_samples,
        });
    }
    let xs = axis(wf.geometry.a(), nx_samples);
    let ys = axis(wf.geometry.b(), ny_samples);
    let fx: Vec<f64> = xs.iter().map(|&x| wf.x_factor(x)).collect();
    let mut values = Vec::with_capacity(nx_samples * ny_samples);
    for &y in &ys {
        let fy = wf.y_factor(y).norm_sqr();
        values.extend(fx.iter().map(|f| f * f * fy));
    }
    Ok(DensityGrid {
        nx_samples,
        ny_samples,
        xs,
        ys,
        values,
    })
}

impl DensityGrid {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx_samples + ix]
    }

    /// Trapezoid rule over the box. For a finite sine expansion on a uniform
    /// grid this is exact once the grid resolves twice the highest mode.
    pub fn integrate(&self) -> f64 {
        let dx = self.xs[1] - self.xs[0];
        let dy = self.ys[1] - self.ys[0];
        let weight = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut sum = 0.0;
        for iy in 0..self.ny_samples {
            let wy = weight(iy, self.ny_samples);
            for ix in 0..self.nx_samples {
                sum += wy * weight(ix, self.nx_samples) * self.at(ix, iy);
            }
        }
        sum * dx * dy
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `(x, y)` of the largest sample.
    pub fn argmax(&self) -> (f64, f64) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (self.xs[best % self.nx_samples], self.ys[best / self.nx_samples])
    }

    /// Interior samples strictly above all eight neighbours and above
    /// `floor · max`.
    pub fn local_maxima(&self, floor: f64) -> Vec<(usize, usize)> {
        let threshold = floor * self.max_value();
        let mut maxima = Vec::new();
        for iy in 1..self.ny_samples.saturating_sub(1) {
            for ix in 1..self.nx_samples.saturating_sub(1) {
                let v = self.at(ix, iy);
                if v <= threshold {
                    continue;
                }
                let mut is_max = true;
                'nb: for dy in [-1isize, 0, 1] {
                    for dx in [-1isize, 0, 1] {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let n = self.at((ix as isize + dx) as usize, (iy as isize + dy) as usize);
                        if n >= v {
                            is_max = false;
                            break 'nb;
                        }
                    }
                }
                if is_max {
                    maxima.push((ix, iy));
                }
            }
        }
        maxima
    }

    /// Peak density in the lower half `y < b/2` and upper half `y > b/2`.
    pub fn half_peaks(&self) -> (f64, f64) {
        let b = *self.ys.last().expect("grid has samples");
        let mut lower = 0.0f64;
        let mut upper = 0.0f64;
        for (iy, &y) in self.ys.iter().enumerate() {
            let row = &self.values[iy * self.nx_samples..(iy + 1) * self.nx_samples];
            let peak = row.iter().copied().fold(0.0, f64::max);
            if y < 0.5 * b {
                lower = lower.max(peak);
            } else if y > 0.5 * b {
                upper = upper.max(peak);
            }
        }
        (lower, upper)
    }

    /// `1 − min/max` of the two half-box peaks; 0 for a y-mirror-symmetric density.
    pub fn lobe_asymmetry(&self) -> f64 {
        let (lower, upper) = self.half_peaks();
        let hi = lower.max(upper);
        if hi == 0.0 {
            0.0
        } else {
            1.0 - lower.min(upper) / hi
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ground() -> WavefunctionField {
        WavefunctionField::new(BoxGeometry::reference(), 1, vec![Complex64::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn ground_state_center_amplitude() {
        let g = BoxGeometry::reference();
        let wf = ground();
        let v = wf.evaluate(g.a() / 2.0, g.b() / 2.0);
        assert!((v.re - 2.0 / 6.0_f64.powf(0.25)).abs() < 1e-12);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn boundary_and_outside_are_zero() {
        let g = BoxGeometry::reference();
        let wf = WavefunctionField::new(g, 1, vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)]).unwrap();
        for y in [0.0, 0.3, 1.0, g.b()] {
            assert_eq!(wf.evaluate(0.0, y), Complex64::new(0.0, 0.0));
            assert_eq!(wf.evaluate(g.a(), y), Complex64::new(0.0, 0.0));
        }
        assert_eq!(wf.evaluate(0.5, g.b()), Complex64::new(0.0, 0.0));
        assert_eq!(wf.evaluate(-1.0, 0.5), Complex64::new(0.0, 0.0));
        assert_eq!(wf.evaluate(0.5, 9.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn coefficients_are_normalized() {
        let wf = WavefunctionField::new(BoxGeometry::reference(), 1, vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)])
            .unwrap();
        assert!((vector_norm(wf.coefficients()) - 1.0).abs() < 1e-15);
        assert!(WavefunctionField::new(BoxGeometry::reference(), 1, vec![Complex64::new(0.0, 0.0)]).is_err());
        assert!(WavefunctionField::new(BoxGeometry::reference(), 0, vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn grid_shape_and_integral() {
        let grid = density_grid(&ground(), 41, 31).unwrap();
        assert_eq!(grid.values.len(), 41 * 31);
        assert_eq!(*grid.xs.last().unwrap(), BoxGeometry::reference().a());
        assert!((grid.integrate() - 1.0).abs() < 1e-12);
        assert_eq!(grid.local_maxima(0.01), vec![(20, 15)]);
        assert!(density_grid(&ground(), 1, 5).is_err());
    }

    #[test]
    fn second_x_mode_has_two_peaks_and_nodal_line() {
        let wf = WavefunctionField::new(BoxGeometry::reference(), 2, vec![Complex64::new(1.0, 0.0)]).unwrap();
        let grid = density_grid(&wf, 41, 41).unwrap();
        assert_eq!(grid.local_maxima(0.01).len(), 2);
        for iy in 0..41 {
            assert!(grid.at(20, iy) < 1e-28);
        }
    }
}
