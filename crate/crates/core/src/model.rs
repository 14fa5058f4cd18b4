//! Domain types: box geometry, stripe potentials, the uniform field, the
//! truncated basis, and the structural predicates (hermiticity, PT symmetry).

use core::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance for the structural predicates. Inputs are exact
/// user-specified values, not measurements.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must be a positive finite length, got {value}")]
    NonPositiveLength { name: &'static str, value: f64 },
    #[error("stripe boundaries must satisfy 0 < b1 < b/2 < b3 < b (b1 = {b1}, b/2 = {half}, b3 = {b3})")]
    StripeOrder { b1: f64, half: f64, b3: f64 },
    #[error("stripes must be symmetric about y = b/2: b/2 - b1 = {lower}, b3 - b/2 = {upper}")]
    AsymmetricStripes { lower: f64, upper: f64 },
    #[error("{what} must be finite")]
    NonFinite { what: &'static str },
    #[error("basis needs nx0 >= 1 and nmax >= 1 (got nx0 = {nx0}, nmax = {nmax})")]
    InvalidBasis { nx0: usize, nmax: usize },
}

/// Rigid box `[0, a] × [0, b]` with stripe boundaries `b1 < b/2 < b3`.
///
/// The middle boundary is always `b/2` and is not stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxGeometry {
    a: f64,
    b: f64,
    b1: f64,
    b3: f64,
}

impl BoxGeometry {
    pub fn new(a: f64, b: f64, b1: f64, b3: f64) -> Result<Self, ModelError> {
        for (name, value) in [("a", a), ("b", b)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::NonPositiveLength { name, value });
            }
        }
        if !(b1.is_finite() && b3.is_finite()) {
            return Err(ModelError::NonFinite { what: "stripe boundary" });
        }
        let half = 0.5 * b;
        if !(0.0 < b1 && b1 < half && half < b3 && b3 < b) {
            return Err(ModelError::StripeOrder { b1, half, b3 });
        }
        let lower = half - b1;
        let upper = b3 - half;
        if (upper - lower).abs() > 1e-12 * b {
            return Err(ModelError::AsymmetricStripes { lower, upper });
        }
        Ok(Self { a, b, b1, b3 })
    }

    /// Stripe boundaries given as fractions of `b`.
    pub fn with_fractions(a: f64, b: f64, f1: f64, f3: f64) -> Result<Self, ModelError> {
        Self::new(a, b, f1 * b, f3 * b)
    }

    /// The reference box: `a = √3`, `b = √2`, `b1 = 0.4 b`, `b3 = 0.6 b`.
    pub fn reference() -> Self {
        let b = 2.0_f64.sqrt();
        Self::with_fractions(3.0_f64.sqrt(), b, 0.4, 0.6).expect("reference geometry is valid")
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b2(&self) -> f64 {
        0.5 * self.b
    }

    pub fn b3(&self) -> f64 {
        self.b3
    }

    /// Interior boundaries `[b1, b/2, b3]`.
    pub fn interfaces(&self) -> [f64; 3] {
        [self.b1, self.b2(), self.b3]
    }

    /// All stripe edges `[0, b1, b/2, b3, b]`.
    pub fn edges(&self) -> [f64; 5] {
        [0.0, self.b1, self.b2(), self.b3, self.b]
    }

    /// Index (0..4) of the stripe containing `y`; `None` outside `[0, b]`.
    /// Points on an interface belong to the upper stripe.
    pub fn stripe_of(&self, y: f64) -> Option<usize> {
        if !(0.0..=self.b).contains(&y) {
            return None;
        }
        Some(self.interfaces().iter().filter(|&&edge| y >= edge).count())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.a).contains(&x) && (0.0..=self.b).contains(&y)
    }
}

impl Default for BoxGeometry {
    fn default() -> Self {
        Self::reference()
    }
}

/// Potential values `V1..V4` (Rydberg) in the four stripes, bottom to top.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripePotentials([Complex64; 4]);

impl StripePotentials {
    pub fn new(values: [Complex64; 4]) -> Result<Self, ModelError> {
        if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            Ok(Self(values))
        } else {
            Err(ModelError::NonFinite { what: "stripe potential" })
        }
    }

    pub fn real(values: [f64; 4]) -> Result<Self, ModelError> {
        Self::new(values.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn zero() -> Self {
        Self([Complex64::new(0.0, 0.0); 4])
    }

    pub fn uniform(value: Complex64) -> Result<Self, ModelError> {
        Self::new([value; 4])
    }

    pub fn values(&self) -> &[Complex64; 4] {
        &self.0
    }

    /// Potential in stripe `index` (0-based; stripe I is index 0).
    pub fn get(&self, index: usize) -> Complex64 {
        self.0[index]
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|v| v.conj()))
    }

    /// Every stripe shifted by the same constant.
    pub fn shifted(&self, shift: Complex64) -> Result<Self, ModelError> {
        Self::new(self.0.map(|v| v + shift))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// `V(y)` for this stripe layout; zero outside the box.
    pub fn at(&self, geometry: &BoxGeometry, y: f64) -> Complex64 {
        geometry
            .stripe_of(y)
            .map_or(Complex64::new(0.0, 0.0), |i| self.0[i])
    }
}

impl Default for StripePotentials {
    fn default() -> Self {
        Self::zero()
    }
}

/// Uniform field giving `V(y) = −α (y − b/2)`; `α` in Rydberg per Bohr radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformField {
    alpha: Complex64,
}

impl UniformField {
    pub fn new(alpha: Complex64) -> Result<Self, ModelError> {
        if alpha.re.is_finite() && alpha.im.is_finite() {
            Ok(Self { alpha })
        } else {
            Err(ModelError::NonFinite { what: "field strength" })
        }
    }

    pub fn zero() -> Self {
        Self {
            alpha: Complex64::new(0.0, 0.0),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.re == 0.0 && self.alpha.im == 0.0
    }

    /// A field is PT symmetric about the box median only when `α` is
    /// purely imaginary.
    pub fn is_pt_symmetric(&self, tol: f64) -> bool {
        self.alpha.re.abs() <= tol
    }

    pub fn at(&self, geometry: &BoxGeometry, y: f64) -> Complex64 {
        if (0.0..=geometry.b()).contains(&y) {
            -self.alpha * (y - geometry.b2())
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

impl Default for UniformField {
    fn default() -> Self {
        Self::zero()
    }
}

/// Clamped `x` quantum number and the size of the `y` sine basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralBasisConfig {
    nx0: usize,
    nmax: usize,
}

impl SpectralBasisConfig {
    pub const DEFAULT_NMAX: usize = 50;

    pub fn new(nx0: usize, nmax: usize) -> Result<Self, ModelError> {
        if nx0 == 0 || nmax == 0 {
            return Err(ModelError::InvalidBasis { nx0, nmax });
        }
        Ok(Self { nx0, nmax })
    }

    pub fn nx0(&self) -> usize {
        self.nx0
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn with_nmax(self, nmax: usize) -> Result<Self, ModelError> {
        Self::new(self.nx0, nmax)
    }
}

impl Default for SpectralBasisConfig {
    fn default() -> Self {
        Self {
            nx0: 1,
            nmax: Self::DEFAULT_NMAX,
        }
    }
}

/// Rydberg / Bohr-radius units in which `ħ²/2μ = 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RydbergUnits;

impl RydbergUnits {
    /// `ħ²/2μ` in Ry·a₀².
    pub const KINETIC_PREFACTOR: f64 = 1.0;

    /// Empty-box level `π²(nx²/a² + ny²/b²)`.
    pub fn box_energy(geometry: &BoxGeometry, nx: usize, ny: usize) -> f64 {
        let (nx, ny) = (nx as f64, ny as f64);
        Self::KINETIC_PREFACTOR
            * PI
            * PI
            * (nx * nx / (geometry.a() * geometry.a()) + ny * ny / (geometry.b() * geometry.b()))
    }

    /// Kinetic energy carried by the clamped `x` motion, `π² nx0² / a²`.
    pub fn transverse_energy(geometry: &BoxGeometry, nx0: usize) -> f64 {
        let nx = nx0 as f64;
        Self::KINETIC_PREFACTOR * PI * PI * nx * nx / (geometry.a() * geometry.a())
    }
}

/// PT symmetry about `y = b/2` for mirrored stripes: `V4 = V1*` and `V3 = V2*`.
pub fn is_pt_symmetric(potentials: &StripePotentials, tol: f64) -> bool {
    let v = potentials.values();
    (v[3] - v[0].conj()).norm() <= tol && (v[2] - v[1].conj()).norm() <= tol
}

/// True when every stripe value and the field strength are real.
pub fn is_hermitian(potentials: &StripePotentials, field: &UniformField, tol: f64) -> bool {
    potentials.values().iter().all(|v| v.im.abs() <= tol) && field.alpha().im.abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reference_geometry_derives_median() {
        let g = BoxGeometry::reference();
        assert_eq!(g.b2(), 0.5 * 2.0_f64.sqrt());
        assert!((g.b1() - 0.4 * g.b()).abs() < 1e-15);
        assert_eq!(g.stripe_of(0.0), Some(0));
        assert_eq!(g.stripe_of(g.b2()), Some(2));
        assert_eq!(g.stripe_of(g.b()), Some(3));
        assert_eq!(g.stripe_of(-1e-9), None);
    }

    #[test]
    fn geometry_rejects_misordered_or_asymmetric_stripes() {
        let b = 2.0_f64.sqrt();
        let a = 3.0_f64.sqrt();
        assert!(matches!(
            BoxGeometry::new(a, b, 0.5 * b, 0.6 * b),
            Err(ModelError::StripeOrder { .. })
        ));
        assert!(matches!(
            BoxGeometry::new(a, b, 0.6 * b, 0.7 * b),
            Err(ModelError::StripeOrder { .. })
        ));
        assert!(matches!(
            BoxGeometry::new(a, b, 0.4 * b, 0.5 * b),
            Err(ModelError::StripeOrder { .. })
        ));
        assert!(matches!(
            BoxGeometry::new(a, b, 0.3 * b, 0.6 * b),
            Err(ModelError::AsymmetricStripes { .. })
        ));
        assert!(matches!(
            BoxGeometry::new(0.0, b, 0.4 * b, 0.6 * b),
            Err(ModelError::NonPositiveLength { name: "a", .. })
        ));
        assert!(BoxGeometry::new(f64::NAN, b, 0.4 * b, 0.6 * b).is_err());
    }

    #[test]
    fn potentials_reject_non_finite_values() {
        assert!(StripePotentials::new([c(0.0, 0.0), c(f64::INFINITY, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(UniformField::new(c(0.0, f64::NAN)).is_err());
        assert!(SpectralBasisConfig::new(0, 10).is_err());
        assert!(SpectralBasisConfig::new(1, 0).is_err());
    }

    #[test]
    fn pt_predicate_examples() {
        let inner = StripePotentials::new([c(0.0, 0.0), c(0.0, 54.0), c(0.0, -54.0), c(0.0, 0.0)]).unwrap();
        assert!(is_pt_symmetric(&inner, DEFAULT_TOL));
        let asym = StripePotentials::real([1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(!is_pt_symmetric(&asym, DEFAULT_TOL));
        let all = StripePotentials::new([c(0.0, 50.0), c(0.0, 5.0), c(0.0, -5.0), c(0.0, -50.0)]).unwrap();
        assert!(is_pt_symmetric(&all, DEFAULT_TOL));
    }

    #[test]
    fn hermitian_predicate_examples() {
        let set1 = StripePotentials::real([100.0, -100.0, 100.0, -100.0]).unwrap();
        assert!(is_hermitian(&set1, &UniformField::zero(), DEFAULT_TOL));
        let pt = StripePotentials::new([c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        assert!(!is_hermitian(&pt, &UniformField::zero(), DEFAULT_TOL));
        let field = UniformField::new(c(0.0, 20.0)).unwrap();
        assert!(!is_hermitian(&StripePotentials::zero(), &field, DEFAULT_TOL));
        assert!(field.is_pt_symmetric(DEFAULT_TOL));
        assert!(!UniformField::new(c(1.0, 0.0)).unwrap().is_pt_symmetric(DEFAULT_TOL));
    }

    #[test]
    fn baseline_ground_energy() {
        let g = BoxGeometry::reference();
        let e = RydbergUnits::box_energy(&g, 1, 1);
        assert!((e - PI * PI * (1.0 / 3.0 + 0.5)).abs() < 1e-12);
        assert!((e - 8.2247).abs() < 1e-4);
    }
}
