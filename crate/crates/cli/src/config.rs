//! TOML study configuration.
//!
//! Complex numbers are written as `[re, im]`. Every table rejects unknown
//! keys. Example:
//!
//! ```toml
//! [geometry]            # optional; defaults to a = √3, b = √2, b1 = 0.4 b, b3 = 0.6 b
//! a = 1.7320508075688772
//! b = 1.4142135623730951
//!
//! [potentials]
//! values = [[0, 0], [0, 0], [0, 0], [0, 0]]   # V1..V4 at λ = 0
//! slope  = [[0, 0], [0, 1], [0, -1], [0, 0]]  # dV/dλ (optional)
//!
//! [field]               # optional
//! alpha = [0, 0]
//! slope = [0, 0]
//!
//! [basis]
//! nx0 = 1
//! nmax = 50
//!
//! [analysis]
//! mode = "sweep"
//! lambda_start = 0.0
//! lambda_end = 100.0
//! steps = 201
//! ```

use serde::{Deserialize, Serialize};
use stripedbox_core::pt::{DEFAULT_REAL_TOL, DEFAULT_REFINE_DEPTH};
use stripedbox_core::wavefunction::DEFAULT_GRID_SAMPLES;
use stripedbox_core::{
    BoxGeometry, Complex64, LevelOrdering, LinearTemplate, SpectralBasisConfig, StripePotentials, SweepSpec,
    Tracking, UniformField,
};

use crate::error::CliError;

pub type ComplexPair = [f64; 2];

fn complex(p: ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    pub potentials: PotentialsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    #[serde(default)]
    pub basis: BasisConfig,
    pub analysis: Analysis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b3: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialsConfig {
    pub values: [ComplexPair; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<[ComplexPair; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default)]
    pub alpha: ComplexPair,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<ComplexPair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    #[serde(default = "default_nx0")]
    pub nx0: usize,
    #[serde(default = "default_nmax")]
    pub nmax: usize,
}

fn default_nx0() -> usize {
    1
}

fn default_nmax() -> usize {
    SpectralBasisConfig::DEFAULT_NMAX
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self {
            nx0: default_nx0(),
            nmax: default_nmax(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spectrum,
    Sweep,
    Density,
    Validate,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Spectrum => "spectrum",
            Mode::Sweep => "sweep",
            Mode::Density => "density",
            Mode::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Analysis {
    Spectrum(SpectrumParams),
    Sweep(SweepParams),
    Density(DensityParams),
    Validate(ValidateParams),
}

impl Analysis {
    pub fn mode(&self) -> Mode {
        match self {
            Analysis::Spectrum(_) => Mode::Spectrum,
            Analysis::Sweep(_) => Mode::Sweep,
            Analysis::Density(_) => Mode::Density,
            Analysis::Validate(_) => Mode::Validate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumParams {
    /// Value of λ at which the template is evaluated.
    #[serde(default)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrackingKind {
    Branches,
    Levels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderingKind {
    Real,
    Magnitude,
}

impl From<OrderingKind> for LevelOrdering {
    fn from(o: OrderingKind) -> Self {
        match o {
            OrderingKind::Real => LevelOrdering::RealPart,
            OrderingKind::Magnitude => LevelOrdering::Magnitude,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossoverConfig {
    #[serde(default = "default_tracking")]
    pub tracking: TrackingKind,
    #[serde(default = "default_ordering")]
    pub ordering: OrderingKind,
    #[serde(default = "default_track_count")]
    pub count: usize,
}

fn default_tracking() -> TrackingKind {
    TrackingKind::Levels
}

fn default_ordering() -> OrderingKind {
    OrderingKind::Magnitude
}

fn default_track_count() -> usize {
    3
}

impl Default for CrossoverConfig {
    fn default() -> Self {
        Self {
            tracking: default_tracking(),
            ordering: default_ordering(),
            count: default_track_count(),
        }
    }
}

impl CrossoverConfig {
    pub fn tracking(&self) -> Tracking {
        match self.tracking {
            TrackingKind::Branches => Tracking::Branches { count: self.count },
            TrackingKind::Levels => Tracking::Levels {
                ordering: self.ordering.into(),
                count: self.count,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub lambda_start: f64,
    pub lambda_end: f64,
    pub steps: usize,
    #[serde(default = "default_real_tol")]
    pub real_tol: f64,
    #[serde(default = "default_refine_depth")]
    pub refine_depth: usize,
    /// Bisection width for refining each detected transition.
    #[serde(default = "default_lambda_tol")]
    pub lambda_tol: f64,
    /// Number of lowest branches drawn in the plots.
    #[serde(default = "default_plot_branches")]
    pub plot_branches: usize,
    #[serde(default)]
    pub crossovers: CrossoverConfig,
}

fn default_real_tol() -> f64 {
    DEFAULT_REAL_TOL
}

fn default_refine_depth() -> usize {
    DEFAULT_REFINE_DEPTH
}

fn default_lambda_tol() -> f64 {
    stripedbox_core::pt::DEFAULT_LAMBDA_TOL
}

fn default_plot_branches() -> usize {
    4
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityParams {
    #[serde(default)]
    pub lambda: f64,
    /// Level index in ascending real-part order.
    #[serde(default)]
    pub level: usize,
    #[serde(default = "default_samples")]
    pub nx: usize,
    #[serde(default = "default_samples")]
    pub ny: usize,
}

fn default_samples() -> usize {
    DEFAULT_GRID_SAMPLES
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateParams {
    #[serde(default)]
    pub lambda: f64,
    /// Allowed |E_matrix − E_direct| per level.
    #[serde(default = "default_e_tol")]
    pub e_tol: f64,
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// Basis size for the closed-form vs quadrature element comparison.
    #[serde(default = "default_quad_nmax")]
    pub quad_nmax: usize,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "default_element_tol")]
    pub element_tol: f64,
    #[serde(default = "default_closure_tol")]
    pub closure_tol: f64,
}

fn default_e_tol() -> f64 {
    stripedbox_core::validation::DEFAULT_E_TOL
}

fn default_levels() -> usize {
    5
}

fn default_quad_nmax() -> usize {
    16
}

fn default_quad_tol() -> f64 {
    1e-11
}

fn default_element_tol() -> f64 {
    1e-8
}

fn default_closure_tol() -> f64 {
    1e-8
}

/// A parsed configuration with every physical object constructed and checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub config: StudyConfig,
    pub geometry: BoxGeometry,
    pub template: LinearTemplate,
    pub basis: SpectralBasisConfig,
}

impl Study {
    pub fn mode(&self) -> Mode {
        self.config.analysis.mode()
    }

    pub fn at(&self, lambda: f64) -> Result<(StripePotentials, UniformField), CliError> {
        Ok(self.template.at(lambda)?)
    }

    pub fn sweep_spec(&self, params: &SweepParams) -> Result<SweepSpec, CliError> {
        let spec = SweepSpec::new(
            self.template,
            self.geometry,
            self.basis,
            params.lambda_start,
            params.lambda_end,
            params.steps,
        )
        .map_err(|e| CliError::Config(e.to_string()))?
        .with_real_tol(params.real_tol)
        .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(spec.with_refine_depth(params.refine_depth))
    }
}

impl StudyConfig {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn with_nmax(mut self, nmax: usize) -> Self {
        self.basis.nmax = nmax;
        self
    }

    /// Builds and checks the model objects; nothing is solved.
    pub fn study(&self) -> Result<Study, CliError> {
        let reference = BoxGeometry::reference();
        let g = self.geometry.unwrap_or(GeometryConfig {
            a: None,
            b: None,
            b1: None,
            b3: None,
        });
        let a = g.a.unwrap_or(reference.a());
        let b = g.b.unwrap_or(reference.b());
        let geometry = BoxGeometry::new(a, b, g.b1.unwrap_or(0.4 * b), g.b3.unwrap_or(0.6 * b))?;
        let basis = SpectralBasisConfig::new(self.basis.nx0, self.basis.nmax)?;
        let base = StripePotentials::new(self.potentials.values.map(complex))?;
        let slope = self.potentials.slope.unwrap_or([[0.0; 2]; 4]).map(complex);
        // Validates the slope values as finite numbers.
        StripePotentials::new(slope)?;
        let field = self.field.unwrap_or(FieldConfig { alpha: [0.0; 2], slope: None });
        let base_field = UniformField::new(complex(field.alpha))?;
        let field_slope = complex(field.slope.unwrap_or([0.0; 2]));
        UniformField::new(field_slope)?;
        let template = LinearTemplate::new(base, base_field, slope, field_slope);
        self.check_analysis()?;
        Ok(Study {
            config: self.clone(),
            geometry,
            template,
            basis,
        })
    }

    fn check_analysis(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        match &self.analysis {
            Analysis::Spectrum(p) if !p.lambda.is_finite() => fail("analysis.lambda must be finite".into()),
            Analysis::Sweep(p) => {
                if !(p.lambda_start.is_finite() && p.lambda_end.is_finite() && p.lambda_start < p.lambda_end) {
                    return fail(format!(
                        "analysis needs lambda_start < lambda_end (got {} .. {})",
                        p.lambda_start, p.lambda_end
                    ));
                }
                if p.steps < 2 {
                    return fail(format!("analysis.steps must be at least 2, got {}", p.steps));
                }
                if !(p.real_tol > 0.0 && p.lambda_tol > 0.0) {
                    return fail("analysis.real_tol and analysis.lambda_tol must be positive".into());
                }
                Ok(())
            }
            Analysis::Density(p) => {
                if !p.lambda.is_finite() {
                    return fail("analysis.lambda must be finite".into());
                }
                if p.nx < 2 || p.ny < 2 {
                    return fail(format!("density grid needs at least 2 × 2 samples, got {} × {}", p.nx, p.ny));
                }
                if p.level >= self.basis.nmax {
                    return fail(format!("analysis.level {} is out of range for nmax = {}", p.level, self.basis.nmax));
                }
                Ok(())
            }
            Analysis::Validate(p) => {
                if !p.lambda.is_finite() {
                    return fail("analysis.lambda must be finite".into());
                }
                if !(p.e_tol > 0.0 && p.quad_tol > 0.0 && p.element_tol > 0.0 && p.closure_tol > 0.0) {
                    return fail("validation tolerances must be positive".into());
                }
                if p.levels == 0 || p.levels > self.basis.nmax {
                    return fail(format!("analysis.levels must be in 1..={}", self.basis.nmax));
                }
                if p.quad_nmax == 0 {
                    return fail("analysis.quad_nmax must be positive".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}
