//! PT-phase analysis: spectrum classification, λ sweeps with branch
//! tracking, exceptional-point bisection and crossover detection.
//!
//! Two ways of following levels through a sweep are supported:
//!
//! * **Branches**: continuity tracking. Consecutive spectra are matched by a
//!   minimum total `|ΔE|` assignment, refining the λ grid locally where a
//!   step is not clearly smaller than the gap to the other eigenvalues.
//! * **Levels**: rank labels. At every λ the eigenvalues are ordered (by
//!   real part or by modulus) and level `k` is simply the `k`-th one. Under
//!   modulus ordering a broken pair and a real level swap ranks when their
//!   moduli cross, which shows up as a simultaneous "restoration" of one
//!   label and "breaking" of the next two.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
use thiserror::Error;

use crate::assembly::assemble_combined;
use crate::assignment::min_cost_assignment;
use crate::eigen::{solve_eigenvalues, SolveError, Spectrum};
use crate::model::{is_pt_symmetric, BoxGeometry, ModelError, SpectralBasisConfig, StripePotentials, UniformField};

/// Relative tolerance on `|Im E|` below which an eigenvalue counts as real.
pub const DEFAULT_REAL_TOL: f64 = 1e-6;
/// Relative tolerance for matching `E` with `conj(E')` in a broken pair.
pub const PAIR_TOL: f64 = 1e-8;
pub const DEFAULT_LAMBDA_TOL: f64 = 1e-3;
/// Maximum number of grid bisections per interval during branch tracking.
pub const DEFAULT_REFINE_DEPTH: usize = 3;

pub fn is_real_value(e: Complex64, real_tol: f64) -> bool {
    e.im.abs() <= real_tol * e.re.abs().max(1.0)
}

/// Indices of a complex-conjugate eigenvalue pair (`upper` has `Im > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjugatePair {
    pub upper: usize,
    pub lower: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phase {
    Unbroken,
    Broken(Vec<ConjugatePair>),
}

impl Phase {
    pub fn is_broken(&self) -> bool {
        matches!(self, Phase::Broken(_))
    }

    pub fn pair_count(&self) -> usize {
        match self {
            Phase::Unbroken => 0,
            Phase::Broken(pairs) => pairs.len(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Phase::Unbroken => "unbroken",
            Phase::Broken(_) => "broken",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("non-real eigenvalue {value} (index {index}) has no complex-conjugate partner")]
pub struct PairingError {
    pub index: usize,
    pub value: Complex64,
}

/// Unbroken if every eigenvalue is real to `real_tol`; otherwise the
/// non-real ones must pair up as complex conjugates.
pub fn classify_eigenvalues(values: &[Complex64], real_tol: f64) -> Result<Phase, PairingError> {
    let mut used = vec![false; values.len()];
    let mut pairs = Vec::new();
    for (i, &e) in values.iter().enumerate() {
        if used[i] || is_real_value(e, real_tol) {
            continue;
        }
        let target = e.conj();
        let partner = values
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && !used[j])
            .map(|(j, &f)| (j, (f - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, dist)) if dist <= PAIR_TOL * e.norm().max(1.0) => {
                used[i] = true;
                used[j] = true;
                let (upper, lower) = if e.im > 0.0 { (i, j) } else { (j, i) };
                pairs.push(ConjugatePair { upper, lower });
            }
            _ => return Err(PairingError { index: i, value: e }),
        }
    }
    Ok(if pairs.is_empty() {
        Phase::Unbroken
    } else {
        Phase::Broken(pairs)
    })
}

pub fn classify_spectrum(spectrum: &Spectrum, real_tol: f64) -> Result<Phase, PairingError> {
    classify_eigenvalues(&spectrum.eigenvalues, real_tol)
}

/// Rank order used to label levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelOrdering {
    /// Ascending real part, then imaginary part.
    RealPart,
    /// Ascending modulus, then imaginary part.
    Magnitude,
}

pub fn order_levels(values: &[Complex64], ordering: LevelOrdering) -> Vec<Complex64> {
    let mut sorted = values.to_vec();
    match ordering {
        LevelOrdering::RealPart => {
            sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        }
        LevelOrdering::Magnitude => {
            sorted.sort_by(|a, b| {
                a.norm()
                    .total_cmp(&b.norm())
                    .then(a.im.total_cmp(&b.im))
                    .then(a.re.total_cmp(&b.re))
            });
        }
    }
    sorted
}

/// Potentials and field that depend linearly on a real parameter λ:
/// `V_i(λ) = base_i + λ·slope_i`, `α(λ) = α_0 + λ·α_slope`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearTemplate {
    pub base: StripePotentials,
    pub base_field: UniformField,
    pub potential_slope: [Complex64; 4],
    pub field_slope: Complex64,
}

impl LinearTemplate {
    pub fn new(
        base: StripePotentials,
        base_field: UniformField,
        potential_slope: [Complex64; 4],
        field_slope: Complex64,
    ) -> Self {
        Self {
            base,
            base_field,
            potential_slope,
            field_slope,
        }
    }

    /// Only the stripes vary; no field.
    pub fn stripes(base: StripePotentials, potential_slope: [Complex64; 4]) -> Self {
        Self::new(base, UniformField::zero(), potential_slope, Complex64::new(0.0, 0.0))
    }

    pub fn at(&self, lambda: f64) -> Result<(StripePotentials, UniformField), ModelError> {
        let b = self.base.values();
        let mut values = [Complex64::new(0.0, 0.0); 4];
        for (i, v) in values.iter_mut().enumerate() {
            *v = b[i] + self.potential_slope[i] * lambda;
        }
        Ok((
            StripePotentials::new(values)?,
            UniformField::new(self.base_field.alpha() + self.field_slope * lambda)?,
        ))
    }

    /// PT symmetric for every λ.
    pub fn is_pt_symmetric(&self, tol: f64) -> bool {
        let slope = StripePotentials::new(self.potential_slope);
        is_pt_symmetric(&self.base, tol)
            && slope.is_ok_and(|s| is_pt_symmetric(&s, tol))
            && self.base_field.is_pt_symmetric(tol)
            && self.field_slope.re.abs() <= tol
    }

    /// Hermitian for every λ.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.base.values().iter().all(|v| v.im.abs() <= tol)
            && self.potential_slope.iter().all(|v| v.im.abs() <= tol)
            && self.base_field.alpha().im.abs() <= tol
            && self.field_slope.im.abs() <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep range must satisfy start < end (got {start} .. {end})")]
    InvalidRange { start: f64, end: f64 },
    #[error("sweep needs at least 2 steps, got {steps}")]
    TooFewSteps { steps: usize },
    #[error("tolerance must be positive, got {value}")]
    InvalidTolerance { value: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("eigensolver failed at λ = {lambda}: {source}")]
    Solve { lambda: f64, source: SolveError },
    #[error("classification failed at λ = {lambda}: {source}")]
    Pairing { lambda: f64, source: PairingError },
    #[error("evaluator returned {got} spectra for {expected} λ values")]
    EvaluatorMismatch { expected: usize, got: usize },
    #[error("bracket [{lo}, {hi}] does not straddle a transition (indicator {state} at both ends)")]
    Bracket { lo: f64, hi: f64, state: usize },
    #[error("level {level} requested but the spectrum has {available} levels")]
    LevelOutOfRange { level: usize, available: usize },
}

/// A λ sweep: template, uniform grid, and the model it is solved on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub template: LinearTemplate,
    pub geometry: BoxGeometry,
    pub basis: SpectralBasisConfig,
    pub lambda_start: f64,
    pub lambda_end: f64,
    pub steps: usize,
    pub real_tol: f64,
    pub refine_depth: usize,
}

impl SweepSpec {
    pub fn new(
        template: LinearTemplate,
        geometry: BoxGeometry,
        basis: SpectralBasisConfig,
        lambda_start: f64,
        lambda_end: f64,
        steps: usize,
    ) -> Result<Self, SweepError> {
        if !(lambda_start.is_finite() && lambda_end.is_finite() && lambda_start < lambda_end) {
            return Err(SweepError::InvalidRange {
                start: lambda_start,
                end: lambda_end,
            });
        }
        if steps < 2 {
            return Err(SweepError::TooFewSteps { steps });
        }
        Ok(Self {
            template,
            geometry,
            basis,
            lambda_start,
            lambda_end,
            steps,
            real_tol: DEFAULT_REAL_TOL,
            refine_depth: DEFAULT_REFINE_DEPTH,
        })
    }

    pub fn with_real_tol(mut self, real_tol: f64) -> Result<Self, SweepError> {
        if !(real_tol > 0.0) {
            return Err(SweepError::InvalidTolerance { value: real_tol });
        }
        self.real_tol = real_tol;
        Ok(self)
    }

    pub fn with_refine_depth(mut self, depth: usize) -> Self {
        self.refine_depth = depth;
        self
    }

    /// Uniform grid, endpoints included exactly.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.lambda_end - self.lambda_start;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.lambda_end
                } else {
                    self.lambda_start + span * (k as f64) / (last as f64)
                }
            })
            .collect()
    }
}

/// Assembles and solves one sample of the sweep.
pub fn sample_eigenvalues(
    template: &LinearTemplate,
    geometry: &BoxGeometry,
    basis: &SpectralBasisConfig,
    lambda: f64,
) -> Result<Vec<Complex64>, SweepError> {
    let (potentials, field) = template.at(lambda)?;
    let m = assemble_combined(geometry, &potentials, &field, basis);
    solve_eigenvalues(&m).map_err(|source| SweepError::Solve { lambda, source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionKind {
    /// Two real branches coalesce and leave as a conjugate pair.
    Breaking,
    /// A conjugate pair coalesces and leaves as two real branches.
    Restoring,
}

/// Exceptional point seen between two consecutive samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceptionalPoint {
    /// Estimate from linear interpolation of the signed squared gap.
    pub lambda_c: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub branches: (usize, usize),
    pub kind: TransitionKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sample points, ascending; includes locally refined points.
    pub lambdas: Vec<f64>,
    /// Raw sorted eigenvalues at each sample.
    pub spectra: Vec<Vec<Complex64>>,
    /// `branches[b][s]`: continuity-tracked branch `b` at sample `s`. Branch
    /// ids follow the real-part order at the first sample.
    pub branches: Vec<Vec<Complex64>>,
    pub phases: Vec<Phase>,
    pub exceptional_points: Vec<ExceptionalPoint>,
    /// Intervals where the continuity check still failed at maximum refinement
    /// (expected right at coalescence points).
    pub unresolved: Vec<(f64, f64)>,
    pub real_tol: f64,
}

/// What to follow across a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tracking {
    /// The first `count` continuity-tracked branches.
    Branches { count: usize },
    /// The lowest `count` rank labels under `ordering`.
    Levels { ordering: LevelOrdering, count: usize },
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `tracks[t][s]` for the requested tracking mode.
    pub fn tracks(&self, tracking: &Tracking) -> Vec<Vec<Complex64>> {
        match *tracking {
            Tracking::Branches { count } => self.branches.iter().take(count).cloned().collect(),
            Tracking::Levels { ordering, count } => {
                let count = count.min(self.spectra.first().map_or(0, Vec::len));
                let mut tracks = vec![Vec::with_capacity(self.len()); count];
                for spectrum in &self.spectra {
                    let ordered = order_levels(spectrum, ordering);
                    for (t, track) in tracks.iter_mut().enumerate() {
                        track.push(ordered[t]);
                    }
                }
                tracks
            }
        }
    }
}

fn match_branches(previous: &[Complex64], next: &[Complex64]) -> Vec<usize> {
    let n = previous.len();
    let mut cost = Vec::with_capacity(n * n);
    for p in previous {
        for q in next {
            cost.push((q - p).norm());
        }
    }
    min_cost_assignment(n, &cost)
}

/// Every branch moved less than the gap separating its new value from the
/// other eigenvalues.
fn continuity_holds(previous: &[Complex64], next: &[Complex64], assignment: &[usize]) -> bool {
    previous.iter().zip(assignment).all(|(p, &j)| {
        let step = (next[j] - p).norm();
        let gap = next
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, q)| (q - next[j]).norm())
            .fold(f64::INFINITY, f64::min);
        step < gap
    })
}

struct Tracker<'a, E> {
    evaluate: &'a mut E,
    max_depth: usize,
    lambdas: Vec<f64>,
    spectra: Vec<Vec<Complex64>>,
    branches: Vec<Vec<Complex64>>,
    unresolved: Vec<(f64, f64)>,
}

impl<E> Tracker<'_, E>
where
    E: FnMut(&[f64]) -> Result<Vec<Vec<Complex64>>, SweepError>,
{
    fn current(&self) -> Vec<Complex64> {
        self.branches.iter().map(|b| *b.last().expect("seeded")).collect()
    }

    fn advance(&mut self, lo: f64, hi: f64, next: Vec<Complex64>, depth: usize) -> Result<(), SweepError> {
        let previous = self.current();
        let assignment = match_branches(&previous, &next);
        if !continuity_holds(&previous, &next, &assignment) {
            if depth < self.max_depth {
                let mid = 0.5 * (lo + hi);
                let mut mids = (self.evaluate)(&[mid])?;
                if mids.len() != 1 {
                    return Err(SweepError::EvaluatorMismatch { expected: 1, got: mids.len() });
                }
                let mid_values = mids.pop().expect("one spectrum");
                self.advance(lo, mid, mid_values, depth + 1)?;
                return self.advance(mid, hi, next, depth + 1);
            }
            self.unresolved.push((lo, hi));
        }
        for (branch, &j) in self.branches.iter_mut().zip(&assignment) {
            branch.push(next[j]);
        }
        self.lambdas.push(hi);
        self.spectra.push(next);
        Ok(())
    }
}

fn locate_exceptional_points(lambdas: &[f64], branches: &[Vec<Complex64>], real_tol: f64) -> Vec<ExceptionalPoint> {
    let mut points = Vec::new();
    for s in 0..lambdas.len().saturating_sub(1) {
        for kind in [TransitionKind::Breaking, TransitionKind::Restoring] {
            let (before, after) = match kind {
                TransitionKind::Breaking => (s, s + 1),
                TransitionKind::Restoring => (s + 1, s),
            };
            // Branches that are real at `before` and not real at `after`.
            let moving: Vec<usize> = (0..branches.len())
                .filter(|&b| {
                    is_real_value(branches[b][before], real_tol) && !is_real_value(branches[b][after], real_tol)
                })
                .collect();
            let mut taken = vec![false; moving.len()];
            for i in 0..moving.len() {
                if taken[i] {
                    continue;
                }
                let b = moving[i];
                let target = branches[b][after].conj();
                let partner = (0..moving.len())
                    .filter(|&k| k != i && !taken[k])
                    .min_by(|&x, &y| {
                        (branches[moving[x]][after] - target)
                            .norm()
                            .total_cmp(&(branches[moving[y]][after] - target).norm())
                    });
                let Some(k) = partner else { continue };
                taken[i] = true;
                taken[k] = true;
                let c = moving[k];
                let gap_lo = (branches[b][s] - branches[c][s]).norm_sqr();
                let gap_hi = (branches[b][s + 1] - branches[c][s + 1]).norm_sqr();
                // Squared gap is linear in λ near coalescence, negative on the real side.
                let (signed_lo, signed_hi) = match kind {
                    TransitionKind::Breaking => (-gap_lo, gap_hi),
                    TransitionKind::Restoring => (gap_lo, -gap_hi),
                };
                let (lo, hi) = (lambdas[s], lambdas[s + 1]);
                let denom = signed_lo - signed_hi;
                let lambda_c = if denom != 0.0 {
                    lo + (hi - lo) * signed_lo / denom
                } else {
                    0.5 * (lo + hi)
                };
                points.push(ExceptionalPoint {
                    lambda_c: lambda_c.clamp(lo, hi),
                    lambda_lo: lo,
                    lambda_hi: hi,
                    branches: (b.min(c), b.max(c)),
                    kind,
                });
            }
        }
    }
    points
}

/// Runs a sweep with a caller-supplied batch evaluator returning the sorted
/// eigenvalues at each requested λ (e.g. a parallel one).
pub fn run_sweep_with<E>(spec: &SweepSpec, evaluate: &mut E) -> Result<SweepResult, SweepError>
where
    E: FnMut(&[f64]) -> Result<Vec<Vec<Complex64>>, SweepError>,
{
    let grid = spec.grid();
    let spectra = evaluate(&grid)?;
    if spectra.len() != grid.len() {
        return Err(SweepError::EvaluatorMismatch {
            expected: grid.len(),
            got: spectra.len(),
        });
    }
    let mut spectra = spectra.into_iter();
    let first = spectra.next().expect("grid has at least two points");
    let mut tracker = Tracker {
        evaluate,
        max_depth: spec.refine_depth,
        lambdas: vec![grid[0]],
        branches: first.iter().map(|&e| vec![e]).collect(),
        spectra: vec![first],
        unresolved: Vec::new(),
    };
    for (window, next) in grid.windows(2).zip(spectra) {
        tracker.advance(window[0], window[1], next, 0)?;
    }
    let Tracker {
        lambdas,
        spectra,
        branches,
        unresolved,
        ..
    } = tracker;
    let phases = lambdas
        .iter()
        .zip(&spectra)
        .map(|(&lambda, values)| {
            classify_eigenvalues(values, spec.real_tol).map_err(|source| SweepError::Pairing { lambda, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let exceptional_points = locate_exceptional_points(&lambdas, &branches, spec.real_tol);
    Ok(SweepResult {
        lambdas,
        spectra,
        branches,
        phases,
        exceptional_points,
        unresolved,
        real_tol: spec.real_tol,
    })
}

/// Sequential sweep: assemble and solve at every grid point.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    let mut evaluate = |lambdas: &[f64]| {
        lambdas
            .iter()
            .map(|&l| sample_eigenvalues(&spec.template, &spec.geometry, &spec.basis, l))
            .collect::<Result<Vec<_>, _>>()
    };
    run_sweep_with(spec, &mut evaluate)
}

/// Indicator bisected by [`find_exceptional_point`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransitionIndicator {
    /// 1 if any of the selected rank labels is non-real, else 0.
    Levels { ordering: LevelOrdering, levels: Vec<usize> },
    /// Number of conjugate pairs in the whole spectrum.
    PairCount,
}

impl TransitionIndicator {
    pub fn pair(ordering: LevelOrdering, first: usize, second: usize) -> Self {
        Self::Levels {
            ordering,
            levels: vec![first, second],
        }
    }

    pub fn single(ordering: LevelOrdering, level: usize) -> Self {
        Self::Levels {
            ordering,
            levels: vec![level],
        }
    }

    pub fn state(&self, values: &[Complex64], real_tol: f64, lambda: f64) -> Result<usize, SweepError> {
        match self {
            Self::Levels { ordering, levels } => {
                let ordered = order_levels(values, *ordering);
                let mut broken = false;
                for &level in levels {
                    let e = ordered.get(level).ok_or(SweepError::LevelOutOfRange {
                        level,
                        available: ordered.len(),
                    })?;
                    broken |= !is_real_value(*e, real_tol);
                }
                Ok(usize::from(broken))
            }
            Self::PairCount => classify_eigenvalues(values, real_tol)
                .map(|p| p.pair_count())
                .map_err(|source| SweepError::Pairing { lambda, source }),
        }
    }
}

/// Bisects `bracket` until its width is at most `lambda_tol` and returns the midpoint.
pub fn find_exceptional_point(
    spec: &SweepSpec,
    indicator: &TransitionIndicator,
    bracket: (f64, f64),
    lambda_tol: f64,
) -> Result<f64, SweepError> {
    if !(lambda_tol > 0.0) {
        return Err(SweepError::InvalidTolerance { value: lambda_tol });
    }
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(SweepError::InvalidRange { start: lo, end: hi });
    }
    let state_at = |lambda: f64| -> Result<usize, SweepError> {
        let values = sample_eigenvalues(&spec.template, &spec.geometry, &spec.basis, lambda)?;
        indicator.state(&values, spec.real_tol, lambda)
    };
    let state_lo = state_at(lo)?;
    let state_hi = state_at(hi)?;
    if state_lo == state_hi {
        return Err(SweepError::Bracket { lo, hi, state: state_lo });
    }
    while hi - lo > lambda_tol {
        let mid = 0.5 * (lo + hi);
        if state_at(mid)? == state_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One track restored to a real value while another broke, within one grid interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverEvent {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    /// Tracks going non-real → real.
    pub restored: Vec<usize>,
    /// Tracks going real → non-real.
    pub broken: Vec<usize>,
}

pub fn detect_crossovers(result: &SweepResult, tracking: &Tracking) -> Vec<CrossoverEvent> {
    let tracks = result.tracks(tracking);
    let real = |t: usize, s: usize| is_real_value(tracks[t][s], result.real_tol);
    let mut events = Vec::new();
    for s in 0..result.len().saturating_sub(1) {
        let mut restored = Vec::new();
        let mut broken = Vec::new();
        for t in 0..tracks.len() {
            match (real(t, s), real(t, s + 1)) {
                (false, true) => restored.push(t),
                (true, false) => broken.push(t),
                _ => {}
            }
        }
        if !restored.is_empty() && !broken.is_empty() {
            events.push(CrossoverEvent {
                lambda_lo: result.lambdas[s],
                lambda_hi: result.lambdas[s + 1],
                restored,
                broken,
            });
        }
    }
    events
}

/// Multiset closure under conjugation: every value has a distinct partner
/// within `tol · max(1, |E|)` of its conjugate.
pub fn is_conjugation_closed(values: &[Complex64], tol: f64) -> bool {
    let mut used = vec![false; values.len()];
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Real values pair with themselves first.
    order.sort_by(|&a, &b| {
        values[a]
            .im
            .abs()
            .partial_cmp(&values[b].im.abs())
            .unwrap_or(Ordering::Equal)
    });
    for &i in &order {
        if used[i] {
            continue;
        }
        let e = values[i];
        let scale = tol * e.norm().max(1.0);
        if e.im.abs() <= scale {
            used[i] = true;
            continue;
        }
        let target = e.conj();
        let partner = (0..values.len())
            .filter(|&j| j != i && !used[j])
            .min_by(|&a, &b| (values[a] - target).norm().total_cmp(&(values[b] - target).norm()));
        match partner {
            Some(j) if (values[j] - target).norm() <= scale => {
                used[i] = true;
                used[j] = true;
            }
            _ => return false,
        }
    }
    true
}
