use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use stripedbox_core::eigen::RESIDUAL_BOUND;
use stripedbox_core::pt::{is_conjugation_closed, sample_eigenvalues, ExceptionalPoint, TransitionKind};
use stripedbox_core::validation::{cross_validate, quadrature_discrepancy};
use stripedbox_core::wavefunction::WavefunctionField;
use stripedbox_core::{
    assemble_combined, classify_eigenvalues, density_grid, detect_crossovers, find_exceptional_point,
    is_pt_symmetric, run_sweep_with, solve_spectrum, Complex64, SpectralBasisConfig, SweepError, SweepSpec,
    Tracking, TransitionIndicator,
};

use crate::config::{DensityParams, SpectrumParams, Study, StudyConfig, SweepParams, ValidateParams};
use crate::error::CliError;
use crate::output::{csv, num, write, write_json, ComplexValue, SCHEMA_VERSION};
use crate::svg::{heatmap, line_plot, Series};

/// Files written by a command and a one-line summary for the terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn config_echo(config: &StudyConfig) -> serde_json::Value {
    serde_json::to_value(config).expect("config serializes")
}

fn phase_label(values: &[Complex64], real_tol: f64) -> (&'static str, usize) {
    match classify_eigenvalues(values, real_tol) {
        Ok(phase) => (phase.label(), phase.pair_count()),
        Err(_) => ("unpaired", 0),
    }
}

#[derive(Serialize)]
struct Level {
    index: usize,
    energy: ComplexValue,
    residual: f64,
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    schema_version: u32,
    command: &'static str,
    config: serde_json::Value,
    lambda: f64,
    nx0: usize,
    nmax: usize,
    hermitian: bool,
    pt_symmetric: bool,
    phase: &'a str,
    conjugate_pairs: usize,
    matrix_norm: f64,
    max_residual: f64,
    residual_bound: f64,
    levels: Vec<Level>,
}

pub fn spectrum(study: &Study, params: &SpectrumParams, out_dir: &Path) -> Result<Outcome, CliError> {
    let (potentials, field) = study.at(params.lambda)?;
    let matrix = assemble_combined(&study.geometry, &potentials, &field, &study.basis);
    let spectrum = solve_spectrum(&matrix)?;
    let rows = (0..spectrum.len()).map(|k| {
        vec![
            k.to_string(),
            num(spectrum.eigenvalues[k].re),
            num(spectrum.eigenvalues[k].im),
            num(spectrum.residuals[k]),
        ]
    });
    let csv_path = write(
        out_dir,
        "spectrum.csv",
        &csv(&["index", "re_energy_ry", "im_energy_ry", "residual"], rows),
    )?;
    let (phase, pairs) = phase_label(&spectrum.eigenvalues, stripedbox_core::pt::DEFAULT_REAL_TOL);
    let report = SpectrumReport {
        schema_version: SCHEMA_VERSION,
        command: "spectrum",
        config: config_echo(&study.config),
        lambda: params.lambda,
        nx0: study.basis.nx0(),
        nmax: study.basis.nmax(),
        hermitian: matrix.is_hermitian_input(0.0),
        pt_symmetric: is_pt_symmetric(&potentials, 0.0) && field.is_pt_symmetric(0.0),
        phase,
        conjugate_pairs: pairs,
        matrix_norm: spectrum.matrix_norm,
        max_residual: spectrum.residuals.iter().copied().fold(0.0, f64::max),
        residual_bound: RESIDUAL_BOUND * spectrum.matrix_norm,
        levels: (0..spectrum.len())
            .map(|k| Level {
                index: k,
                energy: spectrum.eigenvalues[k].into(),
                residual: spectrum.residuals[k],
            })
            .collect(),
    };
    let json_path = write_json(out_dir, "spectrum.json", &report)?;
    let lowest: Vec<String> = spectrum
        .eigenvalues
        .iter()
        .take(5)
        .map(|e| if e.im == 0.0 { format!("{:.4}", e.re) } else { format!("{:.4}{:+.4}i", e.re, e.im) })
        .collect();
    Ok(Outcome {
        files: vec![csv_path, json_path],
        summary: format!("{} levels, {phase}; lowest: {}", spectrum.len(), lowest.join(", ")),
    })
}

#[derive(Serialize)]
struct ExceptionalPointRecord {
    lambda_c: f64,
    lambda_lo: f64,
    lambda_hi: f64,
    /// Bisection on the number of conjugate pairs, when the bracket changes it.
    lambda_bisected: Option<f64>,
    branches: [usize; 2],
    kind: &'static str,
}

#[derive(Serialize)]
struct CrossoverRecord {
    lambda_lo: f64,
    lambda_hi: f64,
    lambda_bisected: Option<f64>,
    restored: Vec<usize>,
    broken: Vec<usize>,
}

#[derive(Serialize)]
struct SweepReport {
    schema_version: u32,
    command: &'static str,
    config: serde_json::Value,
    grid_samples: usize,
    total_samples: usize,
    broken_samples: usize,
    exceptional_points: Vec<ExceptionalPointRecord>,
    crossovers: Vec<CrossoverRecord>,
    unresolved_intervals: Vec<[f64; 2]>,
}

/// Bisection that reports `None` when the bracket does not straddle a change.
fn bisect(spec: &SweepSpec, indicator: &TransitionIndicator, lo: f64, hi: f64, tol: f64) -> Result<Option<f64>, CliError> {
    match find_exceptional_point(spec, indicator, (lo, hi), tol) {
        Ok(l) => Ok(Some(l)),
        Err(SweepError::Bracket { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn ep_record(spec: &SweepSpec, ep: &ExceptionalPoint, tol: f64) -> Result<ExceptionalPointRecord, CliError> {
    Ok(ExceptionalPointRecord {
        lambda_c: ep.lambda_c,
        lambda_lo: ep.lambda_lo,
        lambda_hi: ep.lambda_hi,
        lambda_bisected: bisect(spec, &TransitionIndicator::PairCount, ep.lambda_lo, ep.lambda_hi, tol)?,
        branches: [ep.branches.0, ep.branches.1],
        kind: match ep.kind {
            TransitionKind::Breaking => "breaking",
            TransitionKind::Restoring => "restoring",
        },
    })
}

pub fn sweep(study: &Study, params: &SweepParams, out_dir: &Path) -> Result<Outcome, CliError> {
    let spec = study.sweep_spec(params)?;
    let mut evaluate = |lambdas: &[f64]| {
        lambdas
            .par_iter()
            .map(|&l| sample_eigenvalues(&spec.template, &spec.geometry, &spec.basis, l))
            .collect::<Result<Vec<_>, _>>()
    };
    let result = run_sweep_with(&spec, &mut evaluate)?;

    let mut rows = Vec::with_capacity(result.len() * result.branches.len());
    for (s, &lambda) in result.lambdas.iter().enumerate() {
        let phase = result.phases[s].label();
        for (b, branch) in result.branches.iter().enumerate() {
            rows.push(vec![num(lambda), b.to_string(), num(branch[s].re), num(branch[s].im), phase.to_string()]);
        }
    }
    let csv_path = write(
        out_dir,
        "sweep.csv",
        &csv(&["lambda", "branch", "re_energy_ry", "im_energy_ry", "phase"], rows),
    )?;

    let exceptional_points = result
        .exceptional_points
        .iter()
        .map(|ep| ep_record(&spec, ep, params.lambda_tol))
        .collect::<Result<Vec<_>, _>>()?;
    let tracking = params.crossovers.tracking();
    let crossovers = detect_crossovers(&result, &tracking)
        .into_iter()
        .map(|event| {
            let indicator = match tracking {
                Tracking::Levels { ordering, .. } => TransitionIndicator::Levels {
                    ordering,
                    levels: event.restored.clone(),
                },
                Tracking::Branches { .. } => TransitionIndicator::PairCount,
            };
            Ok(CrossoverRecord {
                lambda_lo: event.lambda_lo,
                lambda_hi: event.lambda_hi,
                lambda_bisected: bisect(&spec, &indicator, event.lambda_lo, event.lambda_hi, params.lambda_tol)?,
                restored: event.restored,
                broken: event.broken,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let broken_samples = result.phases.iter().filter(|p| p.is_broken()).count();
    let report = SweepReport {
        schema_version: SCHEMA_VERSION,
        command: "sweep",
        config: config_echo(&study.config),
        grid_samples: params.steps,
        total_samples: result.len(),
        broken_samples,
        exceptional_points,
        crossovers,
        unresolved_intervals: result.unresolved.iter().map(|&(a, b)| [a, b]).collect(),
    };
    let json_path = write_json(out_dir, "exceptional_points.json", &report)?;

    let shown = params.plot_branches.min(result.branches.len());
    let series = |part: fn(Complex64) -> f64| -> Vec<Series> {
        (0..shown)
            .map(|b| Series {
                label: format!("branch {b}"),
                points: result.lambdas.iter().zip(&result.branches[b]).map(|(&l, &e)| (l, part(e))).collect(),
            })
            .collect()
    };
    let re_path = write(
        out_dir,
        "sweep_re.svg",
        &line_plot("Re E versus λ", "λ", "Re E (Ry)", &series(|e| e.re)),
    )?;
    let im_path = write(
        out_dir,
        "sweep_im.svg",
        &line_plot("Im E versus λ", "λ", "Im E (Ry)", &series(|e| e.im)),
    )?;
    let first = report
        .exceptional_points
        .first()
        .map(|ep| format!("; first transition at λ ≈ {:.3}", ep.lambda_bisected.unwrap_or(ep.lambda_c)))
        .unwrap_or_default();
    Ok(Outcome {
        files: vec![csv_path, json_path, re_path, im_path],
        summary: format!(
            "{} samples, {} broken, {} exceptional points, {} crossovers{first}",
            result.len(),
            broken_samples,
            report.exceptional_points.len(),
            report.crossovers.len()
        ),
    })
}

#[derive(Serialize)]
struct DensityReport {
    schema_version: u32,
    command: &'static str,
    config: serde_json::Value,
    lambda: f64,
    level: usize,
    energy: ComplexValue,
    nx_samples: usize,
    ny_samples: usize,
    integral: f64,
    max_density: f64,
    argmax: [f64; 2],
    local_maxima: usize,
    lower_half_peak: f64,
    upper_half_peak: f64,
    lobe_asymmetry: f64,
}

pub fn density(study: &Study, params: &DensityParams, out_dir: &Path) -> Result<Outcome, CliError> {
    let (potentials, field) = study.at(params.lambda)?;
    let spectrum = solve_spectrum(&assemble_combined(&study.geometry, &potentials, &field, &study.basis))?;
    let wf = WavefunctionField::from_spectrum(study.geometry, study.basis.nx0(), &spectrum, params.level)?;
    let grid = density_grid(&wf, params.nx, params.ny)?;
    let mut rows = Vec::with_capacity(grid.values.len());
    for (iy, &y) in grid.ys.iter().enumerate() {
        for (ix, &x) in grid.xs.iter().enumerate() {
            rows.push(vec![num(x), num(y), num(grid.at(ix, iy))]);
        }
    }
    let csv_path = write(out_dir, "density.csv", &csv(&["x_bohr", "y_bohr", "density"], rows))?;
    let energy = spectrum.eigenvalues[params.level];
    let svg_path = write(
        out_dir,
        "density.svg",
        &heatmap(
            &format!("|ψ|², level {} (E = {:.4}{:+.4}i Ry)", params.level, energy.re, energy.im),
            &grid.xs,
            &grid.ys,
            &grid.values,
        ),
    )?;
    let (lower, upper) = grid.half_peaks();
    let (ax, ay) = grid.argmax();
    let report = DensityReport {
        schema_version: SCHEMA_VERSION,
        command: "density",
        config: config_echo(&study.config),
        lambda: params.lambda,
        level: params.level,
        energy: energy.into(),
        nx_samples: grid.nx_samples,
        ny_samples: grid.ny_samples,
        integral: grid.integrate(),
        max_density: grid.max_value(),
        argmax: [ax, ay],
        local_maxima: grid.local_maxima(0.01).len(),
        lower_half_peak: lower,
        upper_half_peak: upper,
        lobe_asymmetry: grid.lobe_asymmetry(),
    };
    let json_path = write_json(out_dir, "density.json", &report)?;
    Ok(Outcome {
        files: vec![csv_path, svg_path, json_path],
        summary: format!(
            "level {} at E = {:.6}{:+.6}i, {} local maxima, lobe asymmetry {:.3}",
            params.level, energy.re, energy.im, report.local_maxima, report.lobe_asymmetry
        ),
    })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    value: f64,
    threshold: f64,
    detail: String,
}

#[derive(Serialize)]
struct LevelDelta {
    index: usize,
    matrix: f64,
    direct: f64,
    delta: f64,
}

#[derive(Serialize)]
struct ValidateReport {
    schema_version: u32,
    command: &'static str,
    config: serde_json::Value,
    passed: bool,
    checks: Vec<Check>,
    direct_levels: Vec<LevelDelta>,
    skipped: Vec<String>,
}

pub fn validate(study: &Study, params: &ValidateParams, out_dir: &Path) -> Result<Outcome, CliError> {
    let (potentials, field) = study.at(params.lambda)?;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let mut direct_levels = Vec::new();

    let quad_basis = SpectralBasisConfig::new(study.basis.nx0(), params.quad_nmax.min(study.basis.nmax()))?;
    let element_delta = quadrature_discrepancy(&study.geometry, &potentials, &field, &quad_basis, params.quad_tol)?;
    checks.push(Check {
        name: "quadrature_elements",
        passed: element_delta <= params.element_tol,
        value: element_delta,
        threshold: params.element_tol,
        detail: format!("closed form vs adaptive quadrature, {} × {} elements", quad_basis.nmax(), quad_basis.nmax()),
    });

    let matrix = assemble_combined(&study.geometry, &potentials, &field, &study.basis);
    let spectrum = solve_spectrum(&matrix)?;
    let norm = spectrum.matrix_norm.max(1.0);
    let trace_delta = (spectrum.eigenvalues.iter().sum::<Complex64>() - matrix.entries().trace()).norm();
    checks.push(Check {
        name: "trace_identity",
        passed: trace_delta <= 1e-8 * norm,
        value: trace_delta,
        threshold: 1e-8 * norm,
        detail: "sum of eigenvalues vs matrix trace".into(),
    });

    let hermitian = matrix.is_hermitian_input(0.0);
    if hermitian {
        let max_im = spectrum.eigenvalues.iter().map(|e| e.im.abs()).fold(0.0, f64::max);
        checks.push(Check {
            name: "real_spectrum",
            passed: max_im <= 1e-10 * norm,
            value: max_im,
            threshold: 1e-10 * norm,
            detail: "Hermitian input must give real eigenvalues".into(),
        });
    } else if is_pt_symmetric(&potentials, 0.0) && field.is_pt_symmetric(0.0) {
        let closed = is_conjugation_closed(&spectrum.eigenvalues, params.closure_tol);
        checks.push(Check {
            name: "conjugation_closure",
            passed: closed,
            value: if closed { 0.0 } else { 1.0 },
            threshold: params.closure_tol,
            detail: "PT-symmetric input must give a conjugation-closed spectrum".into(),
        });
    } else {
        skipped.push("conjugation_closure: input is neither Hermitian nor PT-symmetric".into());
    }

    if hermitian && field.is_zero() {
        let report = cross_validate(&study.geometry, &potentials, &study.basis, params.e_tol, params.levels)?;
        direct_levels = report
            .levels
            .iter()
            .map(|l| LevelDelta {
                index: l.index,
                matrix: l.matrix,
                direct: l.direct,
                delta: l.delta,
            })
            .collect();
        let detail = if report.suspicious.is_empty() {
            format!("lowest {} levels against the transfer-matrix roots", params.levels)
        } else {
            format!(
                "lowest {} levels against the transfer-matrix roots; {} scan intervals may hide root pairs",
                params.levels,
                report.suspicious.len()
            )
        };
        checks.push(Check {
            name: "direct_method",
            passed: report.passed,
            value: report.max_delta,
            threshold: params.e_tol,
            detail,
        });
    } else {
        skipped.push("direct_method: needs real stripe potentials and no field".into());
    }

    let passed = checks.iter().all(|c| c.passed);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let report = ValidateReport {
        schema_version: SCHEMA_VERSION,
        command: "validate",
        config: config_echo(&study.config),
        passed,
        checks,
        direct_levels,
        skipped,
    };
    let json_path = write_json(out_dir, "validate.json", &report)?;
    if !passed {
        return Err(CliError::ChecksFailed(failed.join(", ")));
    }
    Ok(Outcome {
        files: vec![json_path],
        summary: format!("{} checks passed", report.checks.len()),
    })
}
