mod common;

use common::*;
use stripedbox_core::pt::{is_conjugation_closed, is_real_value, sample_eigenvalues, TransitionKind, DEFAULT_LAMBDA_TOL};
use stripedbox_core::{
    assemble_striped, detect_crossovers, find_exceptional_point, run_sweep, solve_eigenvalues, Complex64,
    LevelOrdering, LinearTemplate, Phase, StripePotentials, SweepError, SweepSpec, Tracking, TransitionIndicator,
};

fn i() -> Complex64 {
    c(0.0, 1.0)
}

fn zero() -> Complex64 {
    c(0.0, 0.0)
}

/// `V2 = iλ = V3*` on top of `V1 = V4 = outer`.
fn inner_gain_loss(outer: f64) -> LinearTemplate {
    LinearTemplate::stripes(real([outer, 0.0, 0.0, outer]), [zero(), i(), -i(), zero()])
}

fn spec(template: LinearTemplate, start: f64, end: f64, steps: usize, nmax: usize) -> SweepSpec {
    SweepSpec::new(template, geom(), basis(nmax), start, end, steps).unwrap()
}

fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

#[test]
fn branches_partition_the_raw_spectra() {
    let result = run_sweep(&spec(inner_gain_loss(0.0), 40.0, 70.0, 31, 30)).unwrap();
    assert_eq!(result.lambdas.len(), result.spectra.len());
    for (s, raw) in result.spectra.iter().enumerate() {
        let column: Vec<Complex64> = result.branches.iter().map(|b| b[s]).collect();
        assert_eq!(sorted(column), sorted(raw.clone()));
        assert!(is_conjugation_closed(raw, 1e-8));
    }
    assert!(result.branches.iter().all(|b| b.len() == result.len()));
    assert!(result.lambdas.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn lowest_pair_breaks_once_near_fifty_four() {
    let result = run_sweep(&spec(inner_gain_loss(0.0), 0.0, 100.0, 201, 50)).unwrap();
    let first = result
        .exceptional_points
        .iter()
        .find(|ep| ep.branches == (0, 1))
        .expect("lowest pair coalesces");
    assert_eq!(first.kind, TransitionKind::Breaking);
    assert!((first.lambda_c - 54.5).abs() < 0.5, "{}", first.lambda_c);
    for (s, &lambda) in result.lambdas.iter().enumerate() {
        let (e0, e1) = (result.branches[0][s], result.branches[1][s]);
        if lambda < first.lambda_lo {
            assert!(is_real_value(e0, result.real_tol) && is_real_value(e1, result.real_tol));
            assert!(e0.re < e1.re);
        } else if lambda > first.lambda_hi {
            assert!((e0 - e1.conj()).norm() < 1e-8 * e0.norm());
        }
    }
    assert!(detect_crossovers(&result, &Tracking::Branches { count: 3 }).is_empty());
    assert!(detect_crossovers(&result, &Tracking::Levels { ordering: LevelOrdering::Magnitude, count: 3 }).is_empty());
}

#[test]
fn bisection_brackets_the_threshold() {
    let s = spec(inner_gain_loss(0.0), 0.0, 100.0, 2, 50);
    let indicator = TransitionIndicator::pair(LevelOrdering::RealPart, 0, 1);
    let lc = find_exceptional_point(&s, &indicator, (50.0, 60.0), DEFAULT_LAMBDA_TOL).unwrap();
    assert!((lc - 54.5).abs() < 0.5);
    let state = |l: f64| indicator.state(&sample_eigenvalues(&s.template, &s.geometry, &s.basis, l).unwrap(), s.real_tol, l);
    assert_eq!(state(lc - DEFAULT_LAMBDA_TOL).unwrap(), 0);
    assert_eq!(state(lc + DEFAULT_LAMBDA_TOL).unwrap(), 1);
    assert!(matches!(
        find_exceptional_point(&s, &indicator, (10.0, 20.0), DEFAULT_LAMBDA_TOL),
        Err(SweepError::Bracket { .. })
    ));
}

#[test]
fn tiny_range_starts_from_the_hermitian_spectrum() {
    let result = run_sweep(&spec(inner_gain_loss(0.0), 0.0, 1e-9, 2, 20)).unwrap();
    let hermitian = solve_eigenvalues(&assemble_striped(&geom(), &StripePotentials::zero(), &basis(20))).unwrap();
    for (b, e) in result.branches.iter().zip(&hermitian) {
        assert_eq!(b[0], *e);
    }
    assert_eq!(result.phases, vec![Phase::Unbroken, Phase::Unbroken]);
}

#[test]
fn hermitian_sweeps_never_break() {
    let template = LinearTemplate::stripes(StripePotentials::zero(), [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
    let result = run_sweep(&spec(template, 0.0, 100.0, 26, 30)).unwrap();
    assert!(result.phases.iter().all(|p| *p == Phase::Unbroken));
    assert!(result.exceptional_points.is_empty());
    assert!(detect_crossovers(&result, &Tracking::Branches { count: 30 }).is_empty());
}

#[test]
fn uniform_gain_loss_outer_stripes_break_from_the_start() {
    let template = LinearTemplate::stripes(pt(c(0.0, 50.0), zero()), [zero(), i(), -i(), zero()]);
    let result = run_sweep(&spec(template, 1.0, 100.0, 34, 50)).unwrap();
    for s in 0..result.len() {
        let lowest = result.spectra[s][0];
        assert!(!is_real_value(lowest, result.real_tol), "λ = {}", result.lambdas[s]);
        assert!(result.phases[s].is_broken());
    }
}

#[test]
fn outer_gain_loss_restores_the_smallest_level_while_the_next_pair_breaks() {
    let template = LinearTemplate::stripes(StripePotentials::zero(), [i(), zero(), zero(), -i()]);
    let result = run_sweep(&spec(template, 0.0, 100.0, 201, 50)).unwrap();
    let events = detect_crossovers(&result, &Tracking::Levels { ordering: LevelOrdering::Magnitude, count: 3 });
    assert_eq!(events.len(), 1, "{events:?}");
    let event = &events[0];
    assert_eq!(event.restored, vec![0]);
    // Label 1 belongs to a broken pair on both sides; label 2 newly joins one.
    assert_eq!(event.broken, vec![2]);
    let s = spec(template, 0.0, 100.0, 2, 50);
    let lc2 = find_exceptional_point(
        &s,
        &TransitionIndicator::single(LevelOrdering::Magnitude, 0),
        (event.lambda_lo, event.lambda_hi),
        DEFAULT_LAMBDA_TOL,
    )
    .unwrap();
    assert!((lc2 - 51.0).abs() < 0.5, "{lc2}");
}
