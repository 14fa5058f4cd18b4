//! Dense complex eigensolver for `M C = E C`.
//!
//! Householder reduction to upper Hessenberg form, then single-shift complex
//! QR sweeps (Wilkinson shift, implicit bulge chasing with Givens rotations)
//! down to a Schur form `M = Z T Z^H`. Eigenvectors come from
//! back-substitution on `T`, mapped back through `Z`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
use thiserror::Error;

use crate::assembly::HamiltonianMatrix;
use crate::linalg::{vector_norm, CMatrix};

/// Backward-error bound every returned pair must satisfy, relative to `‖M‖_F`.
pub const RESIDUAL_BOUND: f64 = 1e-8;

/// Relative real-part spread under which two eigenvalues count as tied and
/// are ordered by imaginary part.
const TIE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("empty matrix")]
    Empty,
    #[error(
        "QR iteration did not converge for eigenvalue {index} after {iterations} sweeps \
         (‖M‖_F = {matrix_norm:e}, trailing subdiagonal = {subdiagonal:e})"
    )]
    NoConvergence {
        index: usize,
        iterations: usize,
        matrix_norm: f64,
        subdiagonal: f64,
    },
    #[error("eigenpair {index} has residual {residual:e} above bound {bound:e}")]
    ResidualTooLarge { index: usize, residual: f64, bound: f64 },
}

/// How eigenpairs are ordered in a [`Spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumOrdering {
    /// Ascending real part, ties broken by ascending imaginary part.
    RealThenImag,
}

/// Eigenvalues (Rydberg) with unit-norm coefficient vectors over the `y` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub vectors: Vec<Vec<Complex64>>,
    /// `‖M C − E C‖₂` for each pair.
    pub residuals: Vec<f64>,
    pub ordering: SpectrumOrdering,
    /// Frobenius norm of the solved matrix.
    pub matrix_norm: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

// Complex Givens rotation G = [[c, s], [−conj(s), c]] with G·[f; g] = [r; 0].
#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: Complex64,
}

impl Givens {
    fn new(f: Complex64, g: Complex64) -> Self {
        let gn = g.norm();
        if gn == 0.0 {
            return Self { c: 1.0, s: Complex64::new(0.0, 0.0) };
        }
        let fnorm = f.norm();
        if fnorm == 0.0 {
            return Self { c: 0.0, s: g.conj() / gn };
        }
        let norm = fnorm.hypot(gn);
        Self {
            c: fnorm / norm,
            s: (f / fnorm) * g.conj() / norm,
        }
    }

    /// Rows `i`, `i+1` of `m` over columns `cols`.
    fn rotate_rows(&self, m: &mut CMatrix, i: usize, cols: core::ops::Range<usize>) {
        for j in cols {
            let x = m[(i, j)];
            let y = m[(i + 1, j)];
            m[(i, j)] = x * self.c + self.s * y;
            m[(i + 1, j)] = y * self.c - self.s.conj() * x;
        }
    }

    /// Columns `j`, `j+1` of `m` over rows `rows`, multiplying by `G^H` on the right.
    fn rotate_cols(&self, m: &mut CMatrix, j: usize, rows: core::ops::Range<usize>) {
        for i in rows {
            let x = m[(i, j)];
            let y = m[(i, j + 1)];
            m[(i, j)] = x * self.c + y * self.s.conj();
            m[(i, j + 1)] = y * self.c - x * self.s;
        }
    }
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Reduces `a` to upper Hessenberg form in place; returns the accumulated
/// unitary `Q` with `a_original = Q H Q^H` (or identity when not wanted).
fn hessenberg(a: &mut CMatrix, want_q: bool) -> Option<CMatrix> {
    let n = a.dim();
    let mut q = want_q.then(|| CMatrix::identity(n));
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x0 = a[(k + 1, k)];
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // u = x + phase·‖x‖·e1, P = I − 2 u u^H / (u^H u) maps x to −phase·‖x‖·e1.
        let u = &mut v[..len];
        u[0] = x0 + phase * xnorm;
        for (idx, i) in (k + 2..n).enumerate() {
            u[idx + 1] = a[(i, k)];
        }
        let unorm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / unorm2;
        // Left: A[k+1.., k..] -= beta u (u^H A)
        for j in k..n {
            let dot: Complex64 = (0..len).map(|r| u[r].conj() * a[(k + 1 + r, j)]).sum();
            let scale = dot * beta;
            for r in 0..len {
                a[(k + 1 + r, j)] -= u[r] * scale;
            }
        }
        // Right: A[.., k+1..] -= beta (A u) u^H
        for i in 0..n {
            let dot: Complex64 = (0..len).map(|r| a[(i, k + 1 + r)] * u[r]).sum();
            let scale = dot * beta;
            for r in 0..len {
                a[(i, k + 1 + r)] -= scale * u[r].conj();
            }
        }
        if let Some(q) = q.as_mut() {
            for i in 0..n {
                let dot: Complex64 = (0..len).map(|r| q[(i, k + 1 + r)] * u[r]).sum();
                let scale = dot * beta;
                for r in 0..len {
                    q[(i, k + 1 + r)] -= scale * u[r].conj();
                }
            }
        }
        a[(k + 1, k)] = -phase * xnorm;
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    q
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    if bc.norm() == 0.0 {
        return d;
    }
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// Complex Schur decomposition of an upper Hessenberg matrix, in place.
/// On return `h` is upper triangular; `z` (if present) is updated to `z·Q`.
fn schur(h: &mut CMatrix, mut z: Option<&mut CMatrix>) -> Result<(), SolveError> {
    let n = h.dim();
    let norm = h.frobenius_norm();
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64) / eps;
    let max_sweeps = 30 * n.max(10);
    let mut hi = n - 1;
    let mut sweeps_here = 0usize;
    while hi > 0 {
        // Look for a negligible subdiagonal in the active block.
        let mut lo = hi;
        while lo > 0 {
            let sub = abs1(h[(lo, lo - 1)]);
            let mut diag = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if diag == 0.0 {
                diag = norm;
            }
            if sub <= eps * diag || sub <= small {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            sweeps_here = 0;
            continue;
        }
        sweeps_here += 1;
        if sweeps_here > max_sweeps {
            return Err(SolveError::NoConvergence {
                index: hi,
                iterations: sweeps_here,
                matrix_norm: norm,
                subdiagonal: h[(hi, hi - 1)].norm(),
            });
        }
        let shift = if sweeps_here.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * abs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        // Implicit single-shift QR sweep on rows/cols lo..=hi.
        let mut rot = Givens::new(h[(lo, lo)] - shift, h[(lo + 1, lo)]);
        for k in lo..hi {
            if k > lo {
                rot = Givens::new(h[(k, k - 1)], h[(k + 1, k - 1)]);
            }
            let first_col = if k > lo { k - 1 } else { lo };
            rot.rotate_rows(h, k, first_col..n);
            if k > lo {
                h[(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
            }
            let last_row = (k + 2).min(hi);
            rot.rotate_cols(h, k, 0..last_row + 1);
            if let Some(z) = z.as_deref_mut() {
                rot.rotate_cols(z, k, 0..n);
            }
        }
    }
    Ok(())
}

/// Eigenvectors of upper-triangular `t` by back-substitution, columns of the result.
fn triangular_eigenvectors(t: &CMatrix) -> Vec<Vec<Complex64>> {
    let n = t.dim();
    let norm = t.frobenius_norm().max(f64::MIN_POSITIVE);
    let floor = f64::EPSILON * norm;
    (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            x[k] = Complex64::new(1.0, 0.0);
            for j in (0..k).rev() {
                let rhs: Complex64 = (j + 1..=k).map(|m| t[(j, m)] * x[m]).sum();
                let mut denom = t[(j, j)] - lambda;
                if denom.norm() < floor {
                    denom = Complex64::new(floor, 0.0);
                }
                x[j] = -rhs / denom;
                // Rescale to avoid overflow when the denominator was tiny.
                let big = abs1(x[j]);
                if big > 1e100 {
                    for v in x.iter_mut().take(k + 1).skip(j) {
                        *v /= big;
                    }
                }
            }
            x
        })
        .collect()
}

fn compare_eigenvalues(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Sorts by ascending real part; real parts equal to within a relative
/// `TIE_TOL` are ordered by imaginary part. Returns the permutation.
fn sorted_order(values: &[Complex64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| compare_eigenvalues(&values[i], &values[j]).then(i.cmp(&j)));
    // Near-ties in the real part: order by imaginary part with adjacent swaps.
    let mut changed = true;
    while changed {
        changed = false;
        for w in 0..order.len().saturating_sub(1) {
            let (a, b) = (values[order[w]], values[order[w + 1]]);
            let scale = a.re.abs().max(b.re.abs()).max(1.0);
            if (b.re - a.re).abs() <= TIE_TOL * scale && b.im < a.im {
                order.swap(w, w + 1);
                changed = true;
            }
        }
    }
    order
}

fn schur_eigenvalues(m: &CMatrix, want_vectors: bool) -> Result<(CMatrix, Option<CMatrix>), SolveError> {
    if m.dim() == 0 {
        return Err(SolveError::Empty);
    }
    if !m.is_finite() {
        return Err(SolveError::NonFinite);
    }
    let mut h = m.clone();
    let mut z = hessenberg(&mut h, want_vectors);
    schur(&mut h, z.as_mut())?;
    Ok((h, z))
}

/// All eigenvalues of `m`, sorted, without eigenvectors.
pub fn eigenvalues_of(m: &CMatrix) -> Result<Vec<Complex64>, SolveError> {
    let (t, _) = schur_eigenvalues(m, false)?;
    let values: Vec<Complex64> = (0..t.dim()).map(|i| t[(i, i)]).collect();
    Ok(sorted_order(&values).into_iter().map(|i| values[i]).collect())
}

/// Full eigendecomposition of a dense complex matrix.
pub fn spectrum_of(m: &CMatrix) -> Result<Spectrum, SolveError> {
    let (t, z) = schur_eigenvalues(m, true)?;
    let z = z.expect("Schur vectors requested");
    let n = t.dim();
    let norm = m.frobenius_norm();
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let tri = triangular_eigenvectors(&t);
    let order = sorted_order(&values);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for (pos, &k) in order.iter().enumerate() {
        let x = &tri[k];
        let mut v = z.mul_vec(x);
        let len = vector_norm(&v);
        for c in v.iter_mut() {
            *c /= len;
        }
        let mv = m.mul_vec(&v);
        let residual = vector_norm(
            &mv.iter()
                .zip(&v)
                .map(|(a, c)| a - values[k] * c)
                .collect::<Vec<_>>(),
        );
        let bound = RESIDUAL_BOUND * norm.max(f64::MIN_POSITIVE);
        if !(residual <= bound) {
            return Err(SolveError::ResidualTooLarge { index: pos, residual, bound });
        }
        eigenvalues.push(values[k]);
        vectors.push(v);
        residuals.push(residual);
    }
    Ok(Spectrum {
        eigenvalues,
        vectors,
        residuals,
        ordering: SpectrumOrdering::RealThenImag,
        matrix_norm: norm,
    })
}

/// Eigenpairs of the Hamiltonian, sorted by ascending real part.
pub fn solve_spectrum(m: &HamiltonianMatrix) -> Result<Spectrum, SolveError> {
    spectrum_of(m.entries())
}

/// Eigenvalues only; the same Schur iteration as [`solve_spectrum`], so the
/// values agree bitwise.
pub fn solve_eigenvalues(m: &HamiltonianMatrix) -> Result<Vec<Complex64>, SolveError> {
    eigenvalues_of(m.entries())
}

/// Rotates a unit vector so its largest-magnitude component is real and positive.
pub fn fix_vector_phase(v: &mut [Complex64]) {
    let Some((idx, _)) = v
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, z)| {
            let m = z.norm();
            match best {
                Some((_, bm)) if bm >= m => best,
                _ => Some((i, m)),
            }
        })
    else {
        return;
    };
    let pivot = v[idx];
    let magnitude = pivot.norm();
    if magnitude == 0.0 {
        return;
    }
    let phase = pivot.conj() / magnitude;
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[idx] = Complex64::new(v[idx].re, 0.0);
}

/// Applies [`fix_vector_phase`] to every coefficient vector.
pub fn fix_phase(mut spectrum: Spectrum) -> Spectrum {
    for v in spectrum.vectors.iter_mut() {
        fix_vector_phase(v);
    }
    spectrum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two_complex_symmetric() {
        let m = CMatrix::from_row_major(2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let s = fix_phase(spectrum_of(&m).unwrap());
        // Both eigenvalues have zero real part; ordered by imaginary part.
        assert!((s.eigenvalues[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((s.eigenvalues[1] - c(0.0, 1.0)).norm() < 1e-14);
        let r = 0.5_f64.sqrt();
        let minus = &s.vectors[0];
        let plus = &s.vectors[1];
        assert!((plus[0] - c(r, 0.0)).norm() < 1e-12 && (plus[1] - c(r, 0.0)).norm() < 1e-12);
        // (1, −1)/√2 up to the gauge: largest component (first) real positive.
        assert!((minus[0] - c(r, 0.0)).norm() < 1e-12 && (minus[1] + c(r, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn diagonal_matrix_sorted() {
        let m = CMatrix::from_fn(4, |i, j| if i == j { c([3.0, -1.0, 2.0, 0.5][i], 0.0) } else { c(0.0, 0.0) });
        let s = spectrum_of(&m).unwrap();
        let re: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn jordan_like_block_converges() {
        // Defective 2×2 plus a perturbation: eigenvalues ±√ε.
        let m = CMatrix::from_row_major(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(1e-12, 0.0), c(1.0, 0.0)]);
        let s = eigenvalues_of(&m).unwrap();
        assert!((s[0].re - (1.0 - 1e-6)).abs() < 1e-9);
        assert!((s[1].re - (1.0 + 1e-6)).abs() < 1e-9);
    }

    #[test]
    fn random_matrix_residuals_and_trace() {
        let mut seed = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let m = CMatrix::from_fn(30, |_, _| c(next(), next()));
        let s = spectrum_of(&m).unwrap();
        let sum: Complex64 = s.eigenvalues.iter().sum();
        assert!((sum - m.trace()).norm() < 1e-10);
        for v in &s.vectors {
            assert!((vector_norm(v) - 1.0).abs() < 1e-12);
        }
        let values = eigenvalues_of(&m).unwrap();
        assert_eq!(values, s.eigenvalues);
    }

    #[test]
    fn hermitian_vectors_are_orthogonal() {
        let m = CMatrix::from_fn(12, |i, j| {
            let base = c((i + j) as f64 / 7.0, 0.0);
            if i == j {
                base + c(i as f64, 0.0)
            } else {
                base
            }
        });
        let s = spectrum_of(&m).unwrap();
        for i in 0..12 {
            for j in 0..i {
                assert!(inner(&s.vectors[i], &s.vectors[j]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn phase_fix_examples() {
        let mut v = vec![c(0.0, 1.0), c(0.0, 0.0)];
        fix_vector_phase(&mut v);
        assert_eq!(v, vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let mut w = vec![c(0.6, 0.0), c(0.0, 0.8)];
        fix_vector_phase(&mut w);
        let before = w.clone();
        fix_vector_phase(&mut w);
        assert_eq!(w, before);
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        let m = CMatrix::from_row_major(1, vec![c(f64::NAN, 0.0)]);
        assert_eq!(spectrum_of(&m).unwrap_err(), SolveError::NonFinite);
        assert_eq!(spectrum_of(&CMatrix::zeros(0)).unwrap_err(), SolveError::Empty);
    }
}
