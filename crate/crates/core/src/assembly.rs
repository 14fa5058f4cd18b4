//! Hamiltonian matrix in the sine basis `u_n(y) = √(2/b) sin(nπy/b)`.
//!
//! Rows and columns are stored 0-based; entry `(i, j)` couples basis states
//! `n' = i + 1` and `n = j + 1`. Accessors taking quantum numbers say so.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::CMatrix;
use crate::model::{
    is_hermitian, BoxGeometry, RydbergUnits, SpectralBasisConfig, StripePotentials, UniformField,
};
use crate::quadrature::{self, QuadratureError};

/// Inputs a matrix was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub geometry: BoxGeometry,
    pub potentials: StripePotentials,
    pub field: UniformField,
    pub basis: SpectralBasisConfig,
}

/// Truncated Hamiltonian `M` of `M C = E C`, in Rydberg.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    entries: CMatrix,
    provenance: Provenance,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Element `M_{n', n}` by quantum numbers (1-based).
    pub fn element(&self, n_prime: usize, n: usize) -> Complex64 {
        self.entries[(n_prime - 1, n - 1)]
    }

    pub fn is_hermitian_input(&self, tol: f64) -> bool {
        is_hermitian(&self.provenance.potentials, &self.provenance.field, tol)
    }
}

/// `π²(nx0²/a² + n²/b²)`, the empty-box diagonal.
pub fn kinetic_diagonal(geometry: &BoxGeometry, nx0: usize, n: usize) -> f64 {
    RydbergUnits::box_energy(geometry, nx0, n)
}

/// Potential-only diagonal element of the striped matrix for basis state `n`.
pub fn striped_diagonal(geometry: &BoxGeometry, potentials: &StripePotentials, n: usize) -> Complex64 {
    let v = potentials.values();
    let b = geometry.b();
    let bounds = geometry.interfaces();
    let n = n as f64;
    let mut mean = v[3];
    let mut oscillating = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        mean += (v[i] - v[i + 1]) * (bounds[i] / b);
        oscillating += (v[i + 1] - v[i]) * (2.0 * PI * n * bounds[i] / b).sin();
    }
    mean + oscillating / (2.0 * PI * n)
}

/// Off-diagonal element `n' ≠ n` of the striped matrix.
pub fn striped_off_diagonal(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    n_prime: usize,
    n: usize,
) -> Complex64 {
    debug_assert_ne!(n_prime, n);
    let v = potentials.values();
    let b = geometry.b();
    let bounds = geometry.interfaces();
    let diff = n_prime as f64 - n as f64;
    let sum = (n_prime + n) as f64;
    let mut lower = Complex64::new(0.0, 0.0);
    let mut upper = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        let step = v[i] - v[i + 1];
        lower += step * (PI * diff * bounds[i] / b).sin();
        upper -= step * (PI * sum * bounds[i] / b).sin();
    }
    lower / (PI * diff) + upper / (PI * sum)
}

/// Off-diagonal element of the uniform-field matrix; zero when `n' + n` is even.
pub fn field_off_diagonal(geometry: &BoxGeometry, field: &UniformField, n_prime: usize, n: usize) -> Complex64 {
    debug_assert_ne!(n_prime, n);
    if (n_prime + n).is_multiple_of(2) {
        return Complex64::new(0.0, 0.0);
    }
    let sum = (n_prime + n) as f64;
    let diff = n_prime as f64 - n as f64;
    // (1 − (−1)^{n'+n}) = 2 for odd sums.
    -field.alpha() * (geometry.b() / (PI * PI)) * (1.0 / (sum * sum) - 1.0 / (diff * diff)) * 2.0
}

fn build(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    field: &UniformField,
    basis: &SpectralBasisConfig,
) -> HamiltonianMatrix {
    let use_stripes = !potentials.is_zero();
    let use_field = !field.is_zero();
    let entries = CMatrix::from_fn(basis.nmax(), |i, j| {
        let (n_prime, n) = (i + 1, j + 1);
        if i == j {
            let mut d = Complex64::new(kinetic_diagonal(geometry, basis.nx0(), n), 0.0);
            if use_stripes {
                d += striped_diagonal(geometry, potentials, n);
            }
            d
        } else {
            let mut e = Complex64::new(0.0, 0.0);
            if use_stripes {
                e += striped_off_diagonal(geometry, potentials, n_prime, n);
            }
            if use_field {
                e += field_off_diagonal(geometry, field, n_prime, n);
            }
            e
        }
    });
    HamiltonianMatrix {
        entries,
        provenance: Provenance {
            geometry: *geometry,
            potentials: *potentials,
            field: *field,
            basis: *basis,
        },
    }
}

/// Striped potential only, from the closed-form elements.
pub fn assemble_striped(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    basis: &SpectralBasisConfig,
) -> HamiltonianMatrix {
    build(geometry, potentials, &UniformField::zero(), basis)
}

/// Uniform field only. The field adds nothing to the diagonal.
pub fn assemble_field(
    geometry: &BoxGeometry,
    field: &UniformField,
    basis: &SpectralBasisConfig,
) -> HamiltonianMatrix {
    build(geometry, &StripePotentials::zero(), field, basis)
}

/// Stripes plus field, with the kinetic diagonal counted once.
pub fn assemble_combined(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    field: &UniformField,
    basis: &SpectralBasisConfig,
) -> HamiltonianMatrix {
    build(geometry, potentials, field, basis)
}

/// Same matrix with every potential overlap `(2/b)∫ sin(n'πy/b) V(y) sin(nπy/b) dy`
/// integrated numerically; the kinetic diagonal stays analytic.
///
/// Panels are split at `b1`, `b/2`, `b3` so each sees a smooth integrand.
/// The matrix is symmetric by construction of the integrand, so only the
/// upper triangle is integrated.
pub fn assemble_by_quadrature(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    field: &UniformField,
    basis: &SpectralBasisConfig,
    quad_tol: f64,
) -> Result<HamiltonianMatrix, QuadratureError> {
    let dim = basis.nmax();
    let b = geometry.b();
    let edges = geometry.edges();
    let mut entries = CMatrix::zeros(dim);
    let has_potential = !potentials.is_zero() || !field.is_zero();
    for i in 0..dim {
        entries[(i, i)] = Complex64::new(kinetic_diagonal(geometry, basis.nx0(), i + 1), 0.0);
        if !has_potential {
            continue;
        }
        for j in i..dim {
            let (kp, k) = ((i + 1) as f64 * PI / b, (j + 1) as f64 * PI / b);
            let integrand = |y: f64| {
                // GK15 never samples panel endpoints, so y is strictly inside one stripe.
                let v = potentials.at(geometry, y) + field.at(geometry, y);
                v * ((2.0 / b) * (kp * y).sin() * (k * y).sin())
            };
            let value = quadrature::integrate_piecewise(
                integrand,
                &edges,
                quad_tol,
                quadrature::DEFAULT_MAX_PANELS,
            )?;
            entries[(i, j)] += value;
            if i != j {
                entries[(j, i)] = entries[(i, j)];
            }
        }
    }
    Ok(HamiltonianMatrix {
        entries,
        provenance: Provenance {
            geometry: *geometry,
            potentials: *potentials,
            field: *field,
            basis: *basis,
        },
    })
}

/// Sum of the closed-form diagonal, computed element by element without
/// building the matrix.
pub fn closed_form_trace(
    geometry: &BoxGeometry,
    potentials: &StripePotentials,
    basis: &SpectralBasisConfig,
) -> Complex64 {
    (1..=basis.nmax())
        .map(|n| kinetic_diagonal(geometry, basis.nx0(), n) + striped_diagonal(geometry, potentials, n))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(nmax: usize) -> SpectralBasisConfig {
        SpectralBasisConfig::new(1, nmax).unwrap()
    }

    #[test]
    fn empty_box_is_diagonal_baseline() {
        let g = BoxGeometry::reference();
        let m = assemble_striped(&g, &StripePotentials::zero(), &basis(10));
        assert!((m.element(1, 1).re - PI * PI * (1.0 / 3.0 + 0.5)).abs() < 1e-12);
        assert!((m.element(1, 1).re - 8.2247).abs() < 1e-4);
        for i in 0..10 {
            for j in 0..10 {
                if i != j {
                    assert_eq!(m.entries()[(i, j)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn constant_potential_is_identity_shift() {
        let g = BoxGeometry::reference();
        let shift = c(3.25, -1.5);
        let base = assemble_striped(&g, &StripePotentials::zero(), &basis(20));
        let m = assemble_striped(&g, &StripePotentials::uniform(shift).unwrap(), &basis(20));
        assert!(m.entries().max_abs_diff(&base.entries().shifted(shift)) < 1e-12);
    }

    #[test]
    fn field_vanishes_for_even_index_sums() {
        let g = BoxGeometry::reference();
        let f = UniformField::new(c(2.0, 7.0)).unwrap();
        let m = assemble_field(&g, &f, &basis(6));
        assert_eq!(m.element(1, 3), c(0.0, 0.0));
        assert_eq!(m.element(2, 4), c(0.0, 0.0));
        assert_ne!(m.element(1, 2), c(0.0, 0.0));
        let base = assemble_striped(&g, &StripePotentials::zero(), &basis(6));
        for n in 0..6 {
            assert_eq!(m.entries()[(n, n)], base.entries()[(n, n)]);
        }
    }

    #[test]
    fn field_element_one_two() {
        let g = BoxGeometry::reference();
        let f = UniformField::new(c(1.0, 0.0)).unwrap();
        let m = assemble_field(&g, &f, &basis(2));
        let expected = 16.0 * 2.0_f64.sqrt() / (9.0 * PI * PI);
        assert!((m.element(1, 2).re - expected).abs() < 1e-14);
        assert!((expected - 0.25468).abs() < 1e-4);
    }

    #[test]
    fn zero_field_and_zero_stripes_reduce_combined() {
        let g = BoxGeometry::reference();
        let p = StripePotentials::new([c(5.0, 1.0), c(-2.0, 0.0), c(3.0, 4.0), c(0.5, 0.0)]).unwrap();
        let f = UniformField::new(c(0.0, 20.0)).unwrap();
        let b = basis(15);
        assert_eq!(
            assemble_combined(&g, &p, &UniformField::zero(), &b).entries(),
            assemble_striped(&g, &p, &b).entries()
        );
        assert_eq!(
            assemble_combined(&g, &StripePotentials::zero(), &f, &b).entries(),
            assemble_field(&g, &f, &b).entries()
        );
    }

    #[test]
    fn combined_equals_sum_minus_baseline() {
        let g = BoxGeometry::reference();
        let p = StripePotentials::new([c(0.0, 5.0), c(0.0, -5.0), c(0.0, 5.0), c(0.0, -5.0)]).unwrap();
        let f = UniformField::new(c(0.0, 20.0)).unwrap();
        let b = basis(12);
        let combined = assemble_combined(&g, &p, &f, &b);
        let s = assemble_striped(&g, &p, &b);
        let e = assemble_field(&g, &f, &b);
        let base = assemble_striped(&g, &StripePotentials::zero(), &b);
        let sum = CMatrix::from_fn(12, |i, j| s.entries()[(i, j)] + e.entries()[(i, j)] - base.entries()[(i, j)]);
        assert!(combined.entries().max_abs_diff(&sum) < 1e-12);
    }

    #[test]
    fn quadrature_of_empty_box_is_exact_baseline() {
        let g = BoxGeometry::reference();
        let b = basis(8);
        let q = assemble_by_quadrature(&g, &StripePotentials::zero(), &UniformField::zero(), &b, 1e-10).unwrap();
        let m = assemble_striped(&g, &StripePotentials::zero(), &b);
        assert_eq!(q.entries(), m.entries());
    }

    #[test]
    fn striped_matrix_is_complex_symmetric() {
        let g = BoxGeometry::reference();
        let p = StripePotentials::new([c(1.0, 2.0), c(-3.0, 0.5), c(7.0, -1.0), c(0.0, 9.0)]).unwrap();
        let m = assemble_striped(&g, &p, &basis(25));
        assert!(m.entries().max_abs_diff(&m.entries().transpose()) < 1e-13);
    }
}
