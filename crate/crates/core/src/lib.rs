//! Spectral solver for a spinless particle in a rigid rectangular box whose
//! interior is divided into four constant-potential stripes along `y`, with an
//! optional uniform (possibly complex) electric field.
//!
//! The wave function is expanded in the empty-box sine basis with the `x`
//! quantum number held fixed, which turns the Schrödinger equation into a
//! dense complex-symmetric matrix eigenproblem. Real potentials give a
//! Hermitian problem; balanced gain/loss stripes give a PT-symmetric one whose
//! spectrum is either real or made of complex-conjugate pairs.
//!
//! Units: lengths in Bohr radii, energies in Rydberg, so that `ħ²/2μ = 1`.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assembly;
pub mod assignment;
pub mod eigen;
pub mod linalg;
pub mod model;
pub mod pt;
pub mod quadrature;
pub mod validation;
pub mod wavefunction;

pub use num_complex::Complex64;

pub use assembly::{
    assemble_by_quadrature, assemble_combined, assemble_field, assemble_striped,
    HamiltonianMatrix, Provenance,
};
pub use eigen::{fix_phase, solve_eigenvalues, solve_spectrum, SolveError, Spectrum};
pub use model::{
    is_hermitian, is_pt_symmetric, BoxGeometry, ModelError, RydbergUnits, SpectralBasisConfig,
    StripePotentials, UniformField,
};
pub use pt::{
    classify_eigenvalues, classify_spectrum, detect_crossovers, find_exceptional_point,
    run_sweep, run_sweep_with, CrossoverEvent, LevelOrdering, LinearTemplate, Phase, SweepError,
    SweepResult, SweepSpec, Tracking, TransitionIndicator,
};
pub use wavefunction::{density_grid, DensityGrid, WavefunctionError, WavefunctionField};
