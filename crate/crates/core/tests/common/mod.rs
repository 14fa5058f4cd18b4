#![allow(dead_code)]

use stripedbox_core::{BoxGeometry, Complex64, SpectralBasisConfig, StripePotentials};

/// Hermitian reference sets: stripe potentials and the five lowest levels (Ry).
pub const REFERENCE_SETS: [(&str, [f64; 4], [f64; 5]); 7] = [
    ("I", [100.0, -100.0, 100.0, -100.0], [-72.61, -6.131, 18.88, 112.7, 134.9]),
    ("II", [100.0, -100.0, -100.0, 100.0], [-43.67, 83.23, 130.1, 145.2, 203.8]),
    ("III", [-100.0, 100.0, 100.0, -100.0], [-72.69, -72.22, -3.023, 0.230, 98.42]),
    ("IV", [100.0, -100.0, 100.0, 100.0], [12.56, 119.9, 132.9, 171.9, 211.8]),
    ("V", [-100.0, 100.0, -100.0, -100.0], [-80.60, -72.45, -32.74, -1.211, 46.75]),
    ("VI", [100.0, -100.0, -100.0, -100.0], [-85.05, -50.30, 6.566, 81.70, 132.2]),
    ("VII", [-100.0, 100.0, 100.0, 100.0], [-72.45, -1.436, 101.7, 121.6, 161.1]),
];

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn geom() -> BoxGeometry {
    BoxGeometry::reference()
}

pub fn basis(nmax: usize) -> SpectralBasisConfig {
    SpectralBasisConfig::new(1, nmax).unwrap()
}

pub fn real(v: [f64; 4]) -> StripePotentials {
    StripePotentials::real(v).unwrap()
}

pub fn pt(v1: Complex64, v2: Complex64) -> StripePotentials {
    StripePotentials::new([v1, v2, v2.conj(), v1.conj()]).unwrap()
}
