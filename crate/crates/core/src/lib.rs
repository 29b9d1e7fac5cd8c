//! Spectral and classical-transport toolkit for the Euclidean Dirac operator
//! in SU(N) gauge backgrounds.
//!
//! The crate is organised around the objects a semiclassical analysis of the
//! operator needs:
//!
//! * [`algebra`] - gamma matrices, su(N) generators, gauge potentials and
//!   field-strength tensors;
//! * [`symbols`] - Weyl symbols of the operator and its square, the
//!   eigen-decomposition of the principal symbol, and the classical
//!   Hamiltonian families of the various limits;
//! * [`dynamics`] - spin/colour precession, unitary transport matrices along
//!   trajectories, and the coupled Wong flow;
//! * [`weyl`] - mean spectral densities (multiplicity factors, the
//!   shifted-shell colour limit, Gaussian field averages) and the scaled
//!   condensate curve;
//! * [`torus`] - the exactly solvable case of constant SU(2) fields on a
//!   two-torus: closed-form spectrum, Bessel orbit sums and a smoothed
//!   exact-vs-semiclassical comparison;
//! * [`special`] / [`rng`] / [`report`] - supporting numerics, reproducible
//!   block RNG streams and tabular output.

pub mod algebra;
pub mod dynamics;
pub mod report;
pub mod rng;
pub mod special;
pub mod symbols;
pub mod torus;
pub mod weyl;

/// Dense complex matrix used for all spinor/colour objects (sizes stay tiny:
/// 2x2 up to 4Jx4J).
pub type CMat = nalgebra::DMatrix<num_complex::Complex<f64>>;

/// Complex scalar alias.
pub type C64 = num_complex::Complex<f64>;

pub(crate) fn c64(re: f64, im: f64) -> C64 {
    num_complex::Complex::new(re, im)
}

/// Largest absolute entry of `m - m^dagger`; zero for an exactly Hermitean
/// matrix.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest absolute entry of a complex matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}
