//! Reproducible random streams for Monte Carlo estimates.
//!
//! Samples are organised in fixed-size blocks; block `i` draws from a
//! ChaCha stream derived from `(seed, i)`. Estimates therefore do not
//! depend on how blocks are partitioned over threads, and rerunning with
//! the same seed reproduces every draw bit for bit.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::LieAlgebraRep;
use crate::{c64, CMat};

pub const BLOCK_SIZE: u64 = 4096;

/// Factory for per-block ChaCha streams.
#[derive(Debug, Clone, Copy)]
pub struct BlockRng {
    seed: u64,
}

impl BlockRng {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    /// Stream for the given block index.
    pub fn block(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Run `f` once per sample, handing it the block-local stream;
    /// the stream advances sequentially inside each block.
    pub fn for_each_sample<F: FnMut(&mut ChaCha8Rng)>(&self, samples: u64, mut f: F) {
        let blocks = samples.div_ceil(BLOCK_SIZE);
        for b in 0..blocks {
            let mut rng = self.block(b);
            let in_block = BLOCK_SIZE.min(samples - b * BLOCK_SIZE);
            for _ in 0..in_block {
                f(&mut rng);
            }
        }
    }
}

/// Standard normal draw.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniform direction on the unit sphere `S^{d-1}`.
pub fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| normal(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Haar-distributed unitary via the QR decomposition of a complex Ginibre
/// matrix, with the diagonal phases of R absorbed into Q.
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let ginibre = CMat::from_fn(n, n, |_, _| c64(normal(rng), normal(rng)));
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c64(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}

/// A point of the coadjoint orbit through `reference`: conjugate the
/// reference colour matrix by a Haar-random unitary and project back onto
/// the generator basis. Preserves the quadratic and cubic invariants.
pub fn orbit_sample(rng: &mut ChaCha8Rng, algebra: &LieAlgebraRep, reference: &[f64]) -> Vec<f64> {
    let m = algebra.matrix_from_coeffs(reference);
    let u = haar_unitary(rng, algebra.dim_rep());
    let rotated = &u * m * u.adjoint();
    algebra.coeffs_from_matrix(&rotated)
}

/// Random constant potential with coefficients uniform in
/// `[-scale, scale]`.
pub fn random_constant_coeffs(
    rng: &mut ChaCha8Rng,
    dim: usize,
    num_generators: usize,
    scale: f64,
) -> DMatrix<f64> {
    DMatrix::from_fn(dim, num_generators, |_, _| {
        rng.random_range(-scale..scale)
    })
}
