//! Seeded random matrix ensembles.
//!
//! Every draw is a pure function of `(seed, trial_index, kind, dim)`: the
//! four values key a dedicated ChaCha8 stream, so identical specs reproduce
//! identical matrices bit for bit, across runs and across machines with IEEE
//! doubles. No global RNG state exists anywhere in the crate.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::singular_values;

/// Families of random matrices the experiments draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    /// `U diag(λ) U*` with λ uniform in the unit square `[0,1]² ⊂ ℂ` and
    /// `U` from [`EnsembleKind::HaarUnitary`]; normal by construction.
    NormalInUnitSquare,
    /// Orthonormalized complex Gaussian matrix with a deterministic phase
    /// gauge (first non-negligible entry of each column made positive real).
    HaarUnitary,
    /// Complex Gaussian matrix rescaled so its operator norm is 1.
    Contraction,
    /// Hermitian part `(G + G*)/2` of a complex Gaussian matrix; exactly
    /// self-adjoint entry by entry.
    SelfAdjoint,
}

impl EnsembleKind {
    fn stream_id(self) -> u64 {
        match self {
            EnsembleKind::NormalInUnitSquare => 0,
            EnsembleKind::HaarUnitary => 1,
            EnsembleKind::Contraction => 2,
            EnsembleKind::SelfAdjoint => 3,
        }
    }
}

/// Full description of one random draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomEnsembleSpec {
    pub dim: usize,
    pub kind: EnsembleKind,
    pub seed: u64,
    pub trial_index: u64,
}

fn stream(spec: &RandomEnsembleSpec) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&spec.seed.to_le_bytes());
    key[8..16].copy_from_slice(&spec.trial_index.to_le_bytes());
    key[16..24].copy_from_slice(&spec.kind.stream_id().to_le_bytes());
    key[24..32].copy_from_slice(&(spec.dim as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn gaussian_matrix(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(dim, |_, _| gaussian(rng))
}

/// Haar-style unitary: modified Gram–Schmidt on a complex Gaussian matrix
/// (with one re-orthogonalization pass), then each column is rotated so its
/// first entry of non-negligible modulus is positive real. The gauge fixing
/// removes the phase freedom and makes the draw reproducible.
fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        loop {
            let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
            // two Gram-Schmidt passes: the second mops up the O(ε·cond)
            // residue the first leaves behind
            for _ in 0..2 {
                for q in &cols {
                    let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= overlap * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for vi in v.iter_mut() {
                    *vi /= norm;
                }
                // phase gauge: first entry with modulus above threshold
                // becomes positive real
                if let Some(z) = v.iter().find(|z| z.norm() > 1e-12) {
                    let phase = z.conj() / z.norm();
                    for vi in v.iter_mut() {
                        *vi *= phase;
                    }
                }
                cols.push(v);
                break;
            }
            // linearly dependent draw (vanishing probability): redraw
        }
    }
    Matrix::from_fn(dim, |i, j| cols[j][i])
}

/// Draws the matrix described by `spec`. Identical specs give bitwise
/// identical results.
pub fn sample(spec: &RandomEnsembleSpec) -> Result<Matrix> {
    if spec.dim == 0 {
        return Err(Error::InvalidParameter(
            "ensemble dimension must be at least 1".into(),
        ));
    }
    let mut rng = stream(spec);
    match spec.kind {
        EnsembleKind::HaarUnitary => Ok(haar_unitary(spec.dim, &mut rng)),
        EnsembleKind::NormalInUnitSquare => {
            let lambda: Vec<Complex64> = (0..spec.dim)
                .map(|_| Complex64::new(rng.gen::<f64>(), rng.gen::<f64>()))
                .collect();
            let u = haar_unitary(spec.dim, &mut rng);
            Ok(u.mul(&Matrix::diag(&lambda)).mul(&u.adjoint()))
        }
        EnsembleKind::Contraction => loop {
            let g = gaussian_matrix(spec.dim, &mut rng);
            let top = singular_values(&g)?.top();
            if top > 0.0 {
                return Ok(g.scale_re(1.0 / top));
            }
        },
        EnsembleKind::SelfAdjoint => {
            let g = gaussian_matrix(spec.dim, &mut rng);
            Ok(g.add(&g.adjoint()).scale_re(0.5))
        }
    }
}
