//! Hermitian eigensolver (two-sided cyclic Jacobi) and the normal
//! eigendecomposition built on top of it.
//!
//! A normal matrix A splits as A = H + iK with H = (A+A*)/2 and
//! K = (A−A*)/(2i) a commuting Hermitian pair, so A shares eigenvectors with
//! the single Hermitian combination `cos(θ)·H + sin(θ)·K` whenever that
//! combination separates the joint spectrum. The solver diagonalizes the
//! combination for a fixed arbitrary angle, reads A's eigenvalues off as
//! Rayleigh quotients, and verifies the reconstruction residual; in the
//! (measure-zero) event that two distinct joint eigenvalues collide for the
//! chosen angle, it retries with the next angle in a fixed schedule. Exact
//! eigenvalue multiplicities need no special casing: any orthonormal basis
//! of the joint eigenspace reconstructs A.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Sweep budget for the Hermitian Jacobi iteration.
const MAX_SWEEPS: usize = 64;
/// Off-diagonal entries below this multiple of ‖H‖_F are stationary.
const HERMITIAN_REL_TOL: f64 = 1e-14;
/// Default relative normality tolerance `‖A*A − AA*‖_F ≤ tol·‖A‖_F²`.
pub const DEFAULT_NORMALITY_TOL: f64 = 1e-10;
/// Required reconstruction accuracy `‖A − VΛV*‖_F ≤ tol·‖A‖_F`.
const RECONSTRUCTION_TOL: f64 = 1e-10;
/// Required orthonormality accuracy `‖V*V − I‖_F`.
const UNITARITY_TOL: f64 = 1e-12;
/// Fixed, arbitrary mixing angles for H/K; the first one almost always
/// succeeds, the rest are deterministic fallbacks.
const MIXING_ANGLES: [f64; 3] = [0.6180339887498949, 1.3247179572447460, 0.3660254037844386];

/// Eigendecomposition of a normal matrix: `A = V diag(eigenvalues) V*`,
/// column `j` of `vectors` paired with `eigenvalues[j]`.
///
/// Eigenvalues are ordered by descending modulus, ties broken
/// lexicographically by (real, imaginary).
#[derive(Clone, Debug)]
pub struct NormalEigen {
    pub eigenvalues: Vec<Complex64>,
    pub vectors: Matrix,
}

impl NormalEigen {
    /// Column `j` of the eigenvector matrix.
    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        (0..self.vectors.dim())
            .map(|i| self.vectors.get(i, j))
            .collect()
    }

    /// `V diag(λ) V*`.
    pub fn reconstruct(&self) -> Matrix {
        let lambda = Matrix::diag(&self.eigenvalues);
        self.vectors.mul(&lambda).mul(&self.vectors.adjoint())
    }
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix by cyclic
/// two-sided Jacobi rotations. The input must be Hermitian; only the
/// Hermitian part of the stored entries is consulted through the rotation
/// formulas, so tiny adjoint-asymmetry at roundoff level is harmless.
pub fn hermitian_eigen(h: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = h.dim();
    let mut m = h.clone();
    let mut v = Matrix::identity(n);
    let scale = h.frobenius_norm();
    let threshold = HERMITIAN_REL_TOL * scale;

    let mut converged = n < 2 || scale == 0.0;
    'sweeps: for _ in 0..MAX_SWEEPS {
        let mut rotations = 0usize;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let g = m.get(p, q);
                let abs_g = g.norm();
                if abs_g <= threshold {
                    continue;
                }
                rotations += 1;
                let phase = g / abs_g;
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (2.0 * abs_g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // M <- R* M R with R the identity outside the (p,q) plane,
                // R_pp = R_qq = c, R_pq = s·phase, R_qp = −s·conj(phase).
                for i in 0..n {
                    let mip = m.get(i, p);
                    let miq = m.get(i, q);
                    m.set(i, p, c * mip - s * phase.conj() * miq);
                    m.set(i, q, s * phase * mip + c * miq);
                }
                for j in 0..n {
                    let mpj = m.get(p, j);
                    let mqj = m.get(q, j);
                    m.set(p, j, c * mpj - s * phase * mqj);
                    m.set(q, j, s * phase.conj() * mpj + c * mqj);
                }
                // The rotation zeroes the (p,q) entry in exact arithmetic;
                // pin it to keep the working copy Hermitian bit-for-bit.
                m.set(p, q, Complex64::new(0.0, 0.0));
                m.set(q, p, Complex64::new(0.0, 0.0));

                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, c * vip - s * phase.conj() * viq);
                    v.set(i, q, s * phase * vip + c * viq);
                }
            }
        }
        if rotations == 0 {
            converged = true;
            break 'sweeps;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            context: "Hermitian Jacobi exceeded its sweep budget",
        });
    }

    let mut evals: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| evals[a].total_cmp(&evals[b]));
    evals = order.iter().map(|&i| evals[i]).collect();
    let v_sorted = Matrix::from_fn(n, |i, j| v.get(i, order[j]));
    Ok((evals, v_sorted))
}

/// Spectral decomposition of a normal matrix.
///
/// Precondition: `‖A*A − AA*‖_F ≤ normality_tol · ‖A‖_F²`. Postconditions:
/// `‖A − VΛV*‖_F ≤ 1e−10·‖A‖_F` and `‖V*V − I‖_F ≤ 1e−12` (both verified
/// before returning).
pub fn normal_eigendecomposition(a: &Matrix, normality_tol: f64) -> Result<NormalEigen> {
    let defect = a.normality_defect();
    if defect > normality_tol {
        return Err(Error::NotNormal {
            defect,
            tol: normality_tol,
        });
    }
    let n = a.dim();
    if n == 0 {
        return Ok(NormalEigen {
            eigenvalues: vec![],
            vectors: Matrix::zeros(0),
        });
    }

    let adj = a.adjoint();
    // Hermitian part and (Hermitian) anti-Hermitian part: A = H + iK.
    let h = a.add(&adj).scale_re(0.5);
    let k = a.sub(&adj).scale(Complex64::new(0.0, -0.5));
    let scale = a.frobenius_norm();

    for theta in MIXING_ANGLES {
        let mix = h.scale_re(theta.cos()).add(&k.scale_re(theta.sin()));
        let (_, v) = hermitian_eigen(&mix)?;

        // Rayleigh quotients λ_j = v_j* A v_j.
        let av = a.mul(&v);
        let eigenvalues: Vec<Complex64> = (0..n)
            .map(|j| (0..n).map(|i| v.get(i, j).conj() * av.get(i, j)).sum())
            .collect();

        let candidate = NormalEigen {
            eigenvalues,
            vectors: v,
        };
        let recon_err = candidate.reconstruct().sub(a).frobenius_norm();
        let unit_err = candidate
            .vectors
            .adjoint()
            .mul(&candidate.vectors)
            .sub(&Matrix::identity(n))
            .frobenius_norm();
        if recon_err <= RECONSTRUCTION_TOL * scale && unit_err <= UNITARITY_TOL {
            return Ok(sort_eigenpairs(candidate));
        }
    }
    Err(Error::NonConvergence {
        context: "normal eigendecomposition: no mixing angle separated the spectrum",
    })
}

/// Descending modulus, ties lexicographic by (re, im) — the deterministic
/// eigenvalue order used everywhere.
fn sort_eigenpairs(e: NormalEigen) -> NormalEigen {
    let n = e.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (e.eigenvalues[i], e.eigenvalues[j]);
        b.norm()
            .total_cmp(&a.norm())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
    let eigenvalues = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(n, |i, j| e.vectors.get(i, order[j]));
    NormalEigen {
        eigenvalues,
        vectors,
    }
}
