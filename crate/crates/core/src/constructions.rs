//! Explicit operator constructions: triangular truncation, the rank-one
//! averaging projection, the ι embedding into M_{(n+1)²}, the signed
//! diagonal averaging, and the intertwined pair (a, b) whose commutators
//! realize triangular truncation in the large-scale limit.
//!
//! # The intertwined pair
//!
//! For an n×n source A and a scale m ≥ 2, the pair lives in M_{(n+1)²}
//! (product basis |k,ℓ⟩, 1-based k,ℓ ∈ 1..n+1):
//!
//! - `a` is diagonal with entry m^k + i·m^ℓ at |k,ℓ⟩ — normal by inspection;
//! - `b` carries A's off-diagonal entries: A_{ℓ−1,k−1}/(m + i·m^ℓ − m^k − i·m)
//!   at row |1,ℓ⟩, column |k,1⟩, for 2 ≤ k ≠ ℓ ≤ n+1.
//!
//! Two algebraic facts drive everything downstream. First, `[a, b]` equals
//! `ι(A − diag A)` exactly: the commutator multiplies each b-entry by the
//! difference of two a-eigenvalues, which is precisely the entry's
//! denominator. Second, `[a*, b]` multiplies each b-entry by the *conjugate*
//! eigenvalue difference, giving the unimodular factor
//! (u + iv)/(u − iv) with u = m^k − m > 0, v = m^ℓ − m > 0, which tends to
//! +1 for k > ℓ and to −1 for k < ℓ as m → ∞. Writing T for triangular
//! truncation (sign sgn(row − col), so +1 below the diagonal), the factor
//! limit is −sgn((ℓ−1) − (k−1)) at the position where ι places the
//! (ℓ−1, k−1) source entry, hence
//!
//! ```text
//! [a*, b]  →  −ι(T(A))   as m → ∞.
//! ```
//!
//! The limit carries a minus sign; norms are blind to it (‖−M‖ = ‖M‖ for
//! every unitarily invariant (quasi-)norm here), but residuals are not, so
//! the convergence search below measures distance to −ι(T(A)).
//!
//! # Structure-aware residuals
//!
//! `[a*, b]` and ι-images are supported on the same n×n position lattice
//! {(r, c·(n+1)) : r, c ∈ 1..n}, and selecting those rows and columns is an
//! isometry for singular values. The convergence search therefore never
//! materializes the (n+1)²-dimensional matrices: it works with the n×n
//! coefficient matrix directly, which keeps the m-search cheap at any n.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::singular_values;

/// Scale guard: require (n+1)·log10(m) ≤ 300, keeping every power m^k,
/// k ≤ n+1, inside double-precision range.
pub const OVERFLOW_GUARD_DIGITS: f64 = 300.0;

/// Largest source dimension for which the (n+1)²-dimensional pair is
/// materialized (65² = 4225 is ~285 MB per matrix; beyond that the dense
/// embedding stops being a desk-scale object).
pub const MAX_COUNTEREXAMPLE_SOURCE_DIM: usize = 64;

/// Cap on the explicit 2^n averaging sum.
pub const MAX_AVERAGING_DIM: usize = 20;

/// The intertwined pair at a fixed scale: `a` normal (diagonal), `b` the
/// intertwiner, both of dimension (n+1)².
///
/// Invariant (verified by tests, not re-checked per construction):
/// `commutator(a, b) = iota(src − diag(src))` up to floating-point roundoff.
#[derive(Clone, Debug)]
pub struct CounterexamplePair {
    pub a: Matrix,
    pub b: Matrix,
    pub m: f64,
    pub n: usize,
}

/// Entrywise multiplication by sgn(row − col): +1 below the diagonal, −1
/// above, 0 on it.
pub fn triangular_truncation(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.dim(), |i, j| {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Greater => a.get(i, j),
            Less => -a.get(i, j),
            Equal => Complex64::new(0.0, 0.0),
        }
    })
}

/// Rank-one orthogonal projection (1/n)·J_n onto the all-ones vector.
pub fn davies_projection(n: usize) -> Matrix {
    assert!(n >= 1, "projection dimension must be at least 1");
    let v = 1.0 / n as f64;
    Matrix::from_fn(n, |_, _| Complex64::new(v, 0.0))
}

/// The embedding M_n → M_{(n+1)²} sending the (i, j) entry (0-based) to
/// position (i+1, (j+1)·(n+1)). Realizes Σ A_{k,ℓ}·E_{1,ℓ+1} ⊗ E_{k+1,1}
/// (1-based k,ℓ); the image's singular values are the source's padded with
/// zeros, because the map selects orthonormal rows and columns.
pub fn iota(a: &Matrix) -> Matrix {
    let n = a.dim();
    let stride = n + 1;
    let mut out = Matrix::zeros(stride * stride);
    for i in 0..n {
        for j in 0..n {
            out.set(i + 1, (j + 1) * stride, a.get(i, j));
        }
    }
    out
}

/// Complex division that scales by the denominator's largest component
/// first, so denominators near the double-precision range boundary (norms
/// up to ~1e300, whose naive |den|² overflows) divide accurately.
fn stable_div(num: Complex64, den: Complex64) -> Complex64 {
    let s = den.re.abs().max(den.im.abs());
    let dr = den.re / s;
    let di = den.im / s;
    let d2 = dr * dr + di * di; // in [1, 2]
    let nr = num.re / s;
    let ni = num.im / s;
    Complex64::new((nr * dr + ni * di) / d2, (ni * dr - nr * di) / d2)
}

fn validate_scale(n: usize, m: f64) -> Result<()> {
    if !m.is_finite() || m < 2.0 {
        return Err(Error::InvalidParameter(format!(
            "scale parameter must be a finite real >= 2, got {m}"
        )));
    }
    if (n + 1) as f64 * m.log10() > OVERFLOW_GUARD_DIGITS {
        return Err(Error::OverflowGuard {
            n,
            m,
            best_m: None,
            best_residual: None,
        });
    }
    Ok(())
}

/// m^1 … m^(n+1), index j holding m^j (index 0 unused, set to 1).
fn powers(n: usize, m: f64) -> Vec<f64> {
    let mut pow = vec![1.0f64; n + 2];
    for j in 1..=n + 1 {
        pow[j] = pow[j - 1] * m;
    }
    pow
}

/// Builds the intertwined pair at scale m.
pub fn counterexample_pair(src: &Matrix, m: f64) -> Result<CounterexamplePair> {
    let n = src.dim();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "counterexample source must be non-empty".into(),
        ));
    }
    validate_scale(n, m)?;
    if n > MAX_COUNTEREXAMPLE_SOURCE_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_COUNTEREXAMPLE_SOURCE_DIM,
        });
    }
    let stride = n + 1;
    let dim = stride * stride;
    let pow = powers(n, m);

    let mut a = Matrix::zeros(dim);
    for k in 1..=stride {
        for l in 1..=stride {
            let idx = (k - 1) * stride + (l - 1);
            a.set(idx, idx, Complex64::new(pow[k], pow[l]));
        }
    }

    let mut b = Matrix::zeros(dim);
    for k in 2..=stride {
        for l in 2..=stride {
            if k == l {
                continue;
            }
            // denominator m + i·m^ℓ − m^k − i·m = (m − m^k) + i(m^ℓ − m)
            let den = Complex64::new(m - pow[k], pow[l] - m);
            if den.re.abs().max(den.im.abs()) < 1e-300 {
                return Err(Error::DegenerateDenominator { k, ell: l, m });
            }
            let num = src.get(l - 2, k - 2);
            b.set(l - 1, (k - 1) * stride, stable_div(num, den));
        }
    }

    Ok(CounterexamplePair { a, b, m, n })
}

/// Operator-norm distance between `[a*, b]` at scale m and its m → ∞ limit
/// −ι(T(src)), computed on the shared n×n coefficient lattice (no
/// (n+1)²-dimensional matrix is formed), normalized by nothing — callers
/// scale by ‖src‖_F as needed.
pub fn adjoint_commutator_residual(src: &Matrix, m: f64) -> Result<f64> {
    let n = src.dim();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "counterexample source must be non-empty".into(),
        ));
    }
    validate_scale(n, m)?;
    let pow = powers(n, m);

    // Coefficient of [a*, b] at the lattice position carrying src[io, jo]
    // is src[io, jo]·(u + iv)/(u − iv) with u = m^(jo+2) − m, v = m^(io+2) − m;
    // the limit's coefficient there is −sgn(io − jo)·src[io, jo].
    let diff = Matrix::from_fn(n, |io, jo| {
        if io == jo {
            return Complex64::new(0.0, 0.0);
        }
        let u = pow[jo + 2] - m;
        let v = pow[io + 2] - m;
        let ratio = stable_div(Complex64::new(u, v), Complex64::new(u, -v));
        let limit = if io > jo { 1.0 } else { -1.0 };
        src.get(io, jo) * (ratio + limit)
    });
    Ok(singular_values(&diff)?.top())
}

/// Doubles m from `m_start` until the adjoint-commutator residual drops to
/// `tol·‖src‖_F`, then materializes the pair at the first admissible scale.
/// If the overflow guard trips first, the error reports the best scale
/// reached and the residual it achieved.
pub fn counterexample_converged(src: &Matrix, tol: f64, m_start: f64) -> Result<CounterexamplePair> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "convergence tolerance must be a finite positive real, got {tol}"
        )));
    }
    let threshold = tol * src.frobenius_norm();
    let mut m = m_start;
    let mut best: Option<(f64, f64)> = None; // (m, residual)
    loop {
        match adjoint_commutator_residual(src, m) {
            Ok(residual) => {
                if best.map_or(true, |(_, r)| residual <= r) {
                    best = Some((m, residual));
                }
                if residual <= threshold {
                    return counterexample_pair(src, m);
                }
            }
            Err(Error::OverflowGuard { n, m, .. }) => {
                return Err(Error::OverflowGuard {
                    n,
                    m,
                    best_m: best.map(|(bm, _)| bm),
                    best_residual: best.map(|(_, r)| r),
                });
            }
            Err(e) => return Err(e),
        }
        m *= 2.0;
    }
}

/// The average 2^{−n} Σ_ε U_ε A U_ε over all sign diagonals
/// U_ε = diag(ε₁…ε_n), ε ∈ {−1,1}^n, summed in a fixed binary tree over the
/// ε-enumeration. Equals diag_part(A) — exactly, not just within tolerance:
/// every tree partial sum over an aligned ε-block is ±2^L·a_ij (a power-of-
/// two multiple, exact in binary floating point) until the first level where
/// the block's signs cancel to exactly zero.
pub fn signed_diag_average(a: &Matrix) -> Result<Matrix> {
    let n = a.dim();
    if n > MAX_AVERAGING_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_AVERAGING_DIM,
        });
    }
    // ε_k = +1 when bit k of the enumeration index is 0, −1 when it is 1;
    // (U_ε A U_ε)_{ij} = ε_i ε_j a_ij.
    fn tree(aij: Complex64, i: usize, j: usize, base: usize, len: usize) -> Complex64 {
        if len == 1 {
            if ((base >> i) ^ (base >> j)) & 1 == 1 {
                -aij
            } else {
                aij
            }
        } else {
            let half = len / 2;
            tree(aij, i, j, base, half) + tree(aij, i, j, base + half, half)
        }
    }
    let total = 1usize << n;
    let scale = (total as f64).recip();
    Ok(Matrix::from_fn(n, |i, j| {
        tree(a.get(i, j), i, j, 0, total) * scale
    }))
}
