//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors surfaced by matrix algebra, spectral computations, and the
/// explicit operator constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two operands were expected to act on the same space.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// The normality test `‖A*A − AA*‖_F ≤ tol·‖A‖_F²` failed.
    #[error("matrix is not normal: relative defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotNormal { defect: f64, tol: f64 },

    /// An iterative solver (Jacobi sweep schedule) did not reach its
    /// stationarity criterion within the sweep budget.
    #[error("iterative solver failed to converge: {context}")]
    NonConvergence { context: &'static str },

    /// Two eigenvalue clusters sit within twice the clustering resolution
    /// of each other, so the grouping is ill-posed at that resolution.
    #[error("eigenvalue clustering is ambiguous: gap {gap:.3e} within 2×cluster_tol {cluster_tol:.3e}")]
    ClusterAmbiguity { gap: f64, cluster_tol: f64 },

    /// The scale parameter would push matrix entries m^(n+1) outside the
    /// range representable in double precision ((n+1)·log10(m) ≤ 300).
    /// When raised by the convergence search, carries the best admissible
    /// scale reached and the residual it achieved.
    #[error("overflow guard: m^(n+1) out of double-precision range (n={n}, m={m:e}{})",
        best_m.map(|bm| format!(", best m {bm:e}, residual {:.3e}", best_residual.unwrap_or(f64::NAN))).unwrap_or_default())]
    OverflowGuard {
        n: usize,
        m: f64,
        best_m: Option<f64>,
        best_residual: Option<f64>,
    },

    /// The requested dimension exceeds what the operation supports.
    #[error("dimension {dim} too large for this operation (maximum {max})")]
    DimensionTooLarge { dim: usize, max: usize },

    /// A majorization ratio was requested for a vanishing commutator.
    #[error("commutator is numerically zero; ratio undefined")]
    ZeroCommutator,

    /// The intertwiner entry denominator m + i·m^ℓ − m^k − i·m vanished
    /// numerically. Provably impossible for real m ≥ 2 and k ≠ ℓ ≥ 2, but
    /// asserted rather than assumed.
    #[error("degenerate denominator at (k,ℓ)=({k},{ell}) for m={m:e}")]
    DegenerateDenominator { k: usize, ell: usize, m: f64 },

    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Writing an output file failed.
    #[error("io error: {0}")]
    Io(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
