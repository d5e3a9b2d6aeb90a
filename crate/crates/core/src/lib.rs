//! Numerical workbench for commutator inequalities in symmetric operator
//! norms at finite-matrix and step-function scale.
//!
//! The crate provides, as pure deterministic functions:
//!
//! - dense complex matrix algebra with a one-sided Jacobi SVD and a normal
//!   eigendecomposition ([`matrix`], [`svd`], [`eig`], [`ensemble`]);
//! - symmetric (quasi-)norms on singular profiles, dilation operators and
//!   Boyd indices for the concrete sequence spaces ([`norms`]);
//! - discrete spectral measures and double operator integrals, including the
//!   Ω symbol that maps `[A,T]` to `[A*,T]` for normal `A` ([`doi`]);
//! - the explicit operator constructions behind the quantitative failure of
//!   that map on the trace class: triangular truncation, rank-one averaging
//!   projections, the ι embedding and the diverging commutator pair
//!   ([`constructions`]);
//! - exact piecewise calculus for the Hardy and Calderón operators on
//!   finitely supported step functions, and the majorization ratio
//!   `μ(t,[X*,Y]) / (Sμ([X,Y]))(t)` ([`stepfn`]).
//!
//! Everything is seeded and bit-reproducible: random ensembles derive their
//! stream from `(seed, trial_index, kind, dim)` and no operation reads
//! global state.

pub mod constructions;
pub mod doi;
pub mod eig;
pub mod ensemble;
pub mod error;
pub mod matrix;
pub mod norms;
pub mod stepfn;
pub mod svd;

pub use error::{Error, Result};
pub use matrix::{commutator, Matrix};
pub use svd::{singular_values, support_projection, svd_right, SingularProfile};
