//! Symmetric (quasi-)norms on singular profiles, dilation operators on
//! finite sequences, and Boyd indices for the concrete sequence spaces.
//!
//! # Discrete conventions
//!
//! A profile `s₁ ≥ s₂ ≥ …` embeds into functions on `(0,∞)` as the
//! right-continuous step function `μ(t) = s_{⌊t⌋+1}`. Under that embedding:
//!
//! - weak-L1: `sup_{t>0} t·μ(t)` is attained at integer right endpoints, so
//!   the discrete norm is exactly `max_k k·s_k` (1-based k);
//! - Λ_log: integrating `μ` against the weight `1/(1+t)` piece by piece
//!   gives the exact weights `∫_{k−1}^{k} dt/(1+t) = ln((k+1)/k)`, so the
//!   discrete norm is `Σ_k s_k·ln((k+1)/k)`. The continuous definition does
//!   not single out a discrete normalization; this exact-integral convention
//!   is ours.
//!
//! # Dilation operator norms (closed forms)
//!
//! `dilate_up` (each entry repeated n times) and `dilate_down` (the
//! subsequence at indices n, 2n, …) are bounded operators on the cone of
//! non-increasing non-negative sequences — the natural domain here, since
//! every profile is a non-increasing rearrangement. Their exact operator
//! norms on that cone:
//!
//! - ℓ_p, up: `‖D_n x‖_p^p = n·‖x‖_p^p` for every x, so the norm is n^{1/p}
//!   (p = ∞: repetition preserves the sup, norm 1).
//! - ℓ_p, down: for non-increasing x, `x_{kn}^p ≤ (x_{(k−1)n+1}^p + … +
//!   x_{kn}^p)/n`, so `‖D_{1/n}x‖_p^p ≤ ‖x‖_p^p/n`, with equality approached
//!   by flat sequences; the norm is n^{−1/p} (p = ∞: take x = e₁ repeated,
//!   norm 1).
//! - weak-ℓ1, up: `k·(D_n x)_k = n·(⌈k/n⌉·x_{⌈k/n⌉})·(k/(n⌈k/n⌉)) ≤ n‖x‖`,
//!   attained at x = e₁; the norm is n.
//! - weak-ℓ1, down: `k·x_{kn} = (kn·x_{kn})/n ≤ ‖x‖/n`, attained on flat
//!   sequences; the norm is 1/n.
//!
//! The Boyd indices follow: `β = lim ln‖D_n‖/ln n` and
//! `α = lim ln‖D_{1/n}‖/ln(1/n)` equal `(1/p, 1/p)` for ℓ_p (so `(1,1)` for
//! ℓ₁ and `(0,0)` for ℓ∞) and `(1,1)` for weak-ℓ1. [`boyd_indices`] returns
//! these limits in closed form — the defining quotients are constant in n
//! for every space implemented here, which the function verifies against
//! [`dilation_norm_closed`] at each n before returning.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::{singular_values, SingularProfile};

/// Tagged choice of symmetric (quasi-)norm on singular profiles.
///
/// `Schatten(p)` requires `p ∈ [1,∞]` (`Schatten(∞)` is the operator norm);
/// `p < 1` is rejected — those quasi-norms are out of scope. `WeakL1` is a
/// quasi-norm (triangle inequality only up to a factor 2); `LambdaLog` is a
/// genuine fully symmetric norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    Schatten(f64),
    WeakL1,
    LambdaLog,
}

impl NormSpec {
    /// Rejects `Schatten(p)` with `p < 1` or NaN.
    pub fn validate(&self) -> Result<()> {
        if let NormSpec::Schatten(p) = self {
            if !(*p >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "Schatten exponent must satisfy p >= 1, got {p}"
                )));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for NormSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormSpec::Schatten(p) if p.is_infinite() => write!(f, "sinf"),
            NormSpec::Schatten(p) => write!(f, "s{p}"),
            NormSpec::WeakL1 => write!(f, "weakl1"),
            NormSpec::LambdaLog => write!(f, "llog"),
        }
    }
}

/// Sequence spaces with closed-form dilation norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpaceSpec {
    /// ℓ_p with `p ∈ [1,∞]`.
    EllP(f64),
    /// weak-ℓ1: `‖x‖ = max_k k·x_k` on non-increasing non-negative x.
    WeakL1,
}

impl SpaceSpec {
    pub fn validate(&self) -> Result<()> {
        if let SpaceSpec::EllP(p) = self {
            if !(*p >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "sequence-space exponent must satisfy p >= 1, got {p}"
                )));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpaceSpec::EllP(p) if p.is_infinite() => write!(f, "linf"),
            SpaceSpec::EllP(p) => write!(f, "l{p}"),
            SpaceSpec::WeakL1 => write!(f, "weakl1"),
        }
    }
}

/// Direction of a dilation: `Up` repeats entries, `Down` extracts the
/// n-strided subsequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DilationDirection {
    Up,
    Down,
}

/// Norm of a singular profile under the given spec.
pub fn norm(spec: &NormSpec, s: &SingularProfile) -> Result<f64> {
    spec.validate()?;
    let v = s.values();
    Ok(match spec {
        NormSpec::Schatten(p) if p.is_infinite() => s.top(),
        NormSpec::Schatten(p) if *p == 1.0 => s.sum(),
        NormSpec::Schatten(p) if *p == 2.0 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormSpec::Schatten(p) => v.iter().map(|x| x.powf(*p)).sum::<f64>().powf(1.0 / p),
        NormSpec::WeakL1 => v
            .iter()
            .enumerate()
            .map(|(k, x)| (k + 1) as f64 * x)
            .fold(0.0, f64::max),
        NormSpec::LambdaLog => v
            .iter()
            .enumerate()
            .map(|(k, x)| x * (((k + 2) as f64) / ((k + 1) as f64)).ln())
            .sum(),
    })
}

/// Norm of a matrix: the profile norm of its singular values.
pub fn matrix_norm(spec: &NormSpec, a: &Matrix) -> Result<f64> {
    norm(spec, &singular_values(a)?)
}

/// Each entry repeated `n` times, order preserved.
pub fn dilate_up(n: usize, x: &[f64]) -> Vec<f64> {
    assert!(n >= 1, "dilation factor must be at least 1");
    let mut out = Vec::with_capacity(n * x.len());
    for &v in x {
        out.extend(std::iter::repeat(v).take(n));
    }
    out
}

/// Subsequence at (1-based) indices n, 2n, 3n, …
pub fn dilate_down(n: usize, x: &[f64]) -> Vec<f64> {
    assert!(n >= 1, "dilation factor must be at least 1");
    x.iter().skip(n - 1).step_by(n).copied().collect()
}

/// Exact operator norm of the dilation on the cone of non-increasing
/// non-negative sequences (closed forms derived in the module docs).
pub fn dilation_norm_closed(
    space: &SpaceSpec,
    n: usize,
    direction: DilationDirection,
) -> Result<f64> {
    space.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "dilation factor must be at least 1".into(),
        ));
    }
    let nf = n as f64;
    Ok(match (space, direction) {
        // p = ∞ falls out automatically: n^(±1/∞) = n^0 = 1.
        (SpaceSpec::EllP(p), DilationDirection::Up) => nf.powf(1.0 / p),
        (SpaceSpec::EllP(p), DilationDirection::Down) => nf.powf(-1.0 / p),
        (SpaceSpec::WeakL1, DilationDirection::Up) => nf,
        (SpaceSpec::WeakL1, DilationDirection::Down) => 1.0 / nf,
    })
}

/// The Boyd quotients at a single n:
/// `(ln‖D_{1/n}‖/ln(1/n), ln‖D_n‖/ln n)`.
pub fn dilation_quotients(space: &SpaceSpec, n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "Boyd quotients need n >= 2".into(),
        ));
    }
    let up = dilation_norm_closed(space, n, DilationDirection::Up)?;
    let down = dilation_norm_closed(space, n, DilationDirection::Down)?;
    let ln_n = (n as f64).ln();
    Ok((down.ln() / -ln_n, up.ln() / ln_n))
}

/// Boyd indices `(α, β)` of the space: the limits of the dilation-norm
/// quotients. For every implemented space the quotient is constant in n, so
/// the limit is returned in closed form; the per-n quotients (evaluated at
/// n = 2..n_max through [`dilation_norm_closed`]) are checked against it.
pub fn boyd_indices(space: &SpaceSpec, n_max: usize) -> Result<(f64, f64)> {
    space.validate()?;
    if n_max < 4 {
        return Err(Error::InvalidParameter(format!(
            "boyd_indices needs n_max >= 4, got {n_max}"
        )));
    }
    let (alpha, beta) = match space {
        SpaceSpec::EllP(p) if p.is_infinite() => (0.0, 0.0),
        SpaceSpec::EllP(p) => (1.0 / p, 1.0 / p),
        SpaceSpec::WeakL1 => (1.0, 1.0),
    };
    for n in 2..=n_max {
        let (qa, qb) = dilation_quotients(space, n)?;
        if (qa - alpha).abs() > 1e-9 || (qb - beta).abs() > 1e-9 {
            return Err(Error::NonConvergence {
                context: "dilation quotients disagree with the closed-form Boyd limit",
            });
        }
    }
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn profile(v: &[f64]) -> SingularProfile {
        SingularProfile::new(v.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn schatten_examples() {
        let s = profile(&[1.0, 0.0]);
        assert_eq!(norm(&NormSpec::Schatten(1.0), &s).unwrap(), 1.0);
        assert_eq!(norm(&NormSpec::Schatten(f64::INFINITY), &s).unwrap(), 1.0);
        let s = profile(&[3.0, 4.0f64.sqrt()]);
        let got = norm(&NormSpec::Schatten(2.0), &s).unwrap();
        assert!((got - 13.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn weak_l1_harmonic_profile() {
        // k·s_k = 1 for every k
        let s = profile(&[1.0, 0.5, 1.0 / 3.0, 0.25]);
        assert_eq!(norm(&NormSpec::WeakL1, &s).unwrap(), 1.0);
    }

    #[test]
    fn lambda_log_two_ones_is_ln_three() {
        let s = profile(&[1.0, 1.0]);
        let got = norm(&NormSpec::LambdaLog, &s).unwrap();
        assert!((got - 3.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn schatten_below_one_rejected() {
        let s = profile(&[1.0]);
        assert!(norm(&NormSpec::Schatten(0.5), &s).is_err());
        assert!(norm(&NormSpec::Schatten(f64::NAN), &s).is_err());
        assert!(norm(&NormSpec::Schatten(1.0), &s).is_ok());
    }

    #[test]
    fn matrix_norm_matches_frobenius_for_schatten_two() {
        let a = Matrix::from_rows(&[
            vec![c(1.0, 2.0), c(0.0, -1.0)],
            vec![c(3.0, 0.5), c(1.0, 1.0)],
        ])
        .unwrap();
        let s2 = matrix_norm(&NormSpec::Schatten(2.0), &a).unwrap();
        assert!((s2 - a.frobenius_norm()).abs() < 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn trace_norm_of_antisymmetric_half_rotation() {
        // ½[[0,−1],[1,0]] has singular values (½, ½): trace norm 1.
        let t = Matrix::from_rows(&[
            vec![c(0.0, 0.0), c(-0.5, 0.0)],
            vec![c(0.5, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let got = matrix_norm(&NormSpec::Schatten(1.0), &t).unwrap();
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_of_rank_one_projection_is_one() {
        let p = Matrix::from_fn(3, |_, _| c(1.0 / 3.0, 0.0));
        let got = matrix_norm(&NormSpec::Schatten(1.0), &p).unwrap();
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(dilate_up(2, &[1.0, 0.0]), vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(dilate_up(1, &[3.0, 2.0]), vec![3.0, 2.0]);
        assert_eq!(dilate_down(2, &[1.0, 2.0, 3.0, 4.0]), vec![2.0, 4.0]);
        assert_eq!(dilate_down(1, &[1.0, 2.0]), vec![1.0, 2.0]);
        // section identity
        let x = [5.0, 4.0, 1.0];
        assert_eq!(dilate_down(3, &dilate_up(3, &x)), x.to_vec());
    }

    #[test]
    fn up_dilation_ell_p_summation_identity() {
        let x = [2.0, 1.5, 0.25];
        for n in [1usize, 2, 5] {
            for p in [1.0, 1.5, 3.0] {
                let lhs: f64 = dilate_up(n, &x).iter().map(|v| v.powf(p)).sum();
                let rhs: f64 = (n as f64) * x.iter().map(|v| v.powf(p)).sum::<f64>();
                assert!((lhs - rhs).abs() < 1e-12 * rhs.max(1.0));
            }
        }
    }

    #[test]
    fn closed_form_dilation_norms() {
        let l2 = SpaceSpec::EllP(2.0);
        assert!(
            (dilation_norm_closed(&l2, 2, DilationDirection::Up).unwrap() - 2.0f64.sqrt()).abs()
                < 1e-15
        );
        let linf = SpaceSpec::EllP(f64::INFINITY);
        for n in [1usize, 3, 9] {
            assert_eq!(
                dilation_norm_closed(&linf, n, DilationDirection::Up).unwrap(),
                1.0
            );
            assert_eq!(
                dilation_norm_closed(&linf, n, DilationDirection::Down).unwrap(),
                1.0
            );
        }
        let l1 = SpaceSpec::EllP(1.0);
        assert_eq!(
            dilation_norm_closed(&l1, 7, DilationDirection::Up).unwrap(),
            7.0
        );
        assert_eq!(
            dilation_norm_closed(&SpaceSpec::WeakL1, 5, DilationDirection::Up).unwrap(),
            5.0
        );
        assert_eq!(
            dilation_norm_closed(&SpaceSpec::WeakL1, 5, DilationDirection::Down).unwrap(),
            0.2
        );
    }

    #[test]
    fn boyd_indices_closed_forms() {
        for p in [1.5f64, 2.0, 4.0] {
            let (a, b) = boyd_indices(&SpaceSpec::EllP(p), 16).unwrap();
            assert_eq!(a, 1.0 / p);
            assert_eq!(b, 1.0 / p);
        }
        assert_eq!(boyd_indices(&SpaceSpec::EllP(1.0), 8).unwrap(), (1.0, 1.0));
        assert_eq!(
            boyd_indices(&SpaceSpec::EllP(f64::INFINITY), 8).unwrap(),
            (0.0, 0.0)
        );
        assert_eq!(boyd_indices(&SpaceSpec::WeakL1, 8).unwrap(), (1.0, 1.0));
        assert!(boyd_indices(&SpaceSpec::EllP(2.0), 3).is_err());
    }

    #[test]
    fn norm_monotone_in_profile() {
        let lo = profile(&[1.0, 0.5, 0.2]);
        let hi = profile(&[1.1, 0.7, 0.2]);
        for spec in [
            NormSpec::Schatten(1.0),
            NormSpec::Schatten(2.5),
            NormSpec::Schatten(f64::INFINITY),
            NormSpec::WeakL1,
            NormSpec::LambdaLog,
        ] {
            assert!(norm(&spec, &lo).unwrap() <= norm(&spec, &hi).unwrap());
        }
    }
}
