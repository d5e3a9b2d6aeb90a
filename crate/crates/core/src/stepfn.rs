//! Exact step-function calculus on (0,∞): non-increasing rearrangement,
//! dilation, the averaging operator C, its adjoint C′, their sum S, and the
//! singular-profile majorization check built on them.
//!
//! Step functions are finitely supported and right-continuous: value `v_j`
//! on `[t_{j−1}, t_j)` with `t₀ = 0`, and 0 from the last breakpoint on.
//! Matrix singular profiles embed with unit-length pieces (`t_j = j`).
//!
//! Images under C, C′ and S are stored in closed form, piece by piece, as
//! `α + β/t + γ·ln(end/t)` where `end` is the piece's own right endpoint —
//! not `γ·ln t` with a global anchor. The anchored form makes dilation act
//! on coefficients by `(α, β, γ) ↦ (α, s·β, γ)` with the piece stretched to
//! `[s·a, s·b)`: the γ-term is scale-free because `ln((s·end)/(s·t)) =
//! ln(end/t)`. Consequently `S∘D_s = D_s∘S` holds at the coefficient level;
//! for s an exact power of two it holds bit for bit (scaling by 2^k commutes
//! with every intermediate rounding), and for general s to a relative ulp
//! margin, which the tests pin at 1e−12.

use crate::eig::DEFAULT_NORMALITY_TOL;
use crate::error::{Error, Result};
use crate::matrix::{commutator, Matrix};
use crate::svd::{singular_values, SingularProfile};

/// Commutators with Frobenius norm below this multiple of ‖x‖_F·‖y‖_F are
/// treated as zero; the majorization ratio is undefined there.
pub const ZERO_COMMUTATOR_REL_TOL: f64 = 1e-12;

/// Finitely supported right-continuous step function on (0,∞).
///
/// Canonical form: adjacent pieces with equal values are merged and an
/// exactly-zero trailing piece is dropped, so equal functions compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Builds the function with value `values[j]` on
    /// `[breakpoints[j−1], breakpoints[j])` (first piece starts at 0).
    /// Breakpoints must be finite, strictly increasing and positive; values
    /// finite. The representation is canonicalized.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::DimensionMismatch {
                left: breakpoints.len(),
                right: values.len(),
            });
        }
        let mut prev = 0.0f64;
        for &t in &breakpoints {
            if !t.is_finite() || t <= prev {
                return Err(Error::InvalidParameter(format!(
                    "breakpoints must be finite, positive and strictly increasing (saw {t} after {prev})"
                )));
            }
            prev = t;
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "step function values must be finite".into(),
            ));
        }
        Ok(Self::canonical(breakpoints, values))
    }

    fn canonical(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        let mut bp = Vec::with_capacity(breakpoints.len());
        let mut vals: Vec<f64> = Vec::with_capacity(values.len());
        for (t, v) in breakpoints.into_iter().zip(values) {
            if let Some(last) = vals.last() {
                if *last == v {
                    // merge with the previous piece: extend its endpoint
                    *bp.last_mut().unwrap() = t;
                    continue;
                }
            }
            bp.push(t);
            vals.push(v);
        }
        while vals.last() == Some(&0.0) {
            vals.pop();
            bp.pop();
        }
        StepFunction {
            breakpoints: bp,
            values: vals,
        }
    }

    /// The identically-zero function.
    pub fn zero() -> Self {
        StepFunction {
            breakpoints: vec![],
            values: vec![],
        }
    }

    /// χ_(0,end): value 1 before `end`, 0 after.
    pub fn indicator(end: f64) -> Self {
        assert!(end.is_finite() && end > 0.0, "indicator needs end > 0");
        StepFunction {
            breakpoints: vec![end],
            values: vec![1.0],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Right-continuous evaluation at `t ≥ 0`.
    pub fn value_at(&self, t: f64) -> f64 {
        assert!(t >= 0.0 && t.is_finite(), "evaluation point out of domain");
        let idx = self.breakpoints.partition_point(|&bp| bp <= t);
        if idx < self.values.len() {
            self.values[idx]
        } else {
            0.0
        }
    }

    /// Left limit at `t > 0`.
    pub fn value_left(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t.is_finite(), "left limits need t > 0");
        let idx = self.breakpoints.partition_point(|&bp| bp < t);
        if idx < self.values.len() {
            self.values[idx]
        } else {
            0.0
        }
    }

    /// ∫₀^∞ f(s) ds.
    pub fn integral(&self) -> f64 {
        let mut prev = 0.0;
        let mut acc = 0.0;
        for (&t, &v) in self.breakpoints.iter().zip(&self.values) {
            acc += v * (t - prev);
            prev = t;
        }
        acc
    }
}

/// Embeds a singular profile as the step function with value `s_k` on
/// `[k−1, k)`.
pub fn profile_to_step(s: &SingularProfile) -> StepFunction {
    let breakpoints: Vec<f64> = (1..=s.len()).map(|k| k as f64).collect();
    StepFunction::canonical(breakpoints, s.values().to_vec())
}

/// Non-increasing rearrangement of |f|: the pieces of `f`, taken by
/// absolute value in non-increasing order, laid out consecutively from 0.
/// Equimeasurable with |f|: the multiset of (|value|, length) pairs is
/// preserved exactly; only the cumulative breakpoint sums round.
pub fn rearrange(f: &StepFunction) -> StepFunction {
    let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(f.values.len());
    let mut prev = 0.0;
    for (&t, &v) in f.breakpoints.iter().zip(&f.values) {
        pieces.push((v.abs(), t - prev));
        prev = t;
    }
    pieces.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut bp = Vec::with_capacity(pieces.len());
    let mut vals = Vec::with_capacity(pieces.len());
    let mut acc = 0.0;
    for (v, len) in pieces {
        acc += len;
        bp.push(acc);
        vals.push(v);
    }
    StepFunction::canonical(bp, vals)
}

/// (D_s f)(t) = f(t/s): breakpoints scaled by s, values unchanged. Pieces
/// whose endpoints collide after rounding are dropped (zero width).
pub fn dilate_fn(s: f64, f: &StepFunction) -> StepFunction {
    assert!(s.is_finite() && s > 0.0, "dilation scale must be positive");
    let mut bp = Vec::with_capacity(f.breakpoints.len());
    let mut vals = Vec::with_capacity(f.values.len());
    let mut prev = 0.0f64;
    for (&t, &v) in f.breakpoints.iter().zip(&f.values) {
        let st = s * t;
        if st > prev {
            bp.push(st);
            vals.push(v);
            prev = st;
        }
    }
    StepFunction::canonical(bp, vals)
}

/// One closed-form piece of a Hardy/Calderón image: the value
/// `alpha + beta/t + gamma·ln(end/t)` on `[start, end)`. The tail piece has
/// `end = ∞` and `gamma = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalderonPiece {
    pub start: f64,
    pub end: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl CalderonPiece {
    fn eval(&self, t: f64) -> f64 {
        let log_term = if self.gamma == 0.0 {
            0.0
        } else {
            self.gamma * (self.end / t).ln()
        };
        self.alpha + self.beta / t + log_term
    }
}

/// Piecewise closed-form image of a step function under C, C′ or S;
/// continuous on (0,∞) and evaluable anywhere in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct CalderonImage {
    pieces: Vec<CalderonPiece>,
}

impl CalderonImage {
    pub fn pieces(&self) -> &[CalderonPiece] {
        &self.pieces
    }

    /// Closed-form evaluation at `t > 0`.
    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t.is_finite(), "evaluation point out of domain");
        let idx = self.pieces.partition_point(|p| p.end <= t);
        self.pieces[idx].eval(t)
    }

    /// D_s of the image: each piece stretched to `[s·start, s·end)` with
    /// `β ↦ s·β`; α and γ are scale-free in the anchored form.
    pub fn dilate(&self, s: f64) -> CalderonImage {
        assert!(s.is_finite() && s > 0.0, "dilation scale must be positive");
        CalderonImage {
            pieces: self
                .pieces
                .iter()
                .map(|p| CalderonPiece {
                    start: s * p.start,
                    end: s * p.end,
                    alpha: p.alpha,
                    beta: s * p.beta,
                    gamma: p.gamma,
                })
                .collect(),
        }
    }

    /// Piecewise sum over an identical grid (the two images of one source).
    fn add_same_grid(&self, other: &CalderonImage) -> CalderonImage {
        assert_eq!(self.pieces.len(), other.pieces.len());
        CalderonImage {
            pieces: self
                .pieces
                .iter()
                .zip(&other.pieces)
                .map(|(p, q)| {
                    debug_assert_eq!((p.start, p.end), (q.start, q.end));
                    CalderonPiece {
                        start: p.start,
                        end: p.end,
                        alpha: p.alpha + q.alpha,
                        beta: p.beta + q.beta,
                        gamma: p.gamma + q.gamma,
                    }
                })
                .collect(),
        }
    }
}

/// The averaging operator (Cf)(t) = (1/t)∫₀^t f: on the piece
/// `[t_{i−1}, t_i)` this is `v_i + (F_{i−1} − v_i·t_{i−1})/t` with `F` the
/// running integral, and `F_K/t` on the tail.
pub fn hardy_c(f: &StepFunction) -> CalderonImage {
    let mut pieces = Vec::with_capacity(f.values.len() + 1);
    let mut cum = 0.0f64;
    let mut prev = 0.0f64;
    for (&t, &v) in f.breakpoints.iter().zip(&f.values) {
        pieces.push(CalderonPiece {
            start: prev,
            end: t,
            alpha: v,
            beta: cum - v * prev,
            gamma: 0.0,
        });
        cum += v * (t - prev);
        prev = t;
    }
    pieces.push(CalderonPiece {
        start: prev,
        end: f64::INFINITY,
        alpha: 0.0,
        beta: cum,
        gamma: 0.0,
    });
    CalderonImage { pieces }
}

/// The adjoint operator (C′f)(t) = ∫_t^∞ f(s)/s ds: on `[t_{i−1}, t_i)` this
/// is `v_i·ln(t_i/t) + Σ_{j>i} v_j·ln(t_j/t_{j−1})`, and 0 on the tail.
pub fn hardy_cprime(f: &StepFunction) -> CalderonImage {
    let k = f.values.len();
    // per-piece logarithmic masses v_j·ln(t_j/t_{j−1}), then suffix sums
    let mut masses = Vec::with_capacity(k);
    let mut prev = 0.0f64;
    for (i, (&t, &v)) in f.breakpoints.iter().zip(&f.values).enumerate() {
        // the first piece's own-mass is irrelevant (it only ever appears
        // through the in-piece γ·ln(end/t) term, never a full-piece mass)
        masses.push(if i == 0 { 0.0 } else { v * (t / prev).ln() });
        prev = t;
    }
    let mut suffix = vec![0.0f64; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1] + if i + 1 < k { masses[i + 1] } else { 0.0 };
    }

    let mut pieces = Vec::with_capacity(k + 1);
    let mut prev = 0.0f64;
    for (i, (&t, &v)) in f.breakpoints.iter().zip(&f.values).enumerate() {
        pieces.push(CalderonPiece {
            start: prev,
            end: t,
            alpha: suffix[i],
            beta: 0.0,
            gamma: v,
        });
        prev = t;
    }
    pieces.push(CalderonPiece {
        start: prev,
        end: f64::INFINITY,
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    });
    CalderonImage { pieces }
}

/// The Calderón operator S = C + C′, summed piecewise on the common grid.
pub fn calderon(f: &StepFunction) -> CalderonImage {
    hardy_c(f).add_same_grid(&hardy_cprime(f))
}

/// Majorization check: the supremum of μ(t, [x*, y]) / (Sμ([x, y]))(t) over
/// a finite grid that provably attains it — piece midpoints, both one-sided
/// limits at every breakpoint of either function, and a probe inside the
/// tail. Returns the supremum and the grid.
///
/// `x` must be normal. `cluster_tol` pins the resolution at which x's
/// spectrum would be treated as discrete in the eigenbasis formulation; the
/// ratio itself depends only on singular values, so the parameter is
/// validated and otherwise inert.
///
/// The grid is exhaustive: the numerator is a non-increasing step function
/// (constant on each grid piece) and the denominator is continuous,
/// positive and non-increasing, so on every piece the ratio is monotone
/// non-decreasing and its piece-supremum is the left limit at the right
/// endpoint — one of the evaluated points.
pub fn fuglede_majorization(
    x: &Matrix,
    y: &Matrix,
    cluster_tol: f64,
) -> Result<(f64, Vec<f64>)> {
    if !cluster_tol.is_finite() || cluster_tol < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "cluster_tol must be finite and non-negative, got {cluster_tol}"
        )));
    }
    let defect = x.normality_defect();
    if defect > DEFAULT_NORMALITY_TOL {
        return Err(Error::NotNormal {
            defect,
            tol: DEFAULT_NORMALITY_TOL,
        });
    }
    let plain = commutator(x, y)?;
    let scale = x.frobenius_norm() * y.frobenius_norm();
    if plain.frobenius_norm() <= ZERO_COMMUTATOR_REL_TOL * scale {
        return Err(Error::ZeroCommutator);
    }
    let adjoint = commutator(&x.adjoint(), y)?;

    let num = profile_to_step(&singular_values(&adjoint)?);
    let den = calderon(&profile_to_step(&singular_values(&plain)?));

    // merged finite breakpoints of both functions
    let mut grid: Vec<f64> = num
        .breakpoints()
        .iter()
        .copied()
        .chain(den.pieces().iter().map(|p| p.end).filter(|e| e.is_finite()))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut query_points = Vec::new();
    let mut max_ratio = 0.0f64;
    let mut prev = 0.0f64;
    for &b in &grid {
        let mid = 0.5 * (prev + b);
        if mid > 0.0 {
            query_points.push(mid);
            max_ratio = max_ratio.max(num.value_at(mid) / den.eval(mid));
        }
        query_points.push(b);
        let here = num.value_at(b).max(num.value_left(b));
        max_ratio = max_ratio.max(here / den.eval(b));
        prev = b;
    }
    // probe in the tail piece (the numerator is 0 there by finite support)
    let tail = if grid.is_empty() { 1.0 } else { 2.0 * prev };
    query_points.push(tail);
    max_ratio = max_ratio.max(num.value_at(tail) / den.eval(tail));

    Ok((max_ratio, query_points))
}
