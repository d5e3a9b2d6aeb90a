//! Discrete spectral measures from normal matrices, symbols on ℂ×ℂ, and the
//! double operator integral `T^E_φ(X) = Σ_{i,j} φ(λ_i, λ_j) P_i X P_j`.
//!
//! Only finitely supported spectral measures are implemented: every matrix
//! has finite spectrum, so the atoms (λ_i, P_i) carry the whole measure. The
//! symbol Ω(z,w) = (z̄ − w̄)/(z − w) (with Ω(z,z) = 0) is the multiplier that
//! turns [A, X] into [A*, X]; it is only ever evaluated on pairs of distinct
//! cluster representatives, which are separated by more than the clustering
//! resolution by construction, so the 0/0 regime cannot be reached.

use std::sync::Arc;

use num_complex::Complex64;

use crate::eig::{normal_eigendecomposition, DEFAULT_NORMALITY_TOL};
use crate::error::{Error, Result};
use crate::matrix::{commutator, Matrix};

/// Relative scale for the default clustering resolution: 1e−8 × the
/// spectral diameter, far above eigensolver noise and far below generic
/// eigenvalue gaps.
pub const DEFAULT_CLUSTER_SCALE: f64 = 1e-8;

/// Required accuracy of `Σ λ_i P_i` against the input matrix.
const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Discrete spectral measure of a normal matrix: distinct eigenvalue
/// clusters λ_i paired with the orthogonal projections P_i onto their
/// eigenspaces. `Σ P_i = I` and `P_i P_j = δ_ij P_i`.
#[derive(Clone, Debug)]
pub struct SpectralMeasure {
    points: Vec<Complex64>,
    projections: Vec<Matrix>,
    dim: usize,
}

impl SpectralMeasure {
    /// The distinct spectral points, ordered lexicographically by
    /// (real, imaginary).
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// The spectral projections, aligned with [`points`](Self::points).
    pub fn projections(&self) -> &[Matrix] {
        &self.projections
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dimension of the underlying space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Σ λ_i P_i`.
    pub fn reconstruct(&self) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        for (lambda, p) in self.points.iter().zip(&self.projections) {
            out = out.add(&p.scale(*lambda));
        }
        out
    }
}

/// The default clustering resolution for a spectrum: 1e−8 × its diameter,
/// degrading to 1e−8 × max(1, |λ|) when the diameter vanishes (scalar
/// multiples of the identity), so the single atom still forms.
pub fn default_cluster_tol(eigenvalues: &[Complex64]) -> f64 {
    let mut diameter = 0.0f64;
    for (i, a) in eigenvalues.iter().enumerate() {
        for b in &eigenvalues[i + 1..] {
            diameter = diameter.max((a - b).norm());
        }
    }
    if diameter > 0.0 {
        DEFAULT_CLUSTER_SCALE * diameter
    } else {
        let top = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        DEFAULT_CLUSTER_SCALE * top.max(1.0)
    }
}

/// Builds the discrete spectral measure of a normal matrix, grouping
/// eigenvalues into clusters at resolution `cluster_tol` (single linkage)
/// and erroring with [`Error::ClusterAmbiguity`] when two resulting clusters
/// approach within twice that resolution — the grouping would then flip
/// under perturbations of the order of the resolution itself.
pub fn spectral_measure(a: &Matrix, cluster_tol: f64) -> Result<SpectralMeasure> {
    if a.dim() == 0 {
        return Err(Error::InvalidParameter(
            "spectral measure needs a non-empty matrix".into(),
        ));
    }
    if !cluster_tol.is_finite() || cluster_tol < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "cluster_tol must be finite and non-negative, got {cluster_tol}"
        )));
    }
    let eig = normal_eigendecomposition(a, DEFAULT_NORMALITY_TOL)?;
    let n = a.dim();
    let lambda = &eig.eigenvalues;

    // Single-linkage clustering via union-find on eigenvalue indices.
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (lambda[i] - lambda[j]).norm() <= cluster_tol {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut cluster_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if cluster_of[r] == usize::MAX {
            cluster_of[r] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[cluster_of[r]].push(i);
    }

    // Reject groupings that a perturbation of the order of the resolution
    // could change: any cross-cluster pair closer than 2×cluster_tol.
    for i in 0..n {
        for j in i + 1..n {
            if root(&mut parent, i) != root(&mut parent, j) {
                let gap = (lambda[i] - lambda[j]).norm();
                if gap < 2.0 * cluster_tol {
                    return Err(Error::ClusterAmbiguity { gap, cluster_tol });
                }
            }
        }
    }

    // Representative = arithmetic mean of the cluster; projection = sum of
    // the eigenvector dyads. Canonical order: lexicographic by (re, im).
    let mut atoms: Vec<(Complex64, Matrix)> = clusters
        .iter()
        .map(|members| {
            let mean = members.iter().map(|&j| lambda[j]).sum::<Complex64>()
                / Complex64::new(members.len() as f64, 0.0);
            let mut p = Matrix::zeros(n);
            for &j in members {
                let v = eig.eigenvector(j);
                for r in 0..n {
                    for c in 0..n {
                        let add = v[r] * v[c].conj();
                        p.set(r, c, p.get(r, c) + add);
                    }
                }
            }
            (mean, p)
        })
        .collect();
    atoms.sort_by(|(a, _), (b, _)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let measure = SpectralMeasure {
        points: atoms.iter().map(|(z, _)| *z).collect(),
        projections: atoms.into_iter().map(|(_, p)| p).collect(),
        dim: n,
    };

    let recon_err = measure.reconstruct().sub(a).frobenius_norm();
    let scale = a.frobenius_norm();
    if recon_err > RECONSTRUCTION_TOL * scale.max(1e-300) {
        return Err(Error::NonConvergence {
            context: "spectral measure does not reconstruct the matrix at clustering resolution",
        });
    }
    Ok(measure)
}

/// A total function ℂ×ℂ → ℂ with a display name; the scalar data of a
/// double operator integral.
#[derive(Clone)]
pub struct Symbol {
    name: String,
    eval: Arc<dyn Fn(Complex64, Complex64) -> Complex64 + Send + Sync>,
}

impl Symbol {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(Complex64, Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Symbol {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    /// The constant symbol `φ ≡ value`.
    pub fn constant(value: Complex64) -> Self {
        Symbol::new(format!("{value}"), move |_, _| value)
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        (self.eval)(z, w)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Symbol({})", self.name)
    }
}

/// The conjugation multiplier Ω(z,w) = (z̄ − w̄)/(z − w), with the diagonal
/// value Ω(z,z) = 0. Off the diagonal |Ω| = 1: the numerator is the
/// conjugate of the denominator.
pub fn omega() -> Symbol {
    Symbol::new("omega", |z, w| {
        if z == w {
            Complex64::new(0.0, 0.0)
        } else {
            let d = z - w;
            d.conj() / d
        }
    })
}

/// Pointwise product of two symbols.
pub fn symbol_product(phi: &Symbol, psi: &Symbol) -> Symbol {
    let f = Arc::clone(&phi.eval);
    let g = Arc::clone(&psi.eval);
    Symbol {
        name: format!("({})*({})", phi.name, psi.name),
        eval: Arc::new(move |z, w| f(z, w) * g(z, w)),
    }
}

/// The double operator integral `Σ_{i,j} φ(λ_i, λ_j) P_i X P_j`.
pub fn doi_apply(e: &SpectralMeasure, phi: &Symbol, x: &Matrix) -> Result<Matrix> {
    if e.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            left: e.dim(),
            right: x.dim(),
        });
    }
    let k = e.len();
    // Left products P_i X once, then one right product per j:
    // Σ_j (Σ_i φ(λ_i,λ_j)·(P_i X)) P_j.
    let left: Vec<Matrix> = e.projections().iter().map(|p| p.mul(x)).collect();
    let mut out = Matrix::zeros(x.dim());
    for j in 0..k {
        let mut mixed = Matrix::zeros(x.dim());
        for i in 0..k {
            let w = phi.eval(e.points()[i], e.points()[j]);
            if w != Complex64::new(0.0, 0.0) {
                mixed = mixed.add(&left[i].scale(w));
            }
        }
        out = out.add(&mixed.mul(&e.projections()[j]));
    }
    Ok(out)
}

/// Both sides of the intertwining identity for a normal `y`: the adjoint
/// commutator `[y*, t]` and the Ω-multiplier image of the plain commutator,
/// `T^E_Ω([y, t])`. The two agree within 1e−9 × scale; returning both lets
/// callers measure the agreement rather than trust it.
pub fn fuglede_intertwine(y: &Matrix, t: &Matrix, cluster_tol: f64) -> Result<(Matrix, Matrix)> {
    let e = spectral_measure(y, cluster_tol)?;
    let lhs = commutator(&y.adjoint(), t)?;
    let rhs = doi_apply(&e, &omega(), &commutator(y, t)?)?;
    Ok((lhs, rhs))
}
