//! Dense complex square matrices: the carrier type for every operator in the
//! crate, with adjoints, commutators, Kronecker products and the small
//! entrywise helpers the constructions need.
//!
//! Matrices are stored row-major. All operations are pure: they take
//! references and return fresh values, so unrestricted concurrent use is safe.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square matrix over ℂ with finite entries.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix from explicit rows, validating squareness and
    /// finiteness (no NaN/Inf entries).
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let m = Matrix { dim, data };
        m.validate_finite()?;
        Ok(m)
    }

    /// Build a matrix from an entry function `(row, col) -> value`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(entries: &[Complex64]) -> Self {
        let dim = entries.len();
        let mut m = Matrix::zeros(dim);
        for (i, &v) in entries.iter().enumerate() {
            m.data[i * dim + i] = v;
        }
        m
    }

    /// Matrix unit E_{row,col} (zero-based indices): 1 at the given entry,
    /// 0 elsewhere.
    pub fn basis(dim: usize, row: usize, col: usize) -> Self {
        assert!(row < dim && col < dim, "basis index out of range");
        let mut m = Matrix::zeros(dim);
        m.data[row * dim + col] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// Raw row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Errors if any entry is NaN or infinite.
    pub fn validate_finite(&self) -> Result<()> {
        for z in &self.data {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidParameter(
                    "matrix has a non-finite entry".into(),
                ));
            }
        }
        Ok(())
    }

    /// Conjugate transpose. An involution: `a.adjoint().adjoint() == a`.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Matrix product. Panics on dimension mismatch (use [`commutator`] for
    /// the checked entry point the experiments call).
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                let brow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    orow[j] += aik * brow[j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Matrix {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm √(Σ|a_ij|²).
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus (the sup-norm on entries, not the operator norm).
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Diagonal of the matrix with zeros elsewhere. Idempotent.
    pub fn diag_part(&self) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            out.set(i, i, self.get(i, i));
        }
        out
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && self.get(i, j) != Complex64::new(0.0, 0.0) {
                    return false;
                }
            }
        }
        true
    }

    /// Relative normality defect `‖A*A − AA*‖_F / ‖A‖_F²` (0 for the zero
    /// matrix, which is normal).
    pub fn normality_defect(&self) -> f64 {
        let fro2 = self.frobenius_norm().powi(2);
        if fro2 == 0.0 {
            return 0.0;
        }
        let adj = self.adjoint();
        let lhs = adj.mul(self);
        let rhs = self.mul(&adj);
        lhs.sub(&rhs).frobenius_norm() / fro2
    }

    /// Kronecker product; the result has dimension `self.dim * rhs.dim`.
    /// Its singular values are the pairwise products of the factors'.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let n = self.dim;
        let m = rhs.dim;
        let mut out = Matrix::zeros(n * m);
        for i1 in 0..n {
            for j1 in 0..n {
                let a = self.get(i1, j1);
                for i2 in 0..m {
                    for j2 in 0..m {
                        out.set(i1 * m + i2, j1 * m + j2, a * rhs.get(i2, j2));
                    }
                }
            }
        }
        out
    }
}

/// Commutator AB − BA.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim.min(8) {
            let row: Vec<String> = (0..self.dim.min(8))
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        if self.dim > 8 {
            writeln!(f, "  ...")?;
        }
        Ok(())
    }
}
