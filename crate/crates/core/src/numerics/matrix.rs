use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<R: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<R>>,
}

impl<R: Real> ComplexMatrix<R> {
    /// Builds a matrix from row-major entries, rejecting a length mismatch or
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<R>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Input("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<R>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex<R>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    /// Real-valued convenience constructor (row-major).
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        Self {
            rows,
            cols,
            data: values
                .iter()
                .map(|&v| Complex::new(R::lit(v), R::zero()))
                .collect(),
        }
    }

    pub fn diag(entries: &[Complex<R>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Column vector `v` as an `n x 1` matrix.
    pub fn column_vector(v: &[Complex<R>]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[Complex<R>], b: &[Complex<R>]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<R>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<R>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Complex<R>> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex<R>]) {
        assert_eq!(v.len(), self.rows);
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn diagonal(&self) -> Vec<Complex<R>> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex<R>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: R) -> Self {
        self.scale(Complex::new(s, R::zero()))
    }

    pub fn trace(&self) -> Complex<R> {
        self.diagonal()
            .into_iter()
            .fold(Complex::zero(), |a, b| a + b)
    }

    pub fn matvec(&self, v: &[Complex<R>]) -> Vec<Complex<R>> {
        assert_eq!(v.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] = out.data[i * other.cols + j] + a * other[(k, j)];
                }
            }
        }
        out
    }

    /// `self · m · self†`
    pub fn conjugate(&self, m: &Self) -> Self {
        self.matmul(m).matmul(&self.adjoint())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> R {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(R::zero(), R::max)
    }

    pub fn max_abs(&self) -> R {
        self.data.iter().map(|z| z.norm()).fold(R::zero(), R::max)
    }

    pub fn frobenius_norm(&self) -> R {
        self.data.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn approx_eq(&self, other: &Self, tol: R) -> bool {
        self.shape() == other.shape() && self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: R) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: R) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul(self)
                .approx_eq(&Self::identity(self.rows), tol)
    }

    /// Off-diagonal entries all within `tol` of zero.
    pub fn is_diagonal(&self, tol: R) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].norm() <= tol))
    }

    /// Hermitian with smallest eigenvalue `>= -tol`.
    pub fn is_psd(&self, tol: R) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match super::hermitian_eig_tol(self, tol) {
            Ok(eig) => eig.eigenvalues.first().is_none_or(|&l| l >= -tol),
            Err(_) => false,
        }
    }

    /// `(self + self†) / 2`
    pub fn hermitian_part(&self) -> Self {
        let half = R::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * half
        })
    }
}

impl<R: Real> Index<(usize, usize)> for ComplexMatrix<R> {
    type Output = Complex<R>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R: Real> IndexMut<(usize, usize)> for ComplexMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Real> Mul for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn mul(self, rhs: Self) -> ComplexMatrix<R> {
        self.matmul(rhs)
    }
}

impl<R: Real> Add for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn add(self, rhs: Self) -> ComplexMatrix<R> {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<R: Real> Sub for &ComplexMatrix<R> {
    type Output = ComplexMatrix<R>;
    fn sub(self, rhs: Self) -> ComplexMatrix<R> {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<R: Real> fmt::Debug for ComplexMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i][j] · b`.
pub fn kron<R: Real>(a: &ComplexMatrix<R>, b: &ComplexMatrix<R>) -> ComplexMatrix<R> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Euclidean inner product `<a|b>` (conjugate-linear in `a`).
pub fn inner<R: Real>(a: &[Complex<R>], b: &[Complex<R>]) -> Complex<R> {
    assert_eq!(a.len(), b.len(), "inner product dimension mismatch");
    a.iter()
        .zip(b)
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * *y)
}

pub fn vec_norm<R: Real>(v: &[Complex<R>]) -> R {
    v.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
}

/// Pauli matrices and the identity, in the order (1, σx, σy, σz).
pub fn pauli<R: Real>() -> [ComplexMatrix<R>; 4] {
    let o = R::one();
    let z = R::zero();
    let c = Complex::new;
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows(&[vec![c(z, z), c(o, z)], vec![c(o, z), c(z, z)]]),
        ComplexMatrix::from_rows(&[vec![c(z, z), c(z, -o)], vec![c(z, o), c(z, z)]]),
        ComplexMatrix::from_rows(&[vec![c(o, z), c(z, z)], vec![c(z, z), c(-o, z)]]),
    ]
}

/// `γ0·1 + γ1·σx + γ2·σy + γ3·σz`
pub fn pauli_combination<R: Real>(gamma: [R; 4]) -> ComplexMatrix<R> {
    let p = pauli::<R>();
    let mut out = ComplexMatrix::zeros(2, 2);
    for (g, s) in gamma.iter().zip(p.iter()) {
        out = &out + &s.scale_real(*g);
    }
    out
}

/// Pauli coefficients `(γ0, γ1, γ2, γ3)` of a 2x2 matrix; real when it is Hermitian.
pub fn pauli_coefficients<R: Real>(h: &ComplexMatrix<R>) -> [R; 4] {
    assert_eq!(h.shape(), (2, 2));
    let half = R::lit(0.5);
    [
        ((h[(0, 0)] + h[(1, 1)]) * half).re,
        ((h[(0, 1)] + h[(1, 0)]) * half).re,
        ((h[(1, 0)] - h[(0, 1)]) * half).im,
        ((h[(0, 0)] - h[(1, 1)]) * half).re,
    ]
}
