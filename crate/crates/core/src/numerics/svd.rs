//! Singular value decomposition of `2 x n` complex matrices.
//!
//! Route: diagonalize the `2 x 2` Gram matrix `A A†` for the left vectors and
//! squared singular values, form `w_i = A† u_i / σ_i` for the nonzero
//! singular values and complete `W` with an orthonormal basis of `ker A`.

use num_traits::Zero;

use super::eig::hermitian_eig;
use super::matrix::{inner, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};
use crate::tol;

/// `A = U Σ W†` with `σ[i]` paired with column `i` of `U` and of `W`.
///
/// Singular values are ascending (`σ[0] <= σ[1]`).
#[derive(Debug, Clone)]
pub struct Svd2xN<R: Real> {
    pub u: ComplexMatrix<R>,
    pub sigma: [R; 2],
    pub w: ComplexMatrix<R>,
}

impl<R: Real> Svd2xN<R> {
    /// The `2 x n` diagonal factor `Σ`.
    pub fn sigma_matrix(&self) -> ComplexMatrix<R> {
        let n = self.w.rows();
        let mut s = ComplexMatrix::zeros(2, n);
        s[(0, 0)] = Complex::new(self.sigma[0], R::zero());
        s[(1, 1)] = Complex::new(self.sigma[1], R::zero());
        s
    }

    pub fn reconstruct(&self) -> ComplexMatrix<R> {
        self.u
            .matmul(&self.sigma_matrix())
            .matmul(&self.w.adjoint())
    }
}

pub fn svd_2xn<R: Real>(a: &ComplexMatrix<R>) -> Result<Svd2xN<R>> {
    check_shape(a)?;
    let gram = a.matmul(&a.adjoint());
    let eig = hermitian_eig(&gram)?;
    let sigma = [
        eig.eigenvalues[0].max(R::zero()).sqrt(),
        eig.eigenvalues[1].max(R::zero()).sqrt(),
    ];
    let u = eig.eigenvectors;
    let w = right_vectors(a, &u, sigma);
    Ok(Svd2xN { u, sigma, w })
}

pub(crate) fn check_shape<R: Real>(a: &ComplexMatrix<R>) -> Result<()> {
    if a.rows() != 2 {
        return Err(Error::Dimension(format!(
            "expected a 2 x n matrix, got {:?}",
            a.shape()
        )));
    }
    if a.cols() < 2 {
        return Err(Error::Dimension(format!(
            "2 x n SVD needs n >= 2, got n = {}",
            a.cols()
        )));
    }
    Ok(())
}

/// Builds the `n x n` unitary `W` whose first two columns are `A† u_i / σ_i`
/// (for `σ_i` above the rank cutoff) and whose remaining columns span the
/// orthogonal complement, by Gram-Schmidt over the computational basis in
/// index order.
pub(crate) fn right_vectors<R: Real>(
    a: &ComplexMatrix<R>,
    u: &ComplexMatrix<R>,
    sigma: [R; 2],
) -> ComplexMatrix<R> {
    let n = a.cols();
    let adj = a.adjoint();
    let cutoff = tol::get::<R>(tol::RANK_CUTOFF);
    let mut slots: [Option<Vec<Complex<R>>>; 2] = [None, None];
    for i in 0..2 {
        if sigma[i] > cutoff {
            let v: Vec<_> = adj
                .matvec(&u.column(i))
                .into_iter()
                .map(|z| z / sigma[i])
                .collect();
            slots[i] = Some(v);
        }
    }
    let basis: Vec<Vec<Complex<R>>> = slots.iter().flatten().cloned().collect();
    let mut kernel = kernel_completion(&basis, n);
    let mut w = ComplexMatrix::zeros(n, n);
    let mut col = 0;
    for slot in slots {
        let v = match slot {
            Some(v) => v,
            None => kernel.remove(0),
        };
        w.set_column(col, &v);
        col += 1;
    }
    for v in kernel {
        w.set_column(col, &v);
        col += 1;
    }
    debug_assert_eq!(col, n);
    w
}

/// Orthonormal vectors completing `existing` to a basis of `C^n`.
pub(crate) fn kernel_completion<R: Real>(
    existing: &[Vec<Complex<R>>],
    n: usize,
) -> Vec<Vec<Complex<R>>> {
    let skip = tol::get::<R>(tol::GRAM_SCHMIDT_SKIP);
    let mut basis: Vec<Vec<Complex<R>>> = existing.to_vec();
    let mut added = Vec::new();
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = vec![Complex::zero(); n];
        v[k] = Complex::new(R::one(), R::zero());
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let proj = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = *x - *y * proj;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm < skip {
            continue;
        }
        let v: Vec<_> = v.into_iter().map(|z| z / norm).collect();
        basis.push(v.clone());
        added.push(v);
    }
    added
}
