//! Cyclic Jacobi diagonalization of small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies a real Jacobi rotation, so the update is a single
//! unitary `G` acting on the `(p, q)` plane: `A <- G† A G`, `V <- V G`.

use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};
use crate::tol;

const MAX_SWEEPS: usize = 100;
/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

/// Eigenvalues in ascending order, with eigenvector `i` stored as column `i`.
#[derive(Debug, Clone)]
pub struct EigResult<R: Real> {
    pub eigenvalues: Vec<R>,
    pub eigenvectors: ComplexMatrix<R>,
}

impl<R: Real> EigResult<R> {
    pub fn vector(&self, i: usize) -> Vec<Complex<R>> {
        self.eigenvectors.column(i)
    }

    /// `V · diag(λ) · V†`
    pub fn reconstruct(&self) -> ComplexMatrix<R> {
        self.map_eigenvalues(|l| Complex::new(l, R::zero()))
    }

    /// `V · diag(f(λ)) · V†`, the spectral calculus.
    pub fn map_eigenvalues(&self, f: impl Fn(R) -> Complex<R>) -> ComplexMatrix<R> {
        let d: Vec<_> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        v.matmul(&ComplexMatrix::diag(&d)).matmul(&v.adjoint())
    }
}

/// Diagonalizes a Hermitian matrix (dimension at most [`MAX_DIM`]).
///
/// Eigenvectors are phase-fixed: the first component with modulus above
/// `1e-12` is real and positive.
pub fn hermitian_eig<R: Real>(m: &ComplexMatrix<R>) -> Result<EigResult<R>> {
    hermitian_eig_tol(m, tol::get::<R>(tol::STRUCTURAL))
}

/// [`hermitian_eig`] with an explicit Hermiticity tolerance.
pub fn hermitian_eig_tol<R: Real>(m: &ComplexMatrix<R>, herm_tol: R) -> Result<EigResult<R>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigensolver needs a square matrix, got {:?}",
            m.shape()
        )));
    }
    let n = m.rows();
    if n > MAX_DIM {
        return Err(Error::Dimension(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    if !m.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    if !m.is_hermitian(herm_tol) {
        return Err(Error::Contract(
            "hermitian_eig called on a non-Hermitian matrix".into(),
        ));
    }

    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(R::min_positive_value());
    let threshold = R::epsilon() * R::lit(1e-2) * scale;

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("finite eigenvalues")
    });
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let mut col = v.column(i);
        fix_phase(&mut col);
        vectors.set_column(k, &col);
    }
    Ok(EigResult {
        eigenvalues,
        eigenvectors: vectors,
    })
}

fn off_diagonal_norm<R: Real>(a: &ComplexMatrix<R>) -> R {
    let n = a.rows();
    let mut s = R::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate<R: Real>(a: &mut ComplexMatrix<R>, v: &mut ComplexMatrix<R>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag.is_zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Real Jacobi angle for [[app, mag], [mag, aqq]].
    let theta = (aqq - app) / (R::lit(2.0) * mag);
    let t = if theta.is_infinite() {
        R::zero()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + R::one()).sqrt())
    };
    let cs = R::one() / (t * t + R::one()).sqrt();
    let sn = t * cs;
    // D = diag(1, e^{-iφ}) makes the pivot real; G = D·[[c, s], [-s, c]].
    let phase = (apq / mag).conj();
    let g_pp = Complex::new(cs, R::zero());
    let g_pq = Complex::new(sn, R::zero());
    let g_qp = phase * (-sn);
    let g_qq = phase * cs;

    let n = a.rows();
    // A <- A G (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G† A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, R::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, R::zero());
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

pub(crate) fn fix_phase<R: Real>(col: &mut [Complex<R>]) {
    let cutoff = tol::get::<R>(tol::PHASE_CUTOFF);
    if let Some(z) = col.iter().find(|z| z.norm() > cutoff).copied() {
        let ph = (z / z.norm()).conj();
        for x in col.iter_mut() {
            *x = *x * ph;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::pauli;

    type M = ComplexMatrix<f64>;

    fn assert_eig_valid(m: &M, eig: &EigResult<f64>, tol: f64) {
        assert!(eig.reconstruct().approx_eq(m, tol), "reconstruction failed");
        assert!(
            eig.eigenvectors.is_unitary(tol),
            "eigenvectors not orthonormal"
        );
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for i in 0..m.rows() {
            let v = eig.vector(i);
            let mv = m.matvec(&v);
            for (a, b) in mv.iter().zip(&v) {
                assert!((*a - *b * eig.eigenvalues[i]).norm() < tol);
            }
        }
    }

    #[test]
    fn sigma_z_spectrum() {
        let [_, _, _, sz] = pauli::<f64>();
        let eig = hermitian_eig(&sz).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 1.0]);
        assert_eig_valid(&sz, &eig, 1e-14);
    }

    #[test]
    fn identity_is_degenerate_but_valid() {
        let id = M::identity(4);
        let eig = hermitian_eig(&id).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0; 4]);
        assert!(eig.eigenvectors.is_unitary(1e-14));
    }

    #[test]
    fn complex_offdiagonal_phases() {
        let [_, sx, sy, _] = pauli::<f64>();
        let h = &sx.scale_real(0.3) + &sy.scale_real(-0.8);
        let eig = hermitian_eig(&h).unwrap();
        let r = (0.3f64.powi(2) + 0.8f64.powi(2)).sqrt();
        assert!((eig.eigenvalues[0] + r).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - r).abs() < 1e-14);
        assert_eig_valid(&h, &eig, 1e-13);
    }

    #[test]
    fn phase_convention_first_component_real_positive() {
        let h = M::from_fn(3, 3, |i, j| {
            Complex::new(
                (i + j) as f64,
                if i < j {
                    1.0
                } else if i > j {
                    -1.0
                } else {
                    0.0
                },
            )
        });
        let eig = hermitian_eig(&h).unwrap();
        for k in 0..3 {
            let col = eig.vector(k);
            let first = col.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(first.im.abs() < 1e-15 && first.re > 0.0);
        }
        assert_eig_valid(&h, &eig, 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(hermitian_eig(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn rejects_oversized() {
        let m = M::identity(MAX_DIM + 1);
        assert!(matches!(hermitian_eig(&m), Err(Error::Dimension(_))));
    }

    #[test]
    fn works_for_f32() {
        let [_, _, _, sz] = pauli::<f32>();
        let eig = hermitian_eig(&sz).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0f32, 1.0]);
    }
}
