//! Unitary time-evolution operators `e^{-iht}` for Hermitian `h`.

use super::eig::hermitian_eig;
use super::matrix::{pauli, pauli_coefficients, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};
use crate::tol;

/// Closed-form `e^{-iht}` for a 2x2 Hermitian `h = γ0·1 + γ·σ`:
/// `e^{-iγ0 t} (cos(αt)·1 - i sin(αt) n·σ)` with `α = |γ|`, `n = γ/α`.
pub fn mat_exp_su2<R: Real>(h: &ComplexMatrix<R>, t: R) -> Result<ComplexMatrix<R>> {
    if h.shape() != (2, 2) {
        return Err(Error::Dimension(format!(
            "mat_exp_su2 needs a 2x2 matrix, got {:?}",
            h.shape()
        )));
    }
    if !t.is_finite() {
        return Err(Error::Input(format!("time must be finite, got {t}")));
    }
    if !h.is_hermitian(tol::get::<R>(tol::STRUCTURAL)) {
        return Err(Error::Contract(
            "mat_exp_su2 called on a non-Hermitian matrix".into(),
        ));
    }
    let [g0, g1, g2, g3] = pauli_coefficients(h);
    let global = Complex::new(R::zero(), -g0 * t).exp();
    let alpha = (g1 * g1 + g2 * g2 + g3 * g3).sqrt();
    if alpha == R::zero() {
        return Ok(ComplexMatrix::identity(2).scale(global));
    }
    let [id, sx, sy, sz] = pauli::<R>();
    let (s, c) = (alpha * t).sin_cos();
    let n_sigma =
        &(&sx.scale_real(g1 / alpha) + &sy.scale_real(g2 / alpha)) + &sz.scale_real(g3 / alpha);
    let u = &id.scale_real(c) - &n_sigma.scale(Complex::new(R::zero(), s));
    Ok(u.scale(global))
}

/// `e^{-iht}` through the spectral decomposition of `h`.
pub fn mat_exp_hermitian<R: Real>(h: &ComplexMatrix<R>, t: R) -> Result<ComplexMatrix<R>> {
    if !t.is_finite() {
        return Err(Error::Input(format!("time must be finite, got {t}")));
    }
    let eig = hermitian_eig(h)?;
    Ok(eig.map_eigenvalues(|l| Complex::new(R::zero(), -l * t).exp()))
}

/// `e^{-iht}`: closed form for 2x2 input, spectral route otherwise.
pub fn unitary_evolution<R: Real>(h: &ComplexMatrix<R>, t: R) -> Result<ComplexMatrix<R>> {
    if h.shape() == (2, 2) {
        mat_exp_su2(h, t)
    } else {
        mat_exp_hermitian(h, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type M = ComplexMatrix<f64>;

    #[test]
    fn zero_hamiltonian_gives_identity() {
        let u = mat_exp_su2(&M::zeros(2, 2), 3.7).unwrap();
        assert!(u.approx_eq(&M::identity(2), 1e-15));
    }

    #[test]
    fn sigma_z_quarter_period() {
        let [_, _, _, sz] = pauli::<f64>();
        let u = mat_exp_su2(&sz, PI / 2.0).unwrap();
        let want = M::diag(&[Complex::new(0.0, -1.0), Complex::new(0.0, 1.0)]);
        assert!(u.approx_eq(&want, 1e-15));
    }

    #[test]
    fn sigma_x_half_period_is_minus_identity() {
        let [_, sx, _, _] = pauli::<f64>();
        let u = mat_exp_su2(&sx, PI).unwrap();
        assert!(u.approx_eq(&M::identity(2).scale_real(-1.0), 1e-15));
    }

    #[test]
    fn pure_trace_part_is_global_phase() {
        let h = M::identity(2).scale_real(0.4);
        let u = mat_exp_su2(&h, 2.0).unwrap();
        let ph = Complex::new(0.0, -0.8).exp();
        assert!(u.approx_eq(&M::identity(2).scale(ph), 1e-15));
    }

    #[test]
    fn spectral_route_agrees_with_closed_form() {
        let h = crate::numerics::matrix::pauli_combination([0.2, -0.4, 1.1, 0.3]);
        let a = mat_exp_su2(&h, 1.3).unwrap();
        let b = mat_exp_hermitian(&h, 1.3).unwrap();
        assert!(a.approx_eq(&b, 1e-13));
    }

    #[test]
    fn rejects_non_hermitian_and_nonfinite_time() {
        let m = M::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(mat_exp_su2(&m, 1.0), Err(Error::Contract(_))));
        assert!(matches!(
            mat_exp_su2(&M::zeros(2, 2), f64::NAN),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            mat_exp_su2(&M::zeros(2, 2), f64::INFINITY),
            Err(Error::Input(_))
        ));
    }
}
