//! Kets, density matrices, Bloch vectors and the trace distance.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, inner, pauli, vec_norm, ComplexMatrix};
use crate::scalar::{Complex, Real};
use crate::tol;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket<R: Real> {
    amplitudes: Vec<Complex<R>>,
}

impl<R: Real> Ket<R> {
    /// Accepts amplitudes whose norm is 1 within `1e-10`.
    pub fn new(amplitudes: Vec<Complex<R>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension(
                "ket must have at least one amplitude".into(),
            ));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Input("ket amplitudes must be finite".into()));
        }
        let norm = vec_norm(&amplitudes);
        if (norm - R::one()).abs() > tol::get::<R>(tol::RECONSTRUCTION) {
            return Err(Error::Input(format!(
                "ket is not normalized (norm = {norm})"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<R>>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if !norm.is_finite() || norm <= R::zero() {
            return Err(Error::Input(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut v = vec![Complex::zero(); dim];
        v[index] = Complex::new(R::one(), R::zero());
        Self { amplitudes: v }
    }

    /// Qubit `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`.
    pub fn from_bloch_angles(theta: R, phi: R) -> Self {
        let half = theta / R::lit(2.0);
        Self {
            amplitudes: vec![
                Complex::new(half.cos(), R::zero()),
                Complex::from_polar(half.sin(), phi),
            ],
        }
    }

    /// For a qubit `a|0> + b|1>`, the orthogonal state `-b̄|0> + ā|1>`.
    pub fn qubit_orthogonal(&self) -> Result<Self> {
        if self.dim() != 2 {
            return Err(Error::Dimension(
                "orthogonal partner defined for qubits only".into(),
            ));
        }
        let a = self.amplitudes[0];
        let b = self.amplitudes[1];
        Ok(Self {
            amplitudes: vec![-b.conj(), a.conj()],
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<R>] {
        &self.amplitudes
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Complex<R> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn projector(&self) -> ComplexMatrix<R> {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix<R> {
        DensityMatrix {
            matrix: self.projector(),
        }
    }

    pub fn evolve(&self, u: &ComplexMatrix<R>) -> Result<Self> {
        if u.shape() != (self.dim(), self.dim()) {
            return Err(Error::Dimension(format!(
                "operator {:?} on ket of dim {}",
                u.shape(),
                self.dim()
            )));
        }
        Self::normalized(u.matvec(&self.amplitudes))
    }

    pub fn bloch(&self) -> Result<BlochVector<R>> {
        density_to_bloch(&self.to_density())
    }
}

/// Checks that `basis` is an orthonormal basis of `C^dim`.
pub fn check_orthonormal_basis<R: Real>(basis: &[Ket<R>], dim: usize, tol: R) -> Result<()> {
    if basis.len() != dim || basis.iter().any(|k| k.dim() != dim) {
        return Err(Error::Input(format!(
            "expected {dim} basis vectors of dimension {dim}"
        )));
    }
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let expect = if i == j { R::one() } else { R::zero() };
            if (a.inner(b) - Complex::new(expect, R::zero())).norm() > tol {
                return Err(Error::Input(format!(
                    "basis vectors {i} and {j} are not orthonormal"
                )));
            }
        }
    }
    Ok(())
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<R: Real> {
    matrix: ComplexMatrix<R>,
}

impl<R: Real> DensityMatrix<R> {
    /// Validates Hermiticity and unit trace to `1e-10` and positivity to `1e-9`.
    pub fn new(matrix: ComplexMatrix<R>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {:?}",
                matrix.shape()
            )));
        }
        let herm = tol::get::<R>(tol::RECONSTRUCTION);
        if !matrix.is_finite() {
            return Err(Error::Input("density matrix has non-finite entries".into()));
        }
        if !matrix.is_hermitian(herm) {
            return Err(Error::Input("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr - Complex::new(R::one(), R::zero())).norm() > herm {
            return Err(Error::Input(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        if !matrix.is_psd(tol::get::<R>(tol::PSD)) {
            return Err(Error::Input(
                "density matrix is not positive semidefinite".into(),
            ));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Normalizes a positive (subnormalized) operator by its trace.
    pub fn from_unnormalized(matrix: ComplexMatrix<R>) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr.is_nan() || tr <= R::zero() {
            return Err(Error::Input(
                "cannot normalize an operator with nonpositive trace".into(),
            ));
        }
        Self::new(matrix.hermitian_part().scale_real(R::one() / tr))
    }

    /// Maximally mixed state `1/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(R::one() / R::lit(dim as f64)),
        }
    }

    /// `ρ_a ⊗ ρ_b`
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: crate::numerics::kron(&self.matrix, &other.matrix),
        }
    }

    /// `Σ w_i ρ_i`; the weights must be a probability vector.
    pub fn mixture(parts: &[(R, &Self)]) -> Result<Self> {
        let dim = parts
            .first()
            .ok_or_else(|| Error::Input("empty mixture".into()))?
            .1
            .dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::Dimension(
                    "mixture components differ in dimension".into(),
                ));
            }
            m = &m + &rho.matrix.scale_real(*w);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<R> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<R> {
        self.matrix
    }

    /// `ρ₁₂` for a qubit (the coherence between `|0>` and `|1>`).
    pub fn coherence(&self) -> Complex<R> {
        self.matrix[(0, 1)]
    }

    /// `U ρ U†`
    pub fn evolve(&self, u: &ComplexMatrix<R>) -> Result<Self> {
        if u.shape() != (self.dim(), self.dim()) {
            return Err(Error::Dimension(format!(
                "operator {:?} on state of dim {}",
                u.shape(),
                self.dim()
            )));
        }
        Ok(Self {
            matrix: u.conjugate(&self.matrix).hermitian_part(),
        })
    }

    pub fn purity(&self) -> R {
        self.matrix.matmul(&self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<R> {
        hermitian_eig(&self.matrix)
            .expect("density matrices are Hermitian")
            .eigenvalues
    }

    /// Skips validation; for internal results that are states by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix<R>) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }
}

/// Qubit Bloch vector, `|r| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector<R: Real> {
    pub x: R,
    pub y: R,
    pub z: R,
}

impl<R: Real> BlochVector<R> {
    pub fn new(x: R, y: R, z: R) -> Result<Self> {
        let r = Self { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::Input("Bloch components must be finite".into()));
        }
        if r.norm() > R::one() + tol::get::<R>(tol::RECONSTRUCTION) {
            return Err(Error::Input(format!(
                "Bloch vector length {} exceeds 1",
                r.norm()
            )));
        }
        Ok(r)
    }

    pub fn norm(&self) -> R {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_pure(&self, tol: R) -> bool {
        (self.norm() - R::one()).abs() <= tol
    }

    /// `(1 + r·σ) / 2`
    pub fn to_density(&self) -> DensityMatrix<R> {
        let [id, sx, sy, sz] = pauli::<R>();
        let half = R::lit(0.5);
        let m =
            &(&(&id + &sx.scale_real(self.x)) + &sy.scale_real(self.y)) + &sz.scale_real(self.z);
        DensityMatrix {
            matrix: m.scale_real(half),
        }
    }

    pub fn as_array(&self) -> [R; 3] {
        [self.x, self.y, self.z]
    }
}

/// Inverse of [`BlochVector::to_density`]: `r_i = tr(ρ σ_i)`.
pub fn density_to_bloch<R: Real>(rho: &DensityMatrix<R>) -> Result<BlochVector<R>> {
    if rho.dim() != 2 {
        return Err(Error::Dimension(format!(
            "Bloch vectors describe qubits, got dim {}",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let two = R::lit(2.0);
    let x = m[(0, 1)].re * two;
    let y = -m[(0, 1)].im * two;
    let z = (m[(0, 0)] - m[(1, 1)]).re;
    BlochVector::new(x, y, z)
}

/// `tr_E` of a matrix on `C^{d_S} ⊗ C^{d_E}` (system first).
pub fn partial_trace_env_matrix<R: Real>(
    m: &ComplexMatrix<R>,
    env_dim: usize,
) -> Result<ComplexMatrix<R>> {
    let total = m.rows();
    if !m.is_square() || env_dim == 0 || !total.is_multiple_of(env_dim) {
        return Err(Error::Dimension(format!(
            "matrix of shape {:?} does not factor with environment dimension {env_dim}",
            m.shape()
        )));
    }
    let sys = total / env_dim;
    Ok(ComplexMatrix::from_fn(sys, sys, |i, j| {
        (0..env_dim).fold(Complex::zero(), |acc, e| {
            acc + m[(i * env_dim + e, j * env_dim + e)]
        })
    }))
}

/// Reduced system state of a joint state, environment being the second factor.
pub fn partial_trace_env<R: Real>(
    rho_se: &DensityMatrix<R>,
    env_dim: usize,
) -> Result<DensityMatrix<R>> {
    Ok(DensityMatrix::from_matrix_unchecked(
        partial_trace_env_matrix(rho_se.matrix(), env_dim)?,
    ))
}

/// `½ tr|a - b|`, the trace distance.
pub fn trace_norm_distance<R: Real>(a: &DensityMatrix<R>, b: &DensityMatrix<R>) -> Result<R> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "states of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let diff = (a.matrix() - b.matrix()).hermitian_part();
    let eig = hermitian_eig(&diff)?;
    Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum::<R>() * R::lit(0.5))
}
