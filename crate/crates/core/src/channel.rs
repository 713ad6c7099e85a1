//! Qubit phase-damping channels generated by relative Hamiltonians.
//!
//! The joint Hamiltonian is `H = |0><0| ⊗ h1 + |1><1| ⊗ h2`. With the
//! environment starting in `|ψ0>`, the relative states are
//! `|ψk(t)> = e^{-i hk t}|ψ0>` and the channel multiplies the coherence `ρ₁₂`
//! by their overlap `C = <ψ2|ψ1>` while leaving populations untouched.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, unitary_evolution, ComplexMatrix};
use crate::scalar::{unit_phase, Complex, Real};
use crate::state::{check_orthonormal_basis, DensityMatrix, Ket};
use crate::tol;

/// Relative Hamiltonians on an `env_dim`-dimensional environment and its
/// initial pure state.
#[derive(Debug, Clone)]
pub struct DephasingModel<R: Real> {
    h1: ComplexMatrix<R>,
    h2: ComplexMatrix<R>,
    psi0: Ket<R>,
}

impl<R: Real> DephasingModel<R> {
    pub fn new(h1: ComplexMatrix<R>, h2: ComplexMatrix<R>, psi0: Ket<R>) -> Result<Self> {
        let n = psi0.dim();
        if h1.shape() != (n, n) || h2.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "relative Hamiltonians {:?}, {:?} do not match environment dimension {n}",
                h1.shape(),
                h2.shape()
            )));
        }
        let tol = tol::get::<R>(tol::RECONSTRUCTION);
        if !h1.is_hermitian(tol) || !h2.is_hermitian(tol) {
            return Err(Error::Contract(
                "relative Hamiltonians must be Hermitian".into(),
            ));
        }
        Ok(Self {
            h1: h1.hermitian_part(),
            h2: h2.hermitian_part(),
            psi0,
        })
    }

    pub fn env_dim(&self) -> usize {
        self.psi0.dim()
    }

    pub fn h1(&self) -> &ComplexMatrix<R> {
        &self.h1
    }

    pub fn h2(&self) -> &ComplexMatrix<R> {
        &self.h2
    }

    pub fn psi0(&self) -> &Ket<R> {
        &self.psi0
    }

    /// The joint Hamiltonian `|0><0| ⊗ h1 + |1><1| ⊗ h2` on `C^2 ⊗ C^n`.
    pub fn joint_hamiltonian(&self) -> ComplexMatrix<R> {
        let p0 = ComplexMatrix::diag(&[Complex::one(), Complex::zero()]);
        let p1 = ComplexMatrix::diag(&[Complex::zero(), Complex::one()]);
        &crate::numerics::kron(&p0, &self.h1) + &crate::numerics::kron(&p1, &self.h2)
    }

    /// Same Hamiltonians, different initial environment state.
    pub fn with_initial_state(&self, psi0: Ket<R>) -> Result<Self> {
        Self::new(self.h1.clone(), self.h2.clone(), psi0)
    }

    /// `(|ψ1(t)>, |ψ2(t)>)`
    pub fn relative_states(&self, t: R) -> Result<(Ket<R>, Ket<R>)> {
        let u1 = unitary_evolution(&self.h1, t)?;
        let u2 = unitary_evolution(&self.h2, t)?;
        Ok((self.psi0.evolve(&u1)?, self.psi0.evolve(&u2)?))
    }

    pub fn overlap_at(&self, t: R) -> Result<Overlap<R>> {
        let (psi1, psi2) = self.relative_states(t)?;
        overlap(&psi1, &psi2, t)
    }
}

/// `C(t) = <ψ2(t)|ψ1(t)>`, the factor applied to the coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap<R: Real> {
    pub value: Complex<R>,
    pub t: R,
}

impl<R: Real> Overlap<R> {
    pub fn new(value: Complex<R>, t: R) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() || !t.is_finite() {
            return Err(Error::Input("overlap and time must be finite".into()));
        }
        if value.norm() > R::one() + tol::get::<R>(tol::RECONSTRUCTION) {
            return Err(Error::Input(format!("|C| = {} exceeds 1", value.norm())));
        }
        Ok(Self { value, t })
    }

    /// Overlap with no associated time (`t = 0`).
    pub fn from_value(value: Complex<R>) -> Result<Self> {
        Self::new(value, R::zero())
    }

    pub fn abs(&self) -> R {
        self.value.norm()
    }

    /// `C/|C|`, taken as 1 at `C = 0`.
    pub fn phase(&self) -> Complex<R> {
        unit_phase(self.value, tol::get::<R>(tol::RANK_CUTOFF))
    }

    /// Channel is unitary to working precision.
    pub fn is_degenerate(&self) -> bool {
        self.abs() >= R::one() - tol::get::<R>(tol::DEGENERATE_OVERLAP)
    }
}

pub fn overlap<R: Real>(psi1: &Ket<R>, psi2: &Ket<R>, t: R) -> Result<Overlap<R>> {
    if psi1.dim() != psi2.dim() {
        return Err(Error::Dimension(format!(
            "kets of dimension {} and {}",
            psi1.dim(),
            psi2.dim()
        )));
    }
    Overlap::new(psi2.inner(psi1), t)
}

/// `ρ' = [[ρ₁₁, C ρ₁₂], [C̄ ρ₂₁, ρ₂₂]]`
pub fn apply_channel<R: Real>(rho: &DensityMatrix<R>, c: &Overlap<R>) -> Result<DensityMatrix<R>> {
    dephase(rho, c.value)
}

/// Coherence scaling by an arbitrary coefficient with `|coeff| <= 1`.
pub(crate) fn dephase<R: Real>(
    rho: &DensityMatrix<R>,
    coeff: Complex<R>,
) -> Result<DensityMatrix<R>> {
    if rho.dim() != 2 {
        return Err(Error::Dimension(format!(
            "phase damping acts on qubits, got dim {}",
            rho.dim()
        )));
    }
    if coeff.norm() > R::one() + tol::get::<R>(tol::RECONSTRUCTION) {
        return Err(Error::Input(format!("|C| = {} exceeds 1", coeff.norm())));
    }
    let mut m = rho.matrix().clone();
    m[(0, 1)] = m[(0, 1)] * coeff;
    m[(1, 0)] = m[(1, 0)] * coeff.conj();
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Diagonal Kraus operators of a phase-damping channel.
#[derive(Debug, Clone)]
pub struct KrausSet<R: Real> {
    operators: Vec<ComplexMatrix<R>>,
}

impl<R: Real> KrausSet<R> {
    pub fn new(operators: Vec<ComplexMatrix<R>>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::Input("Kraus set is empty".into()));
        }
        if operators.iter().any(|k| k.shape() != (2, 2)) {
            return Err(Error::Dimension("Kraus operators must be 2x2".into()));
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix<R>] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `Σ K† K`
    pub fn completeness(&self) -> ComplexMatrix<R> {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(2, 2), |acc, k| {
                &acc + &k.adjoint().matmul(k)
            })
    }

    pub fn is_complete(&self, tol: R) -> bool {
        self.completeness()
            .approx_eq(&ComplexMatrix::identity(2), tol)
    }

    pub fn is_diagonal(&self, tol: R) -> bool {
        self.operators.iter().all(|k| k.is_diagonal(tol))
    }

    /// `Σ K ρ K†`
    pub fn apply(&self, rho: &DensityMatrix<R>) -> Result<DensityMatrix<R>> {
        if rho.dim() != 2 {
            return Err(Error::Dimension("Kraus set acts on qubits".into()));
        }
        let m = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(2, 2), |acc, k| {
                &acc + &k.conjugate(rho.matrix())
            });
        Ok(DensityMatrix::from_matrix_unchecked(m))
    }
}

/// `L_β = diag(<χβ|ψ1>, <χβ|ψ2>)` for an orthonormal environment basis `{χβ}`.
pub fn kraus_from_env_basis<R: Real>(
    model: &DephasingModel<R>,
    t: R,
    basis: &[Ket<R>],
) -> Result<KrausSet<R>> {
    check_orthonormal_basis(basis, model.env_dim(), tol::get::<R>(tol::RECONSTRUCTION))?;
    let (psi1, psi2) = model.relative_states(t)?;
    let ops = basis
        .iter()
        .map(|chi| ComplexMatrix::diag(&[chi.inner(&psi1), chi.inner(&psi2)]))
        .collect();
    KrausSet::new(ops)
}

/// Computational basis of `C^n` as kets.
pub fn computational_basis<R: Real>(n: usize) -> Vec<Ket<R>> {
    (0..n).map(|i| Ket::basis(n, i)).collect()
}

/// Choi matrix with block `(i, j)` equal to `Φ(E_ij)`:
/// ones at (1,1) and (4,4), `C` at (1,4) and `C̄` at (4,1).
pub fn choi<R: Real>(c: &Overlap<R>) -> ComplexMatrix<R> {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = Complex::one();
    m[(3, 3)] = Complex::one();
    m[(0, 3)] = c.value;
    m[(3, 0)] = c.value.conj();
    m
}

/// Choi matrix of an arbitrary qubit map, built from its action on matrix units.
pub fn choi_of_map<R: Real>(
    map: impl Fn(&ComplexMatrix<R>) -> ComplexMatrix<R>,
) -> ComplexMatrix<R> {
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let mut e = ComplexMatrix::zeros(2, 2);
            e[(i, j)] = Complex::one();
            let block = map(&e);
            for a in 0..2 {
                for b in 0..2 {
                    out[(2 * i + a, 2 * j + b)] = block[(a, b)];
                }
            }
        }
    }
    out
}

/// Kraus operators from the Choi spectrum: every eigenvalue `λ > cutoff`
/// with eigenvector `v` gives `K[a][i] = √λ · v[2i + a]`.
pub fn kraus_from_choi<R: Real>(choi: &ComplexMatrix<R>, cutoff: R) -> Result<KrausSet<R>> {
    if choi.shape() != (4, 4) {
        return Err(Error::Dimension("qubit Choi matrices are 4x4".into()));
    }
    let eig = hermitian_eig(choi)?;
    let ops = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cutoff)
        .map(|(k, &l)| {
            let v = eig.vector(k);
            let s = l.sqrt();
            ComplexMatrix::from_fn(2, 2, |a, i| v[2 * i + a] * s)
        })
        .collect();
    KrausSet::new(ops)
}

/// Random-unitary form `p1 U1 ρ U1† + p2 U2 ρ U2†` with
/// `p1 = (1-|C|)/2`, `U1 = diag(-C/|C|, 1)`, `p2 = (1+|C|)/2`, `U2 = diag(C/|C|, 1)`.
#[derive(Debug, Clone)]
pub struct RUDecomposition<R: Real> {
    pub p1: R,
    pub p2: R,
    pub u1: ComplexMatrix<R>,
    pub u2: ComplexMatrix<R>,
}

impl<R: Real> RUDecomposition<R> {
    pub fn apply(&self, rho: &DensityMatrix<R>) -> Result<DensityMatrix<R>> {
        let a = rho.evolve(&self.u1)?.into_matrix().scale_real(self.p1);
        let b = rho.evolve(&self.u2)?.into_matrix().scale_real(self.p2);
        Ok(DensityMatrix::from_matrix_unchecked(&a + &b))
    }

    /// `K_α = √p_α U_α`
    pub fn kraus(&self) -> KrausSet<R> {
        KrausSet {
            operators: vec![
                self.u1.scale_real(self.p1.sqrt()),
                self.u2.scale_real(self.p2.sqrt()),
            ],
        }
    }

    /// Only the second unitary carries weight (`p1 = 0`).
    pub fn is_degenerate(&self) -> bool {
        self.p1 == R::zero()
    }

    /// Unitary for outcome `alpha` (1-based).
    pub fn unitary(&self, alpha: usize) -> Option<&ComplexMatrix<R>> {
        match alpha {
            1 => Some(&self.u1),
            2 => Some(&self.u2),
            _ => None,
        }
    }
}

pub fn ru_decomposition<R: Real>(c: &Overlap<R>) -> RUDecomposition<R> {
    let phase = c.phase();
    let one = Complex::one();
    let half = R::lit(0.5);
    let (p1, p2) = if c.is_degenerate() {
        (R::zero(), R::one())
    } else {
        let a = c.abs();
        ((R::one() - a) * half, (R::one() + a) * half)
    };
    RUDecomposition {
        p1,
        p2,
        u1: ComplexMatrix::diag(&[-phase, one]),
        u2: ComplexMatrix::diag(&[phase, one]),
    }
}
