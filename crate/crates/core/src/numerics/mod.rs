//! Small dense complex linear algebra.

mod eig;
mod expm;
mod matrix;
mod svd;

pub use eig::{hermitian_eig, hermitian_eig_tol, EigResult, MAX_DIM};
pub use expm::{mat_exp_hermitian, mat_exp_su2, unitary_evolution};
pub use matrix::{
    inner, kron, pauli, pauli_coefficients, pauli_combination, vec_norm, ComplexMatrix,
};
pub use svd::{svd_2xn, Svd2xN};

pub(crate) use svd::{check_shape as check_2xn, right_vectors};
