//! Default tolerances.

/// Structural predicates (Hermitian, unitary, PSD) when no tolerance is given.
pub const STRUCTURAL: f64 = 1e-9;
/// Reconstruction and identity checks.
pub const RECONSTRUCTION: f64 = 1e-10;
/// Density-matrix positivity; looser because normalizing small branches amplifies rounding.
pub const PSD: f64 = 1e-9;
/// Components below this modulus are skipped when fixing eigenvector phases.
pub const PHASE_CUTOFF: f64 = 1e-12;
/// Singular values at or below this count as zero.
pub const RANK_CUTOFF: f64 = 1e-12;
/// Gram-Schmidt candidates with smaller residual norm are discarded.
pub const GRAM_SCHMIDT_SKIP: f64 = 1e-8;
/// `|C|` within this distance of 1 means the channel is unitary.
pub const DEGENERATE_OVERLAP: f64 = 1e-12;
/// Measurement branches at or below this probability are not reported.
pub const BRANCH_DROP: f64 = 1e-12;
/// Branch probability above which an unexpected outcome is an invariant failure.
pub const BRANCH_SIGNIFICANT: f64 = 1e-10;

/// `x` in the working precision, floored at a thousand machine epsilons so the
/// `f64`-sized defaults stay meaningful for `f32`.
pub fn get<R: crate::scalar::Real>(x: f64) -> R {
    R::lit(x).max(R::epsilon() * R::lit(1e3))
}
