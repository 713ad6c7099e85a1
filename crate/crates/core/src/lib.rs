//! Environment-assisted error correction of single-qubit phase damping.
//!
//! A qubit coupled to an environment through `H = |0><0| ⊗ h1 + |1><1| ⊗ h2`
//! loses coherence as `ρ01 -> C ρ01` with `C = <ψ2|ψ1>`. Measuring a suitable
//! environment observable and applying a branch-dependent unitary restores the
//! original qubit state exactly when the environment starts pure.
//!
//! Everything is generic over the real scalar ([`Real`], implemented for `f32`
//! and `f64`); the aliases below fix it to `f64`.

pub mod channel;
pub mod cli;
pub mod correction;
pub mod error;
pub mod mixed;
pub mod numerics;
pub mod scalar;
pub mod state;
pub mod tol;

pub use channel::{
    apply_channel, choi, choi_of_map, computational_basis, kraus_from_choi, kraus_from_env_basis,
    overlap, ru_decomposition, DephasingModel, KrausSet, Overlap, RUDecomposition,
};
pub use correction::{
    build_a, correct_state, correction_basis, joint_evolve, measure_env, round_trip,
    round_trip_with, trivial_channel_basis, Apparatus, BasisChange, BranchReport,
    CorrectionObservable, MeasureMode, MeasurementOutcome, RoundTripReport,
};
pub use error::{Error, Result};
pub use mixed::{
    analytic_distances, corrected_family, distance_report, find_epsilon_regime,
    outcome_probabilities, relative_overlaps, time_grid, CorrectedFamily, DistanceReport,
    Distances, EpsilonRegime, MixedEnvModel, OverlapPair,
};
pub use numerics::ComplexMatrix;
pub use scalar::{Complex, Real};
pub use state::{
    check_orthonormal_basis, density_to_bloch, partial_trace_env, trace_norm_distance, BlochVector,
    DensityMatrix, Ket,
};

pub type C64 = Complex<f64>;
pub type CMatrix = ComplexMatrix<f64>;
pub type Density = DensityMatrix<f64>;
pub type Qubit = Ket<f64>;
pub type Bloch = BlochVector<f64>;
pub type Model = DephasingModel<f64>;
pub type Coefficient = Overlap<f64>;
pub type RandomUnitary = RUDecomposition<f64>;
pub type MixedModel = MixedEnvModel<f64>;
