//! Correction attempts when the environment starts in the mixture
//! `ρ_E = w|ψ0><ψ0| + (1-w)|ψ0⊥><ψ0⊥|` of a qubit state and its orthogonal
//! partner. The channel coefficient becomes `wC + (1-w)C⊥`.
//!
//! Two protocols are compared with the uncorrected output:
//! `ρ_c` applies the apparatus built for `ψ0` and averages the corrected
//! branches, `ρ̃_c = wρ_c + (1-w)σ_c` also averages in the branches produced by
//! the apparatus built for `ψ0⊥`.

use crate::channel::{dephase, DephasingModel, Overlap};
use crate::correction::{
    correct_state, joint_evolve, measure_env, Apparatus, MeasureMode, MeasurementOutcome,
};
use crate::error::{Error, Result};
use crate::numerics::{pauli_combination, ComplexMatrix};
use crate::scalar::{Complex, Real};
use crate::state::{partial_trace_env, trace_norm_distance, DensityMatrix, Ket};
use crate::tol;

#[derive(Debug, Clone)]
pub struct MixedEnvModel<R: Real> {
    w: R,
    h1: ComplexMatrix<R>,
    h2: ComplexMatrix<R>,
    psi0: Ket<R>,
    psi0_perp: Ket<R>,
    coupling: Option<(R, [R; 3])>,
}

impl<R: Real> MixedEnvModel<R> {
    /// `h1 = kσz + Γ·σ`, `h2 = -kσz + Γ·σ`.
    pub fn from_coupling(w: R, k: R, gamma: [R; 3], psi0: Ket<R>) -> Result<Self> {
        if !k.is_finite() || gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::Input("coupling parameters must be finite".into()));
        }
        let [g1, g2, g3] = gamma;
        let h1 = pauli_combination([R::zero(), g1, g2, g3 + k]);
        let h2 = pauli_combination([R::zero(), g1, g2, g3 - k]);
        let mut model = Self::from_hamiltonians(w, h1, h2, psi0)?;
        model.coupling = Some((k, gamma));
        Ok(model)
    }

    /// Arbitrary qubit Hamiltonians, used to probe models outside the `k, Γ` form.
    pub fn from_hamiltonians(
        w: R,
        h1: ComplexMatrix<R>,
        h2: ComplexMatrix<R>,
        psi0: Ket<R>,
    ) -> Result<Self> {
        if !(w >= R::zero() && w <= R::one()) {
            return Err(Error::Input(format!(
                "mixture weight must lie in [0, 1], got {w}"
            )));
        }
        if psi0.dim() != 2 {
            return Err(Error::Dimension("mixed environment must be a qubit".into()));
        }
        // validates shapes and hermiticity
        DephasingModel::new(h1.clone(), h2.clone(), psi0.clone())?;
        let psi0_perp = psi0.qubit_orthogonal()?;
        let ov = psi0_perp.inner(&psi0).norm();
        if ov > tol::get::<R>(tol::PHASE_CUTOFF) {
            return Err(Error::Invariant(format!("<ψ0⊥|ψ0> = {ov}")));
        }
        Ok(Self {
            w,
            h1,
            h2,
            psi0,
            psi0_perp,
            coupling: None,
        })
    }

    pub fn w(&self) -> R {
        self.w
    }

    pub fn with_weight(&self, w: R) -> Result<Self> {
        let mut m =
            Self::from_hamiltonians(w, self.h1.clone(), self.h2.clone(), self.psi0.clone())?;
        m.coupling = self.coupling;
        Ok(m)
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

    pub fn psi0_perp(&self) -> &Ket<R> {
        &self.psi0_perp
    }

    /// `(k, Γ)` when built with [`MixedEnvModel::from_coupling`].
    pub fn coupling(&self) -> Option<(R, [R; 3])> {
        self.coupling
    }

    pub fn env_state(&self) -> DensityMatrix<R> {
        let a = self.psi0.to_density();
        let b = self.psi0_perp.to_density();
        DensityMatrix::from_matrix_unchecked(
            &a.matrix().scale_real(self.w) + &b.matrix().scale_real(R::one() - self.w),
        )
    }

    /// The pure model with environment `ψ0`.
    pub fn pure_model(&self) -> DephasingModel<R> {
        DephasingModel::new(self.h1.clone(), self.h2.clone(), self.psi0.clone())
            .expect("validated at construction")
    }

    /// The pure model with environment `ψ0⊥`.
    pub fn perp_model(&self) -> DephasingModel<R> {
        DephasingModel::new(self.h1.clone(), self.h2.clone(), self.psi0_perp.clone())
            .expect("validated at construction")
    }

    /// `Φ_t(ρ)` through the effective coefficient.
    pub fn effective_channel(&self, rho: &DensityMatrix<R>, t: R) -> Result<DensityMatrix<R>> {
        let pair = relative_overlaps(self, t)?;
        dephase(rho, pair.effective(self.w))
    }

    /// `Φ_t(ρ)` through joint evolution and partial trace.
    pub fn joint_channel(&self, rho: &DensityMatrix<R>, t: R) -> Result<DensityMatrix<R>> {
        let joint = joint_evolve(rho, &self.env_state(), &self.h1, &self.h2, t)?;
        partial_trace_env(&joint, 2)
    }
}

/// `C = <ψ2|ψ1>` and `C⊥ = <ψ2⊥|ψ1⊥>` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapPair<R: Real> {
    pub c: Complex<R>,
    pub c_perp: Complex<R>,
    pub t: R,
}

impl<R: Real> OverlapPair<R> {
    pub fn effective(&self, w: R) -> Complex<R> {
        self.c * w + self.c_perp * (R::one() - w)
    }

    /// `max(|Re C - Re C⊥|, |Im C + Im C⊥|)`
    pub fn symmetry_residual(&self) -> R {
        (self.c.re - self.c_perp.re)
            .abs()
            .max((self.c.im + self.c_perp.im).abs())
    }
}

pub fn relative_overlaps<R: Real>(model: &MixedEnvModel<R>, t: R) -> Result<OverlapPair<R>> {
    let c = model.pure_model().overlap_at(t)?;
    let c_perp = model.perp_model().overlap_at(t)?;
    Ok(OverlapPair {
        c: c.value,
        c_perp: c_perp.value,
        t,
    })
}

/// Corrected states of both apparatuses applied to the mixed joint state.
#[derive(Debug, Clone)]
pub struct CorrectedFamily<R: Real> {
    pub rho_1c: DensityMatrix<R>,
    pub rho_2c: DensityMatrix<R>,
    pub sigma_1c: DensityMatrix<R>,
    pub sigma_2c: DensityMatrix<R>,
    /// `Σ p(λ_α) ρ_{α,c}`
    pub rho_c: DensityMatrix<R>,
    /// `w ρ_c + (1-w) σ_c`
    pub rho_tilde_c: DensityMatrix<R>,
    pub p_lambda: [R; 2],
    pub p_mu: [R; 2],
}

fn corrected_pair<R: Real>(
    joint: &DensityMatrix<R>,
    app: &Apparatus<R>,
) -> Result<([DensityMatrix<R>; 2], [R; 2])> {
    let outcomes = measure_env(joint, &app.observable, MeasureMode::Enumerate)?;
    let find = |alpha: usize| -> Result<&MeasurementOutcome<R>> {
        outcomes
            .iter()
            .find(|o| o.alpha == alpha)
            .ok_or_else(|| Error::Invariant(format!("outcome {alpha} has vanishing probability")))
    };
    let (o1, o2) = (find(1)?, find(2)?);
    if let Some(extra) = outcomes.iter().find(|o| o.alpha > 2) {
        return Err(Error::Invariant(format!(
            "unexpected outcome {}",
            extra.alpha
        )));
    }
    Ok((
        [correct_state(o1, &app.ru)?, correct_state(o2, &app.ru)?],
        [o1.probability, o2.probability],
    ))
}

/// Runs both apparatuses on the true mixed-environment joint state.
///
/// Requires `0 < w < 1`; the endpoints are pure environments and are
/// rejected with [`Error::PureEnvironment`].
pub fn corrected_family<R: Real>(
    model: &MixedEnvModel<R>,
    rho: &DensityMatrix<R>,
    t: R,
) -> Result<CorrectedFamily<R>> {
    let w = model.w;
    if w <= R::zero() || w >= R::one() {
        return Err(Error::PureEnvironment(w.to_f64().unwrap_or(f64::NAN)));
    }
    let joint = joint_evolve(rho, &model.env_state(), &model.h1, &model.h2, t)?;
    let app = Apparatus::build(&model.pure_model(), t)?;
    let app_perp = Apparatus::build(&model.perp_model(), t)?;
    let ([rho_1c, rho_2c], p_lambda) = corrected_pair(&joint, &app)?;
    let ([sigma_1c, sigma_2c], p_mu) = corrected_pair(&joint, &app_perp)?;
    let rho_c = DensityMatrix::mixture(&[(p_lambda[0], &rho_1c), (p_lambda[1], &rho_2c)])?;
    let sigma_c = DensityMatrix::mixture(&[(p_mu[0], &sigma_1c), (p_mu[1], &sigma_2c)])?;
    let rho_tilde_c = DensityMatrix::mixture(&[(w, &rho_c), (R::one() - w, &sigma_c)])?;
    Ok(CorrectedFamily {
        rho_1c,
        rho_2c,
        sigma_1c,
        sigma_2c,
        rho_c,
        rho_tilde_c,
        p_lambda,
        p_mu,
    })
}

/// Trace distances from the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distances<R: Real> {
    pub d_uncorrected: R,
    pub d_rho1c: R,
    pub d_rho2c: R,
    pub d_rhoc: R,
    pub d_rhotildec: R,
}

impl<R: Real> Distances<R> {
    pub fn as_array(&self) -> [R; 5] {
        [
            self.d_uncorrected,
            self.d_rho1c,
            self.d_rho2c,
            self.d_rhoc,
            self.d_rhotildec,
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> R {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .fold(R::zero(), |m, (a, b)| m.max((*a - b).abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceReport<R: Real> {
    pub t: R,
    pub distances: Distances<R>,
}

impl<R: Real> DistanceReport<R> {
    /// `d_uncorrected` strictly below every corrected distance.
    pub fn uncorrected_beats_all(&self) -> bool {
        let d = &self.distances;
        [d.d_rho1c, d.d_rho2c, d.d_rhoc, d.d_rhotildec]
            .iter()
            .all(|&x| d.d_uncorrected < x)
    }

    /// `d_uncorrected` strictly below both protocol outputs `ρ_c` and `ρ̃_c`.
    pub fn uncorrected_beats_protocols(&self) -> bool {
        let d = &self.distances;
        d.d_uncorrected < d.d_rhoc && d.d_uncorrected < d.d_rhotildec
    }
}

pub fn distance_report<R: Real>(
    rho: &DensityMatrix<R>,
    family: &CorrectedFamily<R>,
    model: &MixedEnvModel<R>,
    t: R,
) -> Result<DistanceReport<R>> {
    let d = |other: &DensityMatrix<R>| trace_norm_distance(rho, other);
    let distances = Distances {
        d_uncorrected: d(&model.effective_channel(rho, t)?)?,
        d_rho1c: d(&family.rho_1c)?,
        d_rho2c: d(&family.rho_2c)?,
        d_rhoc: d(&family.rho_c)?,
        d_rhotildec: d(&family.rho_tilde_c)?,
    };
    Ok(DistanceReport { t, distances })
}

/// Leading-order distances for `C = 1 - iε`, `C⊥ = 1 + iε`. `ε` enters
/// through its magnitude.
pub fn analytic_distances<R: Real>(rho12: Complex<R>, w: R, epsilon: R) -> Distances<R> {
    let two_r = R::lit(2.0) * rho12.norm();
    let eps = epsilon.abs();
    let half = R::lit(0.5);
    let one_ie = Complex::new(R::one(), eps).norm();
    Distances {
        d_uncorrected: two_r * (w - half).abs() * eps,
        d_rho1c: two_r * one_ie,
        d_rho2c: R::zero(),
        d_rhoc: two_r * (R::one() - w) * one_ie,
        d_rhotildec: two_r * (w * (R::one() - w) + half).abs(),
    }
}

/// Leading-order outcome probabilities of the `ψ0` apparatus:
/// `p(λ_α) = w p_α + (1-w)(1-p_α)`.
pub fn outcome_probabilities<R: Real>(w: R, p: [R; 2]) -> [R; 2] {
    p.map(|pa| w * pa + (R::one() - w) * (R::one() - pa))
}

/// A time at which `C ≈ 1 - iε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonRegime<R: Real> {
    pub t: R,
    /// `-Im C`
    pub epsilon: R,
    /// `|Re C - 1|`
    pub residual: R,
}

/// Grid times with `|Re C - 1| <= tol` and `|Im C| > √tol`.
pub fn find_epsilon_regime<R: Real>(
    model: &MixedEnvModel<R>,
    t_grid: &[R],
    tol: R,
) -> Result<Vec<EpsilonRegime<R>>> {
    if t_grid.is_empty() {
        return Err(Error::Input("time grid is empty".into()));
    }
    let pure = model.pure_model();
    let floor = tol.sqrt();
    let mut found = Vec::new();
    for &t in t_grid {
        let Overlap { value: c, .. } = pure.overlap_at(t)?;
        let residual = (c.re - R::one()).abs();
        if residual <= tol && c.im.abs() > floor {
            found.push(EpsilonRegime {
                t,
                epsilon: -c.im,
                residual,
            });
        }
    }
    Ok(found)
}

/// Uniform grid of `steps` points on `[start, end]`; a single point sits at `start`.
pub fn time_grid<R: Real>(start: R, end: R, steps: usize) -> Vec<R> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let dt = (end - start) / R::lit((steps - 1) as f64);
            (0..steps).map(|i| start + dt * R::lit(i as f64)).collect()
        }
    }
}
