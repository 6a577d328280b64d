//! Stochastic Bloch equations for a radiating two-level system driven by the
//! collapse noise, in dimensionless simulation units.
//!
//! Stratonovich form, with s = (⟨σx⟩, ⟨σy⟩, ⟨σz⟩):
//!
//! ```text
//! dsx = (−Ω sy − β sx) dt                + 2√λz sy ∘dWz
//! dsy = ( Ω sx − β sy) dt + 2√λx sz ∘dWx − 2√λz sx ∘dWz
//! dsz = −2β (sz + 1) dt   − 2√λx sy ∘dWx
//! ```
//!
//! The noise fields are rotations, B_x about the x axis and B_z about the z
//! axis, so ½ΣB_k·∇B_k is diagonal: (−2λz, −2λx − 2λz, −2λx).

mod closed_form;
mod ensemble;

pub use closed_form::{autocorrelation_closed_form, excited_population, mean_closed_form, CorrelationForm};
pub use ensemble::{
    autocorrelation_sde, bloch_chunk, chunk_count, correlation_chunk, finish_bloch, finish_correlation, reduce_chunks,
    run_ensemble, ChunkMoments, CorrelationStats, EnsembleStats, CHUNK_TRAJECTORIES,
};

use crate::error::{ensure, Error, Result};

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheme {
    /// Euler–Maruyama on the Itô form (Stratonovich drift + correction).
    ItoEuler,
    /// Stochastic Heun predictor–corrector, converging to the Stratonovich solution.
    #[default]
    StratonovichHeun,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub omega_qed: f64,
    pub beta_qed: f64,
    pub lambda_x: f64,
    pub lambda_z: f64,
    pub dt: f64,
    pub t_max: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub scheme: Scheme,
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_qed", self.omega_qed),
            ("beta_qed", self.beta_qed),
            ("lambda_x", self.lambda_x),
            ("lambda_z", self.lambda_z),
        ] {
            ensure(v >= 0.0 && v.is_finite(), name, "must be non-negative and finite")?;
        }
        ensure(self.dt > 0.0 && self.dt.is_finite(), "dt", "must be positive")?;
        ensure(self.t_max >= self.dt && self.t_max.is_finite(), "t_max", "must be at least dt")?;
        ensure(self.n_traj >= 1, "n_traj", "must be at least 1")?;
        let fastest = self.omega_qed.max(self.beta_qed + 2.0 * self.lambda_x + 2.0 * self.lambda_z);
        ensure(
            self.dt * fastest <= 0.1 * (1.0 + 1e-12),
            "dt",
            "must resolve the fastest rate: dt <= 0.1 / max(omega_qed, beta_qed + 2 lambda_x + 2 lambda_z)",
        )
    }

    /// Number of steps on the grid 0, dt, …, n·dt ≈ t_max.
    pub fn n_steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps()).map(move |k| k as f64 * self.dt)
    }

    /// Total coherence decay rate β_QED + λx + 2λz.
    pub fn total_width(&self) -> f64 {
        self.beta_qed + self.lambda_x + 2.0 * self.lambda_z
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochState {
    pub const GROUND: BlochState = BlochState { sx: 0.0, sy: 0.0, sz: -1.0 };
    pub const EXCITED: BlochState = BlochState { sx: 0.0, sy: 0.0, sz: 1.0 };

    pub fn new(sx: f64, sy: f64, sz: f64) -> Result<Self> {
        let s = BlochState { sx, sy, sz };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.sx.is_finite() && self.sy.is_finite() && self.sz.is_finite(),
            "state",
            "components must be finite",
        )?;
        ensure(self.sz.abs() <= 1.0 + 1e-6, "sz", "|sz| must not exceed 1")
    }

    pub fn is_finite(&self) -> bool {
        self.sx.is_finite() && self.sy.is_finite() && self.sz.is_finite()
    }

    fn to_array(self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    fn from_array(v: [f64; 3]) -> Self {
        BlochState { sx: v[0], sy: v[1], sz: v[2] }
    }
}

/// Diagonal Itô drift correction on (sx, sy, sz).
pub fn ito_drift_correction(params: &SimParams) -> [f64; 3] {
    let (lx, lz) = (params.lambda_x, params.lambda_z);
    [-2.0 * lz, -2.0 * lx - 2.0 * lz, -2.0 * lx]
}

/// Precomputed coefficients of the linear SDE. `affine` carries the −2β
/// pull of sz toward the ground state; the two-time correlation equations
/// have the same structure without it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Propagator {
    omega: f64,
    beta: f64,
    gx: f64,
    gz: f64,
    correction: [f64; 3],
    affine: bool,
    dt: f64,
    scheme: Scheme,
}

impl Propagator {
    pub(crate) fn new(params: &SimParams, affine: bool) -> Self {
        Propagator {
            omega: params.omega_qed,
            beta: params.beta_qed,
            gx: 2.0 * params.lambda_x.sqrt(),
            gz: 2.0 * params.lambda_z.sqrt(),
            correction: ito_drift_correction(params),
            affine,
            dt: params.dt,
            scheme: params.scheme,
        }
    }

    fn drift(&self, v: &[f64; 3]) -> [f64; 3] {
        let [x, y, z] = *v;
        let pump = if self.affine { 2.0 * self.beta } else { 0.0 };
        [-self.beta * x - self.omega * y, self.omega * x - self.beta * y, -2.0 * self.beta * z - pump]
    }

    fn diffusion(&self, v: &[f64; 3], dwx: f64, dwz: f64) -> [f64; 3] {
        let [x, y, z] = *v;
        [self.gz * y * dwz, self.gx * z * dwx - self.gz * x * dwz, -self.gx * y * dwx]
    }

    #[inline]
    pub(crate) fn advance(&self, v: &[f64; 3], dwx: f64, dwz: f64) -> [f64; 3] {
        let dt = self.dt;
        let a = self.drift(v);
        let b = self.diffusion(v, dwx, dwz);
        match self.scheme {
            Scheme::ItoEuler => core::array::from_fn(|i| v[i] + (a[i] + self.correction[i] * v[i]) * dt + b[i]),
            Scheme::StratonovichHeun => {
                let p: [f64; 3] = core::array::from_fn(|i| v[i] + a[i] * dt + b[i]);
                let ap = self.drift(&p);
                let bp = self.diffusion(&p, dwx, dwz);
                core::array::from_fn(|i| v[i] + 0.5 * (a[i] + ap[i]) * dt + 0.5 * (b[i] + bp[i]))
            }
        }
    }
}

/// Advances one dt with the given Wiener increments.
pub fn step(state: BlochState, dw_x: f64, dw_z: f64, params: &SimParams) -> Result<BlochState> {
    let next = BlochState::from_array(Propagator::new(params, true).advance(&state.to_array(), dw_x, dw_z));
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NumericalFailure { trajectory: 0, step: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn params(omega: f64, beta: f64, lx: f64, lz: f64, scheme: Scheme) -> SimParams {
        SimParams {
            omega_qed: omega,
            beta_qed: beta,
            lambda_x: lx,
            lambda_z: lz,
            dt: 1e-3,
            t_max: 1.0,
            n_traj: 1,
            seed: 0,
            scheme,
        }
    }

    #[test]
    fn correction_values() {
        assert_eq!(ito_drift_correction(&params(1.0, 1.0, 0.0, 0.0, Scheme::ItoEuler)), [0.0; 3]);
        let c = ito_drift_correction(&params(1.0, 1.0, 0.1, 0.05, Scheme::ItoEuler));
        assert_relative_eq!(c[0], -0.1);
        assert_relative_eq!(c[1], -0.3);
        assert_relative_eq!(c[2], -0.2);
        let l = 0.37;
        assert_eq!(ito_drift_correction(&params(1.0, 1.0, l, l, Scheme::ItoEuler)), [-2.0 * l, -4.0 * l, -2.0 * l]);
    }

    // Finite-difference oracle: ½ Σ_k (∇B_k) B_k for the rotation generators.
    #[test]
    #[allow(clippy::needless_range_loop)] // index form mirrors the tensor contraction
    fn correction_matches_generator_derivative() {
        let (lx, lz) = (0.23, 0.11);
        let p = params(0.0, 0.0, lx, lz, Scheme::ItoEuler);
        let prop = Propagator::new(&p, false);
        let v = [0.3, -0.5, 0.7];
        let field =
            |v: &[f64; 3], k: usize| if k == 0 { prop.diffusion(v, 1.0, 0.0) } else { prop.diffusion(v, 0.0, 1.0) };
        let h = 1e-6;
        let mut corr = [0.0; 3];
        for k in 0..2 {
            let b = field(&v, k);
            for i in 0..3 {
                for j in 0..3 {
                    let mut vp = v;
                    let mut vm = v;
                    vp[j] += h;
                    vm[j] -= h;
                    let d = (field(&vp, k)[i] - field(&vm, k)[i]) / (2.0 * h);
                    corr[i] += 0.5 * d * b[j];
                }
            }
        }
        let diag = ito_drift_correction(&p);
        for (i, c) in corr.iter().enumerate() {
            assert_relative_eq!(*c, diag[i] * v[i], max_relative = 1e-8);
        }
    }

    #[test]
    fn zero_generator_is_identity() {
        let s = BlochState::new(0.3, 0.4, -0.5).unwrap();
        for scheme in [Scheme::ItoEuler, Scheme::StratonovichHeun] {
            let p = params(0.0, 0.0, 0.0, 0.0, scheme);
            assert_eq!(step(s, 0.0, 0.0, &p).unwrap(), s);
        }
    }

    #[test]
    fn deterministic_step_matches_exponential() {
        let (omega, beta) = (5.0, 1.0);
        let s = BlochState::new(0.6, 0.0, 0.8).unwrap();
        for (scheme, order) in [(Scheme::ItoEuler, 2), (Scheme::StratonovichHeun, 3)] {
            let mut errs = [0.0; 2];
            for (i, dt) in [1e-3, 5e-4].into_iter().enumerate() {
                let p = SimParams { dt, ..params(omega, beta, 0.0, 0.0, scheme) };
                let next = step(s, 0.0, 0.0, &p).unwrap();
                let exact = mean_closed_form(&p, &s, dt).unwrap();
                errs[i] = (next.sx - exact.sx).abs() + (next.sy - exact.sy).abs() + (next.sz - exact.sz).abs();
            }
            // local error O(dt^order): halving dt divides it by 2^order
            let ratio = errs[0] / errs[1];
            assert!((ratio / f64::from(1u32 << order) - 1.0).abs() < 0.05, "{scheme:?}: {ratio}");
        }
    }

    #[test]
    fn lambda_z_noise_leaves_sz() {
        let s = BlochState::new(0.6, -0.2, 0.5).unwrap();
        for scheme in [Scheme::ItoEuler, Scheme::StratonovichHeun] {
            let p = params(0.0, 0.0, 0.0, 0.4, scheme);
            let next = step(s, 0.0, 0.03, &p).unwrap();
            assert_eq!(next.sz, s.sz);
        }
    }

    #[test]
    fn rotation_conserves_length() {
        // λ = β = 0: Heun on a rotation preserves |s| to O(dt³) per step.
        let p = SimParams { dt: 1e-3, ..params(10.0, 0.0, 0.0, 0.0, Scheme::StratonovichHeun) };
        let mut s = BlochState::new(0.6, 0.0, 0.8).unwrap();
        for _ in 0..1000 {
            s = step(s, 0.0, 0.0, &p).unwrap();
        }
        let r2 = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
        assert!((r2 - 1.0).abs() < 1e-6, "{r2}");
    }

    #[test]
    fn non_finite_is_reported() {
        let p = params(1.0, 1.0, 0.1, 0.1, Scheme::ItoEuler);
        let s = BlochState { sx: f64::NAN, sy: 0.0, sz: 0.0 };
        assert!(matches!(step(s, 0.0, 0.0, &p), Err(Error::NumericalFailure { .. })));
    }

    #[test]
    fn validation() {
        let ok = params(1.0, 1.0, 0.1, 0.1, Scheme::ItoEuler);
        assert!(ok.validate().is_ok());
        assert!(SimParams { dt: 0.2, ..ok }.validate().is_err());
        assert!(SimParams { n_traj: 0, ..ok }.validate().is_err());
        assert!(SimParams { t_max: 1e-4, ..ok }.validate().is_err());
        assert!(SimParams { lambda_x: -0.1, ..ok }.validate().is_err());
        assert!(BlochState::new(0.0, 0.0, 1.5).is_err());
    }
}
