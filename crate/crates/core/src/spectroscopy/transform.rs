use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_PI;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use num_complex::Complex64;

use super::{Normalization, Spectrum};
use crate::error::{ensure, Error, Result};
use crate::fft::fft_in_place;

/// Zero-padding multiple applied before rounding up to a power of two.
pub const ZERO_PAD_FACTOR: usize = 4;
/// Grid samples per radian of the fastest oscillation: dτ ≤ 0.1/Ω.
pub const SAMPLES_PER_RADIAN: f64 = 10.0;
/// Required decay product β·τ_max of the correlation window.
pub const MIN_DECAY_PRODUCT: f64 = 7.0;
/// |C(τ_max)|/|C(0)| above which the window counts as truncated.
pub const DECAY_THRESHOLD: f64 = 1e-3;

/// Lag grid able to resolve a line at `omega` with half width `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformGrid {
    pub dtau: f64,
    pub n_lags: usize,
}

impl TransformGrid {
    pub fn for_line(omega: f64, beta: f64) -> Result<Self> {
        ensure(beta > 0.0 && beta.is_finite(), "beta", "must be positive")?;
        ensure(omega.is_finite(), "omega", "must be finite")?;
        let dtau = 1.0 / (SAMPLES_PER_RADIAN * omega.abs().max(beta));
        let tau_max = MIN_DECAY_PRODUCT / beta;
        let n_lags = (tau_max / dtau).ceil() as usize + 1;
        Ok(TransformGrid { dtau, n_lags })
    }

    pub fn tau_max(&self) -> f64 {
        (self.n_lags - 1) as f64 * self.dtau
    }

    pub fn lags(&self) -> Vec<f64> {
        (0..self.n_lags).map(|k| k as f64 * self.dtau).collect()
    }
}

/// S(ω) = (1/π) Re ∫₀^∞ C(τ)/C(0) e^{−iωτ} dτ on the FFT grid, ascending in ω.
///
/// The integral is a trapezoid rule on the samples `c[k] = C(k·dτ)`, zero-padded
/// to the next power of two above `ZERO_PAD_FACTOR·len`. The resulting grid
/// has spacing 2π/(N·dτ) and the trapezoid weights make the discrete
/// integral of S over the full grid exactly 1. Small negative ripples left by
/// truncating the window are clipped to zero.
pub fn spectrum_from_autocorrelation(c: &[Complex64], dtau: f64) -> Result<Spectrum> {
    ensure(c.len() >= 2, "autocorrelation", "needs at least two lags")?;
    ensure(dtau > 0.0 && dtau.is_finite(), "dtau", "must be positive")?;
    ensure(c.iter().all(|v| v.is_finite()), "autocorrelation", "must be finite")?;
    let c0 = c[0];
    if c0.norm() == 0.0 {
        return Err(Error::Degenerate("autocorrelation vanishes at zero lag"));
    }

    let ratio = c[c.len() - 1].norm() / c0.norm();
    if ratio > DECAY_THRESHOLD {
        let tau_max = (c.len() - 1) as f64 * dtau;
        let suggested_tau_max = if ratio < 1.0 {
            let rate = -ratio.ln() / tau_max;
            MIN_DECAY_PRODUCT.max(-DECAY_THRESHOLD.ln()) / rate
        } else {
            2.0 * tau_max
        };
        return Err(Error::WindowTooShort { ratio, suggested_tau_max });
    }

    let n = (ZERO_PAD_FACTOR * c.len()).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let last = c.len() - 1;
    for (k, v) in c.iter().enumerate() {
        let w = if k == 0 || k == last { 0.5 } else { 1.0 };
        buf[k] = v / c0 * w;
    }
    fft_in_place(&mut buf);

    let d_omega = 2.0 * core::f64::consts::PI / (n as f64 * dtau);
    let half = n / 2;
    let mut omega = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    for j in 0..n {
        omega.push((j as f64 - half as f64) * d_omega);
        let k = (j + half) % n;
        density.push((dtau * FRAC_1_PI * buf[k].re).max(0.0));
    }
    Ok(Spectrum { omega, density, normalization: Normalization::UnitArea })
}
