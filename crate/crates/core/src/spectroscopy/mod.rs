//! Emission spectra: the Lorentzian line, the Wiener–Khinchin transform of a
//! dipole autocorrelation, line fitting, and the observable line predicted
//! for a physical system.

mod fit;
mod line;
mod transform;

pub use fit::{fit_lorentzian, LorentzianFit, FIT_WINDOW_HALF_WIDTHS, MAX_ITERATIONS, STEP_TOLERANCE};
pub use line::{far_field_intensity, predict_line, FarFieldSource, LinePrediction};
pub use transform::{
    spectrum_from_autocorrelation, TransformGrid, DECAY_THRESHOLD, MIN_DECAY_PRODUCT, SAMPLES_PER_RADIAN,
    ZERO_PAD_FACTOR,
};

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_PI;

use crate::error::{ensure, Result};

/// (1/π) β / (β² + (ω − Ω)²): unit area, half width β, FWHM 2β.
pub fn lorentzian(omega: f64, beta: f64, omega_center: f64) -> f64 {
    let d = omega - omega_center;
    FRAC_1_PI * beta / (beta * beta + d * d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    UnitArea,
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub density: Vec<f64>,
    pub normalization: Normalization,
}

impl Spectrum {
    /// Checks that the grid is uniform and increasing and the density non-negative.
    pub fn new(omega: Vec<f64>, density: Vec<f64>, normalization: Normalization) -> Result<Self> {
        ensure(omega.len() == density.len(), "density", "must have one value per grid point")?;
        ensure(omega.len() >= 3, "omega", "needs at least three points")?;
        let step = omega[1] - omega[0];
        ensure(step > 0.0, "omega", "must be strictly increasing")?;
        let scale = omega.iter().fold(step, |m, w| m.max(w.abs()));
        ensure(
            omega
                .windows(2)
                .enumerate()
                .all(|(i, w)| (w[0] - (omega[0] + i as f64 * step)).abs() <= 1e-12 * scale && w[1] > w[0]),
            "omega",
            "must be uniform",
        )?;
        ensure(density.iter().all(|d| *d >= 0.0 && d.is_finite()), "density", "must be finite and non-negative")?;
        Ok(Spectrum { omega, density, normalization })
    }

    pub fn step(&self) -> f64 {
        self.omega[1] - self.omega[0]
    }

    /// Trapezoid integral over the captured window.
    pub fn integral(&self) -> f64 {
        let inner: f64 = self.density.iter().sum();
        let ends = 0.5 * (self.density[0] + self.density[self.density.len() - 1]);
        (inner - ends) * self.step()
    }

    /// Samples `lorentzian(·, beta, omega_center)` on `omega`.
    pub fn sample_lorentzian(omega: Vec<f64>, beta: f64, omega_center: f64) -> Result<Self> {
        ensure(beta > 0.0, "beta", "must be positive")?;
        let density = omega.iter().map(|&w| lorentzian(w, beta, omega_center)).collect();
        Spectrum::new(omega, density, Normalization::UnitArea)
    }
}
