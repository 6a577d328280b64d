use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{ensure, Error, Result};
use crate::rates::{rates_generic, CollapseModel, RateWarning};
use crate::system::{beta_qed, TwoLevelSystem};
use crate::units::{C, EPS0};

/// Observable emission line of a two-level system under a collapse model.
#[derive(Debug, Clone, PartialEq)]
pub struct LinePrediction {
    pub omega_center: f64,
    /// Ω_QED − Ω, kept separately because it is far below one ulp of Ω for
    /// physical systems.
    pub shift: f64,
    pub fwhm: f64,
    pub beta_qed: f64,
    pub beta_n: f64,
    pub gamma_n: f64,
    pub warnings: Vec<RateWarning>,
}

pub fn predict_line(sys: &TwoLevelSystem, model: &CollapseModel, omega_qed: f64) -> Result<LinePrediction> {
    ensure(omega_qed > 0.0 && omega_qed.is_finite(), "omega_qed", "must be positive")?;
    let d12 = sys.electric_dipole.ok_or(Error::IncompleteSystem("electric transition dipole d12"))?;
    let report = rates_generic(sys, model)?;
    let lx = report.rates.lambda_x;
    if lx >= omega_qed {
        return Err(Error::Overdamped { omega_qed, lambda_x: lx });
    }
    let root = (omega_qed * omega_qed - lx * lx).sqrt();
    let shift = lx * lx / (omega_qed + root);
    let bq = beta_qed(sys.omega0, d12);
    Ok(LinePrediction {
        omega_center: root,
        shift,
        fwhm: 2.0 * (bq + report.rates.beta_n),
        beta_qed: bq,
        beta_n: report.rates.beta_n,
        gamma_n: report.rates.gamma_n,
        warnings: report.warnings,
    })
}

/// Emitter parameters for `far_field_intensity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldSource {
    pub omega0: f64,
    /// Transition dipole in C·m.
    pub d12: f64,
    pub beta_qed: f64,
    pub lambda_x: f64,
    /// Initial ⟨σz⟩.
    pub sz0: f64,
}

/// Mean far-field intensity in W/m² at distance `r`, polar angle `theta` to
/// the dipole axis, and time `t`. Zero before the light front arrives.
pub fn far_field_intensity(source: &FarFieldSource, r: f64, theta: f64, t: f64) -> Result<f64> {
    ensure(r > 0.0 && r.is_finite(), "r", "must be positive")?;
    let retarded = t - r / C;
    if retarded <= 0.0 {
        return Ok(0.0);
    }
    let FarFieldSource { omega0, d12, beta_qed, lambda_x, sz0 } = *source;
    let relax = beta_qed + lambda_x;
    ensure(relax > 0.0, "beta_qed", "beta_qed + lambda_x must be positive")?;
    let amplitude = omega0 * omega0 * d12.abs() / (8.0 * PI * EPS0 * C * C * r);
    let angular = 1.0 - 0.5 * theta.sin().powi(2);
    let population = (beta_qed / relax + sz0) * (-2.0 * relax * retarded).exp() + lambda_x / relax;
    Ok(amplitude * amplitude * angular * population)
}
