//! Environmental broadening: hard-sphere collisions with a dilute gas and
//! thermal Doppler broadening, plus the mass scans that separate them from
//! collapse broadening.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{ensure, Error, Result};
use crate::rates::{rates_generic, CollapseModel};
use crate::system::TwoLevelSystem;
use crate::units::{AMU, C, K_B};

/// System-to-bath mass ratio below which recoil cannot be neglected.
pub const RECOIL_FREE_RATIO: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// Pa
    pub pressure: f64,
    /// K
    pub temperature: f64,
    /// Gas molecule mass m, amu.
    pub bath_mass: f64,
    /// Closest-approach distance d, m.
    pub distance_d: f64,
}

impl BathParams {
    pub fn validate(&self) -> Result<()> {
        ensure(self.pressure >= 0.0 && self.pressure.is_finite(), "pressure", "must be non-negative")?;
        ensure(self.temperature > 0.0 && self.temperature.is_finite(), "temperature", "must be positive")?;
        ensure(self.bath_mass > 0.0 && self.bath_mass.is_finite(), "bath_mass", "must be positive")?;
        ensure(self.distance_d > 0.0 && self.distance_d.is_finite(), "distance_d", "must be positive")
    }
}

fn hard_sphere_rate(bath: &BathParams, reduced_mass_amu: f64) -> f64 {
    let mu = reduced_mass_amu * AMU;
    4.0 * bath.distance_d * bath.distance_d * bath.pressure * (PI / (mu * K_B * bath.temperature)).sqrt()
}

/// β_C = 4d²p √(π/(μ_d k_B T)) with μ_d = mM/(M + m). `system_mass` in amu.
pub fn collisional_broadening(bath: &BathParams, system_mass: f64) -> Result<f64> {
    bath.validate()?;
    ensure(system_mass > 0.0 && system_mass.is_finite(), "system_mass", "must be positive")?;
    let m = bath.bath_mass;
    Ok(hard_sphere_rate(bath, m * system_mass / (system_mass + m)))
}

/// β_D = ω₀ √(2k_BT ln2 / (Mc²)), in the unit of `omega0`. `system_mass` in amu.
pub fn doppler_broadening(omega0: f64, system_mass: f64, temperature: f64) -> Result<f64> {
    ensure(omega0 > 0.0 && omega0.is_finite(), "omega0", "must be positive")?;
    ensure(system_mass > 0.0 && system_mass.is_finite(), "system_mass", "must be positive")?;
    ensure(temperature >= 0.0 && temperature.is_finite(), "temperature", "must be non-negative")?;
    Ok(omega0 * (2.0 * K_B * temperature * LN_2 / (system_mass * AMU * C * C)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanKind {
    /// Scale the system at constant density: M → fM, d → f^{1/3}d.
    SystemMass,
    /// Scale the gas molecule mass: m → fm.
    BathMass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationRow {
    pub factor: f64,
    /// amu
    pub system_mass: f64,
    /// amu
    pub bath_mass: f64,
    /// m
    pub distance_d: f64,
    pub beta_n: f64,
    /// Recoil-free β_C (μ_d = m).
    pub beta_c: f64,
    /// β_C with the exact reduced mass.
    pub beta_c_exact: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationScan {
    pub kind: ScanKind,
    pub rows: Vec<DiscriminationRow>,
    /// d ln β_N / d ln(scanned mass); `None` with fewer than two distinct
    /// masses or a vanishing β_N.
    pub slope_beta_n: Option<f64>,
    pub slope_beta_c: Option<f64>,
}

/// β_N and β_C as the system or bath mass is scaled by each factor.
///
/// β_C is reported both recoil-free (the scaling argument's form, whose
/// log-log slopes are exactly 2/3 and −1/2) and with the exact reduced
/// mass. Every row must satisfy M ≥ `RECOIL_FREE_RATIO`·m.
pub fn discrimination_scan(
    kind: ScanKind,
    base_system: &TwoLevelSystem,
    base_bath: &BathParams,
    model: &CollapseModel,
    factors: &[f64],
) -> Result<DiscriminationScan> {
    base_system.validate()?;
    base_bath.validate()?;
    model.validate()?;
    for &f in factors {
        ensure(f > 0.0 && f.is_finite(), "factors", "scale factors must be positive")?;
    }

    let mut rows = Vec::with_capacity(factors.len());
    for (row, &f) in factors.iter().enumerate() {
        let (sys, bath) = match kind {
            ScanKind::SystemMass => {
                (base_system.mass_scaled(f), BathParams { distance_d: base_bath.distance_d * f.cbrt(), ..*base_bath })
            }
            ScanKind::BathMass => (*base_system, BathParams { bath_mass: base_bath.bath_mass * f, ..*base_bath }),
        };
        if sys.total_mass < RECOIL_FREE_RATIO * bath.bath_mass {
            return Err(Error::RecoilRegime { row, system_mass: sys.total_mass, bath_mass: bath.bath_mass });
        }
        rows.push(DiscriminationRow {
            factor: f,
            system_mass: sys.total_mass,
            bath_mass: bath.bath_mass,
            distance_d: bath.distance_d,
            beta_n: rates_generic(&sys, model)?.rates.beta_n,
            beta_c: hard_sphere_rate(&bath, bath.bath_mass),
            beta_c_exact: collisional_broadening(&bath, sys.total_mass)?,
        });
    }

    let mass = |r: &DiscriminationRow| match kind {
        ScanKind::SystemMass => r.system_mass,
        ScanKind::BathMass => r.bath_mass,
    };
    let x: Vec<f64> = rows.iter().map(mass).collect();
    let slope_beta_n = log_slope(&x, &rows.iter().map(|r| r.beta_n).collect::<Vec<_>>());
    let slope_beta_c = log_slope(&x, &rows.iter().map(|r| r.beta_c).collect::<Vec<_>>());
    Ok(DiscriminationScan { kind, rows, slope_beta_n, slope_beta_c })
}

/// Least-squares slope of ln y against ln x.
pub fn log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|v| v.is_nan() || *v <= 0.0) {
        return None;
    }
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}
