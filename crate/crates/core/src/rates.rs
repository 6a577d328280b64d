//! Collapse rates λx, λz and the resulting line broadening β_N and shift γ_N
//! in the small-scale limit (every length of the system ≪ r_C).
//!
//! For a two-level system with total mass M, mass-weighted transition moment
//! D₁₂ and level second moments I₁, I₂:
//!
//! ```text
//! λx = Λ D₁₂² / (2 r_C² m₀²)
//! λz = Λ M (I₂ − I₁) / (8 r_C² m₀²)
//! β_N = λx + 2 λz
//! γ_N = λx² / (2 ω₀)
//! ```
//!
//! CSL and DP share this structure and differ only in Λ.

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{ensure, Result};
use crate::system::{DoubleWellSpec, HarmonicSpec, TwoLevelSystem};
use crate::units::AMU;

/// CSL coupling, s⁻¹.
pub const LAMBDA_CSL: f64 = 1.12e-9;
/// Diósi–Penrose coupling (with the r_C cutoff), s⁻¹.
pub const LAMBDA_DP: f64 = 7.39e-25;
/// Correlation length, m.
pub const R_C: f64 = 1e-7;
/// Reference mass, amu.
pub const M0: f64 = 1.0;

/// Above this fraction of r_C the small-scale expansion is flagged.
pub const SMALL_SCALE_GUARD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelVariant {
    Csl,
    DiosiPenrose,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseModel {
    pub variant: ModelVariant,
    /// Λ, s⁻¹.
    pub lambda: f64,
    /// r_C, m.
    pub r_c: f64,
    /// m₀, amu.
    pub m0: f64,
}

impl CollapseModel {
    pub const CSL: CollapseModel = CollapseModel { variant: ModelVariant::Csl, lambda: LAMBDA_CSL, r_c: R_C, m0: M0 };

    pub const DP: CollapseModel =
        CollapseModel { variant: ModelVariant::DiosiPenrose, lambda: LAMBDA_DP, r_c: R_C, m0: M0 };

    pub fn defaults(variant: ModelVariant) -> Self {
        match variant {
            ModelVariant::Csl => Self::CSL,
            ModelVariant::DiosiPenrose => Self::DP,
        }
    }

    /// Λ = 0 is accepted and switches the collapse off.
    pub fn validate(&self) -> Result<()> {
        ensure(self.lambda >= 0.0 && self.lambda.is_finite(), "lambda", "must be non-negative")?;
        ensure(self.r_c > 0.0 && self.r_c.is_finite(), "r_c", "must be positive")?;
        ensure(self.m0 > 0.0 && self.m0.is_finite(), "m0", "must be positive")
    }

    // Λ / (r_C² m₀²), the geometric prefactor shared by λx and λz.
    fn prefactor(&self) -> f64 {
        self.lambda / (self.r_c * self.r_c * self.m0 * self.m0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseRates {
    pub lambda_x: f64,
    pub lambda_z: f64,
    pub beta_n: f64,
    pub gamma_n: f64,
}

impl CollapseRates {
    pub fn new(lambda_x: f64, lambda_z: f64, omega0: f64) -> Self {
        CollapseRates {
            lambda_x,
            lambda_z,
            beta_n: lambda_x + 2.0 * lambda_z,
            gamma_n: lambda_x * lambda_x / (2.0 * omega0),
        }
    }

    pub const ZERO: CollapseRates = CollapseRates { lambda_x: 0.0, lambda_z: 0.0, beta_n: 0.0, gamma_n: 0.0 };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateWarning {
    /// A length of the system (√(I/M) or D₁₂/M, in m) exceeds 0.1·r_C.
    OutsideSmallScaleLimit { length: f64, r_c: f64 },
    /// I₂ < I₁ beyond round-off; |I₂ − I₁| was used.
    NegativeInertiaGap { gap: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub rates: CollapseRates,
    pub warnings: Vec<RateWarning>,
}

pub fn rates_generic(sys: &TwoLevelSystem, model: &CollapseModel) -> Result<RateReport> {
    sys.validate()?;
    model.validate()?;
    let mut warnings = Vec::new();

    let lengths = [
        (sys.inertia_lower / sys.total_mass).sqrt(),
        (sys.inertia_upper / sys.total_mass).sqrt(),
        sys.mass_dipole / sys.total_mass,
    ];
    let longest = lengths.iter().copied().fold(0.0, f64::max);
    if longest > SMALL_SCALE_GUARD * model.r_c {
        warnings.push(RateWarning::OutsideSmallScaleLimit { length: longest, r_c: model.r_c });
    }

    let gap = sys.inertia_gap();
    let noise = 64.0 * f64::EPSILON * sys.inertia_lower.max(sys.inertia_upper);
    let gap = if gap >= 0.0 {
        gap
    } else if -gap <= noise {
        0.0
    } else {
        warnings.push(RateWarning::NegativeInertiaGap { gap });
        -gap
    };

    let pre = model.prefactor();
    let lambda_x = 0.5 * pre * sys.mass_dipole * sys.mass_dipole;
    let lambda_z = 0.125 * pre * sys.total_mass * gap;
    Ok(RateReport { rates: CollapseRates::new(lambda_x, lambda_z, sys.omega0), warnings })
}

/// Closed form λx = 4λz = (Λ/2)u², u = μx₀/(m₀r_C).
pub fn rates_harmonic(spec: HarmonicSpec, model: &CollapseModel) -> Result<CollapseRates> {
    spec.validate()?;
    model.validate()?;
    let u = spec.mu * spec.zero_point_amplitude() / (model.m0 * model.r_c);
    let u2 = u * u;
    Ok(CollapseRates::new(0.5 * model.lambda * u2, 0.125 * model.lambda * u2, spec.omega0))
}

/// Closed form λz = 0, λx = (Λ/8)u², u = μq₀/(m₀r_C).
pub fn rates_doublewell(spec: DoubleWellSpec, model: &CollapseModel) -> Result<CollapseRates> {
    spec.validate()?;
    model.validate()?;
    let u = spec.mu * spec.q0 / (model.m0 * model.r_c);
    Ok(CollapseRates::new(0.125 * model.lambda * u * u, 0.0, spec.omega0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassScalingRow {
    pub factor: f64,
    /// amu
    pub total_mass: f64,
    pub beta_n: f64,
}

/// β_N as every mass of `base` is scaled by each factor (shape held fixed).
pub fn mass_scaling_scan(base: &TwoLevelSystem, factors: &[f64], model: &CollapseModel) -> Result<Vec<MassScalingRow>> {
    for &f in factors {
        ensure(f > 0.0 && f.is_finite(), "factors", "scale factors must be positive")?;
    }
    factors
        .iter()
        .map(|&f| {
            let sys = base.mass_scaled(f);
            let report = rates_generic(&sys, model)?;
            Ok(MassScalingRow { factor: f, total_mass: sys.total_mass, beta_n: report.rates.beta_n })
        })
        .collect()
}

/// Λ_DP = G m₀² / (3√2 π^{3/2} ħ r_C), s⁻¹.
pub fn dp_coupling(r_c: f64, m0_amu: f64) -> f64 {
    use crate::units::{G, HBAR};
    let m0 = m0_amu * AMU;
    let pi = core::f64::consts::PI;
    G * m0 * m0 / (3.0 * 2.0.sqrt() * pi.powf(1.5) * HBAR * r_c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{doublewell_system, harmonic_system, DipoleConvention};
    use crate::units::M_E_AMU;
    use approx::assert_relative_eq;

    fn dw(mu: f64) -> DoubleWellSpec {
        DoubleWellSpec { mu, q0: 1e-10, omega0: 1e13 }
    }

    #[test]
    fn doublewell_reference_values() {
        let csl = CollapseModel::CSL;
        assert_relative_eq!(rates_doublewell(dw(1e7), &csl).unwrap().beta_n, 0.014, max_relative = 1e-12);
        assert_relative_eq!(rates_doublewell(dw(1.0), &csl).unwrap().beta_n, 1.4e-16, max_relative = 1e-12);
        assert_relative_eq!(rates_doublewell(dw(M_E_AMU), &csl).unwrap().beta_n, 4.2e-23, max_relative = 0.05);
    }

    #[test]
    fn doublewell_shift_range() {
        let lo = rates_doublewell(DoubleWellSpec { omega0: 1e12, ..dw(1e7) }, &CollapseModel::CSL).unwrap();
        let hi = rates_doublewell(DoubleWellSpec { omega0: 1e14, ..dw(1e7) }, &CollapseModel::CSL).unwrap();
        // 0.014² / 2ω₀
        assert_relative_eq!(lo.gamma_n, 9.8e-17, max_relative = 1e-12);
        assert_relative_eq!(hi.gamma_n, 9.8e-19, max_relative = 1e-12);
    }

    #[test]
    fn harmonic_reference_values() {
        let csl = CollapseModel::CSL;
        let a = rates_harmonic(HarmonicSpec { mu: 1.0, omega0: 1e10 }, &csl).unwrap();
        assert_relative_eq!(a.beta_n, 5.3e-13, max_relative = 0.05);
        assert_relative_eq!(a.gamma_n, 6.2e-36, max_relative = 0.05);
        let b = rates_harmonic(HarmonicSpec { mu: 1e7, omega0: 1.7e8 }, &csl).unwrap();
        assert_relative_eq!(b.beta_n, 3.1e-4, max_relative = 0.05);
        assert_relative_eq!(b.gamma_n, 1.3e-16, max_relative = 0.05);
        assert_relative_eq!(b.lambda_x, 4.0 * b.lambda_z, max_relative = 1e-14);
    }

    #[test]
    fn generic_matches_closed_forms() {
        let csl = CollapseModel::CSL;
        for spec in [HarmonicSpec { mu: 1.0, omega0: 1e10 }, HarmonicSpec { mu: 1e7, omega0: 1.7e8 }] {
            let sys = harmonic_system(spec, DipoleConvention::ZeroPoint).unwrap();
            let g = rates_generic(&sys, &csl).unwrap().rates;
            let c = rates_harmonic(spec, &csl).unwrap();
            assert_relative_eq!(g.lambda_x, c.lambda_x, max_relative = 1e-12);
            assert_relative_eq!(g.lambda_z, c.lambda_z, max_relative = 1e-12);
            assert_relative_eq!(g.gamma_n, c.gamma_n, max_relative = 1e-12);
        }
        for mu in [M_E_AMU, 1.0, 1e7] {
            let sys = doublewell_system(dw(mu)).unwrap();
            let g = rates_generic(&sys, &csl).unwrap().rates;
            let c = rates_doublewell(dw(mu), &csl).unwrap();
            assert_relative_eq!(g.beta_n, c.beta_n, max_relative = 1e-12);
            assert_eq!(g.lambda_z, 0.0);
        }
    }

    #[test]
    fn textbook_convention_halves_lambda_x() {
        let spec = HarmonicSpec { mu: 1.0, omega0: 1e10 };
        let p =
            rates_generic(&harmonic_system(spec, DipoleConvention::ZeroPoint).unwrap(), &CollapseModel::CSL).unwrap();
        let t =
            rates_generic(&harmonic_system(spec, DipoleConvention::Textbook).unwrap(), &CollapseModel::CSL).unwrap();
        assert_relative_eq!(p.rates.lambda_x / t.rates.lambda_x, 2.0, max_relative = 1e-12);
        assert_relative_eq!(p.rates.gamma_n / t.rates.gamma_n, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn dp_is_csl_scaled() {
        let sys = doublewell_system(dw(1e7)).unwrap();
        let c = rates_generic(&sys, &CollapseModel::CSL).unwrap().rates;
        let d = rates_generic(&sys, &CollapseModel::DP).unwrap().rates;
        assert_relative_eq!(d.beta_n / c.beta_n, LAMBDA_DP / LAMBDA_CSL, max_relative = 1e-12);
        assert!((d.beta_n / c.beta_n - 6.6e-16).abs() < 1e-17);
    }

    #[test]
    fn dp_coupling_from_constants() {
        assert_relative_eq!(dp_coupling(R_C, M0), LAMBDA_DP, max_relative = 1e-3);
    }

    #[test]
    fn zero_geometry() {
        let sys = TwoLevelSystem::generic(1e10, 5.0, 0.0, 1e-20, 1e-20, None).unwrap();
        let r = rates_generic(&sys, &CollapseModel::CSL).unwrap();
        assert_eq!(r.rates, CollapseRates::ZERO);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn negative_gap_uses_magnitude() {
        let sys = TwoLevelSystem::generic(1e10, 1.0, 0.0, 2e-20, 1e-20, None).unwrap();
        let flipped = TwoLevelSystem::generic(1e10, 1.0, 0.0, 1e-20, 2e-20, None).unwrap();
        let r = rates_generic(&sys, &CollapseModel::CSL).unwrap();
        assert_eq!(r.rates, rates_generic(&flipped, &CollapseModel::CSL).unwrap().rates);
        assert!(matches!(r.warnings[..], [RateWarning::NegativeInertiaGap { .. }]));
    }

    #[test]
    fn large_system_warns() {
        // √(I/M) = 2e-8 m > 0.1 r_C
        let sys = TwoLevelSystem::generic(1e10, 1.0, 0.0, 4e-16, 4e-16, None).unwrap();
        let r = rates_generic(&sys, &CollapseModel::CSL).unwrap();
        assert!(matches!(r.warnings[..], [RateWarning::OutsideSmallScaleLimit { .. }]));
    }

    #[test]
    fn mass_scan() {
        let sys = doublewell_system(dw(1.0)).unwrap();
        let rows = mass_scaling_scan(&sys, &[1.0, 2.0], &CollapseModel::CSL).unwrap();
        assert_relative_eq!(rows[1].beta_n / rows[0].beta_n, 4.0, max_relative = 1e-12);
        let rows = mass_scaling_scan(&sys, &[1.0, 1e7], &CollapseModel::CSL).unwrap();
        assert_relative_eq!(rows[0].beta_n, 1.4e-16, max_relative = 1e-12);
        assert_relative_eq!(rows[1].beta_n, 0.014, max_relative = 1e-12);
        assert!(mass_scaling_scan(&sys, &[], &CollapseModel::CSL).unwrap().is_empty());
        assert!(mass_scaling_scan(&sys, &[1.0, -1.0], &CollapseModel::CSL).is_err());
    }

    #[test]
    fn zero_coupling_allowed() {
        let m = CollapseModel { lambda: 0.0, ..CollapseModel::CSL };
        let r = rates_doublewell(dw(1e7), &m).unwrap();
        assert_eq!(r, CollapseRates::ZERO);
    }

    proptest::proptest! {
        #[test]
        fn beta_is_lambda_sum(lx in 0.0f64..1e3, lz in 0.0f64..1e3, w in 1e-3f64..1e15) {
            let r = CollapseRates::new(lx, lz, w);
            proptest::prop_assert_eq!(r.beta_n, lx + 2.0 * lz);
        }

        #[test]
        fn co_scaling_masses_and_m0_leaves_beta(
            mu in 1e-3f64..1e8, q0 in 1e-11f64..1e-9, s in 1e-3f64..1e3
        ) {
            let sys = doublewell_system(DoubleWellSpec { mu, q0, omega0: 1e12 }).unwrap();
            let b0 = rates_generic(&sys, &CollapseModel::CSL).unwrap().rates.beta_n;
            let m = CollapseModel { m0: M0 * s, ..CollapseModel::CSL };
            let b1 = rates_generic(&sys.mass_scaled(s), &m).unwrap().rates.beta_n;
            proptest::prop_assert!((b1 - b0).abs() <= 1e-12 * b0);
        }

        #[test]
        fn shift_negligible_for_laboratory_regime(mu in 1e-3f64..1e7, w in 1e8f64..1e14) {
            let r = rates_harmonic(HarmonicSpec { mu, omega0: w }, &CollapseModel::CSL).unwrap();
            proptest::prop_assert!(r.gamma_n < 1e-3 * r.beta_n);
        }
    }
}
