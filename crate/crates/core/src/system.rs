//! Two-level system descriptors: transition frequency, total mass, the
//! mass-weighted transition moment and the level-averaged second moments of
//! the mass distribution.
//!
//! Geometry is stored in amu·m and amu·m² so the collapse formulas divide by
//! a reference mass in amu without unit juggling.

use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::error::{ensure, Result};
use crate::units::{A0, AMU, ANGSTROM, C, EPS0, E_CHARGE, HBAR, M_E_AMU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Generic,
    HydrogenLike,
    Harmonic,
    DoubleWell,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelSystem {
    /// Transition angular frequency, rad/s.
    pub omega0: f64,
    /// Total mass M, amu.
    pub total_mass: f64,
    /// |D₁₂| = |⟨2|Σ m q|1⟩|, amu·m.
    pub mass_dipole: f64,
    /// I₁ = ⟨1|Σ m q²|1⟩, amu·m².
    pub inertia_lower: f64,
    /// I₂ = ⟨2|Σ m q²|2⟩, amu·m².
    pub inertia_upper: f64,
    /// Electric transition dipole |d₁₂|, C·m, when known.
    pub electric_dipole: Option<f64>,
    pub kind: SystemKind,
}

impl TwoLevelSystem {
    pub fn generic(
        omega0: f64,
        total_mass: f64,
        mass_dipole: f64,
        inertia_lower: f64,
        inertia_upper: f64,
        electric_dipole: Option<f64>,
    ) -> Result<Self> {
        let sys = TwoLevelSystem {
            omega0,
            total_mass,
            mass_dipole,
            inertia_lower,
            inertia_upper,
            electric_dipole,
            kind: SystemKind::Generic,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.omega0 > 0.0 && self.omega0.is_finite(), "omega0", "must be positive and finite")?;
        ensure(self.total_mass > 0.0 && self.total_mass.is_finite(), "total_mass", "must be positive and finite")?;
        ensure(self.mass_dipole >= 0.0 && self.mass_dipole.is_finite(), "mass_dipole", "must be non-negative")?;
        ensure(self.inertia_lower >= 0.0 && self.inertia_lower.is_finite(), "inertia_lower", "must be non-negative")?;
        ensure(self.inertia_upper >= 0.0 && self.inertia_upper.is_finite(), "inertia_upper", "must be non-negative")?;
        if let Some(d) = self.electric_dipole {
            ensure(d >= 0.0 && d.is_finite(), "electric_dipole", "must be non-negative")?;
        }
        if self.kind == SystemKind::DoubleWell {
            let scale = self.inertia_lower.max(ANGSTROM * ANGSTROM);
            ensure(
                (self.inertia_upper - self.inertia_lower).abs() <= 1e-12 * scale,
                "inertia_upper",
                "double-well levels must have degenerate second moments",
            )?;
        }
        Ok(())
    }

    /// I₂ − I₁, amu·m² (may be negative for a generic system).
    pub fn inertia_gap(&self) -> f64 {
        self.inertia_upper - self.inertia_lower
    }

    pub fn with_electric_dipole(mut self, d12: f64) -> Result<Self> {
        self.electric_dipole = Some(d12);
        self.validate()?;
        Ok(self)
    }

    /// Scales every mass by `factor` with the per-unit-mass shape held fixed:
    /// D₁₂ → fD₁₂, I → fI, M → fM.
    pub fn mass_scaled(&self, factor: f64) -> Self {
        TwoLevelSystem {
            total_mass: self.total_mass * factor,
            mass_dipole: self.mass_dipole * factor,
            inertia_lower: self.inertia_lower * factor,
            inertia_upper: self.inertia_upper * factor,
            ..*self
        }
    }
}

/// Which position matrix element stands in for the harmonic D₁₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DipoleConvention {
    /// D₁₂ = μx₀. Reproduces the tabulated harmonic-oscillator rates.
    #[default]
    ZeroPoint,
    /// D₁₂ = μ⟨0|q|1⟩ = μx₀/√2.
    Textbook,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicSpec {
    /// Oscillator mass μ, amu.
    pub mu: f64,
    /// rad/s
    pub omega0: f64,
}

impl HarmonicSpec {
    pub fn validate(&self) -> Result<()> {
        ensure(self.mu > 0.0 && self.mu.is_finite(), "mu", "must be positive")?;
        ensure(self.omega0 > 0.0 && self.omega0.is_finite(), "omega0", "must be positive")
    }

    /// Zero-point amplitude x₀ = √(ħ/μω₀), m.
    pub fn zero_point_amplitude(&self) -> f64 {
        (HBAR / (self.mu * AMU * self.omega0)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWellSpec {
    /// amu
    pub mu: f64,
    /// Separation of the minima, m.
    pub q0: f64,
    /// Tunnelling splitting, rad/s.
    pub omega0: f64,
}

impl DoubleWellSpec {
    pub fn validate(&self) -> Result<()> {
        ensure(self.mu > 0.0 && self.mu.is_finite(), "mu", "must be positive")?;
        ensure(self.q0 > 0.0 && self.q0.is_finite(), "q0", "must be positive")?;
        ensure(self.omega0 > 0.0 && self.omega0.is_finite(), "omega0", "must be positive")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenLikeSpec {
    pub z: u32,
    /// amu
    pub nuclear_mass: f64,
}

impl HydrogenLikeSpec {
    /// Hydrogen with a proton nucleus.
    pub const HYDROGEN: HydrogenLikeSpec = HydrogenLikeSpec { z: 1, nuclear_mass: 1.007_276_466_621 };

    pub fn validate(&self) -> Result<()> {
        ensure(self.z >= 1, "z", "nuclear charge must be at least 1")?;
        ensure(self.nuclear_mass >= 1.0 && self.nuclear_mass.is_finite(), "nuclear_mass", "must be at least 1 amu")
    }
}

pub fn harmonic_system(spec: HarmonicSpec, convention: DipoleConvention) -> Result<TwoLevelSystem> {
    spec.validate()?;
    let x0 = spec.zero_point_amplitude();
    let mu = spec.mu;
    let mass_dipole = match convention {
        DipoleConvention::ZeroPoint => mu * x0,
        DipoleConvention::Textbook => mu * x0 / 2.0.sqrt(),
    };
    let sys = TwoLevelSystem {
        omega0: spec.omega0,
        total_mass: mu,
        mass_dipole,
        // ⟨n|q²|n⟩ = x₀²(n + ½)
        inertia_lower: 0.5 * mu * x0 * x0,
        inertia_upper: 1.5 * mu * x0 * x0,
        electric_dipole: None,
        kind: SystemKind::Harmonic,
    };
    sys.validate()?;
    Ok(sys)
}

pub fn doublewell_system(spec: DoubleWellSpec) -> Result<TwoLevelSystem> {
    spec.validate()?;
    // Both levels are equal-weight superpositions of the two localized states
    // at ±q₀/2, so their second moments coincide.
    let inertia = spec.mu * spec.q0 * spec.q0 / 4.0;
    let sys = TwoLevelSystem {
        omega0: spec.omega0,
        total_mass: spec.mu,
        mass_dipole: spec.mu * spec.q0 / 2.0,
        inertia_lower: inertia,
        inertia_upper: inertia,
        electric_dipole: None,
        kind: SystemKind::DoubleWell,
    };
    sys.validate()?;
    Ok(sys)
}

/// Radial integral ∫ R₁₀ R₂₁ r³ dr = (128√6/243)·a₀/Z, m.
pub fn hydrogenic_1s2p_radial(z: u32) -> f64 {
    128.0 * 6.0.sqrt() / 243.0 * A0 / f64::from(z)
}

/// |⟨1S|r|2P,m⟩| for any m: the radial integral times the angular factor 1/√3, m.
pub fn hydrogenic_1s2p_position_element(z: u32) -> f64 {
    hydrogenic_1s2p_radial(z) / 3.0.sqrt()
}

pub fn hydrogenlike_system(spec: HydrogenLikeSpec) -> Result<TwoLevelSystem> {
    spec.validate()?;
    let z = f64::from(spec.z);
    let a = A0 / z;
    let r12 = hydrogenic_1s2p_position_element(spec.z);
    // Lyman-α: (3/8) of the Hartree energy, scaled by Z².
    let hartree_omega = E_CHARGE * E_CHARGE / (4.0 * PI * EPS0 * HBAR * A0);
    let sys = TwoLevelSystem {
        omega0: z * z * 0.375 * hartree_omega,
        total_mass: spec.nuclear_mass + M_E_AMU,
        mass_dipole: M_E_AMU * r12,
        inertia_lower: M_E_AMU * 3.0 * a * a,
        inertia_upper: M_E_AMU * 30.0 * a * a,
        electric_dipole: Some(E_CHARGE * r12),
        kind: SystemKind::HydrogenLike,
    };
    sys.validate()?;
    Ok(sys)
}

/// QED coherence decay rate ω₀³|d₁₂|²/(6πε₀ħc³), s⁻¹. The excited population
/// decays at twice this rate.
pub fn beta_qed(omega0: f64, d12: f64) -> f64 {
    omega0 * omega0 * omega0 * d12 * d12 / (6.0 * PI * EPS0 * HBAR * C * C * C)
}
