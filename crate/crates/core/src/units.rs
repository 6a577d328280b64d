//! Physical constants (CODATA 2018) and the handful of unit conversions the
//! rest of the crate needs.
//!
//! Everything internal is SI, with two exceptions that are part of the public
//! vocabulary: masses of two-level systems are carried in amu (so the collapse
//! formulas can divide by a 1 amu reference mass directly) and frequencies are
//! angular (rad/s). Rates are plain s⁻¹ and never carry a 2π.

use alloc::string::ToString;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Newtonian constant of gravitation, m³/(kg·s²).
pub const G: f64 = 6.674_30e-11;
/// Atomic mass constant, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Electron mass in amu.
pub const M_E_AMU: f64 = 5.485_799_090_65e-4;
/// Electron mass, kg.
pub const M_E: f64 = 9.109_383_701_5e-31;
/// Bohr radius, m.
pub const A0: f64 = 5.291_772_109_03e-11;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// One debye, C·m (10⁻²¹/c).
pub const DEBYE: f64 = 1e-21 / C;
/// One ångström, m.
pub const ANGSTROM: f64 = 1e-10;

/// The fixed set of named constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Hbar,
    C,
    Eps0,
    KB,
    G,
    Amu,
    MeAmu,
    A0,
    ECharge,
    Debye,
}

impl Constant {
    pub const ALL: [Constant; 10] = [
        Constant::Hbar,
        Constant::C,
        Constant::Eps0,
        Constant::KB,
        Constant::G,
        Constant::Amu,
        Constant::MeAmu,
        Constant::A0,
        Constant::ECharge,
        Constant::Debye,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constant::Hbar => "hbar",
            Constant::C => "c",
            Constant::Eps0 => "eps0",
            Constant::KB => "k_B",
            Constant::G => "G",
            Constant::Amu => "amu",
            Constant::MeAmu => "m_e_amu",
            Constant::A0 => "a0",
            Constant::ECharge => "e_charge",
            Constant::Debye => "debye",
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Constant::Hbar => HBAR,
            Constant::C => C,
            Constant::Eps0 => EPS0,
            Constant::KB => K_B,
            Constant::G => G,
            Constant::Amu => AMU,
            Constant::MeAmu => M_E_AMU,
            Constant::A0 => A0,
            Constant::ECharge => E_CHARGE,
            Constant::Debye => DEBYE,
        }
    }

    /// SI unit symbol of the value returned by [`Constant::value`].
    pub fn unit(self) -> &'static str {
        match self {
            Constant::Hbar => "J s",
            Constant::C => "m/s",
            Constant::Eps0 => "F/m",
            Constant::KB => "J/K",
            Constant::G => "m^3/(kg s^2)",
            Constant::Amu => "kg",
            Constant::MeAmu => "1",
            Constant::A0 => "m",
            Constant::ECharge => "C",
            Constant::Debye => "C m",
        }
    }
}

impl FromStr for Constant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Constant::ALL.iter().copied().find(|c| c.name() == s).ok_or_else(|| Error::UnknownConstant(s.to_string()))
    }
}

/// Value and unit tag of a named constant.
pub fn constant(name: &str) -> Result<(f64, &'static str)> {
    let c: Constant = name.parse()?;
    Ok((c.value(), c.unit()))
}

/// All constants bundled together, for callers that prefer a value type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    pub hbar: f64,
    pub c: f64,
    pub eps0: f64,
    pub k_b: f64,
    pub g: f64,
    pub amu: f64,
    pub m_e_amu: f64,
    pub a0: f64,
    pub e_charge: f64,
    pub debye: f64,
}

/// CODATA 2018.
pub const CODATA_2018: PhysConstants = PhysConstants {
    hbar: HBAR,
    c: C,
    eps0: EPS0,
    k_b: K_B,
    g: G,
    amu: AMU,
    m_e_amu: M_E_AMU,
    a0: A0,
    e_charge: E_CHARGE,
    debye: DEBYE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Amu,
    Kg,
    Debye,
    CoulombMeter,
    Angstrom,
    Meter,
    Hertz,
    RadPerSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Mass,
    Dipole,
    Length,
    Frequency,
}

impl Unit {
    pub const ALL: [Unit; 8] = [
        Unit::Amu,
        Unit::Kg,
        Unit::Debye,
        Unit::CoulombMeter,
        Unit::Angstrom,
        Unit::Meter,
        Unit::Hertz,
        Unit::RadPerSecond,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Amu => "amu",
            Unit::Kg => "kg",
            Unit::Debye => "D",
            Unit::CoulombMeter => "C m",
            Unit::Angstrom => "Å",
            Unit::Meter => "m",
            Unit::Hertz => "Hz",
            Unit::RadPerSecond => "rad/s",
        }
    }

    fn dimension(self) -> Dimension {
        match self {
            Unit::Amu | Unit::Kg => Dimension::Mass,
            Unit::Debye | Unit::CoulombMeter => Dimension::Dipole,
            Unit::Angstrom | Unit::Meter => Dimension::Length,
            Unit::Hertz | Unit::RadPerSecond => Dimension::Frequency,
        }
    }

    // Factor to the coherent unit of the dimension (kg, C·m, m, rad/s).
    fn to_base(self) -> f64 {
        match self {
            Unit::Amu => AMU,
            Unit::Kg | Unit::CoulombMeter | Unit::Meter | Unit::RadPerSecond => 1.0,
            Unit::Debye => DEBYE,
            Unit::Angstrom => ANGSTROM,
            Unit::Hertz => 2.0 * PI,
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Multiplicative conversion between two units of the same dimension.
///
/// Hz → rad/s multiplies by 2π; this is the only place a 2π ever enters.
pub fn convert(value: f64, from: Unit, to: Unit) -> Result<f64> {
    if from.dimension() != to.dimension() {
        return Err(Error::IncompatibleUnits { from: from.symbol(), to: to.symbol() });
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * from.to_base() / to.to_base())
}
