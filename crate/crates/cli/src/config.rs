//! Strict JSON run configuration.
//!
//! Parsing is two-phase: serde rejects unknown keys and type errors, then
//! each block is checked against the requirements of its `kind` and of the
//! selected command. Every diagnostic names a JSON path such as
//! `$.system.mu_amu`.

use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use collapse_spectra_core::decoherence::{BathParams, ScanKind};
use collapse_spectra_core::dynamics::{BlochState, CorrelationForm, Scheme, SimParams};
use collapse_spectra_core::rates::{CollapseModel, ModelVariant};
use collapse_spectra_core::system::{
    doublewell_system, harmonic_system, hydrogenlike_system, DipoleConvention, DoubleWellSpec, HarmonicSpec,
    HydrogenLikeSpec, TwoLevelSystem,
};

use crate::gases;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Rates,
    Simulate,
    Spectrum,
    Compare,
    Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Rates => "rates",
            Command::Simulate => "simulate",
            Command::Spectrum => "spectrum",
            Command::Compare => "compare",
            Command::Scan => "scan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<Command>,
    system: Option<RawSystem>,
    model: Option<RawModel>,
    sim: Option<RawSim>,
    bath: Option<RawBath>,
    spectrum: Option<RawSpectrum>,
    scan: Option<RawScan>,
    output_path: Option<PathBuf>,
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SystemTag {
    Generic,
    HydrogenLike,
    Harmonic,
    DoubleWell,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    kind: SystemTag,
    omega0_rad_per_s: Option<f64>,
    total_mass_amu: Option<f64>,
    mass_dipole_amu_m: Option<f64>,
    inertia_lower_amu_m2: Option<f64>,
    inertia_upper_amu_m2: Option<f64>,
    d12_c_m: Option<f64>,
    mu_amu: Option<f64>,
    q0_m: Option<f64>,
    convention: Option<Convention>,
    z: Option<u32>,
    nuclear_mass_amu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Convention {
    ZeroPoint,
    Textbook,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    variant: Variant,
    lambda_per_s: Option<f64>,
    r_c_m: Option<f64>,
    m0_amu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
enum Variant {
    #[serde(rename = "CSL", alias = "csl")]
    Csl,
    #[serde(rename = "DP", alias = "dp")]
    Dp,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    omega_qed: f64,
    beta_qed: f64,
    lambda_x: f64,
    lambda_z: f64,
    dt: f64,
    t_max: f64,
    n_traj: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    scheme: SchemeTag,
    init_sx: Option<f64>,
    init_sy: Option<f64>,
    init_sz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeTag {
    ItoEuler,
    #[default]
    StratonovichHeun,
}

impl From<SchemeTag> for Scheme {
    fn from(s: SchemeTag) -> Scheme {
        match s {
            SchemeTag::ItoEuler => Scheme::ItoEuler,
            SchemeTag::StratonovichHeun => Scheme::StratonovichHeun,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBath {
    pressure_pa: f64,
    temperature_k: f64,
    bath_mass_amu: Option<f64>,
    gas: Option<String>,
    distance_d_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    #[default]
    ClosedForm,
    Sde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormTag {
    #[default]
    Exact,
    Taylor,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    #[serde(default)]
    source: SpectrumSource,
    #[serde(default)]
    form: FormTag,
    dtau: Option<f64>,
    tau_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanTag {
    SystemMass,
    BathMass,
    MassScaling,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    kind: ScanTag,
    factors: Vec<f64>,
}

/// Simulation block: dimensionless SDE parameters plus the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub params: SimParams,
    pub init: BlochState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSettings {
    pub source: SpectrumSource,
    pub form: CorrelationForm,
    /// Lag step; `None` selects the default grid for the line.
    pub dtau: Option<f64>,
    pub tau_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSettings {
    pub kind: ScanTag,
    pub factors: Vec<f64>,
}

impl ScanSettings {
    pub fn discrimination_kind(&self) -> Option<ScanKind> {
        match self.kind {
            ScanTag::SystemMass => Some(ScanKind::SystemMass),
            ScanTag::BathMass => Some(ScanKind::BathMass),
            ScanTag::MassScaling => None,
        }
    }
}

/// A validated configuration for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub system: Option<TwoLevelSystem>,
    pub model: Option<CollapseModel>,
    pub sim: Option<SimSettings>,
    pub bath: Option<BathParams>,
    pub spectrum: SpectrumSettings,
    pub scan: Option<ScanSettings>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// Parses and validates `text`. The command comes from the file's `command`
/// key, from `requested` (the CLI positional), or both, in which case they
/// must agree.
pub fn parse_config(text: &[u8], requested: Option<Command>) -> Result<RunConfig> {
    let mut de = serde_json::Deserializer::from_slice(text);
    let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = json_path(&e.path().to_string());
        ConfigError::new(path, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| ConfigError::new("$", e.to_string()))?;

    let command = match (raw.command, requested) {
        (Some(c), Some(r)) if c != r => {
            return Err(ConfigError::new(
                "$.command",
                format!("config is for `{}` but `{}` was requested", c.name(), r.name()),
            ));
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(ConfigError::new("$.command", "required field is missing")),
    };

    let system = raw.system.map(build_system).transpose()?;
    let model = raw.model.map(build_model).transpose()?;
    let sim = raw.sim.map(build_sim).transpose()?;
    let bath = raw.bath.map(build_bath).transpose()?;
    let spectrum = build_spectrum(raw.spectrum.unwrap_or_default())?;
    let scan = raw.scan.map(build_scan).transpose()?;

    let need = |present: bool, key: &str| {
        if present {
            Ok(())
        } else {
            Err(ConfigError::new(format!("$.{key}"), format!("block is required by `{}`", command.name())))
        }
    };
    match command {
        Command::Rates => {
            need(system.is_some(), "system")?;
            need(model.is_some(), "model")?;
        }
        Command::Simulate | Command::Spectrum => need(sim.is_some(), "sim")?,
        Command::Compare => {
            need(system.is_some(), "system")?;
            need(model.is_some(), "model")?;
            need(bath.is_some(), "bath")?;
        }
        Command::Scan => {
            need(system.is_some(), "system")?;
            need(model.is_some(), "model")?;
            need(scan.is_some(), "scan")?;
            if scan.as_ref().is_some_and(|s| s.kind != ScanTag::MassScaling) {
                need(bath.is_some(), "bath")?;
            }
        }
    }

    Ok(RunConfig {
        command,
        system,
        model,
        sim,
        bath,
        spectrum,
        scan,
        output_path: raw.output_path,
        format: raw.format.unwrap_or_default(),
    })
}

fn json_path(serde_path: &str) -> String {
    if serde_path == "." || serde_path.is_empty() {
        "$".to_string()
    } else {
        format!("$.{serde_path}")
    }
}

fn positive(path: &str, v: Option<f64>) -> Result<f64> {
    match v {
        None => Err(ConfigError::new(path, "required field is missing")),
        Some(x) if x > 0.0 && x.is_finite() => Ok(x),
        Some(x) => Err(ConfigError::new(path, format!("must be positive and finite, got {x}"))),
    }
}

fn non_negative(path: &str, v: f64) -> Result<f64> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::new(path, format!("must be non-negative and finite, got {v}")))
    }
}

fn forbid(kind: &str, fields: &[(&str, bool)]) -> Result<()> {
    match fields.iter().find(|(_, present)| *present) {
        Some((name, _)) => Err(ConfigError::new(format!("$.system.{name}"), format!("not used by kind `{kind}`"))),
        None => Ok(()),
    }
}

fn core_error(path: &str, e: collapse_spectra_core::Error) -> ConfigError {
    ConfigError::new(path, e.to_string())
}

fn build_system(raw: RawSystem) -> Result<TwoLevelSystem> {
    let d12 = raw.d12_c_m.map(|d| non_negative("$.system.d12_c_m", d)).transpose()?;
    let sys = match raw.kind {
        SystemTag::Generic => {
            forbid(
                "generic",
                &[
                    ("mu_amu", raw.mu_amu.is_some()),
                    ("q0_m", raw.q0_m.is_some()),
                    ("convention", raw.convention.is_some()),
                    ("z", raw.z.is_some()),
                    ("nuclear_mass_amu", raw.nuclear_mass_amu.is_some()),
                ],
            )?;
            let req = |path: &str, v: Option<f64>| v.ok_or_else(|| ConfigError::new(path, "required field is missing"));
            TwoLevelSystem::generic(
                positive("$.system.omega0_rad_per_s", raw.omega0_rad_per_s)?,
                positive("$.system.total_mass_amu", raw.total_mass_amu)?,
                non_negative("$.system.mass_dipole_amu_m", req("$.system.mass_dipole_amu_m", raw.mass_dipole_amu_m)?)?,
                non_negative(
                    "$.system.inertia_lower_amu_m2",
                    req("$.system.inertia_lower_amu_m2", raw.inertia_lower_amu_m2)?,
                )?,
                non_negative(
                    "$.system.inertia_upper_amu_m2",
                    req("$.system.inertia_upper_amu_m2", raw.inertia_upper_amu_m2)?,
                )?,
                d12,
            )
            .map_err(|e| core_error("$.system", e))?
        }
        SystemTag::HydrogenLike => {
            forbid(
                "hydrogen_like",
                &[
                    ("omega0_rad_per_s", raw.omega0_rad_per_s.is_some()),
                    ("total_mass_amu", raw.total_mass_amu.is_some()),
                    ("mass_dipole_amu_m", raw.mass_dipole_amu_m.is_some()),
                    ("inertia_lower_amu_m2", raw.inertia_lower_amu_m2.is_some()),
                    ("inertia_upper_amu_m2", raw.inertia_upper_amu_m2.is_some()),
                    ("d12_c_m", raw.d12_c_m.is_some()),
                    ("mu_amu", raw.mu_amu.is_some()),
                    ("q0_m", raw.q0_m.is_some()),
                    ("convention", raw.convention.is_some()),
                ],
            )?;
            let z = raw.z.ok_or_else(|| ConfigError::new("$.system.z", "required field is missing"))?;
            if z == 0 {
                return Err(ConfigError::new("$.system.z", "nuclear charge must be at least 1"));
            }
            let nuclear_mass = match (raw.nuclear_mass_amu, z) {
                (Some(m), _) => positive("$.system.nuclear_mass_amu", Some(m))?,
                (None, 1) => HydrogenLikeSpec::HYDROGEN.nuclear_mass,
                (None, _) => {
                    return Err(ConfigError::new("$.system.nuclear_mass_amu", "required when z is not 1"));
                }
            };
            hydrogenlike_system(HydrogenLikeSpec { z, nuclear_mass }).map_err(|e| core_error("$.system", e))?
        }
        SystemTag::Harmonic => {
            forbid(
                "harmonic",
                &[
                    ("total_mass_amu", raw.total_mass_amu.is_some()),
                    ("mass_dipole_amu_m", raw.mass_dipole_amu_m.is_some()),
                    ("inertia_lower_amu_m2", raw.inertia_lower_amu_m2.is_some()),
                    ("inertia_upper_amu_m2", raw.inertia_upper_amu_m2.is_some()),
                    ("q0_m", raw.q0_m.is_some()),
                    ("z", raw.z.is_some()),
                    ("nuclear_mass_amu", raw.nuclear_mass_amu.is_some()),
                ],
            )?;
            let spec = HarmonicSpec {
                mu: positive("$.system.mu_amu", raw.mu_amu)?,
                omega0: positive("$.system.omega0_rad_per_s", raw.omega0_rad_per_s)?,
            };
            let convention = match raw.convention.unwrap_or(Convention::ZeroPoint) {
                Convention::ZeroPoint => DipoleConvention::ZeroPoint,
                Convention::Textbook => DipoleConvention::Textbook,
            };
            let sys = harmonic_system(spec, convention).map_err(|e| core_error("$.system", e))?;
            TwoLevelSystem { electric_dipole: d12, ..sys }
        }
        SystemTag::DoubleWell => {
            forbid(
                "double_well",
                &[
                    ("total_mass_amu", raw.total_mass_amu.is_some()),
                    ("mass_dipole_amu_m", raw.mass_dipole_amu_m.is_some()),
                    ("inertia_lower_amu_m2", raw.inertia_lower_amu_m2.is_some()),
                    ("inertia_upper_amu_m2", raw.inertia_upper_amu_m2.is_some()),
                    ("convention", raw.convention.is_some()),
                    ("z", raw.z.is_some()),
                    ("nuclear_mass_amu", raw.nuclear_mass_amu.is_some()),
                ],
            )?;
            let spec = DoubleWellSpec {
                mu: positive("$.system.mu_amu", raw.mu_amu)?,
                q0: positive("$.system.q0_m", raw.q0_m)?,
                omega0: positive("$.system.omega0_rad_per_s", raw.omega0_rad_per_s)?,
            };
            let sys = doublewell_system(spec).map_err(|e| core_error("$.system", e))?;
            TwoLevelSystem { electric_dipole: d12, ..sys }
        }
    };
    Ok(sys)
}

fn build_model(raw: RawModel) -> Result<CollapseModel> {
    let base = CollapseModel::defaults(match raw.variant {
        Variant::Csl => ModelVariant::Csl,
        Variant::Dp => ModelVariant::DiosiPenrose,
    });
    let model = CollapseModel {
        lambda: raw.lambda_per_s.map(|v| non_negative("$.model.lambda_per_s", v)).transpose()?.unwrap_or(base.lambda),
        r_c: raw.r_c_m.map(|v| positive("$.model.r_c_m", Some(v))).transpose()?.unwrap_or(base.r_c),
        m0: raw.m0_amu.map(|v| positive("$.model.m0_amu", Some(v))).transpose()?.unwrap_or(base.m0),
        ..base
    };
    model.validate().map_err(|e| core_error("$.model", e))?;
    Ok(model)
}

fn build_sim(raw: RawSim) -> Result<SimSettings> {
    let params = SimParams {
        omega_qed: non_negative("$.sim.omega_qed", raw.omega_qed)?,
        beta_qed: non_negative("$.sim.beta_qed", raw.beta_qed)?,
        lambda_x: non_negative("$.sim.lambda_x", raw.lambda_x)?,
        lambda_z: non_negative("$.sim.lambda_z", raw.lambda_z)?,
        dt: positive("$.sim.dt", Some(raw.dt))?,
        t_max: positive("$.sim.t_max", Some(raw.t_max))?,
        n_traj: raw.n_traj,
        seed: raw.seed,
        scheme: raw.scheme.into(),
    };
    if params.n_traj == 0 {
        return Err(ConfigError::new("$.sim.n_traj", "must be at least 1"));
    }
    params.validate().map_err(|e| core_error("$.sim", e))?;
    let init = match (raw.init_sx, raw.init_sy, raw.init_sz) {
        (None, None, None) => BlochState::EXCITED,
        (x, y, z) => BlochState::new(x.unwrap_or(0.0), y.unwrap_or(0.0), z.unwrap_or(0.0))
            .map_err(|e| core_error("$.sim.init_sz", e))?,
    };
    Ok(SimSettings { params, init })
}

fn build_bath(raw: RawBath) -> Result<BathParams> {
    let bath_mass = match (raw.bath_mass_amu, raw.gas) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::new("$.bath.gas", "give either `gas` or `bath_mass_amu`, not both"));
        }
        (Some(m), None) => positive("$.bath.bath_mass_amu", Some(m))?,
        (None, Some(name)) => {
            gases::lookup(&name)
                .ok_or_else(|| ConfigError::new("$.bath.gas", format!("unknown gas `{name}`")))?
                .mass_amu
        }
        (None, None) => return Err(ConfigError::new("$.bath.bath_mass_amu", "required field is missing")),
    };
    let bath = BathParams {
        pressure: non_negative("$.bath.pressure_pa", raw.pressure_pa)?,
        temperature: positive("$.bath.temperature_k", Some(raw.temperature_k))?,
        bath_mass,
        distance_d: positive("$.bath.distance_d_m", Some(raw.distance_d_m))?,
    };
    bath.validate().map_err(|e| core_error("$.bath", e))?;
    Ok(bath)
}

fn build_spectrum(raw: RawSpectrum) -> Result<SpectrumSettings> {
    if raw.source == SpectrumSource::Sde && (raw.dtau.is_some() || raw.tau_max.is_some()) {
        return Err(ConfigError::new(
            "$.spectrum.dtau",
            "the sde source samples on the simulation grid; set sim.dt and sim.t_max instead",
        ));
    }
    Ok(SpectrumSettings {
        source: raw.source,
        form: match raw.form {
            FormTag::Exact => CorrelationForm::Exact,
            FormTag::Taylor => CorrelationForm::Taylor,
        },
        dtau: raw.dtau.map(|v| positive("$.spectrum.dtau", Some(v))).transpose()?,
        tau_max: raw.tau_max.map(|v| positive("$.spectrum.tau_max", Some(v))).transpose()?,
    })
}

fn build_scan(raw: RawScan) -> Result<ScanSettings> {
    for (i, f) in raw.factors.iter().enumerate() {
        positive(&format!("$.scan.factors[{i}]"), Some(*f))?;
    }
    Ok(ScanSettings { kind: raw.kind, factors: raw.factors })
}
