//! Runs one validated configuration and collects its outputs.

use num_complex::Complex64;
use serde_json::{Map, Value};

use collapse_spectra_core::decoherence::{collisional_broadening, discrimination_scan, doppler_broadening, BathParams};
use collapse_spectra_core::dynamics::{autocorrelation_closed_form, Scheme, SimParams};
use collapse_spectra_core::rates::{mass_scaling_scan, rates_generic, CollapseModel, RateWarning};
use collapse_spectra_core::spectroscopy::{fit_lorentzian, spectrum_from_autocorrelation, TransformGrid};
use collapse_spectra_core::system::{beta_qed, TwoLevelSystem};
use collapse_spectra_core::{Error, Result};

use crate::config::{Command, RunConfig, ScanTag, SimSettings, SpectrumSource};
use crate::output::{float, Artifacts, Cell, Table};
use crate::parallel;

pub fn run(config: &RunConfig) -> Result<Artifacts> {
    // parse_config guarantees the blocks each command needs
    let system = || config.system.as_ref().expect("validated config");
    let model = || config.model.as_ref().expect("validated config");
    let sim = || config.sim.as_ref().expect("validated config");
    match config.command {
        Command::Rates => rates(system(), model()),
        Command::Simulate => simulate(sim()),
        Command::Spectrum => spectrum(config, sim()),
        Command::Compare => compare(system(), model(), config.bath.as_ref().expect("validated config")),
        Command::Scan => scan(config, system(), model()),
    }
}

fn describe(w: &RateWarning) -> String {
    match w {
        RateWarning::OutsideSmallScaleLimit { length, r_c } => {
            format!("warning: system length {length:e} m exceeds 0.1 r_C = {:e} m; rates are extrapolated", 0.1 * r_c)
        }
        RateWarning::NegativeInertiaGap { gap } => {
            format!("warning: I2 - I1 = {gap:e} amu m^2 is negative; its magnitude was used")
        }
    }
}

fn qed_rate(sys: &TwoLevelSystem) -> Option<f64> {
    sys.electric_dipole.map(|d| beta_qed(sys.omega0, d))
}

fn rates(sys: &TwoLevelSystem, model: &CollapseModel) -> Result<Artifacts> {
    let report = rates_generic(sys, model)?;
    let r = report.rates;
    let mut table = Table::new(vec!["lambda_x", "lambda_z", "beta_N", "gamma_N", "beta_QED"]);
    table.push(vec![r.lambda_x.into(), r.lambda_z.into(), r.beta_n.into(), r.gamma_n.into(), qed_rate(sys).into()]);
    Ok(Artifacts { table, sidecar: None, warnings: report.warnings.iter().map(describe).collect() })
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::ItoEuler => "ito_euler",
        Scheme::StratonovichHeun => "stratonovich_heun",
    }
}

fn sim_echo(p: &SimParams) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("omega_qed".into(), float(p.omega_qed));
    m.insert("beta_qed".into(), float(p.beta_qed));
    m.insert("lambda_x".into(), float(p.lambda_x));
    m.insert("lambda_z".into(), float(p.lambda_z));
    m.insert("dt".into(), float(p.dt));
    m.insert("t_max".into(), float(p.t_max));
    m.insert("n_steps".into(), p.n_steps().into());
    m.insert("n_traj".into(), p.n_traj.into());
    m.insert("seed".into(), p.seed.into());
    m.insert("scheme".into(), scheme_name(p.scheme).into());
    m
}

fn simulate(sim: &SimSettings) -> Result<Artifacts> {
    let p = &sim.params;
    let s = parallel::run_ensemble(p, &sim.init)?;
    let mut table = Table::new(vec!["t", "mean_sx", "mean_sy", "mean_sz", "sem_sx", "sem_sy", "sem_sz"]);
    for k in 0..s.times.len() {
        table.push(vec![
            s.times[k].into(),
            s.mean_sx[k].into(),
            s.mean_sy[k].into(),
            s.mean_sz[k].into(),
            s.sem_sx[k].into(),
            s.sem_sy[k].into(),
            s.sem_sz[k].into(),
        ]);
    }
    let mut meta = sim_echo(p);
    meta.insert("init_sx".into(), float(sim.init.sx));
    meta.insert("init_sy".into(), float(sim.init.sy));
    meta.insert("init_sz".into(), float(sim.init.sz));
    Ok(Artifacts { table, sidecar: Some(meta), warnings: Vec::new() })
}

fn spectrum(config: &RunConfig, sim: &SimSettings) -> Result<Artifacts> {
    let p = &sim.params;
    let settings = &config.spectrum;
    if p.omega_qed <= p.lambda_x {
        return Err(Error::Overdamped { omega_qed: p.omega_qed, lambda_x: p.lambda_x });
    }
    let width = p.total_width();
    let c0 = Complex64::new(1.0, 0.0);
    let (c, dtau) = match settings.source {
        SpectrumSource::ClosedForm => {
            let mut grid = TransformGrid::for_line(p.omega_qed, width)?;
            if let Some(dtau) = settings.dtau {
                grid = TransformGrid { dtau, n_lags: (grid.tau_max() / dtau).ceil() as usize + 1 };
            }
            if let Some(tau_max) = settings.tau_max {
                grid.n_lags = (tau_max / grid.dtau).round() as usize + 1;
            }
            (autocorrelation_closed_form(p, &grid.lags(), c0, settings.form)?, grid.dtau)
        }
        SpectrumSource::Sde => (parallel::autocorrelation_sde(p, c0)?.mean, p.dt),
    };
    let s = spectrum_from_autocorrelation(&c, dtau)?;
    let fit = fit_lorentzian(&s)?;

    let mut table = Table::new(vec!["omega", "density"]);
    for (w, d) in s.omega.iter().zip(&s.density) {
        table.push(vec![Cell::Float(*w), Cell::Float(*d)]);
    }
    let mut meta = Map::new();
    meta.insert("beta_fit".into(), float(fit.beta_fit));
    meta.insert("omega_center".into(), float(fit.omega_center));
    meta.insert("peak_height".into(), float(fit.peak_height));
    meta.insert("rms_residual".into(), float(fit.rms_residual));
    meta.insert("converged".into(), fit.converged.into());
    meta.insert("iterations".into(), fit.iterations.into());
    meta.insert("predicted_beta".into(), float(width));
    meta.insert("predicted_omega".into(), float((p.omega_qed * p.omega_qed - p.lambda_x * p.lambda_x).sqrt()));
    meta.insert("dtau".into(), float(dtau));
    meta.insert("n_lags".into(), c.len().into());
    meta.insert(
        "source".into(),
        match settings.source {
            SpectrumSource::ClosedForm => "closed_form",
            SpectrumSource::Sde => "sde",
        }
        .into(),
    );
    if settings.source == SpectrumSource::Sde {
        meta.extend(sim_echo(p));
    }
    let warnings = if fit.converged {
        Vec::new()
    } else {
        vec![format!("warning: Lorentzian refinement did not converge after {} iterations", fit.iterations)]
    };
    Ok(Artifacts { table, sidecar: Some(meta), warnings })
}

fn compare(sys: &TwoLevelSystem, model: &CollapseModel, bath: &BathParams) -> Result<Artifacts> {
    let report = rates_generic(sys, model)?;
    let mut table = Table::new(vec!["label", "value"]);
    table.push(vec!["beta_N".into(), report.rates.beta_n.into()]);
    table.push(vec!["beta_C".into(), collisional_broadening(bath, sys.total_mass)?.into()]);
    table.push(vec!["beta_D".into(), doppler_broadening(sys.omega0, sys.total_mass, bath.temperature)?.into()]);
    table.push(vec!["beta_QED".into(), qed_rate(sys).into()]);
    Ok(Artifacts { table, sidecar: None, warnings: report.warnings.iter().map(describe).collect() })
}

fn scan(config: &RunConfig, sys: &TwoLevelSystem, model: &CollapseModel) -> Result<Artifacts> {
    let settings = config.scan.as_ref().expect("validated config");
    let Some(kind) = settings.discrimination_kind() else {
        let rows = mass_scaling_scan(sys, &settings.factors, model)?;
        let mut table = Table::new(vec!["factor", "total_mass_amu", "beta_N"]);
        for r in rows {
            table.push(vec![r.factor.into(), r.total_mass.into(), r.beta_n.into()]);
        }
        return Ok(Artifacts { table, sidecar: None, warnings: Vec::new() });
    };
    let bath = config.bath.as_ref().expect("validated config");
    let scan = discrimination_scan(kind, sys, bath, model, &settings.factors)?;
    let mut table = Table::new(vec![
        "factor",
        "system_mass_amu",
        "bath_mass_amu",
        "distance_d_m",
        "beta_N",
        "beta_C",
        "beta_C_exact",
    ]);
    for r in &scan.rows {
        table.push(vec![
            r.factor.into(),
            r.system_mass.into(),
            r.bath_mass.into(),
            r.distance_d.into(),
            r.beta_n.into(),
            r.beta_c.into(),
            r.beta_c_exact.into(),
        ]);
    }
    let mut meta = Map::new();
    meta.insert(
        "kind".into(),
        match settings.kind {
            ScanTag::SystemMass => "system_mass",
            _ => "bath_mass",
        }
        .into(),
    );
    meta.insert("slope_beta_N".into(), scan.slope_beta_n.map_or(Value::Null, float));
    meta.insert("slope_beta_C".into(), scan.slope_beta_c.map_or(Value::Null, float));
    Ok(Artifacts { table, sidecar: Some(meta), warnings: Vec::new() })
}
