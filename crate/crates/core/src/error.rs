use alloc::string::String;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    #[error("unknown constant identifier `{0}`")]
    UnknownConstant(String),

    #[error("cannot convert {from} to {to}: incompatible dimensions")]
    IncompatibleUnits { from: &'static str, to: &'static str },

    #[error("non-finite state in trajectory {trajectory} at step {step}")]
    NumericalFailure { trajectory: usize, step: usize },

    #[error("overdamped regime: omega_qed ({omega_qed}) must exceed lambda_x ({lambda_x})")]
    Overdamped { omega_qed: f64, lambda_x: f64 },

    #[error(
        "autocorrelation has not decayed: |C(tau_max)|/|C(0)| = {ratio:.3e} > 1e-3; \
         extend tau_max to at least {suggested_tau_max:.6e}"
    )]
    WindowTooShort { ratio: f64, suggested_tau_max: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("spectrum has no interior maximum")]
    NoPeak,

    #[error("system is missing {0}")]
    IncompleteSystem(&'static str),

    #[error(
        "recoil-free regime violated at row {row}: system mass {system_mass} amu < 100 x bath mass {bath_mass} amu"
    )]
    RecoilRegime { row: usize, system_mass: f64, bath_mass: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, name: &'static str, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason })
    }
}
