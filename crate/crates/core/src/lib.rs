//! Spectral signatures of spontaneous wave-function collapse in two-level
//! emitters.
//!
//! The crate covers collapse-induced rates for CSL and Diósi–Penrose models,
//! a stochastic Bloch-vector simulator with its closed-form averages, the
//! emission spectrum and its Lorentzian fit, and environmental broadening
//! comparators. It is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod decoherence;
pub mod dynamics;
pub mod error;
mod fft;
pub mod rates;
pub mod rng;
pub mod spectroscopy;
pub mod system;
pub mod units;

pub use error::{Error, Result};
