//! CFO estimation for mmWave initial access under few-bit ADCs.
//!
//! The crate covers the full chain used to compare the conventional
//! Zadoff-Chu (ZC) symmetry estimator with two double-sequence designs:
//! an auxiliary pair (`d0`, `d1`) inverted through a power ratio, and a
//! sum/difference pair inverted through the imaginary part of a power ratio.
//!
//! - [`seq`] builds the transmit sequences.
//! - [`phy`] draws beams and channels and produces received frames.
//! - [`quant`] holds the ADC models.
//! - [`est`] has the receive-side estimators.
//! - [`analysis`] has the bounds and analytical variances.
//! - [`opt`] designs the sequence parameters for a UE population.
//! - [`harness`] runs the Monte-Carlo experiments.

pub mod analysis;
pub mod error;
pub mod est;
pub mod gauss;
pub mod harness;
pub mod opt;
pub mod phy;
pub mod quant;
pub mod seq;

pub use error::{Error, Result};
pub use num_complex::Complex64;
