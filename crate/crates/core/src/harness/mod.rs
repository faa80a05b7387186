//! Monte-Carlo experiments and their CSV outputs.

pub mod config;
pub mod experiments;
pub mod trial;

pub use config::{CfoSpec, ChannelKind, DesignMode, Method, QuantizerModel, SimConfig, SweepVar};
pub use experiments::*;
pub use trial::{run_trial, trial_rng, Scenario, TrialOutcome, TrialRecord};
