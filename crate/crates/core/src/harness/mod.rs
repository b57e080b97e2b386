//! Experiment orchestration: configuration, run persistence and sweeps.

pub mod config;
pub mod persist;
pub mod sweeps;

pub use config::{run_simulation, Config, InitSource};
pub use sweeps::{
    fit_loglog, limit_sweep, refinement_study, stability_probe, viscosity_sweep, CompareNorm, RateReport, SweepKind,
    SweepSpec,
};
