//! Experiment driver: JSON configuration, parameter sweeps, finite-shot
//! sampling and CSV output.

pub mod config;
pub mod report;
pub mod sampling;
pub mod sweep;

pub use config::{ChannelSpec, Config, PovmSpec, ProbeSpec, SweepConfig};
pub use report::{certify_table, format_number, Table};
pub use sampling::{estimate_qdet, point_seed, sample_outcomes, splitmix64, ShotRecord};
pub use sweep::{
    figure_table, run_certify, run_sample, run_sweep, sweep_table, SampleReport, SweepRow,
    SweepSpec, SweepVariable,
};
