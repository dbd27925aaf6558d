//! Deterministic slot-driven simulation: engine, batch runner, experiment
//! configuration, canned experiments, and result persistence.

mod config;
mod engine;
mod experiments;
mod output;
mod runner;

pub use config::ExperimentConfig;
pub use engine::{
    build_policy, run_simulation, run_simulation_with, throughput_gap, Checkpoint, RunSpec,
    SimTrace,
};
pub use experiments::{
    num_derived_target, reference_rate_matrix, reference_weight_matrix, reproduce_experiment,
    FIG3B_SEED, FIG4_SEED_BASE, FIG5_SEED_BASE,
};
pub use output::{format_value, write_csv, write_trace_csv, Manifest};
pub use runner::{run_batch, run_batch_serial};
