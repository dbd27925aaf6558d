//! Batch execution of independent runs. Runs never share state, so the
//! batch is data-parallel; results come back in spec order either way.

use crate::error::Result;

use super::engine::{run_simulation, RunSpec, SimTrace};

/// Runs every spec, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn run_batch(specs: &[RunSpec]) -> Result<Vec<SimTrace>> {
    use rayon::prelude::*;
    specs.par_iter().map(run_simulation).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn run_batch(specs: &[RunSpec]) -> Result<Vec<SimTrace>> {
    run_batch_serial(specs)
}

/// Sequential fallback; also the baseline the benchmarks compare against.
pub fn run_batch_serial(specs: &[RunSpec]) -> Result<Vec<SimTrace>> {
    specs.iter().map(run_simulation).collect()
}
