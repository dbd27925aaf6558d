//! Deterministic slot-driven simulation: drives the switch dynamics under
//! one policy, accumulating deliveries and checkpointed throughput gaps.
//! Bitwise reproducible for a fixed (config, policy, seed).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::rational::{to_f64, Rational};
use crate::schedulers::{
    CircularShiftPolicy, CtoPolicy, GreedyFramePolicy, MwmPolicy, Policy, PolicyKind, RcsPolicy,
    TmwmPolicy,
};
use crate::switch::{advance_slot, RateMatrix, SwitchConfig, VoqBacklog};

/// Everything one simulation run needs; a single (config, policy, seed)
/// cell of an experiment.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub config: SwitchConfig,
    pub target: RateMatrix,
    pub policy: PolicyKind,
    pub seed: u64,
    pub horizon_slots: u64,
    pub checkpoint_interval: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub slot: u64,
    pub gap: f64,
    pub empirical: SquareMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub config: SwitchConfig,
    pub policy: PolicyKind,
    pub seed: u64,
    pub horizon_slots: u64,
    pub target: RateMatrix,
    pub cumulative: SquareMatrix<u64>,
    pub checkpoints: Vec<Checkpoint>,
}

impl SimTrace {
    pub fn final_gap(&self) -> f64 {
        self.checkpoints.last().map_or(0.0, |c| c.gap)
    }

    pub fn empirical(&self) -> SquareMatrix<f64> {
        self.cumulative
            .map(|&c| c as f64 / self.horizon_slots as f64)
    }

    /// Exact empirical rate, for identities like "exactly 1/t per VOQ".
    pub fn empirical_rate_exact(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.cumulative[(i, j)] as i64, self.horizon_slots as i64)
    }
}

/// Sum of positive per-VOQ shortfalls of the empirical rates against the
/// target; zero iff every VOQ meets its target.
pub fn throughput_gap(empirical: &SquareMatrix<f64>, target: &RateMatrix) -> Result<f64> {
    if empirical.n() != target.n() {
        return Err(Error::DimensionMismatch {
            left: empirical.n(),
            right: target.n(),
        });
    }
    Ok(target
        .entries()
        .iter_indexed()
        .map(|(i, j, r)| (to_f64(r) - empirical[(i, j)]).max(0.0))
        .sum())
}

/// Builds the policy a run asks for. The randomized table policy solves
/// its oracle here, so construction can fail on scale caps; so can the
/// circular shift when t < n.
pub fn build_policy(spec: &RunSpec) -> Result<Box<dyn Policy>> {
    Ok(match spec.policy {
        PolicyKind::Tmwm => Box::new(TmwmPolicy::new(spec.config, spec.target.clone())),
        PolicyKind::Greedy => Box::new(GreedyFramePolicy::new(spec.config, spec.target.clone())),
        PolicyKind::Mwm => Box::new(MwmPolicy::new()),
        PolicyKind::Cto => Box::new(CtoPolicy::new(spec.config)),
        PolicyKind::CircularShift => Box::new(CircularShiftPolicy::new(spec.config)?),
        PolicyKind::Rcs => {
            let occupancy = crate::mdp::solve_feasibility(&spec.target, &spec.config)?
                .ok_or(Error::LpInfeasible)?;
            Box::new(RcsPolicy::new(crate::mdp::RcsTable::build(&occupancy)))
        }
    })
}

/// Runs the slot loop with a caller-supplied policy instance.
pub fn run_simulation_with(spec: &RunSpec, policy: &mut dyn Policy) -> Result<SimTrace> {
    if spec.horizon_slots == 0 || spec.horizon_slots % spec.config.t as u64 != 0 {
        return Err(Error::config(
            "horizon_slots",
            "must be a positive multiple of the frame length",
        ));
    }
    if spec.target.n() != spec.config.n {
        return Err(Error::DimensionMismatch {
            left: spec.target.n(),
            right: spec.config.n,
        });
    }
    let n = spec.config.n;
    // One named, versioned stream per policy: ChaCha8 seeded by the run
    // seed, stream = policy id.
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(spec.policy.stream_id());

    let mut backlog = VoqBacklog::all_ones(n);
    let mut cumulative = SquareMatrix::filled(n, 0u64);
    let mut checkpoints = Vec::new();

    for slot in 1..=spec.horizon_slots {
        let slot_in_frame = spec.config.slot_in_frame(slot);
        if slot_in_frame == 1 {
            let frame_index = (slot - 1) / spec.config.t as u64;
            policy.on_frame_start(frame_index, &backlog, &mut rng)?;
        }
        let action = policy.action(slot_in_frame, &backlog, &mut rng)?;
        let (next, record) = advance_slot(&backlog, &action, slot, &spec.config)?;
        for (i, j) in record.deliveries.pairs() {
            cumulative[(i, j)] += 1;
        }
        backlog = next;

        if slot % spec.checkpoint_interval == 0 || slot == spec.horizon_slots {
            let empirical = cumulative.map(|&c| c as f64 / slot as f64);
            let gap = throughput_gap(&empirical, &spec.target)?;
            checkpoints.push(Checkpoint {
                slot,
                gap,
                empirical,
            });
        }
    }

    Ok(SimTrace {
        config: spec.config,
        policy: policy.kind(),
        seed: spec.seed,
        horizon_slots: spec.horizon_slots,
        target: spec.target.clone(),
        cumulative,
        checkpoints,
    })
}

/// Builds the run's named policy and drives it to the horizon.
pub fn run_simulation(spec: &RunSpec) -> Result<SimTrace> {
    let mut policy = build_policy(spec)?;
    run_simulation_with(spec, policy.as_mut())
}
