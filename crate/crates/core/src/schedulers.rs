//! Scheduling policies: the virtual-queue frame scheduler (T-MWM), the
//! greedy-frame baseline, per-slot max-weight matching, clearance-time
//! decomposition, the circular-shift schedule, and the randomized
//! cyclo-stationary policy driven by an oracle table.
//!
//! Frame planners produce the whole frame schedule at frame start;
//! per-slot policies react to the current backlog each slot. Both run
//! behind the same trait so the simulator can drive any of them.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::capacity::circular_shift_schedule;
use crate::combinat::{
    edge_color_bipartite, greedy_iterative_mwm, max_weight_degree_constrained_subgraph,
    max_weight_matching, solve_t_disjoint_max_weight,
};
use crate::error::Result;
use crate::matrix::SquareMatrix;
use crate::mdp::{rcs_policy_step, RcsTable};
use crate::rational::Rational;
use crate::switch::{FrameSchedule, Matching, RateMatrix, SwitchConfig, VoqBacklog};

/// Per-VOQ deficit counters, updated once per frame: arrivals of t*R
/// against unit service whenever the frame schedule covers the VOQ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualQueueState {
    q: SquareMatrix<Rational>,
    frame_index: u64,
}

impl VirtualQueueState {
    pub fn new(n: usize) -> Self {
        VirtualQueueState {
            q: SquareMatrix::filled(n, Rational::from_integer(0)),
            frame_index: 0,
        }
    }

    pub fn weights(&self) -> &SquareMatrix<Rational> {
        &self.q
    }

    pub fn frame_index(&self) -> u64 {
        self.frame_index
    }

    pub fn max_queue(&self) -> Rational {
        self.q
            .iter_indexed()
            .map(|(_, _, v)| *v)
            .max()
            .unwrap_or_else(|| Rational::from_integer(0))
    }

    /// Queue recursion: drain by the served indicator, then add the
    /// per-frame arrival t*R.
    fn advanced(&self, served: &crate::matrix::BinMatrix, target: &RateMatrix, t: usize) -> Self {
        let t_rat = Rational::from_integer(t as i64);
        let zero = Rational::from_integer(0);
        let q = SquareMatrix::from_fn(self.q.n(), |i, j| {
            let drained = self.q[(i, j)] - Rational::from_integer(i64::from(served[(i, j)]));
            let kept = if drained > zero { drained } else { zero };
            kept + t_rat * target.get(i, j)
        });
        VirtualQueueState {
            q,
            frame_index: self.frame_index + 1,
        }
    }
}

/// One frame of the virtual-queue max-weight scheduler: solve the
/// t-disjoint max-weight problem on the current queue weights, then apply
/// the queue update with the planned coverage.
pub fn tmwm_plan_frame(
    state: &VirtualQueueState,
    target: &RateMatrix,
    config: &SwitchConfig,
) -> Result<(FrameSchedule, VirtualQueueState)> {
    let schedule = solve_t_disjoint_max_weight(state.weights(), config.t)?;
    debug_assert_eq!(
        schedule.covered_weight(state.weights()),
        max_weight_degree_constrained_subgraph(state.weights(), config.t)?.weight(state.weights()),
    );
    let next = state.advanced(&schedule.union(), target, config.t);
    Ok((schedule, next))
}

/// Same queue dynamics as [`tmwm_plan_frame`] but with the greedy
/// iterative-matching frame solver; a possibly suboptimal comparison
/// policy.
pub fn greedy_frame_plan(
    state: &VirtualQueueState,
    target: &RateMatrix,
    config: &SwitchConfig,
) -> Result<(FrameSchedule, VirtualQueueState)> {
    let schedule = greedy_iterative_mwm(state.weights(), config.t)?;
    let next = state.advanced(&schedule.union(), target, config.t);
    Ok((schedule, next))
}

/// Per-slot max-weight matching on the real VOQ lengths. Under
/// frame-synchronized traffic a VOQ holds at most one packet, so the
/// weights are the 0/1 presence indicators.
pub fn mwm_step(backlog: &VoqBacklog) -> Result<Matching> {
    let weights = backlog.entries().map(|&v| i64::from(v));
    max_weight_matching(&weights)
}

/// Clearance-time decomposition of the frame-start backlog: edge-color the
/// backlog (its chromatic index is the clearance time) and play the color
/// classes in order, truncated to the frame length. Packets in classes
/// beyond the frame expire.
pub fn cto_plan_frame(backlog: &VoqBacklog, config: &SwitchConfig) -> Result<FrameSchedule> {
    let n = config.n;
    let edges: Vec<(usize, usize)> = backlog
        .entries()
        .iter_indexed()
        .filter(|(_, _, &v)| v == 1)
        .map(|(i, j, _)| (i, j))
        .collect();
    let clearance = (0..n)
        .flat_map(|k| {
            [
                usize::from(backlog.entries().row_sum(k)),
                usize::from(backlog.entries().col_sum(k)),
            ]
        })
        .max()
        .unwrap_or(0);
    let colors = edge_color_bipartite(n, &edges, clearance.max(1))?;
    let mut matchings: Vec<Matching> = Vec::new();
    for slot in 0..config.t.min(clearance) {
        let pairs: Vec<(usize, usize)> = edges
            .iter()
            .zip(&colors)
            .filter(|(_, &c)| c == slot)
            .map(|(&e, _)| e)
            .collect();
        matchings.push(Matching::from_pairs(n, &pairs)?);
    }
    matchings.resize(config.t, Matching::empty(n));
    FrameSchedule::new(matchings, config.t)
}

/// Identifier for a concrete policy; doubles as the config-file name and
/// the PRNG stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    Tmwm,
    Mwm,
    Cto,
    Greedy,
    CircularShift,
    Rcs,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Tmwm => "tmwm",
            PolicyKind::Mwm => "mwm",
            PolicyKind::Cto => "cto",
            PolicyKind::Greedy => "greedy",
            PolicyKind::CircularShift => "circular-shift",
            PolicyKind::Rcs => "rcs",
        }
    }

    /// Stable PRNG stream id for this policy.
    pub fn stream_id(self) -> u64 {
        match self {
            PolicyKind::Tmwm => 1,
            PolicyKind::Mwm => 2,
            PolicyKind::Cto => 3,
            PolicyKind::Greedy => 4,
            PolicyKind::CircularShift => 5,
            PolicyKind::Rcs => 6,
        }
    }
}

impl std::fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A scheduling policy as driven by the simulator: notified at every frame
/// start with the fresh backlog, then asked for one matching per slot.
pub trait Policy {
    fn kind(&self) -> PolicyKind;

    fn on_frame_start(
        &mut self,
        _frame_index: u64,
        _backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<()> {
        Ok(())
    }

    fn action(
        &mut self,
        slot_in_frame: usize,
        backlog: &VoqBacklog,
        rng: &mut dyn RngCore,
    ) -> Result<Matching>;
}

pub struct TmwmPolicy {
    config: SwitchConfig,
    target: RateMatrix,
    state: VirtualQueueState,
    current: Option<FrameSchedule>,
}

impl TmwmPolicy {
    pub fn new(config: SwitchConfig, target: RateMatrix) -> Self {
        let n = config.n;
        TmwmPolicy {
            config,
            target,
            state: VirtualQueueState::new(n),
            current: None,
        }
    }

    pub fn queue_state(&self) -> &VirtualQueueState {
        &self.state
    }
}

impl Policy for TmwmPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Tmwm
    }

    fn on_frame_start(
        &mut self,
        _frame: u64,
        _backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<()> {
        let (schedule, next) = tmwm_plan_frame(&self.state, &self.target, &self.config)?;
        self.current = Some(schedule);
        self.state = next;
        Ok(())
    }

    fn action(
        &mut self,
        slot_in_frame: usize,
        _backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<Matching> {
        Ok(self.current.as_ref().expect("frame planned").slot(slot_in_frame).clone())
    }
}

pub struct GreedyFramePolicy {
    config: SwitchConfig,
    target: RateMatrix,
    state: VirtualQueueState,
    current: Option<FrameSchedule>,
}

impl GreedyFramePolicy {
    pub fn new(config: SwitchConfig, target: RateMatrix) -> Self {
        let n = config.n;
        GreedyFramePolicy {
            config,
            target,
            state: VirtualQueueState::new(n),
            current: None,
        }
    }
}

impl Policy for GreedyFramePolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Greedy
    }

    fn on_frame_start(
        &mut self,
        _frame: u64,
        _backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<()> {
        let (schedule, next) = greedy_frame_plan(&self.state, &self.target, &self.config)?;
        self.current = Some(schedule);
        self.state = next;
        Ok(())
    }

    fn action(
        &mut self,
        slot_in_frame: usize,
        _backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<Matching> {
        Ok(self.current.as_ref().expect("frame planned").slot(slot_in_frame).clone())
    }
}

pub struct MwmPolicy {
    kind: PolicyKind,
}

impl MwmPolicy {
    pub fn new() -> Self {
        MwmPolicy {
            kind: PolicyKind::Mwm,
        }
    }
}

impl Default for MwmPolicy {
    fn default() -> Self {
        Self::new()
    }
}

impl Policy for MwmPolicy {
    fn kind(&self) -> PolicyKind {
        self.kind
    }

    fn action(
        &mut self,
        _slot_in_frame: usize,
        backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<Matching> {
        mwm_step(backlog)
    }
}

pub struct CtoPolicy {
    config: SwitchConfig,
    current: Option<FrameSchedule>,
}

impl CtoPolicy {
    pub fn new(config: SwitchConfig) -> Self {
        CtoPolicy {
            config,
            current: None,
        }
    }
}

impl Policy for CtoPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Cto
    }

    fn on_frame_start(
        &mut self,
        _frame: u64,
        backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<()> {
        self.current = Some(cto_plan_frame(backlog, &self.config)?);
        Ok(())
    }

    fn action(
        &mut self,
        slot_in_frame: usize,
        _backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<Matching> {
        Ok(self.current.as_ref().expect("frame planned").slot(slot_in_frame).clone())
    }
}

pub struct CircularShiftPolicy {
    schedule: FrameSchedule,
}

impl CircularShiftPolicy {
    pub fn new(config: SwitchConfig) -> Result<Self> {
        Ok(CircularShiftPolicy {
            schedule: circular_shift_schedule(&config)?,
        })
    }
}

impl Policy for CircularShiftPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::CircularShift
    }

    fn action(
        &mut self,
        slot_in_frame: usize,
        _backlog: &VoqBacklog,
        _rng: &mut dyn RngCore,
    ) -> Result<Matching> {
        Ok(self.schedule.slot(slot_in_frame).clone())
    }
}

pub struct RcsPolicy {
    table: RcsTable,
}

impl RcsPolicy {
    pub fn new(table: RcsTable) -> Self {
        RcsPolicy { table }
    }
}

impl Policy for RcsPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Rcs
    }

    fn action(
        &mut self,
        slot_in_frame: usize,
        backlog: &VoqBacklog,
        rng: &mut dyn RngCore,
    ) -> Result<Matching> {
        rcs_policy_step(&self.table, backlog, slot_in_frame, rng)
    }
}
