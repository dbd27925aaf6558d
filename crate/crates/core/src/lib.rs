//! Delay-constrained input-queued switch toolkit.
//!
//! An N x N crossbar switch carries frame-synchronized traffic: every
//! virtual output queue receives one packet at the start of each frame of
//! `t` slots, and undelivered packets expire at frame end. This crate
//! provides:
//!
//! - the switch dynamics and validity checks ([`switch`]);
//! - exact combinatorial solvers: max-weight matching, degree-constrained
//!   selection, bipartite edge coloring, and the max-weight t-disjoint
//!   frame solver built from them ([`combinat`]);
//! - the polynomial capacity-region test and network-utility maximization
//!   over it ([`capacity`]);
//! - scheduling policies, including the feasibility-optimal virtual-queue
//!   frame scheduler and the per-slot baselines ([`schedulers`]);
//! - an exact small-instance oracle solving the occupancy-measure LP with
//!   rational arithmetic, plus the randomized cyclo-stationary policy it
//!   induces ([`mdp`]);
//! - a deterministic, seedable simulator with batch parallelism and CSV
//!   output ([`sim`]).
//!
//! Batch layers run on rayon when the default `parallel` feature is on;
//! disabling it leaves every entry point available with sequential
//! execution.

pub mod capacity;
pub mod combinat;
pub mod error;
pub mod matrix;
pub mod mdp;
pub mod rational;
pub mod schedulers;
pub mod sim;
pub mod switch;

pub use error::{Error, Result};
pub use rational::Rational;
pub use switch::{
    advance_slot, is_matching, is_t_disjoint, DeliveryRecord, FrameSchedule, Matching, RateMatrix,
    SwitchConfig, VoqBacklog,
};
