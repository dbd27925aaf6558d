//! Randomized cyclo-stationary policy table: per-slot conditional action
//! distributions derived from an occupancy measure by normalizing over the
//! state marginal. Periodic with the frame length by construction.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::rational::{to_f64, Rational};
use crate::switch::{Matching, SwitchConfig, VoqBacklog};

use super::{backlog_mask, OccupancyMeasure, StateMask};

#[derive(Debug, Clone)]
pub struct RcsTable {
    config: SwitchConfig,
    actions: Vec<Matching>,
    /// Per slot, per enumerated state: normalized action distribution, or
    /// `None` when the state has zero marginal (unreachable under the
    /// policy).
    per_slot: Vec<BTreeMap<StateMask, Option<Vec<(usize, Rational)>>>>,
}

impl RcsTable {
    /// Normalizes an occupancy measure into conditional distributions.
    pub fn build(occupancy: &OccupancyMeasure) -> Self {
        let mut per_slot = Vec::with_capacity(occupancy.slots().len());
        for states in occupancy.slots() {
            let mut table = BTreeMap::new();
            for (mask, xs) in states {
                let marginal: Rational = xs.iter().sum();
                let dist = if marginal.is_zero() {
                    None
                } else {
                    Some(
                        xs.iter()
                            .enumerate()
                            .filter(|(_, x)| !x.is_zero())
                            .map(|(ai, x)| (ai, x / marginal))
                            .collect(),
                    )
                };
                table.insert(*mask, dist);
            }
            per_slot.push(table);
        }
        RcsTable {
            config: *occupancy.config(),
            actions: occupancy.actions().to_vec(),
            per_slot,
        }
    }

    pub fn config(&self) -> &SwitchConfig {
        &self.config
    }

    /// Stored conditional distribution for (slot, state), if the state is
    /// reachable under the policy.
    pub fn distribution(
        &self,
        slot_in_frame: usize,
        state: StateMask,
    ) -> Result<Option<&[(usize, Rational)]>> {
        self.per_slot[slot_in_frame - 1]
            .get(&state)
            .map(|d| d.as_deref())
            .ok_or(Error::UnknownPolicyState {
                slot: slot_in_frame,
                state,
            })
    }

    pub fn action(&self, index: usize) -> &Matching {
        &self.actions[index]
    }
}

/// Normalizes an occupancy measure into the conditional policy table.
pub fn build_rcs_table(occupancy: &OccupancyMeasure) -> RcsTable {
    RcsTable::build(occupancy)
}

/// Samples the policy's action for the current state. States with zero
/// marginal return the empty matching; states outside the table's
/// enumeration are an error.
pub fn rcs_policy_step(
    table: &RcsTable,
    backlog: &VoqBacklog,
    slot_in_frame: usize,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<Matching> {
    let state = backlog_mask(backlog);
    let Some(dist) = table.distribution(slot_in_frame, state)? else {
        return Ok(Matching::empty(table.config.n));
    };
    let draw: f64 = rng.gen();
    let mut acc = 0.0;
    let mut chosen = dist.last().expect("nonzero marginal").0;
    for (ai, p) in dist {
        acc += to_f64(p);
        if draw < acc {
            chosen = *ai;
            break;
        }
    }
    Ok(table.actions[chosen].clone())
}

/// Average per-slot delivery rate implied by an occupancy measure; the
/// exact timely throughput the policy attains.
pub fn occupancy_rates(occupancy: &OccupancyMeasure) -> SquareMatrix<Rational> {
    let n = occupancy.config().n;
    let t = Rational::from_integer(occupancy.config().t as i64);
    SquareMatrix::from_fn(n, |i, j| {
        let bit = 1 << (i * n + j);
        let mut total = Rational::zero();
        for states in occupancy.slots() {
            for (mask, xs) in states {
                if mask & bit == 0 {
                    continue;
                }
                for (ai, x) in xs.iter().enumerate() {
                    if occupancy.actions()[ai].covers(i, j) {
                        total += *x;
                    }
                }
            }
        }
        total / t
    })
}
