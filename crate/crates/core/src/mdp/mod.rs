//! Exact small-instance oracle: enumerates states and perfect-matching
//! actions, solves the cyclo-stationary occupancy-measure LP with exact
//! rational arithmetic, answers capacity-membership queries, and derives
//! the randomized cyclo-stationary policy table.
//!
//! States are pruned to those reachable from the frame-start all-ones
//! state (complements of unions of perfect matchings); the wrap constraint
//! forces the slot-1 marginal onto all-ones, so pruning is lossless.

mod rcs;
mod simplex;

pub use rcs::{build_rcs_table, occupancy_rates, rcs_policy_step, RcsTable};

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{BinMatrix, SquareMatrix};
use crate::rational::{big, from_big, Rational};
use crate::switch::{Matching, RateMatrix, SwitchConfig, VoqBacklog};
use simplex::{Constraint, LpOutcome, LpProblem, Relation};

/// Desk-scale caps: beyond this the state space is declared infeasible.
pub const MAX_ORACLE_N: usize = 3;
pub const MAX_ORACLE_T: usize = 5;

/// Backlog bitmask, bit `i * n + j` set iff VOQ(i,j) holds a packet.
pub type StateMask = u32;

pub fn backlog_mask(backlog: &VoqBacklog) -> StateMask {
    let n = backlog.n();
    let mut mask = 0;
    for i in 0..n {
        for j in 0..n {
            if backlog.has_packet(i, j) {
                mask |= 1 << (i * n + j);
            }
        }
    }
    mask
}

fn matching_mask(m: &Matching, n: usize) -> StateMask {
    let mut mask = 0;
    for (i, j) in m.pairs() {
        mask |= 1 << (i * n + j);
    }
    mask
}

/// Deterministic per-VOQ transition: selected packets leave, and at the
/// last slot of a frame everything expires and fresh packets arrive.
pub fn transition(state: StateMask, action: &Matching, slot: u64, config: &SwitchConfig) -> StateMask {
    let n = config.n;
    if config.is_frame_end(slot) {
        full_mask(n)
    } else {
        state & !matching_mask(action, n)
    }
}

/// Per-slot reward matrix: 1 iff the VOQ holds a packet and is selected.
pub fn reward(state: StateMask, action: &Matching) -> BinMatrix {
    let n = action.n();
    BinMatrix::from_fn(n, |i, j| {
        u8::from(action.covers(i, j) && state & (1 << (i * n + j)) != 0)
    })
}

pub fn full_mask(n: usize) -> StateMask {
    ((1u64 << (n * n)) - 1) as StateMask
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, used: &mut [bool], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                current.push(j);
                rec(n, used, current, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    rec(n, &mut used, &mut current, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct MdpInstance {
    config: SwitchConfig,
    actions: Vec<Matching>,
    action_masks: Vec<StateMask>,
    states_by_slot: Vec<Vec<StateMask>>,
}

impl MdpInstance {
    pub fn new(config: SwitchConfig) -> Result<Self> {
        let (n, t) = (config.n, config.t);
        if n > MAX_ORACLE_N || t > MAX_ORACLE_T {
            return Err(Error::ScaleCap {
                n,
                t,
                max_n: MAX_ORACLE_N,
                max_t: MAX_ORACLE_T,
            });
        }
        let actions: Vec<Matching> = permutations(n)
            .iter()
            .map(|p| Matching::from_permutation(p).expect("permutation"))
            .collect();
        let action_masks: Vec<StateMask> = actions.iter().map(|a| matching_mask(a, n)).collect();

        let mut states_by_slot = Vec::with_capacity(t);
        states_by_slot.push(vec![full_mask(n)]);
        for slot in 1..t {
            let mut next = BTreeSet::new();
            for &s in &states_by_slot[slot - 1] {
                for &a in &action_masks {
                    next.insert(s & !a);
                }
            }
            states_by_slot.push(next.into_iter().collect());
        }
        Ok(MdpInstance {
            config,
            actions,
            action_masks,
            states_by_slot,
        })
    }

    pub fn config(&self) -> &SwitchConfig {
        &self.config
    }

    pub fn actions(&self) -> &[Matching] {
        &self.actions
    }

    /// Reachable states at the (0-based) slot within the frame.
    pub fn states_at(&self, slot_index: usize) -> &[StateMask] {
        &self.states_by_slot[slot_index]
    }

    fn var_layout(&self) -> (Vec<usize>, usize) {
        // x variables slot-major, then state, then action; rate variables
        // appended after all x.
        let a = self.actions.len();
        let mut offsets = Vec::with_capacity(self.config.t);
        let mut next = 0;
        for states in &self.states_by_slot {
            offsets.push(next);
            next += states.len() * a;
        }
        (offsets, next)
    }

    fn x_var(&self, offsets: &[usize], slot: usize, state_idx: usize, action_idx: usize) -> usize {
        offsets[slot] + state_idx * self.actions.len() + action_idx
    }

    /// Occupancy constraints shared by optimization and membership: flow
    /// balance between consecutive slots, the frame wrap, and per-slot
    /// normalization.
    fn base_constraints(&self, offsets: &[usize]) -> Vec<Constraint> {
        let t = self.config.t;
        let a = self.actions.len();
        let one = BigRational::from_integer(1.into());
        let mut constraints = Vec::new();

        for slot in 0..t - 1 {
            let next_states = &self.states_by_slot[slot + 1];
            let index_of = |mask: StateMask| next_states.binary_search(&mask).expect("closure");
            let mut rows: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); next_states.len()];
            for (si, _) in next_states.iter().enumerate() {
                for ai in 0..a {
                    rows[si].push((self.x_var(offsets, slot + 1, si, ai), one.clone()));
                }
            }
            for (si, &s) in self.states_by_slot[slot].iter().enumerate() {
                for (ai, &am) in self.action_masks.iter().enumerate() {
                    let target = index_of(s & !am);
                    rows[target].push((self.x_var(offsets, slot, si, ai), -one.clone()));
                }
            }
            for coeffs in rows {
                constraints.push(Constraint {
                    coeffs,
                    relation: Relation::Eq,
                    rhs: BigRational::zero(),
                });
            }
        }

        // Wrap: the frame-end transition maps every state to all-ones, so
        // the slot-1 mass must equal the whole slot-T mass.
        let mut wrap = Vec::new();
        for ai in 0..a {
            wrap.push((self.x_var(offsets, 0, 0, ai), one.clone()));
        }
        for si in 0..self.states_by_slot[t - 1].len() {
            for ai in 0..a {
                wrap.push((self.x_var(offsets, t - 1, si, ai), -one.clone()));
            }
        }
        constraints.push(Constraint {
            coeffs: wrap,
            relation: Relation::Eq,
            rhs: BigRational::zero(),
        });

        for slot in 0..t {
            let coeffs = (0..self.states_by_slot[slot].len())
                .flat_map(|si| (0..a).map(move |ai| (si, ai)))
                .map(|(si, ai)| (self.x_var(offsets, slot, si, ai), one.clone()))
                .collect();
            constraints.push(Constraint {
                coeffs,
                relation: Relation::Eq,
                rhs: one.clone(),
            });
        }
        constraints
    }

    /// Sparse column of reward coefficients for VOQ (i,j): the x variables
    /// whose (state, action) pair delivers that VOQ.
    fn reward_terms(&self, offsets: &[usize], i: usize, j: usize) -> Vec<usize> {
        let bit = 1 << (i * self.config.n + j);
        let mut terms = Vec::new();
        for slot in 0..self.config.t {
            for (si, &s) in self.states_by_slot[slot].iter().enumerate() {
                for (ai, &am) in self.action_masks.iter().enumerate() {
                    if s & am & bit != 0 {
                        terms.push(self.x_var(offsets, slot, si, ai));
                    }
                }
            }
        }
        terms
    }

    fn occupancy_from_values(&self, offsets: &[usize], values: &[BigRational]) -> Result<OccupancyMeasure> {
        let a = self.actions.len();
        let mut slots = Vec::with_capacity(self.config.t);
        for (slot, states) in self.states_by_slot.iter().enumerate() {
            let mut per_state = Vec::with_capacity(states.len());
            for (si, &s) in states.iter().enumerate() {
                let xs: Result<Vec<Rational>> = (0..a)
                    .map(|ai| from_big(&values[self.x_var(offsets, slot, si, ai)]))
                    .collect();
                per_state.push((s, xs?));
            }
            slots.push(per_state);
        }
        Ok(OccupancyMeasure {
            config: self.config,
            actions: self.actions.clone(),
            slots,
        })
    }
}

/// Joint slot/state/action probabilities of one cyclo-stationary frame.
#[derive(Debug, Clone)]
pub struct OccupancyMeasure {
    config: SwitchConfig,
    actions: Vec<Matching>,
    /// Per slot: (state mask, per-action probability) in enumeration order.
    slots: Vec<Vec<(StateMask, Vec<Rational>)>>,
}

impl OccupancyMeasure {
    pub fn config(&self) -> &SwitchConfig {
        &self.config
    }

    pub fn actions(&self) -> &[Matching] {
        &self.actions
    }

    pub fn slots(&self) -> &[Vec<(StateMask, Vec<Rational>)>] {
        &self.slots
    }

    /// Total probability mass at one slot; exactly 1 for a valid measure.
    pub fn slot_total(&self, slot_index: usize) -> Rational {
        self.slots[slot_index]
            .iter()
            .flat_map(|(_, xs)| xs.iter())
            .sum()
    }
}

pub struct NumSolution {
    pub value: Rational,
    pub rates: RateMatrix,
    pub occupancy: OccupancyMeasure,
}

/// Maximizes the linear utility sum(w[i][j] * R[i][j]) over the exact
/// occupancy polytope. Scale-capped; exact rational output.
pub fn solve_num_lp(weights: &SquareMatrix<Rational>, config: &SwitchConfig) -> Result<NumSolution> {
    let instance = MdpInstance::new(*config)?;
    if weights.n() != config.n {
        return Err(Error::DimensionMismatch {
            left: weights.n(),
            right: config.n,
        });
    }
    let n = config.n;
    let (offsets, num_x) = instance.var_layout();
    let num_vars = num_x + n * n;
    let rate_var = |i: usize, j: usize| num_x + i * n + j;

    let mut constraints = instance.base_constraints(&offsets);
    let t_big = BigRational::from_integer((config.t as i64).into());
    for i in 0..n {
        for j in 0..n {
            // T * R_ij <= total delivered probability mass for (i,j)
            let mut coeffs = vec![(rate_var(i, j), t_big.clone())];
            for var in instance.reward_terms(&offsets, i, j) {
                coeffs.push((var, -BigRational::from_integer(1.into())));
            }
            constraints.push(Constraint {
                coeffs,
                relation: Relation::Le,
                rhs: BigRational::zero(),
            });
        }
    }

    let mut objective = vec![BigRational::zero(); num_vars];
    for (i, j, w) in weights.iter_indexed() {
        objective[rate_var(i, j)] = big(w);
    }
    let lp = LpProblem {
        num_vars,
        maximize: true,
        objective,
        constraints,
    };
    match simplex::solve(&lp) {
        LpOutcome::Optimal(sol) => {
            let rates = RateMatrix::new(SquareMatrix::from_fn(n, |i, j| {
                from_big(&sol.values[rate_var(i, j)]).expect("vertex rates are small rationals")
            }))?;
            let occupancy = instance.occupancy_from_values(&offsets, &sol.values)?;
            Ok(NumSolution {
                value: from_big(&sol.objective)?,
                rates,
                occupancy,
            })
        }
        LpOutcome::Infeasible => Err(Error::LpInfeasible),
        LpOutcome::Unbounded => Err(Error::LpUnbounded),
    }
}

/// Occupancy measure delivering at least the given rates, if one exists.
pub fn solve_feasibility(rates: &RateMatrix, config: &SwitchConfig) -> Result<Option<OccupancyMeasure>> {
    let instance = MdpInstance::new(*config)?;
    if rates.n() != config.n {
        return Err(Error::DimensionMismatch {
            left: rates.n(),
            right: config.n,
        });
    }
    let n = config.n;
    let (offsets, num_x) = instance.var_layout();
    let mut constraints = instance.base_constraints(&offsets);
    let t_rat = Rational::from_integer(config.t as i64);
    for i in 0..n {
        for j in 0..n {
            let coeffs = instance
                .reward_terms(&offsets, i, j)
                .into_iter()
                .map(|var| (var, BigRational::from_integer(1.into())))
                .collect();
            constraints.push(Constraint {
                coeffs,
                relation: Relation::Ge,
                rhs: big(&(t_rat * rates.get(i, j))),
            });
        }
    }
    let lp = LpProblem {
        num_vars: num_x,
        maximize: false,
        objective: vec![BigRational::zero(); num_x],
        constraints,
    };
    match simplex::solve(&lp) {
        LpOutcome::Optimal(sol) => Ok(Some(instance.occupancy_from_values(&offsets, &sol.values)?)),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::LpUnbounded),
    }
}

/// Capacity membership through the occupancy LP (exact arithmetic).
pub fn check_capacity_mdp(rates: &RateMatrix, config: &SwitchConfig) -> Result<bool> {
    Ok(solve_feasibility(rates, config)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rational;

    #[test]
    fn transition_rules() {
        let config = SwitchConfig::new(2, 2).unwrap();
        let id = Matching::identity(2);
        let all = full_mask(2); // 0b1111
        // mid-frame: diagonal zeroed
        assert_eq!(transition(all, &id, 1, &config), 0b0110);
        // frame end: everything refreshes
        assert_eq!(transition(0b0110, &id, 2, &config), all);
        // empty state stays empty mid-frame
        assert_eq!(transition(0, &id, 1, &config), 0);
    }

    #[test]
    fn reward_needs_packet_and_selection() {
        let id = Matching::identity(2);
        assert_eq!(reward(full_mask(2), &id), BinMatrix::from_fn(2, |i, j| u8::from(i == j)));
        assert_eq!(reward(0, &id).total(), 0);
        // complement of the diagonal earns nothing under the identity
        assert_eq!(reward(0b0110, &id).total(), 0);
    }

    #[test]
    fn enumeration_counts() {
        let instance = MdpInstance::new(SwitchConfig::new(2, 2).unwrap()).unwrap();
        assert_eq!(instance.actions().len(), 2);
        assert_eq!(instance.states_at(0), &[0b1111]);
        // complements of the two perfect matchings
        let mut expected = vec![0b1111 & !0b1001u32, 0b1111 & !0b0110u32];
        expected.sort();
        assert_eq!(instance.states_at(1), &expected[..]);
    }

    #[test]
    fn transitions_stay_inside_the_enumeration() {
        let config = SwitchConfig::new(3, 3).unwrap();
        let instance = MdpInstance::new(config).unwrap();
        for slot in 0..config.t - 1 {
            for &s in instance.states_at(slot) {
                for a in instance.actions() {
                    let next = transition(s, a, (slot + 1) as u64, &config);
                    assert!(instance.states_at(slot + 1).binary_search(&next).is_ok());
                }
            }
        }
    }

    #[test]
    fn scale_cap_enforced() {
        assert!(matches!(
            MdpInstance::new(SwitchConfig::new(4, 2).unwrap()),
            Err(Error::ScaleCap { .. })
        ));
        assert!(matches!(
            MdpInstance::new(SwitchConfig::new(2, 6).unwrap()),
            Err(Error::ScaleCap { .. })
        ));
    }

    #[test]
    fn zero_weights_solve_to_zero() {
        let config = SwitchConfig::new(2, 2).unwrap();
        let w = SquareMatrix::filled(2, Rational::zero());
        let sol = solve_num_lp(&w, &config).unwrap();
        assert_eq!(sol.value, Rational::zero());
        for slot in 0..2 {
            assert_eq!(sol.occupancy.slot_total(slot), rational(1, 1));
        }
    }

    #[test]
    fn full_rate_feasible_when_t_matches_n() {
        let config = SwitchConfig::new(2, 2).unwrap();
        let rates = RateMatrix::uniform(2, rational(1, 2)).unwrap();
        assert!(check_capacity_mdp(&rates, &config).unwrap());
        let too_much = RateMatrix::uniform(2, rational(3, 5)).unwrap();
        assert!(!check_capacity_mdp(&too_much, &config).unwrap());
    }

    #[test]
    fn zero_rates_always_feasible() {
        let config = SwitchConfig::new(2, 3).unwrap();
        assert!(check_capacity_mdp(&RateMatrix::zeros(2), &config).unwrap());
    }
}
