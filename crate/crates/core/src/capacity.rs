//! Polynomial capacity-region test, network-utility maximization over the
//! region, and the deterministic circular-shift schedule for t >= n.
//!
//! The region for frame length `t` is: all row sums <= 1, all column sums
//! <= 1, and every entry in [0, 1/t]. Linear utilities are maximized
//! exactly by scaling a degree-constrained subgraph optimum (the region's
//! vertices have entries in {0, 1/t}); concave utilities go through
//! conditional-gradient iterations whose linear subproblem is that same
//! reduction.

use num_traits::Zero;

use crate::combinat::{max_weight_degree_constrained_subgraph, Weight};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::rational::{to_f64, Rational};
use crate::switch::{FrameSchedule, Matching, RateMatrix, SwitchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// Row sum of some input exceeds 1.
    Row,
    /// Column sum of some output exceeds 1.
    Column,
    /// Single entry outside [0, 1/t].
    EntryCap,
}

/// One violated constraint; `slack` is bound minus value, negative when
/// violated.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ConstraintKind,
    /// Row or column index; for entry caps, `i * n + j`.
    pub index: usize,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityVerdict {
    pub violations: Vec<Violation>,
}

impl CapacityVerdict {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Membership test for the capacity region. Exact on rational inputs.
pub fn check_capacity(rates: &RateMatrix, config: &SwitchConfig) -> CapacityVerdict {
    let n = rates.n();
    let one = Rational::from_integer(1);
    let cap = Rational::new(1, config.t as i64);
    let mut violations = Vec::new();
    for i in 0..n {
        let sum = rates.entries().row_sum(i);
        if sum > one {
            violations.push(Violation {
                kind: ConstraintKind::Row,
                index: i,
                slack: to_f64(&(one - sum)),
            });
        }
    }
    for j in 0..n {
        let sum = rates.entries().col_sum(j);
        if sum > one {
            violations.push(Violation {
                kind: ConstraintKind::Column,
                index: j,
                slack: to_f64(&(one - sum)),
            });
        }
    }
    for (i, j, v) in rates.entries().iter_indexed() {
        if *v > cap {
            violations.push(Violation {
                kind: ConstraintKind::EntryCap,
                index: i * n + j,
                slack: to_f64(&(cap - *v)),
            });
        }
    }
    CapacityVerdict { violations }
}

/// Float-matrix variant used by the conditional-gradient path; the closed
/// constraints get an absolute tolerance to absorb float ingestion.
pub fn check_capacity_f64(
    rates: &SquareMatrix<f64>,
    config: &SwitchConfig,
    tolerance: f64,
) -> bool {
    let n = rates.n();
    let cap = 1.0 / config.t as f64;
    for k in 0..n {
        if rates.row_sum(k) > 1.0 + tolerance || rates.col_sum(k) > 1.0 + tolerance {
            return false;
        }
    }
    rates
        .iter_indexed()
        .all(|(_, _, &v)| (-tolerance..=cap + tolerance).contains(&v))
}

fn selection_to_rates(selection: &crate::matrix::BinMatrix, t: usize) -> RateMatrix {
    let cap = Rational::new(1, t as i64);
    let entries = selection.map(|&v| if v == 1 { cap } else { Rational::zero() });
    RateMatrix::new(entries).expect("nonnegative by construction")
}

/// Exact maximizer of a nonnegative-weighted linear utility over the
/// capacity region; the optimum is a {0, 1/t}-valued rate matrix.
pub fn maximize_linear_utility(
    weights: &SquareMatrix<Rational>,
    config: &SwitchConfig,
) -> Result<(RateMatrix, Rational)> {
    let (rates, value) = maximize_linear_core(weights, config)?;
    Ok((rates, value / Rational::from_integer(config.t as i64)))
}

/// Float-weight variant for callers inside iterative optimizers.
pub fn maximize_linear_utility_f64(
    weights: &SquareMatrix<f64>,
    config: &SwitchConfig,
) -> Result<(RateMatrix, f64)> {
    let (rates, value) = maximize_linear_core(weights, config)?;
    Ok((rates, value / config.t as f64))
}

fn maximize_linear_core<W: Weight>(
    weights: &SquareMatrix<W>,
    config: &SwitchConfig,
) -> Result<(RateMatrix, W)> {
    if weights.n() != config.n {
        return Err(Error::DimensionMismatch {
            left: weights.n(),
            right: config.n,
        });
    }
    let selection = max_weight_degree_constrained_subgraph(weights, config.t)?;
    let value = selection.weight(weights);
    Ok((selection_to_rates(selection.entries(), config.t), value))
}

/// A per-VOQ utility: increasing, concave, continuously differentiable on
/// [0, 1/t]. Implementations supply the value and its derivative.
pub trait Utility {
    fn value(&self, i: usize, j: usize, x: f64) -> f64;
    fn gradient(&self, i: usize, j: usize, x: f64) -> f64;
}

/// U_{i,j}(x) = w_{i,j} * x.
pub struct LinearUtility(pub SquareMatrix<f64>);

impl Utility for LinearUtility {
    fn value(&self, i: usize, j: usize, x: f64) -> f64 {
        self.0[(i, j)] * x
    }
    fn gradient(&self, i: usize, j: usize, _x: f64) -> f64 {
        self.0[(i, j)]
    }
}

/// U_{i,j}(x) = log(1 + x), the standard proportional-fairness surrogate.
pub struct LogUtility;

impl Utility for LogUtility {
    fn value(&self, _i: usize, _j: usize, x: f64) -> f64 {
        (1.0 + x).ln()
    }
    fn gradient(&self, _i: usize, _j: usize, x: f64) -> f64 {
        1.0 / (1.0 + x)
    }
}

const FRANK_WOLFE_MAX_ITERS: usize = 10_000;

/// Conditional-gradient maximization of a concave utility over the
/// capacity region. Returns a feasible float matrix whose utility is
/// within `tolerance` of the supremum (duality-gap certificate); errors
/// with the best iterate if the gap does not close within the iteration
/// cap.
pub fn maximize_concave_utility<U: Utility>(
    utility: &U,
    config: &SwitchConfig,
    tolerance: f64,
) -> Result<SquareMatrix<f64>> {
    assert!(tolerance > 0.0, "tolerance must be positive");
    let n = config.n;
    let mut current = SquareMatrix::filled(n, 0.0f64);
    let mut last_gap = f64::INFINITY;
    for k in 0..FRANK_WOLFE_MAX_ITERS {
        let grad = SquareMatrix::from_fn(n, |i, j| utility.gradient(i, j, current[(i, j)]).max(0.0));
        let (vertex, _) = maximize_linear_utility_f64(&grad, config)?;
        let vertex = vertex.entries().map(to_f64);
        let gap: f64 = grad
            .iter_indexed()
            .map(|(i, j, g)| g * (vertex[(i, j)] - current[(i, j)]))
            .sum();
        last_gap = gap;
        if gap <= tolerance {
            return Ok(current);
        }
        let step = 2.0 / (k as f64 + 2.0);
        for i in 0..n {
            for j in 0..n {
                current[(i, j)] += step * (vertex[(i, j)] - current[(i, j)]);
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: FRANK_WOLFE_MAX_ITERS,
        gap: last_gap,
        best: Box::new(current),
    })
}

/// The full-delivery schedule for t >= n: slot k plays the k-th
/// right-circular shift of the identity permutation, slots n+1..t are
/// empty. The union covers every VOQ exactly once.
pub fn circular_shift_schedule(config: &SwitchConfig) -> Result<FrameSchedule> {
    let (n, t) = (config.n, config.t);
    if t < n {
        return Err(Error::FrameTooShort { n, t });
    }
    let mut matchings = Vec::with_capacity(t);
    for k in 0..n {
        // slot k+1 connects input i to output ((i - k) mod n)
        let perm: Vec<usize> = (0..n).map(|i| (i + n - k) % n).collect();
        matchings.push(Matching::from_permutation(&perm)?);
    }
    matchings.resize(t, Matching::empty(n));
    FrameSchedule::new(matchings, t)
}
