//! Combinatorial solvers shared by the schedulers and the capacity module:
//! max-weight matching, degree-constrained subgraph selection, constructive
//! edge coloring, the frame solver built from the latter two, the greedy
//! iterative-matching baseline, and subpermutation decomposition.

mod coloring;
mod constraint_matrix;
mod flow;

pub use coloring::{edge_color_bipartite, is_proper_coloring};
pub use constraint_matrix::{determinant, frame_scheduling_constraint_matrix, ConstraintMatrix};
pub use flow::Weight;

use crate::error::{Error, Result};
use crate::matrix::{masked_sum, validate_binary, BinMatrix, SquareMatrix};
use crate::switch::{FrameSchedule, Matching};

fn validate_nonnegative<W: Weight>(w: &SquareMatrix<W>) -> Result<()> {
    for (i, j, v) in w.iter_indexed() {
        if v.is_negative() {
            return Err(Error::NegativeEntry { i, j });
        }
    }
    Ok(())
}

/// Edge set with every input and output incident to at most `bound`
/// selected edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphSelection {
    entries: BinMatrix,
    bound: usize,
}

impl SubgraphSelection {
    pub fn entries(&self) -> &BinMatrix {
        &self.entries
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn weight<W: Weight>(&self, weights: &SquareMatrix<W>) -> W {
        masked_sum(weights, &self.entries)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter_indexed()
            .filter(|(_, _, &v)| v == 1)
            .map(|(i, j, _)| (i, j))
            .collect()
    }
}

/// Maximum-weight matching. Zero-weight edges never appear in the output,
/// so the result may be a partial matching.
pub fn max_weight_matching<W: Weight>(weights: &SquareMatrix<W>) -> Result<Matching> {
    validate_nonnegative(weights)?;
    let selection = flow::max_weight_selection(weights, 1)?;
    Matching::new(selection)
}

/// Maximum-weight edge set with every node incident to at most `bound`
/// edges. Exact: successive augmenting paths on an integral flow network.
pub fn max_weight_degree_constrained_subgraph<W: Weight>(
    weights: &SquareMatrix<W>,
    bound: usize,
) -> Result<SubgraphSelection> {
    validate_nonnegative(weights)?;
    let entries = flow::max_weight_selection(weights, bound)?;
    Ok(SubgraphSelection { entries, bound })
}

/// Maximum-weight frame schedule: `t` pairwise-disjoint matchings whose
/// covered positions maximize the weight sum. Solves the degree-constrained
/// selection first, then splits it into matchings by edge coloring and pads
/// with empty matchings up to `t` slots.
pub fn solve_t_disjoint_max_weight<W: Weight>(
    weights: &SquareMatrix<W>,
    t: usize,
) -> Result<FrameSchedule> {
    let n = weights.n();
    let selection = max_weight_degree_constrained_subgraph(weights, t)?;
    let edges = selection.edges();
    let colors = edge_color_bipartite(n, &edges, t)?;
    let mut matchings = color_classes(n, &edges, &colors)?;
    matchings.resize(t, Matching::empty(n));
    let schedule = FrameSchedule::new(matchings, t)?;
    debug_assert!(schedule.covered_weight(weights) == selection.weight(weights));
    Ok(schedule)
}

/// Baseline: strip a maximum-weight matching from the residual graph `t`
/// times. Pairwise disjoint by construction but possibly suboptimal as a
/// frame schedule. Ties inside each iteration resolve to the first maximum
/// found under row-major edge scanning.
pub fn greedy_iterative_mwm<W: Weight>(
    weights: &SquareMatrix<W>,
    t: usize,
) -> Result<FrameSchedule> {
    validate_nonnegative(weights)?;
    let mut residual = weights.clone();
    let mut matchings = Vec::with_capacity(t);
    for _ in 0..t {
        let m = max_weight_matching(&residual)?;
        for (i, j) in m.pairs() {
            residual[(i, j)] = W::zero();
        }
        matchings.push(m);
    }
    FrameSchedule::new(matchings, t)
}

/// Splits a 0/1 matrix with line sums at most `k` into exactly `k`
/// pairwise-disjoint matchings summing back to the input (all-zero
/// matchings appended as needed).
pub fn decompose_subpermutation(m: &BinMatrix, k: usize) -> Result<Vec<Matching>> {
    validate_binary(m)?;
    let n = m.n();
    for idx in 0..n {
        let row = usize::from(m.row_sum(idx));
        if row > k {
            return Err(Error::DegreeBound {
                kind: "row",
                index: idx,
                degree: row,
                bound: k,
            });
        }
        let col = usize::from(m.col_sum(idx));
        if col > k {
            return Err(Error::DegreeBound {
                kind: "column",
                index: idx,
                degree: col,
                bound: k,
            });
        }
    }
    let edges: Vec<(usize, usize)> = m
        .iter_indexed()
        .filter(|(_, _, &v)| v == 1)
        .map(|(i, j, _)| (i, j))
        .collect();
    let colors = edge_color_bipartite(n, &edges, k)?;
    let mut matchings = color_classes(n, &edges, &colors)?;
    matchings.resize(k, Matching::empty(n));
    Ok(matchings)
}

fn color_classes(
    n: usize,
    edges: &[(usize, usize)],
    colors: &[usize],
) -> Result<Vec<Matching>> {
    let used = colors.iter().copied().max().map_or(0, |c| c + 1);
    let mut per_class: Vec<Vec<(usize, usize)>> = vec![Vec::new(); used];
    for (eid, &c) in colors.iter().enumerate() {
        per_class[c].push(edges[eid]);
    }
    per_class
        .into_iter()
        .map(|pairs| Matching::from_pairs(n, &pairs))
        .collect()
}
