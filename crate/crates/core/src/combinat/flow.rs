//! Exact max-weight degree-bounded selection on the complete bipartite
//! graph, by successive max-weight augmenting paths on the unit-capacity
//! flow network (source -> inputs -> outputs -> sink).
//!
//! Each augmentation pushes one unit along a maximum-weight residual path
//! found by Bellman-Ford; augmentation stops as soon as the best path
//! weight is no longer strictly positive. Integral capacities make the
//! final flow integral, and the concavity of weight in flow value makes it
//! optimal over all degree-bounded selections.

use num_traits::Signed;

use crate::error::Result;
use crate::matrix::{BinMatrix, SquareMatrix};

/// Scalar weights the exact solvers accept: ordered signed ring elements
/// (`i64`, `f64`, `Ratio<i64>`, ...). Comparisons are exact on the given
/// values; no tolerance is applied inside the solver.
pub trait Weight: Clone + PartialOrd + Signed {}
impl<T: Clone + PartialOrd + Signed> Weight for T {}

struct Arc<W> {
    from: usize,
    to: usize,
    residual: u32,
    weight: W,
}

/// Returns the 0/1 selection maximizing total weight subject to each row
/// and column containing at most `bound` selected entries. Entries with
/// non-positive weight are never candidates.
pub(crate) fn max_weight_selection<W: Weight>(
    weights: &SquareMatrix<W>,
    bound: usize,
) -> Result<BinMatrix> {
    let n = weights.n();
    let source = 0;
    let sink = 2 * n + 1;
    let nodes = 2 * n + 2;
    let cap = bound.min(n) as u32;

    let mut arcs: Vec<Arc<W>> = Vec::new();
    let push = |arcs: &mut Vec<Arc<W>>, from: usize, to: usize, residual: u32, weight: W| {
        arcs.push(Arc {
            from,
            to,
            residual,
            weight: weight.clone(),
        });
        arcs.push(Arc {
            from: to,
            to: from,
            residual: 0,
            weight: -weight,
        });
    };

    for i in 0..n {
        push(&mut arcs, source, 1 + i, cap, W::zero());
    }
    // arc index of the (i,j) edge, for extraction afterwards
    let mut edge_arc = SquareMatrix::filled(n, usize::MAX);
    for i in 0..n {
        for j in 0..n {
            let w = &weights[(i, j)];
            if w.is_positive() {
                edge_arc[(i, j)] = arcs.len();
                push(&mut arcs, 1 + i, 1 + n + j, 1, w.clone());
            }
        }
    }
    for j in 0..n {
        push(&mut arcs, 1 + n + j, sink, cap, W::zero());
    }

    loop {
        // Bellman-Ford longest path over residual arcs. The residual graph
        // of a weight-maximal flow of its value has no positive cycle, so
        // `nodes - 1` passes reach a fixed point.
        let mut dist: Vec<Option<W>> = vec![None; nodes];
        let mut parent: Vec<usize> = vec![usize::MAX; nodes];
        dist[source] = Some(W::zero());
        for _ in 0..nodes - 1 {
            let mut improved = false;
            for (idx, arc) in arcs.iter().enumerate() {
                if arc.residual == 0 {
                    continue;
                }
                let Some(df) = dist[arc.from].clone() else {
                    continue;
                };
                let candidate = df + arc.weight.clone();
                let better = match &dist[arc.to] {
                    None => true,
                    Some(dt) => candidate > *dt,
                };
                if better {
                    dist[arc.to] = Some(candidate);
                    parent[arc.to] = idx;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }

        match &dist[sink] {
            Some(d) if d.is_positive() => {}
            _ => break,
        }

        // Walk back to the source, collect the path, augment by its
        // bottleneck (1 on any path through an edge arc).
        let mut path = Vec::new();
        let mut node = sink;
        let mut bottleneck = u32::MAX;
        while node != source {
            let idx = parent[node];
            debug_assert!(idx != usize::MAX && path.len() <= arcs.len());
            path.push(idx);
            bottleneck = bottleneck.min(arcs[idx].residual);
            node = arcs[idx].from;
        }
        for idx in path {
            arcs[idx].residual -= bottleneck;
            arcs[idx ^ 1].residual += bottleneck;
        }
    }

    let selection = BinMatrix::from_fn(n, |i, j| {
        let idx = edge_arc[(i, j)];
        u8::from(idx != usize::MAX && arcs[idx].residual == 0)
    });
    Ok(selection)
}
