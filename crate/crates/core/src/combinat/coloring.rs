//! Proper edge coloring of bipartite multigraphs with Delta colors, by the
//! classic alternating-path recoloring argument. O(V*E), deterministic in
//! the input edge order.

use crate::error::{Error, Result};

/// Colors every edge of the bipartite multigraph (left nodes `0..n`, right
/// nodes `0..n`) so that no two edges sharing an endpoint get the same
/// color. Uses at most `max(degree)` colors, 0-based; errors if the maximum
/// degree exceeds `max_colors`.
pub fn edge_color_bipartite(
    n: usize,
    edges: &[(usize, usize)],
    max_colors: usize,
) -> Result<Vec<usize>> {
    let mut left_deg = vec![0usize; n];
    let mut right_deg = vec![0usize; n];
    for &(u, v) in edges {
        assert!(u < n && v < n, "edge endpoint out of range");
        left_deg[u] += 1;
        right_deg[v] += 1;
    }
    let delta = left_deg
        .iter()
        .chain(right_deg.iter())
        .copied()
        .max()
        .unwrap_or(0);
    if delta > max_colors {
        let (kind, index) = left_deg
            .iter()
            .enumerate()
            .find(|(_, &d)| d == delta)
            .map(|(i, _)| ("input", i))
            .unwrap_or_else(|| {
                let j = right_deg.iter().position(|&d| d == delta).unwrap();
                ("output", j)
            });
        return Err(Error::DegreeBound {
            kind,
            index,
            degree: delta,
            bound: max_colors,
        });
    }

    // color slot tables: which edge (if any) uses color c at each node
    let mut left: Vec<Vec<Option<usize>>> = vec![vec![None; delta]; n];
    let mut right: Vec<Vec<Option<usize>>> = vec![vec![None; delta]; n];
    let mut color = vec![usize::MAX; edges.len()];

    for (e, &(u, v)) in edges.iter().enumerate() {
        let cu = (0..delta).find(|&c| left[u][c].is_none()).expect("degree");
        let cv = (0..delta).find(|&c| right[v][c].is_none()).expect("degree");
        if cu != cv {
            // Free cu at v: flip the path that alternates colors cu/cv
            // starting from v. The path cannot reach u (u has no cu edge),
            // so cu stays free there.
            let mut path = Vec::new();
            let mut node = v;
            let mut on_right = true;
            let mut want = cu;
            loop {
                let slot = if on_right {
                    right[node][want]
                } else {
                    left[node][want]
                };
                let Some(eid) = slot else { break };
                path.push(eid);
                let (eu, ev) = edges[eid];
                node = if on_right { eu } else { ev };
                on_right = !on_right;
                want = if want == cu { cv } else { cu };
            }
            for &eid in &path {
                let (eu, ev) = edges[eid];
                left[eu][color[eid]] = None;
                right[ev][color[eid]] = None;
            }
            for &eid in &path {
                let (eu, ev) = edges[eid];
                let swapped = if color[eid] == cu { cv } else { cu };
                color[eid] = swapped;
                left[eu][swapped] = Some(eid);
                right[ev][swapped] = Some(eid);
            }
        }
        color[e] = cu;
        left[u][cu] = Some(e);
        right[v][cu] = Some(e);
    }
    Ok(color)
}

/// Checks a coloring for endpoint conflicts by scanning all edge pairs.
pub fn is_proper_coloring(edges: &[(usize, usize)], colors: &[usize]) -> bool {
    if edges.len() != colors.len() {
        return false;
    }
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            if colors[a] == colors[b] && (edges[a].0 == edges[b].0 || edges[a].1 == edges[b].1) {
                return false;
            }
        }
    }
    true
}
