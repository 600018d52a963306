//! Enumeration of small graphs up to isomorphism.
//!
//! Canonical forms are brute force over degree-respecting relabellings, which
//! is fine up to eight or nine vertices.

use std::collections::BTreeSet;

use super::Graph;

/// Largest vertex count whose pair bitmask fits in a `u64`.
pub const MAX_ENUMERATION_N: usize = 11;

fn pair_bit(i: usize, j: usize, n: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Minimum pair bitmask over all relabellings that list vertices by
/// non-increasing degree.
pub fn canonical_mask(g: &Graph) -> u64 {
    let n = g.n();
    assert!(
        n <= MAX_ENUMERATION_N,
        "canonical forms limited to {MAX_ENUMERATION_N} vertices"
    );
    let mut adj = vec![0u16; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let deg = g.degrees();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
    let slot_degree: Vec<usize> = by_degree.iter().map(|&v| deg[v]).collect();

    let mut best = u64::MAX;
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(
        n,
        &adj,
        &deg,
        &slot_degree,
        &mut order,
        &mut used,
        &mut best,
    );
    best
}

fn search(
    n: usize,
    adj: &[u16],
    deg: &[usize],
    slot_degree: &[usize],
    order: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut u64,
) {
    let pos = order.len();
    if pos == n {
        let mut mask = 0u64;
        for a in 0..n {
            for b in a + 1..n {
                if adj[order[a]] >> order[b] & 1 == 1 {
                    mask |= 1 << pair_bit(a, b, n);
                }
            }
        }
        *best = (*best).min(mask);
        return;
    }
    for v in 0..n {
        if !used[v] && deg[v] == slot_degree[pos] {
            used[v] = true;
            order.push(v);
            search(n, adj, deg, slot_degree, order, used, best);
            order.pop();
            used[v] = false;
        }
    }
}

fn from_mask(n: usize, mask: u64) -> Graph {
    let edges = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| mask >> pair_bit(i, j, n) & 1 == 1);
    Graph::new(n, edges).expect("mask encodes a simple graph")
}

/// One representative of every isomorphism class of graphs on `n` vertices,
/// ordered by edge count then canonical mask.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut masks: BTreeSet<u64> = BTreeSet::from([0]);
    for k in 1..=n {
        let mut next = BTreeSet::new();
        for &mask in &masks {
            let g = from_mask(k - 1, mask);
            for subset in 0u32..1 << (k - 1) {
                let edges = g.edges().iter().copied().chain(
                    (0..k - 1)
                        .filter(|i| subset >> i & 1 == 1)
                        .map(|i| (i, k - 1)),
                );
                let h = Graph::new(k, edges).expect("new vertex adds simple edges");
                next.insert(canonical_mask(&h));
            }
        }
        masks = next;
    }
    let mut graphs: Vec<Graph> = masks.into_iter().map(|m| from_mask(n, m)).collect();
    graphs.sort_by_key(|g| (g.m(), canonical_mask(g)));
    graphs
}

/// Non-isomorphic connected graphs on `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}
