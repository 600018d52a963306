//! Packing two edge-disjoint spanning trees by matroid-partition augmentation.
//!
//! Two forests are grown edge by edge. An edge that fits in neither forest
//! starts a breadth-first search over the exchange graph: entering forest `i`
//! closes a cycle, and every edge on that cycle may be evicted and pushed into
//! the other forest. A shortest path ending in an edge that closes no cycle is
//! applied. Greedy insertion in any order reaches the rank of the union
//! matroid, so an edge rejected once never needs to be retried.

use std::collections::VecDeque;

use serde::Serialize;

use super::{Edge, Graph, UnionFind};

/// Two edge-disjoint spanning trees given as edge lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreePair {
    pub first: Vec<Edge>,
    pub second: Vec<Edge>,
}

impl TreePair {
    /// Checks disjointness, membership in `g`, and that both are spanning trees.
    pub fn verify(&self, g: &Graph) -> bool {
        let in_graph = |t: &[Edge]| t.iter().all(|&(u, v)| g.has_edge(u, v));
        let disjoint = self.first.iter().all(|e| !self.second.contains(e));
        disjoint
            && in_graph(&self.first)
            && in_graph(&self.second)
            && is_spanning_tree(g.n(), &self.first)
            && is_spanning_tree(g.n(), &self.second)
    }
}

/// `n - 1` edges forming no cycle on `n` vertices.
pub fn is_spanning_tree(n: usize, edges: &[Edge]) -> bool {
    if edges.len() + 1 != n.max(1) {
        return false;
    }
    let mut dsu = UnionFind::new(n);
    edges
        .iter()
        .all(|&(u, v)| u < n && v < n && dsu.union(u, v))
}

struct Packer<'a> {
    g: &'a Graph,
    active: Vec<bool>,
    owner: Vec<Option<usize>>,
    forest_adj: [Vec<Vec<(usize, usize)>>; 2],
    sizes: [usize; 2],
}

impl<'a> Packer<'a> {
    fn new(g: &'a Graph, active: Vec<bool>, owner: Vec<Option<usize>>) -> Self {
        let mut p = Self {
            g,
            active,
            owner,
            forest_adj: [vec![Vec::new(); g.n()], vec![Vec::new(); g.n()]],
            sizes: [0, 0],
        };
        p.rebuild();
        p
    }

    fn rebuild(&mut self) {
        for adj in self.forest_adj.iter_mut() {
            adj.iter_mut().for_each(Vec::clear);
        }
        self.sizes = [0, 0];
        for (id, &(u, v)) in self.g.edges().iter().enumerate() {
            if let Some(f) = self.owner[id] {
                self.forest_adj[f][u].push((v, id));
                self.forest_adj[f][v].push((u, id));
                self.sizes[f] += 1;
            }
        }
    }

    fn total(&self) -> usize {
        self.sizes[0] + self.sizes[1]
    }

    /// Edge ids on the forest path from `s` to `t`, or `None` if disconnected.
    fn forest_path(&self, f: usize, s: usize, t: usize) -> Option<Vec<usize>> {
        let n = self.g.n();
        let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &(y, e) in &self.forest_adj[f][x] {
                if !seen[y] {
                    seen[y] = true;
                    via[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        if !seen[t] {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = t;
        while let Some((prev, e)) = via[cur] {
            path.push(e);
            cur = prev;
        }
        Some(path)
    }

    /// Tries to add edge `start` to the union of the forests.
    fn augment(&mut self, start: usize) -> bool {
        let m = self.g.m();
        let mut label: Vec<Option<(usize, usize)>> = vec![None; m];
        let mut seen = vec![false; m];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let (u, v) = self.g.edges()[x];
            for f in 0..2 {
                if self.owner[x] == Some(f) {
                    continue;
                }
                match self.forest_path(f, u, v) {
                    None => {
                        self.apply(x, f, &label);
                        return true;
                    }
                    Some(cycle) => {
                        for y in cycle {
                            if !seen[y] {
                                seen[y] = true;
                                label[y] = Some((x, f));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        false
    }

    fn apply(&mut self, end: usize, forest: usize, label: &[Option<(usize, usize)>]) {
        let mut cur = end;
        let mut target = forest;
        loop {
            self.owner[cur] = Some(target);
            match label[cur] {
                Some((prev, f)) => {
                    cur = prev;
                    target = f;
                }
                None => break,
            }
        }
        self.rebuild();
    }

    /// Grows the forests greedily until both span or no edge can be added.
    fn saturate(&mut self) -> bool {
        let goal = 2 * self.g.n().saturating_sub(1);
        for id in 0..self.g.m() {
            if self.total() == goal {
                break;
            }
            if self.active[id] && self.owner[id].is_none() {
                self.augment(id);
            }
        }
        self.total() == goal
    }

    fn trees(&self) -> TreePair {
        let collect = |f| {
            self.g
                .edges()
                .iter()
                .enumerate()
                .filter(|&(id, _)| self.owner[id] == Some(f))
                .map(|(_, &e)| e)
                .collect()
        };
        TreePair {
            first: collect(0),
            second: collect(1),
        }
    }
}

/// Two edge-disjoint spanning trees of `g`, if they exist.
pub fn two_tree_packing(g: &Graph) -> Option<TreePair> {
    if g.m() < 2 * g.n().saturating_sub(1) {
        return None;
    }
    let mut packer = Packer::new(g, vec![true; g.m()], vec![None; g.m()]);
    packer.saturate().then(|| packer.trees())
}

pub fn has_two_edge_disjoint_spanning_trees(g: &Graph) -> bool {
    two_tree_packing(g).is_some()
}

/// Why a graph is not redundantly 2-tree-connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum RedundancyFailure {
    /// `g` itself has no two edge-disjoint spanning trees.
    NotTwoTreeConnected,
    /// Deleting this edge leaves no two edge-disjoint spanning trees.
    CriticalEdge { edge: Edge },
}

/// For every edge `e`, two edge-disjoint spanning trees of `g - e`.
///
/// Edges outside a packing of `g` reuse that packing. For an edge inside it,
/// the packing minus that edge is a warm start needing one augmentation.
pub fn redundancy_certificate(g: &Graph) -> Result<Vec<(Edge, TreePair)>, RedundancyFailure> {
    let base = two_tree_packing(g).ok_or(RedundancyFailure::NotTwoTreeConnected)?;
    let mut owner = vec![None; g.m()];
    for (f, tree) in [&base.first, &base.second].into_iter().enumerate() {
        for &(u, v) in tree {
            owner[g.edge_index(u, v).expect("tree edge in graph")] = Some(f);
        }
    }
    let mut out = Vec::with_capacity(g.m());
    for (id, &edge) in g.edges().iter().enumerate() {
        if owner[id].is_none() {
            out.push((edge, base.clone()));
            continue;
        }
        let mut active = vec![true; g.m()];
        active[id] = false;
        let mut start = owner.clone();
        start[id] = None;
        let mut packer = Packer::new(g, active, start);
        if !packer.saturate() {
            return Err(RedundancyFailure::CriticalEdge { edge });
        }
        out.push((edge, packer.trees()));
    }
    Ok(out)
}

/// True iff `g - e` has two edge-disjoint spanning trees for every edge `e`
/// (and `g` itself has them, which only matters for edgeless graphs).
pub fn is_redundantly_two_tree_connected(g: &Graph) -> bool {
    if g.n() > 1 && g.m() < 2 * g.n() - 1 {
        return false;
    }
    redundancy_certificate(g).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate::all_graphs;

    fn k5_minus() -> Graph {
        Graph::complete(5).without_edge(3, 4).unwrap()
    }

    fn b1() -> Graph {
        Graph::new(
            6,
            [
                (0, 1),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 4),
                (2, 5),
                (3, 4),
                (4, 5),
            ],
        )
        .unwrap()
    }

    /// Exhaustive oracle: some (n-1)-subset is a spanning tree whose complement
    /// contains another spanning tree.
    fn brute_force_two_trees(g: &Graph) -> bool {
        let n = g.n();
        let m = g.m();
        if n <= 1 {
            return true;
        }
        let edges = g.edges();
        (0u32..1 << m)
            .filter(|s| s.count_ones() as usize == n - 1)
            .any(|s| {
                let t1: Vec<Edge> = (0..m)
                    .filter(|i| s >> i & 1 == 1)
                    .map(|i| edges[i])
                    .collect();
                if !is_spanning_tree(n, &t1) {
                    return false;
                }
                let mut dsu = UnionFind::new(n);
                let joined = (0..m)
                    .filter(|i| s >> i & 1 == 0)
                    .filter(|&i| dsu.union(edges[i].0, edges[i].1))
                    .count();
                joined == n - 1
            })
    }

    #[test]
    fn k4_packs_two_trees() {
        // Oracle: exhaustive search over 3-edge subsets.
        assert!(brute_force_two_trees(&Graph::complete(4)));
        let pair = two_tree_packing(&Graph::complete(4)).unwrap();
        assert!(pair.verify(&Graph::complete(4)));
    }

    #[test]
    fn cycles_do_not_pack() {
        for n in 3..9 {
            assert!(!has_two_edge_disjoint_spanning_trees(&Graph::cycle(n)));
        }
    }

    #[test]
    fn base_graphs_are_redundant() {
        assert!(is_redundantly_two_tree_connected(&k5_minus()));
        assert!(is_redundantly_two_tree_connected(&b1()));
        for &(u, v) in k5_minus().edges() {
            let h = k5_minus().without_edge(u, v).unwrap();
            assert!(has_two_edge_disjoint_spanning_trees(&h));
        }
        assert!(!is_redundantly_two_tree_connected(&Graph::complete(4)));
        assert_eq!(
            redundancy_certificate(&Graph::complete(4)).unwrap_err(),
            RedundancyFailure::CriticalEdge { edge: (0, 1) }
        );
        assert_eq!(
            redundancy_certificate(&Graph::cycle(5)).unwrap_err(),
            RedundancyFailure::NotTwoTreeConnected
        );
    }

    #[test]
    fn certificates_replay() {
        let g = b1();
        let cert = redundancy_certificate(&g).unwrap();
        assert_eq!(cert.len(), g.m());
        for ((u, v), pair) in cert {
            assert!(pair.verify(&g.without_edge(u, v).unwrap()));
        }
    }

    #[test]
    fn packing_matches_exhaustive_search_on_small_graphs() {
        for n in 1..=6 {
            for g in all_graphs(n) {
                let fast = two_tree_packing(&g);
                assert_eq!(fast.is_some(), brute_force_two_trees(&g), "{g:?}");
                if let Some(pair) = fast {
                    assert!(pair.verify(&g));
                }
                // Edgeless graphs on n >= 2 vertices are excluded by requiring g itself to pack.
                let redundant = brute_force_two_trees(&g)
                    && g.edges()
                        .iter()
                        .all(|&(u, v)| brute_force_two_trees(&g.without_edge(u, v).unwrap()));
                assert_eq!(is_redundantly_two_tree_connected(&g), redundant, "{g:?}");
            }
        }
    }

    #[test]
    fn sparse_graphs_never_pack() {
        for n in 2..=6 {
            for g in all_graphs(n).into_iter().filter(|g| g.m() < 2 * n - 2) {
                assert!(!has_two_edge_disjoint_spanning_trees(&g));
            }
        }
    }
}
