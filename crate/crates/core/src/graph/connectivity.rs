use serde::Serialize;

use super::{Graph, UnionFind};

/// Block and bridge structure of a graph.
///
/// `a` counts 2-connected components (maximal 2-connected subgraphs with at
/// least three vertices); `b` counts 2-edge-connected components, i.e. the
/// connected components left after deleting every bridge, isolated vertices
/// included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityProfile {
    pub connected: bool,
    pub two_connected: bool,
    pub bridge_count: usize,
    pub a: usize,
    pub b: usize,
    pub cut_vertices: Vec<usize>,
}

struct LowLink<'a> {
    adj: &'a [Vec<(usize, usize)>],
    order: Vec<usize>,
    low: Vec<usize>,
    timer: usize,
    edge_stack: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    bridges: Vec<usize>,
    is_cut: Vec<bool>,
}

const UNVISITED: usize = usize::MAX;

impl LowLink<'_> {
    fn visit(&mut self, v: usize, parent_edge: Option<usize>) {
        self.order[v] = self.timer;
        self.low[v] = self.timer;
        self.timer += 1;
        let mut children = 0;
        for &(w, e) in self.adj[v].iter() {
            if Some(e) == parent_edge {
                continue;
            }
            if self.order[w] == UNVISITED {
                children += 1;
                self.edge_stack.push(e);
                self.visit(w, Some(e));
                self.low[v] = self.low[v].min(self.low[w]);
                if self.low[w] > self.order[v] {
                    self.bridges.push(e);
                }
                if self.low[w] >= self.order[v] {
                    let mut block = Vec::new();
                    while let Some(f) = self.edge_stack.pop() {
                        block.push(f);
                        if f == e {
                            break;
                        }
                    }
                    self.blocks.push(block);
                    if parent_edge.is_some() {
                        self.is_cut[v] = true;
                    }
                }
            } else if self.order[w] < self.order[v] {
                self.edge_stack.push(e);
                self.low[v] = self.low[v].min(self.order[w]);
            }
        }
        if parent_edge.is_none() && children > 1 {
            self.is_cut[v] = true;
        }
    }
}

/// Edge-id lists of the blocks, plus bridge ids and the cut-vertex mask.
fn decompose(g: &Graph) -> (Vec<Vec<usize>>, Vec<usize>, Vec<bool>) {
    let mut adj = vec![Vec::new(); g.n()];
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    let mut ll = LowLink {
        adj: &adj,
        order: vec![UNVISITED; g.n()],
        low: vec![0; g.n()],
        timer: 0,
        edge_stack: Vec::new(),
        blocks: Vec::new(),
        bridges: Vec::new(),
        is_cut: vec![false; g.n()],
    };
    for v in 0..g.n() {
        if ll.order[v] == UNVISITED {
            ll.visit(v, None);
        }
    }
    (ll.blocks, ll.bridges, ll.is_cut)
}

pub fn connectivity_profile(g: &Graph) -> ConnectivityProfile {
    let (blocks, bridges, is_cut) = decompose(g);
    let connected = g.n() > 0 && g.component_count() == 1;
    let cut_vertices: Vec<usize> = (0..g.n()).filter(|&v| is_cut[v]).collect();
    // A block with a single edge is a bridge; every other block has >= 3 vertices.
    let a = blocks.iter().filter(|b| b.len() >= 2).count();

    let mut is_bridge = vec![false; g.m()];
    for &e in &bridges {
        is_bridge[e] = true;
    }
    let mut dsu = UnionFind::new(g.n());
    let mut b = g.n();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if !is_bridge[id] && dsu.union(u, v) {
            b -= 1;
        }
    }

    ConnectivityProfile {
        connected,
        two_connected: g.n() >= 3 && connected && cut_vertices.is_empty(),
        bridge_count: bridges.len(),
        a,
        b,
        cut_vertices,
    }
}

/// Reference check: n >= 3, connected, and connected after deleting any vertex.
pub fn brute_force_two_connected(g: &Graph) -> bool {
    if g.n() < 3 || !g.is_connected() {
        return false;
    }
    (0..g.n()).all(|x| {
        let mut dsu = UnionFind::new(g.n());
        let mut comps = g.n() - 1;
        for &(u, v) in g.edges() {
            if u != x && v != x && dsu.union(u, v) {
                comps -= 1;
            }
        }
        comps == 1
    })
}
