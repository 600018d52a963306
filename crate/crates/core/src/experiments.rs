//! Hitting times of rigidity properties in the Erdős–Rényi random graph
//! process: edges of `K_n` are added one at a time in uniformly random order
//! and we record when the minimum degree reaches `d` and `d + 1`, when the
//! graph becomes generically locally rigid, and when it becomes generically
//! globally rigid.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::global::global_rigidity_1d;
use crate::graph::{connectivity_profile, is_redundantly_two_tree_connected, Edge, Graph};
use crate::rigidity::{derive_seed, generic_local_rigidity, GenericParams, PExponent};

const CONFIRM_STREAM: u64 = 0x636f_6e66;
const LOCAL_STREAM: u64 = 0x6c6f_6361;
const GLOBAL_STREAM: u64 = 0x676c_6f62;

/// How the global rigidity hitting time was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalMethod {
    /// 2-connectivity, exact on the line.
    TwoConnectivity,
    /// 2-connectivity plus redundant 2-tree-connectivity, exact in the plane.
    Combinatorial,
    /// 2-connectivity plus local rigidity one dimension up; an upper bound.
    SufficientUpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HittingTimes {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub m_min_degree_d: usize,
    pub m_min_degree_d_plus_1: usize,
    /// `None` when even `K_n` is not locally rigid.
    pub m_local_rigid: Option<usize>,
    pub m_global_rigid: Option<usize>,
    pub global_method: GlobalMethod,
    /// The random edge order; `edges[..m]` is the graph after `m` steps.
    #[serde(skip)]
    pub edges: Vec<Edge>,
}

impl HittingTimes {
    pub fn graph_at(&self, m: usize) -> Graph {
        Graph::new(self.n, self.edges[..m].iter().copied())
            .expect("prefix of a permutation of pairs")
    }
}

/// First `m` at which every vertex has degree at least `k`.
fn min_degree_time(n: usize, order: &[Edge], k: usize) -> usize {
    if k == 0 || n <= 1 {
        return 0;
    }
    let mut deg = vec![0usize; n];
    let mut below = n;
    for (m, &(u, v)) in order.iter().enumerate() {
        for w in [u, v] {
            deg[w] += 1;
            if deg[w] == k {
                below -= 1;
            }
        }
        if below == 0 {
            return m + 1;
        }
    }
    usize::MAX
}

/// Smallest `m >= start` with `test(G_m)`. A hit is confirmed by re-testing
/// `G_{m-1}` with a fresh seed, stepping back while that also passes.
fn first_hit(
    order: &[Edge],
    n: usize,
    start: usize,
    test: impl Fn(&Graph, u64) -> bool,
) -> Option<usize> {
    let graph = |m: usize| Graph::new(n, order[..m].iter().copied()).expect("simple prefix");
    let mut hit = (start.min(order.len())..=order.len()).find(|&m| test(&graph(m), m as u64))?;
    while hit > start && test(&graph(hit - 1), derive_seed(CONFIRM_STREAM, hit as u64)) {
        hit -= 1;
    }
    Some(hit)
}

/// Runs one random edge process on `n` vertices.
pub fn er_hitting_times(
    n: usize,
    d: usize,
    p: PExponent,
    seed: u64,
    params: &GenericParams,
) -> HittingTimes {
    assert!(d >= 1, "dimension must be positive");
    let mut order: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let m_d = min_degree_time(n, &order, d);
    let m_d1 = min_degree_time(n, &order, d + 1);
    let local = |dim: usize, stream: u64| {
        let base = params.reseeded(derive_seed(seed, stream));
        move |g: &Graph, s: u64| {
            generic_local_rigidity(g, dim, p, &base.reseeded(s).with_trials(1)).rigid
        }
    };

    let m_local_rigid = if m_d == usize::MAX {
        None
    } else {
        first_hit(&order, n, m_d, local(d, LOCAL_STREAM))
    };

    let (global_method, m_global_rigid) = if m_d1 == usize::MAX {
        (method_for(d), None)
    } else {
        match d {
            1 => (
                GlobalMethod::TwoConnectivity,
                first_hit(&order, n, m_d1, |g, _| global_rigidity_1d(g)),
            ),
            2 => (
                GlobalMethod::Combinatorial,
                first_hit(&order, n, m_d1, |g, _| {
                    connectivity_profile(g).two_connected && is_redundantly_two_tree_connected(g)
                }),
            ),
            _ => {
                let up = local(d + 1, GLOBAL_STREAM);
                (
                    GlobalMethod::SufficientUpperBound,
                    first_hit(&order, n, m_d1, move |g, s| {
                        connectivity_profile(g).two_connected && up(g, s)
                    }),
                )
            }
        }
    };

    HittingTimes {
        n,
        d,
        seed,
        m_min_degree_d: m_d,
        m_min_degree_d_plus_1: m_d1,
        m_local_rigid,
        m_global_rigid,
        global_method,
        edges: order,
    }
}

fn method_for(d: usize) -> GlobalMethod {
    match d {
        1 => GlobalMethod::TwoConnectivity,
        2 => GlobalMethod::Combinatorial,
        _ => GlobalMethod::SufficientUpperBound,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub n: usize,
    pub trials: usize,
    /// Fraction of runs with `M_LR = M_d`.
    pub freq_local_at_min_degree: f64,
    /// Fraction of runs with `M_GR = M_{d+1}`.
    pub freq_global_at_min_degree: f64,
    pub mean_gap_local: f64,
    pub mean_gap_global: f64,
    pub local_unreached: usize,
    pub global_unreached: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub d: usize,
    pub p: PExponent,
    pub seed: u64,
    pub global_method: GlobalMethod,
    pub rows: Vec<ThresholdRow>,
}

fn summarize(n: usize, runs: &[HittingTimes]) -> ThresholdRow {
    let stats = |hit: fn(&HittingTimes) -> Option<usize>, base: fn(&HittingTimes) -> usize| {
        let reached: Vec<usize> = runs
            .iter()
            .filter_map(|h| hit(h).map(|m| m - base(h)))
            .collect();
        let at = reached.iter().filter(|&&g| g == 0).count() as f64 / runs.len().max(1) as f64;
        let mean = if reached.is_empty() {
            0.0
        } else {
            reached.iter().sum::<usize>() as f64 / reached.len() as f64
        };
        (at, mean, runs.len() - reached.len())
    };
    let (fl, gl, ul) = stats(|h| h.m_local_rigid, |h| h.m_min_degree_d);
    let (fg, gg, ug) = stats(|h| h.m_global_rigid, |h| h.m_min_degree_d_plus_1);
    ThresholdRow {
        n,
        trials: runs.len(),
        freq_local_at_min_degree: fl,
        freq_global_at_min_degree: fg,
        mean_gap_local: gl,
        mean_gap_global: gg,
        local_unreached: ul,
        global_unreached: ug,
    }
}

/// Runs `trials` processes for every `n` in `n_list` in parallel. Each run
/// uses a seed derived from `(seed, n, trial)`, so the report does not depend
/// on scheduling.
pub fn threshold_report(
    n_list: &[usize],
    d: usize,
    p: PExponent,
    trials: usize,
    seed: u64,
    params: &GenericParams,
) -> ThresholdReport {
    let rows = n_list
        .iter()
        .map(|&n| {
            let runs: Vec<HittingTimes> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    er_hitting_times(
                        n,
                        d,
                        p,
                        derive_seed(derive_seed(seed, n as u64), t as u64),
                        params,
                    )
                })
                .collect();
            summarize(n, &runs)
        })
        .collect();
    ThresholdReport {
        d,
        p,
        seed,
        global_method: method_for(d),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> PExponent {
        PExponent::new(4).unwrap()
    }

    #[test]
    fn min_degree_times() {
        let order = [(0, 1), (1, 2), (0, 2), (2, 3), (1, 3)];
        assert_eq!(min_degree_time(4, &order, 1), 4);
        assert_eq!(min_degree_time(4, &order, 2), 5);
        assert_eq!(min_degree_time(4, &order, 3), usize::MAX);
    }

    #[test]
    fn line_hitting_times_match_connectivity() {
        let prm = GenericParams::new(5);
        for s in 0..20 {
            let h = er_hitting_times(12, 1, p4(), s, &prm);
            let connected_at = (0..=h.edges.len())
                .find(|&m| h.graph_at(m).is_connected())
                .unwrap();
            assert_eq!(h.m_local_rigid, Some(connected_at));
            let two_conn = (0..=h.edges.len())
                .find(|&m| global_rigidity_1d(&h.graph_at(m)))
                .unwrap();
            assert_eq!(h.m_global_rigid, Some(two_conn));
        }
    }

    #[test]
    fn plane_hitting_times_respect_degree_bounds() {
        let prm = GenericParams::new(6);
        for s in 0..10 {
            let h = er_hitting_times(14, 2, p4(), s, &prm);
            let lr = h.m_local_rigid.unwrap();
            let gr = h.m_global_rigid.unwrap();
            assert!(h.m_min_degree_d <= lr && h.m_min_degree_d_plus_1 <= gr && lr <= gr);
            assert!(!generic_local_rigidity(&h.graph_at(lr - 1), 2, p4(), &prm).rigid);
        }
    }

    #[test]
    fn small_complete_graphs_may_never_become_rigid() {
        // K4 has 6 < 3 * 4 - 3 edges, so it is never rigid in three dimensions.
        let h = er_hitting_times(4, 3, p4(), 1, &GenericParams::new(1));
        assert_eq!(h.m_local_rigid, None);
        assert_eq!(h.m_min_degree_d, 6);
    }

    #[test]
    fn threshold_report_is_deterministic() {
        let prm = GenericParams::new(3);
        let a = threshold_report(&[8, 10], 2, p4(), 6, 11, &prm);
        let b = threshold_report(&[8, 10], 2, p4(), 6, 11, &prm);
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2);
        assert!(a.rows.iter().all(|r| r.trials == 6));
    }
}
