//! Graph operations that preserve generic global rigidity in the lp-plane,
//! the explicit base frameworks they start from, and the transfer of
//! frameworks and stresses along K4-minus-extensions and subdivisions.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, Rational, Rationals};
use crate::graph::{
    connectivity_profile, is_redundantly_two_tree_connected, Edge, Graph, GraphError,
};
use crate::linalg::{self, LinalgError, Matrix};
use crate::rigidity::{
    coordinated_laplacian_ranks, coordinated_stress, derive_seed, is_self_stress, rigidity_matrix,
    weighted_laplacian, Configuration, PExponent, RigidityError, Stress,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid vertex split: {0}")]
    InvalidSplit(String),
    #[error("stress vanishes on edge {0}-{1}")]
    ZeroStressOnEdge(usize, usize),
    #[error("framework must be {expected}-dimensional, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("endpoints of {0}-{1} share a coordinate")]
    DegenerateEdge(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

/// Adds vertices `n` and `n + 1`, joined to each other and to both ends of
/// `e`, and deletes `e`.
pub fn k4_minus_extension(g: &Graph, e: Edge) -> Result<Graph, ConstructionError> {
    let h = g.without_edge(e.0, e.1)?;
    let (u1, u2) = (g.n(), g.n() + 1);
    let edges =
        h.edges()
            .iter()
            .copied()
            .chain([(e.0, u1), (e.1, u1), (e.0, u2), (e.1, u2), (u1, u2)]);
    Ok(Graph::new(g.n() + 2, edges)?)
}

/// Splits `v` into `v` (keeping the neighbours outside `n0`) and a new vertex
/// `n` adjacent to `n0`, to `v` and to `x`.
pub fn generalized_vertex_split(
    g: &Graph,
    v: usize,
    n0: &[usize],
    x: usize,
) -> Result<Graph, ConstructionError> {
    let invalid = |msg: String| Err(ConstructionError::InvalidSplit(msg));
    if v >= g.n() {
        return invalid(format!("vertex {v} out of range"));
    }
    let nbrs = g.neighbors(v);
    if let Some(u) = n0.iter().find(|u| !nbrs.contains(u)) {
        return invalid(format!("{u} is not a neighbour of {v}"));
    }
    if n0.contains(&x) {
        return invalid(format!("{x} is already in the moved neighbourhood"));
    }
    if x == v || x >= g.n() {
        return invalid(format!("bad extra vertex {x}"));
    }
    let v0 = g.n();
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| !((a == v && n0.contains(&b)) || (b == v && n0.contains(&a))))
        .chain(n0.iter().map(|&u| (u, v0)))
        .chain([(v, v0), (x, v0)]);
    Ok(Graph::new(g.n() + 1, edges)?)
}

/// Replaces `e` by a path through the new vertex `n`.
pub fn subdivide_edge(g: &Graph, e: Edge) -> Result<Graph, ConstructionError> {
    let h = g.without_edge(e.0, e.1)?;
    let w = g.n();
    Ok(Graph::new(
        g.n() + 1,
        h.edges().iter().copied().chain([(e.0, w), (e.1, w)]),
    )?)
}

/// A graph with a configuration and a self-stress at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Framework<E> {
    pub graph: Graph,
    pub config: Configuration<E>,
    pub stress: Stress<E>,
    pub p: PExponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseName {
    K5Minus,
    B1,
    K3Line,
}

impl BaseName {
    pub const ALL: [BaseName; 3] = [BaseName::K5Minus, BaseName::B1, BaseName::K3Line];

    pub fn graph(self) -> Graph {
        match self {
            BaseName::K5Minus => k5_minus(),
            BaseName::B1 => b1(),
            BaseName::K3Line => Graph::complete(3),
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            BaseName::K3Line => 1,
            _ => 2,
        }
    }

    /// Rank of the rigidity matrix and of each coordinated Laplacian.
    pub fn expected_ranks(self) -> (usize, Vec<usize>) {
        match self {
            BaseName::K5Minus => (8, vec![3, 3]),
            BaseName::B1 => (10, vec![4, 4]),
            BaseName::K3Line => (2, vec![1]),
        }
    }
}

/// K5 minus the edge 3-4.
pub fn k5_minus() -> Graph {
    Graph::complete(5)
        .without_edge(3, 4)
        .expect("3-4 is an edge of K5")
}

/// The six-vertex base graph B1.
pub fn b1() -> Graph {
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
    .expect("valid graph")
}

fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        q(2).pow(e as i32)
    } else {
        Rational::new(BigInt::from(1), BigInt::from(2).pow((-e) as u32))
    }
}

fn points(pts: &[&[i64]]) -> Configuration<Rational> {
    let d = pts[0].len();
    Configuration::from_points(
        d,
        pts.iter()
            .map(|p| p.iter().map(|&x| q(x)).collect())
            .collect(),
    )
    .expect("rectangular point list")
}

/// The explicit base framework with its closed-form stress over the rationals.
pub fn base_framework(name: BaseName, p: PExponent) -> Framework<Rational> {
    let pe = p.value() as i64;
    let (config, stress) = match name {
        BaseName::K5Minus => {
            let big = pow2(pe) + q(2);
            let small = q(2) - pow2(2 - pe);
            (
                points(&[&[0, 0], &[1, 0], &[0, 1], &[2, 1], &[1, 2]]),
                vec![
                    big.clone(),
                    big,
                    q(-2),
                    q(-2),
                    -pow2(pe),
                    q(2),
                    small.clone(),
                    small,
                    q(2),
                ],
            )
        }
        BaseName::B1 => {
            let a = pow2(pe - 1) - q(1);
            (
                points(&[&[0, 0], &[1, 0], &[2, 0], &[1, 1], &[2, 1], &[3, 1]]),
                vec![
                    a.clone(),
                    q(1),
                    q(-1),
                    q(-1),
                    q(-1),
                    q(0),
                    q(1),
                    q(1),
                    q(-1),
                    q(1),
                    -a,
                ],
            )
        }
        BaseName::K3Line => {
            let x = [0i64, 1, 3];
            let w = |a: i64, b: i64| q(a - b).pow(1 - pe as i32);
            (
                points(&[&[x[0]], &[x[1]], &[x[2]]]),
                vec![w(x[0], x[1]), w(x[2], x[0]), w(x[1], x[2])],
            )
        }
    };
    Framework {
        graph: name.graph(),
        config,
        stress: Stress(stress),
        p,
    }
}

/// Ranks observed on a framework: `J`, the stress space, and each `L_{omega^k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameworkRanks {
    pub rigidity_rank: usize,
    pub stress_dim: usize,
    pub laplacian_ranks: Vec<usize>,
    pub is_self_stress: bool,
}

pub fn framework_ranks<F: Field>(
    field: &F,
    fw: &Framework<F::Elem>,
) -> Result<FrameworkRanks, ConstructionError> {
    let j = rigidity_matrix(field, &fw.graph, &fw.config, fw.p)?;
    let rigidity_rank = linalg::rank(field, &j);
    Ok(FrameworkRanks {
        rigidity_rank,
        stress_dim: fw.graph.m() - rigidity_rank,
        laplacian_ranks: coordinated_laplacian_ranks(
            field, &fw.graph, &fw.stress, &fw.config, fw.p,
        )?,
        is_self_stress: is_self_stress(field, &fw.graph, &fw.config, fw.p, fw.stress.values())?,
    })
}

/// Checks a base framework against its expected ranks.
pub fn validate_base(
    name: BaseName,
    fw: &Framework<Rational>,
) -> Result<FrameworkRanks, ConstructionError> {
    let ranks = framework_ranks(&Rationals, fw)?;
    let (rj, rl) = name.expected_ranks();
    if !ranks.is_self_stress || ranks.rigidity_rank != rj || ranks.laplacian_ranks != rl {
        return Err(ConstructionError::Postcondition(format!(
            "{name:?}: got {ranks:?}, expected rank J {rj} and Laplacian ranks {rl:?}"
        )));
    }
    Ok(ranks)
}

fn edge_stress<F: Field>(
    field: &F,
    fw: &Framework<F::Elem>,
    e: Edge,
) -> Result<F::Elem, ConstructionError> {
    let idx = fw
        .graph
        .edge_index(e.0, e.1)
        .ok_or(GraphError::EdgeNotFound(e.0, e.1))?;
    let w = fw.stress.values()[idx].clone();
    if field.is_zero(&w) {
        return Err(ConstructionError::ZeroStressOnEdge(e.0, e.1));
    }
    Ok(w)
}

fn transferred_stress<E: Clone>(
    parent: &Framework<E>,
    child: &Graph,
    new_edge: impl Fn(Edge) -> Option<E>,
) -> Stress<E> {
    Stress(
        child
            .edges()
            .iter()
            .map(|&(a, b)| {
                new_edge((a, b)).unwrap_or_else(|| {
                    let idx = parent.graph.edge_index(a, b).expect("old edge survives");
                    parent.stress.values()[idx].clone()
                })
            })
            .collect(),
    )
}

/// The Laplacian of `child` with its new vertices (`parent_n..`) eliminated
/// by a Schur complement. For a transferred framework this is the parent
/// Laplacian.
pub fn schur_reduce_new_vertices<F: Field>(
    field: &F,
    l: &Matrix<F::Elem>,
    parent_n: usize,
) -> Result<Matrix<F::Elem>, ConstructionError> {
    let n = l.rows();
    let order: Vec<usize> = (parent_n..n).chain(0..parent_n).collect();
    Ok(linalg::schur_complement(
        field,
        &l.permute_symmetric(&order),
        n - parent_n,
    )?)
}

fn check_postconditions<F: Field>(
    field: &F,
    parent: &Framework<F::Elem>,
    child: &Framework<F::Elem>,
) -> Result<(), ConstructionError> {
    let (n, d) = (child.graph.n(), child.config.d());
    let ranks = framework_ranks(field, child)?;
    if !ranks.is_self_stress {
        return Err(ConstructionError::Postcondition(
            "transferred vector is not a self-stress".into(),
        ));
    }
    if ranks.rigidity_rank != d * n - d {
        return Err(ConstructionError::Postcondition(format!(
            "rank J = {}, expected {}",
            ranks.rigidity_rank,
            d * n - d
        )));
    }
    if ranks.laplacian_ranks.iter().any(|&r| r != n - 2) {
        return Err(ConstructionError::Postcondition(format!(
            "Laplacian ranks {:?}, expected {}",
            ranks.laplacian_ranks,
            n - 2
        )));
    }
    for k in 0..d {
        let lp = laplacian(field, parent, k)?;
        let lc = laplacian(field, child, k)?;
        if schur_reduce_new_vertices(field, &lc, parent.graph.n())? != lp {
            return Err(ConstructionError::Postcondition(format!(
                "Schur complement on axis {k} differs from the parent Laplacian"
            )));
        }
    }
    Ok(())
}

fn laplacian<F: Field>(
    field: &F,
    fw: &Framework<F::Elem>,
    k: usize,
) -> Result<Matrix<F::Elem>, ConstructionError> {
    let wk = coordinated_stress(field, &fw.graph, &fw.stress, &fw.config, k, fw.p)?;
    Ok(weighted_laplacian(field, &fw.graph, &wk.values)?)
}

fn require_rigid<F: Field>(field: &F, fw: &Framework<F::Elem>) -> Result<(), ConstructionError> {
    let (n, d) = (fw.graph.n(), fw.config.d());
    let r = linalg::rank(field, &rigidity_matrix(field, &fw.graph, &fw.config, fw.p)?);
    if r != d * n - d {
        return Err(ConstructionError::Precondition(format!(
            "framework is not infinitesimally rigid (rank {r}, need {})",
            d * n - d
        )));
    }
    if !is_self_stress(field, &fw.graph, &fw.config, fw.p, fw.stress.values())? {
        return Err(ConstructionError::Precondition(
            "stress is not in equilibrium".into(),
        ));
    }
    Ok(())
}

/// Extends a planar framework along a K4-minus-extension on `e = (a, b)`.
/// The new vertex `n` sits at `(x_a, y_b)` and `n + 1` at `(x_b, y_a)`; the
/// four new edges at `a`, `b` carry `omega(e)` and the edge between the new
/// vertices carries `-omega(e)`. Postconditions (equilibrium, rank of `J`,
/// rank `n - 2` Laplacians and the Schur complement identity) are checked.
pub fn k4_extension_framework_transfer<F: Field>(
    field: &F,
    fw: &Framework<F::Elem>,
    e: Edge,
) -> Result<Framework<F::Elem>, ConstructionError> {
    if fw.config.d() != 2 {
        return Err(ConstructionError::WrongDimension {
            expected: 2,
            got: fw.config.d(),
        });
    }
    let (a, b) = (e.0.min(e.1), e.0.max(e.1));
    let w = edge_stress(field, fw, (a, b))?;
    let c = &fw.config;
    if c.coord(a, 0) == c.coord(b, 0) || c.coord(a, 1) == c.coord(b, 1) {
        return Err(ConstructionError::DegenerateEdge(a, b));
    }
    require_rigid(field, fw)?;
    let graph = k4_minus_extension(&fw.graph, (a, b))?;
    let mut config = fw.config.clone();
    let u1 = config.push_point(vec![c.coord(a, 0).clone(), c.coord(b, 1).clone()]);
    let u2 = config.push_point(vec![c.coord(b, 0).clone(), c.coord(a, 1).clone()]);
    let stress = transferred_stress(fw, &graph, |(s, t)| {
        if (s, t) == (u1, u2) {
            Some(field.neg(&w))
        } else if t >= u1 {
            Some(w.clone())
        } else {
            None
        }
    });
    let child = Framework {
        graph,
        config,
        stress,
        p: fw.p,
    };
    check_postconditions(field, fw, &child)?;
    Ok(child)
}

/// Subdivides `e = (a, b)` of a framework on the line. The new vertex `n`
/// sits at the midpoint and both new edges carry `2^(p-1) omega(e)`.
pub fn subdivision_framework_transfer<F: Field>(
    field: &F,
    fw: &Framework<F::Elem>,
    e: Edge,
) -> Result<Framework<F::Elem>, ConstructionError> {
    if fw.config.d() != 1 {
        return Err(ConstructionError::WrongDimension {
            expected: 1,
            got: fw.config.d(),
        });
    }
    let (a, b) = (e.0.min(e.1), e.0.max(e.1));
    let w = edge_stress(field, fw, (a, b))?;
    require_rigid(field, fw)?;
    let c = &fw.config;
    let two = field.from_i64(2);
    let mid = field
        .div(&field.add(c.coord(a, 0), c.coord(b, 0)), &two)
        .expect("characteristic is not 2");
    let graph = subdivide_edge(&fw.graph, (a, b))?;
    let mut config = fw.config.clone();
    let v0 = config.push_point(vec![mid]);
    let scaled = field.mul(&field.pow(&two, fw.p.value() - 1), &w);
    let stress = transferred_stress(fw, &graph, |(_, t)| (t == v0).then(|| scaled.clone()));
    let child = Framework {
        graph,
        config,
        stress,
        p: fw.p,
    };
    check_postconditions(field, fw, &child)?;
    Ok(child)
}

/// One step of a construction sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    K4Extension { edge: Edge },
    VertexSplit { v: usize, n0: Vec<usize>, x: usize },
    EdgeAddition { edge: Edge },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusGraph {
    pub base: BaseName,
    pub trace: Vec<Step>,
    pub graph: Graph,
}

impl CorpusGraph {
    /// Rebuilds the graph from its base and trace.
    pub fn replay(&self) -> Result<Graph, ConstructionError> {
        self.trace
            .iter()
            .try_fold(self.base.graph(), |g, step| apply(&g, step))
    }
}

pub fn apply(g: &Graph, step: &Step) -> Result<Graph, ConstructionError> {
    match step {
        Step::K4Extension { edge } => k4_minus_extension(g, *edge),
        Step::VertexSplit { v, n0, x } => generalized_vertex_split(g, *v, n0, *x),
        Step::EdgeAddition { edge } => Ok(g.with_edge(edge.0, edge.1)?),
    }
}

fn random_step<R: Rng>(g: &Graph, max_n: usize, rng: &mut R) -> Option<Step> {
    let n = g.n();
    let roll: f64 = rng.gen();
    if roll < 0.2 && g.m() < n * (n - 1) / 2 {
        let missing: Vec<Edge> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        return missing.choose(rng).map(|&edge| Step::EdgeAddition { edge });
    }
    if roll < 0.55 && n + 2 <= max_n {
        return g
            .edges()
            .choose(rng)
            .map(|&edge| Step::K4Extension { edge });
    }
    if n < max_n {
        let v = rng.gen_range(0..n);
        let n0: Vec<usize> = g
            .neighbors(v)
            .into_iter()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let others: Vec<usize> = (0..n).filter(|&x| x != v && !n0.contains(&x)).collect();
        let x = *others.choose(rng)?;
        return Some(Step::VertexSplit { v, n0, x });
    }
    None
}

fn is_member(g: &Graph) -> bool {
    connectivity_profile(g).two_connected && is_redundantly_two_tree_connected(g)
}

/// `count` graphs built from K5-minus and B1 by K4-minus-extensions,
/// generalized vertex splits and edge additions, keeping only steps whose
/// result is 2-connected and redundantly 2-tree-connected. The first two
/// entries are the bases themselves.
pub fn generate_corpus(count: usize, max_n: usize, seed: u64) -> Vec<CorpusGraph> {
    let bases = [BaseName::K5Minus, BaseName::B1];
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        if i < bases.len() {
            out.push(CorpusGraph {
                base: bases[i],
                trace: Vec::new(),
                graph: bases[i].graph(),
            });
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
        let base = bases[rng.gen_range(0..bases.len())];
        let mut g = base.graph();
        let target = rng.gen_range(g.n()..=max_n.max(g.n()));
        let mut trace = Vec::new();
        let mut attempts = 0;
        while attempts < 400 && (g.n() < target || trace.is_empty()) {
            attempts += 1;
            let Some(step) = random_step(&g, max_n, &mut rng) else {
                continue;
            };
            if let Ok(h) = apply(&g, &step) {
                if is_member(&h) {
                    g = h;
                    trace.push(step);
                }
            }
        }
        out.push(CorpusGraph {
            base,
            trace,
            graph: g,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::rigidity::stress_basis;

    fn p(v: u32) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn base_frameworks_validate_for_several_exponents() {
        for pe in [4, 6, 8] {
            for name in BaseName::ALL {
                let fw = base_framework(name, p(pe));
                validate_base(name, &fw).unwrap();
            }
        }
    }

    #[test]
    fn base_stresses_at_p4() {
        let k = base_framework(BaseName::K5Minus, p(4));
        let expect: Vec<Rational> = [18, 18, -2, -2, -16, 2, 7, 7, 2]
            .iter()
            .zip([1, 1, 1, 1, 1, 1, 4, 4, 1])
            .map(|(&a, b)| Rational::new(BigInt::from(a), BigInt::from(b)))
            .collect();
        assert_eq!(k.stress.values(), &expect[..]);
        let b = base_framework(BaseName::B1, p(4));
        let expect: Vec<Rational> = [7, 1, -1, -1, -1, 0, 1, 1, -1, 1, -7]
            .iter()
            .map(|&v| q(v))
            .collect();
        assert_eq!(b.stress.values(), &expect[..]);
    }

    #[test]
    fn b1_second_axis_laplacian_is_the_signed_hexagon() {
        let b = base_framework(BaseName::B1, p(4));
        let l = laplacian(&Rationals, &b, 1).unwrap();
        let expect = linalg::from_i64_rows(
            &Rationals,
            &[
                vec![0, 0, 0, -1, 1, 0],
                vec![0, 0, 0, 1, 0, -1],
                vec![0, 0, 0, 0, -1, 1],
                vec![-1, 1, 0, 0, 0, 0],
                vec![1, 0, -1, 0, 0, 0],
                vec![0, -1, 1, 0, 0, 0],
            ],
        );
        assert_eq!(l, expect);
    }

    #[test]
    fn k5_minus_first_axis_laplacian() {
        let k = base_framework(BaseName::K5Minus, p(4));
        let l = laplacian(&Rationals, &k, 0).unwrap();
        // 4 * omega^1 on the edges 01,02,03,04,12,13,14,23,24.
        let w4 = [72, 0, -32, -8, -64, 8, 0, 28, 8];
        let mut expect = vec![vec![0i64; 5]; 5];
        for (&(i, j), &w) in k5_minus().edges().iter().zip(&w4) {
            expect[i][j] -= w;
            expect[j][i] -= w;
            expect[i][i] += w;
            expect[j][j] += w;
        }
        assert_eq!(
            l.map(|x| x * q(4)),
            linalg::from_i64_rows(&Rationals, &expect)
        );
        assert_eq!(linalg::rank(&Rationals, &l), 3);
    }

    #[test]
    fn graph_operations() {
        let g = k4_minus_extension(&Graph::complete(4), (0, 1)).unwrap();
        assert_eq!((g.n(), g.m()), (6, 10));
        assert!(!g.has_edge(0, 1) && g.has_edge(4, 5) && g.has_edge(0, 5));
        assert!(matches!(
            k4_minus_extension(&Graph::path(3), (0, 2)),
            Err(ConstructionError::Graph(GraphError::EdgeNotFound(0, 2)))
        ));

        let s = subdivide_edge(&Graph::complete(3), (0, 2)).unwrap();
        assert_eq!(s.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);

        let k4 = Graph::complete(4);
        let h = generalized_vertex_split(&k4, 0, &[1], 2).unwrap();
        assert_eq!(
            h.edges(),
            &[
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4)
            ]
        );
        assert!(matches!(
            generalized_vertex_split(&Graph::path(3), 0, &[2], 1),
            Err(ConstructionError::InvalidSplit(_))
        ));
        assert!(matches!(
            generalized_vertex_split(&k4, 0, &[1], 1),
            Err(ConstructionError::InvalidSplit(_))
        ));
    }

    #[test]
    fn k4_transfer_from_k5_minus() {
        let fw = base_framework(BaseName::K5Minus, p(4));
        for &e in fw.graph.edges() {
            let c = &fw.config;
            let degenerate =
                c.coord(e.0, 0) == c.coord(e.1, 0) || c.coord(e.0, 1) == c.coord(e.1, 1);
            match k4_extension_framework_transfer(&Rationals, &fw, e) {
                Ok(child) => {
                    assert!(!degenerate);
                    assert_eq!(child.graph.n(), 7);
                }
                Err(ConstructionError::DegenerateEdge(..)) => assert!(degenerate),
                Err(err) => panic!("{e:?}: {err}"),
            }
        }
    }

    #[test]
    fn k4_transfer_rejects_zero_stress_edge() {
        let fw = base_framework(BaseName::B1, p(4));
        assert_eq!(
            k4_extension_framework_transfer(&Rationals, &fw, (1, 4)),
            Err(ConstructionError::ZeroStressOnEdge(1, 4))
        );
    }

    #[test]
    fn subdivision_transfer_from_k3() {
        for pe in [4, 6] {
            let fw = base_framework(BaseName::K3Line, p(pe));
            let mut cur = fw;
            for e in [(0, 1), (1, 2), (0, 3)] {
                cur = subdivision_framework_transfer(&Rationals, &cur, e).unwrap();
            }
            assert_eq!(cur.graph.n(), 6);
        }
    }

    #[test]
    fn transfers_work_over_a_prime_field() {
        let f = PrimeField::default();
        let fw = base_framework(BaseName::K3Line, p(4));
        let fp = Framework {
            graph: fw.graph.clone(),
            config: Configuration::new(
                3,
                1,
                fw.config
                    .coords()
                    .iter()
                    .map(|x| f.from_rational(x).unwrap())
                    .collect(),
            )
            .unwrap(),
            stress: Stress(
                fw.stress
                    .values()
                    .iter()
                    .map(|x| f.from_rational(x).unwrap())
                    .collect(),
            ),
            p: fw.p,
        };
        subdivision_framework_transfer(&f, &fp, (0, 2)).unwrap();
    }

    #[test]
    fn corpus_members_replay_and_satisfy_the_invariants() {
        let corpus = generate_corpus(30, 10, 7);
        assert_eq!(corpus.len(), 30);
        assert_eq!(corpus[0].graph, k5_minus());
        assert_eq!(corpus[1].graph, b1());
        for entry in &corpus {
            assert!(entry.graph.n() <= 10);
            assert!(is_member(&entry.graph));
            assert_eq!(entry.replay().unwrap(), entry.graph);
        }
        assert!(corpus.iter().any(|c| c.graph.n() >= 9));
        assert_eq!(generate_corpus(30, 10, 7), corpus);
    }

    #[test]
    fn stress_basis_of_base_frameworks_is_one_dimensional() {
        for name in [BaseName::K5Minus, BaseName::B1] {
            let fw = base_framework(name, p(4));
            assert_eq!(
                stress_basis(&Rationals, &fw.graph, &fw.config, fw.p)
                    .unwrap()
                    .len(),
                1
            );
        }
    }
}
