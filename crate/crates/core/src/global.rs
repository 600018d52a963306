//! Decision procedures for generic global rigidity.
//!
//! On the line a generic framework is globally rigid exactly when the graph is
//! 2-connected (or a single edge). In the plane two independent routes are
//! available and can be cross-checked: the combinatorial one (2-connected and
//! redundantly 2-tree-connected) and the algebraic one (a coordinated stress
//! whose weighted Laplacian has rank `n - 2`). In dimension three and above
//! only sufficient conditions are known, so negative answers are reported as
//! inconclusive.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{
    connectivity_profile, redundancy_certificate, Edge, Graph, RedundancyFailure, TreePair,
};
use crate::rigidity::{
    generic_local_rigidity, stress_condition_report, GenericParams, LocalRigidity, PExponent,
    StressConditionReport,
};

/// Stream tag for the reseed used when the two planar routes disagree.
const CROSS_CHECK_STREAM: u64 = 0x6372_6f73_73;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Combinatorial,
    Algebraic,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    GloballyRigid,
    NotGloballyRigid,
    Inconclusive,
}

impl From<bool> for Outcome {
    fn from(rigid: bool) -> Self {
        if rigid {
            Outcome::GloballyRigid
        } else {
            Outcome::NotGloballyRigid
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeDeletionPacking {
    pub removed: Edge,
    pub trees: TreePair,
}

/// Witnesses for the combinatorial route. When the graph passes, `packings`
/// holds two edge-disjoint spanning trees of `G - e` for every edge `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombinatorialCheck {
    pub passed: bool,
    pub two_connected: bool,
    pub cut_vertices: Vec<usize>,
    pub redundancy_failure: Option<RedundancyFailure>,
    pub packings: Vec<EdgeDeletionPacking>,
}

impl CombinatorialCheck {
    pub fn run(g: &Graph) -> Self {
        let profile = connectivity_profile(g);
        let (packings, redundancy_failure) = match redundancy_certificate(g) {
            Ok(list) => (
                list.into_iter()
                    .map(|(removed, trees)| EdgeDeletionPacking { removed, trees })
                    .collect(),
                None,
            ),
            Err(f) => (Vec::new(), Some(f)),
        };
        Self {
            passed: profile.two_connected && redundancy_failure.is_none(),
            two_connected: profile.two_connected,
            cut_vertices: profile.cut_vertices,
            redundancy_failure,
            packings,
        }
    }

    /// Replays every packing against `g`.
    pub fn verify(&self, g: &Graph) -> bool {
        if !self.passed {
            return true;
        }
        self.packings.len() == g.m()
            && self.packings.iter().all(|pk| {
                g.without_edge(pk.removed.0, pk.removed.1)
                    .map(|h| pk.trees.verify(&h))
                    .unwrap_or(false)
            })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificates {
    pub combinatorial: Option<CombinatorialCheck>,
    pub stress: Option<StressConditionReport>,
    pub local_d_plus_1: Option<LocalRigidity>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub d: usize,
    pub p: PExponent,
    pub seed: u64,
    pub outcome: Outcome,
    pub combinatorial: Option<bool>,
    pub algebraic_some_k: Option<bool>,
    pub algebraic_all_k: Option<bool>,
    pub suff_via_d_plus_1: Option<bool>,
    /// Set when only sufficient conditions are available (d >= 3).
    pub experimental: bool,
    /// The algebraic route was re-run with a derived seed after a disagreement.
    pub reseeded: bool,
    pub certificates: Certificates,
}

impl Verdict {
    fn new(d: usize, p: PExponent, seed: u64) -> Self {
        Self {
            d,
            p,
            seed,
            outcome: Outcome::Inconclusive,
            combinatorial: None,
            algebraic_some_k: None,
            algebraic_all_k: None,
            suff_via_d_plus_1: None,
            experimental: false,
            reseeded: false,
            certificates: Certificates::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlobalError {
    #[error("graph has {n} vertices, at least {min} required")]
    TooFewVertices { n: usize, min: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("combinatorial and algebraic verdicts disagree (seed {})", .0.seed)]
    CrossCheckMismatch(Box<Verdict>),
}

/// Generic global rigidity on the line.
pub fn global_rigidity_1d(g: &Graph) -> bool {
    match g.n() {
        0 | 1 => true,
        2 => g.m() == 1,
        _ => connectivity_profile(g).two_connected,
    }
}

fn algebraic_consistent(v: &Verdict) -> bool {
    let agree_k = v.algebraic_some_k == v.algebraic_all_k;
    let agree_routes = match (v.combinatorial, v.algebraic_all_k) {
        (Some(c), Some(a)) => c == a,
        _ => true,
    };
    agree_k && agree_routes
}

fn fill_algebraic(v: &mut Verdict, report: StressConditionReport) {
    v.algebraic_some_k = Some(report.some_k);
    v.algebraic_all_k = Some(report.all_k);
    v.certificates.stress = Some(report);
}

/// Runs the algebraic route in dimension `d`, reseeding once if it disagrees
/// with itself or with an already-filled combinatorial verdict.
fn algebraic_route(
    v: &mut Verdict,
    g: &Graph,
    d: usize,
    p: PExponent,
    params: &GenericParams,
) -> Result<(), GlobalError> {
    fill_algebraic(v, stress_condition_report(g, d, p, params));
    if !algebraic_consistent(v) {
        v.reseeded = true;
        fill_algebraic(
            v,
            stress_condition_report(g, d, p, &params.reseeded(CROSS_CHECK_STREAM)),
        );
        if !algebraic_consistent(v) {
            return Err(GlobalError::CrossCheckMismatch(Box::new(v.clone())));
        }
    }
    Ok(())
}

/// Generic global rigidity in the lp-plane.
pub fn global_rigidity_plane(
    g: &Graph,
    p: PExponent,
    mode: Mode,
    params: &GenericParams,
) -> Result<Verdict, GlobalError> {
    if g.n() < 3 {
        return Err(GlobalError::TooFewVertices { n: g.n(), min: 3 });
    }
    let mut v = Verdict::new(2, p, params.seed);
    if mode != Mode::Algebraic {
        let check = CombinatorialCheck::run(g);
        v.combinatorial = Some(check.passed);
        v.certificates.combinatorial = Some(check);
    }
    if mode != Mode::Combinatorial {
        algebraic_route(&mut v, g, 2, p, params)?;
    }
    v.outcome = v
        .combinatorial
        .or(v.algebraic_all_k)
        .map(Outcome::from)
        .expect("one route ran");
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SufficiencyReport {
    pub d: usize,
    pub suff_stress: bool,
    pub suff_local_d_plus_1: bool,
    pub two_connected: bool,
    pub outcome: Outcome,
    pub experimental: bool,
    pub stress: StressConditionReport,
    pub local_d_plus_1: LocalRigidity,
}

/// Sufficient conditions for global rigidity in any dimension: the
/// coordinated-stress rank condition on every axis, or 2-connectivity plus
/// local rigidity one dimension up. Never reports a negative outcome.
pub fn global_rigidity_sufficiency_general_d(
    g: &Graph,
    d: usize,
    p: PExponent,
    params: &GenericParams,
) -> SufficiencyReport {
    let stress = stress_condition_report(g, d, p, params);
    let two_connected = connectivity_profile(g).two_connected;
    let local_d_plus_1 = generic_local_rigidity(g, d + 1, p, params);
    let suff_local_d_plus_1 = two_connected && local_d_plus_1.rigid;
    let suff_stress = stress.all_k;
    SufficiencyReport {
        d,
        suff_stress,
        suff_local_d_plus_1,
        two_connected,
        outcome: if suff_stress || suff_local_d_plus_1 {
            Outcome::GloballyRigid
        } else {
            Outcome::Inconclusive
        },
        experimental: d >= 3,
        stress,
        local_d_plus_1,
    }
}

/// Dispatches on dimension: the line rule for `d = 1` (cross-checked against
/// the Laplacian rank when asked), the planar procedure for `d = 2`, and the
/// sufficient conditions above that.
pub fn check_global(
    g: &Graph,
    d: usize,
    p: PExponent,
    mode: Mode,
    params: &GenericParams,
) -> Result<Verdict, GlobalError> {
    match d {
        0 => Err(GlobalError::ZeroDimension),
        1 => {
            if g.n() < 2 {
                return Err(GlobalError::TooFewVertices { n: g.n(), min: 2 });
            }
            let mut v = Verdict::new(1, p, params.seed);
            let line = global_rigidity_1d(g);
            if mode != Mode::Algebraic {
                v.combinatorial = Some(line);
            }
            if mode != Mode::Combinatorial && g.n() >= 3 {
                algebraic_route(&mut v, g, 1, p, params)?;
            }
            v.outcome = v.combinatorial.or(v.algebraic_all_k).unwrap_or(line).into();
            Ok(v)
        }
        2 => global_rigidity_plane(g, p, mode, params),
        _ => {
            if g.n() < 3 {
                return Err(GlobalError::TooFewVertices { n: g.n(), min: 3 });
            }
            let report = global_rigidity_sufficiency_general_d(g, d, p, params);
            let mut v = Verdict::new(d, p, params.seed);
            v.experimental = true;
            v.outcome = report.outcome;
            v.algebraic_all_k = Some(report.stress.all_k);
            v.algebraic_some_k = Some(report.stress.some_k);
            v.suff_via_d_plus_1 = Some(report.suff_local_d_plus_1);
            v.certificates.stress = Some(report.stress);
            v.certificates.local_d_plus_1 = Some(report.local_d_plus_1);
            Ok(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{b1, k5_minus};

    fn p4() -> PExponent {
        PExponent::new(4).unwrap()
    }

    #[test]
    fn line_examples() {
        assert!(global_rigidity_1d(&Graph::cycle(4)));
        assert!(!global_rigidity_1d(&Graph::path(3)));
        assert!(global_rigidity_1d(&Graph::complete(2)));
        assert!(!global_rigidity_1d(&Graph::empty(2)));
    }

    #[test]
    fn plane_base_graphs_are_globally_rigid() {
        let prm = GenericParams::new(1);
        for g in [k5_minus(), b1()] {
            let v = global_rigidity_plane(&g, p4(), Mode::Both, &prm).unwrap();
            assert_eq!(v.outcome, Outcome::GloballyRigid);
            assert_eq!(v.combinatorial, Some(true));
            assert_eq!(v.algebraic_all_k, Some(true));
            assert_eq!(v.algebraic_some_k, Some(true));
            assert!(v.certificates.combinatorial.as_ref().unwrap().verify(&g));
            let cert = v
                .certificates
                .stress
                .as_ref()
                .unwrap()
                .certificate
                .as_ref()
                .unwrap();
            assert!(cert.verify(&g, p4()));
        }
    }

    #[test]
    fn k4_is_not_globally_rigid() {
        let prm = GenericParams::new(1);
        let v = global_rigidity_plane(&Graph::complete(4), p4(), Mode::Both, &prm).unwrap();
        assert_eq!(v.outcome, Outcome::NotGloballyRigid);
        let check = v.certificates.combinatorial.unwrap();
        assert!(check.two_connected);
        assert_eq!(
            check.redundancy_failure,
            Some(RedundancyFailure::CriticalEdge { edge: (0, 1) })
        );
    }

    #[test]
    fn plane_rejects_tiny_graphs() {
        let prm = GenericParams::new(1);
        assert_eq!(
            global_rigidity_plane(&Graph::complete(2), p4(), Mode::Both, &prm),
            Err(GlobalError::TooFewVertices { n: 2, min: 3 })
        );
    }

    #[test]
    fn sufficiency_examples() {
        let prm = GenericParams::new(2);
        // K5 has 10 edges, fewer than 3 * 5 - 3 = 12, so it is not locally
        // rigid in three dimensions; the stress condition still holds in the plane.
        let k5 = global_rigidity_sufficiency_general_d(&Graph::complete(5), 2, p4(), &prm);
        assert_eq!(k5.local_d_plus_1.rank, 10);
        assert!(!k5.suff_local_d_plus_1);
        assert!(k5.suff_stress);

        let k7 = global_rigidity_sufficiency_general_d(&Graph::complete(7), 2, p4(), &prm);
        assert!(k7.suff_local_d_plus_1);
        assert_eq!(k7.outcome, Outcome::GloballyRigid);

        let c6 = global_rigidity_sufficiency_general_d(&Graph::cycle(6), 2, p4(), &prm);
        assert!(!c6.suff_stress && !c6.suff_local_d_plus_1);
        assert_eq!(c6.outcome, Outcome::Inconclusive);

        let k5m = global_rigidity_sufficiency_general_d(&k5_minus(), 2, p4(), &prm);
        assert!(k5m.suff_stress);
    }

    #[test]
    fn higher_dimensions_never_say_no() {
        let prm = GenericParams::new(3);
        let v = check_global(&Graph::complete(5), 3, p4(), Mode::Both, &prm).unwrap();
        assert!(v.experimental);
        assert_ne!(v.outcome, Outcome::NotGloballyRigid);
        let v = check_global(&Graph::cycle(5), 3, p4(), Mode::Both, &prm).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
    }

    #[test]
    fn line_dispatch_cross_checks_laplacian_rank() {
        let prm = GenericParams::new(4);
        let v = check_global(&Graph::cycle(5), 1, p4(), Mode::Both, &prm).unwrap();
        assert_eq!(v.outcome, Outcome::GloballyRigid);
        assert_eq!(v.algebraic_all_k, Some(true));
        let bowtie = Graph::new(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let v = check_global(&bowtie, 1, p4(), Mode::Both, &prm).unwrap();
        assert_eq!(v.outcome, Outcome::NotGloballyRigid);
        assert_eq!(
            check_global(&Graph::complete(3), 0, p4(), Mode::Both, &prm),
            Err(GlobalError::ZeroDimension)
        );
    }

    #[test]
    fn verdicts_are_deterministic() {
        let prm = GenericParams::new(99);
        let g = b1();
        assert_eq!(
            global_rigidity_plane(&g, p4(), Mode::Both, &prm),
            global_rigidity_plane(&g, p4(), Mode::Both, &prm)
        );
    }
}
