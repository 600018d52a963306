//! Generic ranks by random evaluation over a large prime field.
//!
//! The generic rank of a matrix of rational functions is attained away from a
//! proper algebraic subset, so a uniformly random prime-field point hits it
//! except with probability at most (total degree) / q. Every trial is seeded
//! from `(seed, trial index)`, so results are reproducible and trials are
//! independent of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    coordinated_laplacian_ranks, rigidity_matrix, stress_basis, Configuration, PExponent,
    RigidityError, Stress,
};
use crate::field::{PrimeField, SampleField};
use crate::graph::Graph;
use crate::linalg;

pub const DEFAULT_TRIALS: usize = 3;

/// Stream tag for the single automatic reseed after disagreeing trials.
const RESEED_STREAM: u64 = 0x7265_7365_6564;

/// Randomized evaluation settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenericParams {
    pub field: PrimeField,
    pub trials: usize,
    pub seed: u64,
}

impl GenericParams {
    pub fn new(seed: u64) -> Self {
        Self {
            field: PrimeField::default(),
            trials: DEFAULT_TRIALS,
            seed,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials.max(1);
        self
    }

    /// Same settings with a seed derived from `stream`.
    pub fn reseeded(&self, stream: u64) -> Self {
        Self {
            seed: derive_seed(self.seed, stream),
            ..*self
        }
    }

    fn rng(&self, trial: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(derive_seed(self.seed, trial as u64))
    }
}

/// SplitMix64 finalizer applied to `seed ^ mix(stream)`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    mix(seed ^ mix(stream))
}

/// Uniform random configuration with pairwise distinct coordinates on every
/// axis.
pub fn sample_configuration<F: SampleField, R: rand::Rng + ?Sized>(
    field: &F,
    n: usize,
    d: usize,
    rng: &mut R,
) -> Configuration<F::Elem> {
    let mut coords: Vec<F::Elem> = Vec::with_capacity(n * d);
    for i in 0..n {
        for k in 0..d {
            let value = loop {
                let v = field.sample(rng);
                if (0..i).all(|j| coords[j * d + k] != v) {
                    break v;
                }
            };
            coords.push(value);
        }
    }
    Configuration::new(n, d, coords).expect("n * d coordinates")
}

/// Random combination of `basis` with nonzero coefficients.
pub fn random_stress_combination<F: SampleField, R: rand::Rng + ?Sized>(
    field: &F,
    basis: &[Stress<F::Elem>],
    rng: &mut R,
) -> Result<Stress<F::Elem>, RigidityError> {
    let first = basis.first().ok_or(RigidityError::NoStress)?;
    let mut acc = vec![field.zero(); first.0.len()];
    for s in basis {
        let c = field.sample_nonzero(rng);
        for (a, v) in acc.iter_mut().zip(&s.0) {
            *a = field.add(a, &field.mul(&c, v));
        }
    }
    Ok(Stress(acc))
}

/// A random self-stress of `(g, c)`, drawn from the span of a stress basis.
pub fn random_generic_stress<F: SampleField>(
    field: &F,
    g: &Graph,
    c: &Configuration<F::Elem>,
    p: PExponent,
    seed: u64,
) -> Result<Stress<F::Elem>, RigidityError> {
    let basis = stress_basis(field, g, c, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_stress_combination(field, &basis, &mut rng)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRigidity {
    pub rigid: bool,
    /// Maximum rank over all trials.
    pub rank: usize,
    /// `d n - d`, the rank of a locally rigid framework.
    pub target: usize,
    pub trial_ranks: Vec<usize>,
    pub reseeded: bool,
}

/// Runs `trials` evaluations, and once more with a derived seed if their keys
/// disagree.
fn with_reseed<T, K: PartialEq>(
    params: &GenericParams,
    mut run: impl FnMut(&GenericParams) -> Vec<T>,
    key: impl Fn(&T) -> K,
) -> (Vec<T>, bool) {
    let mut results = run(params);
    let disagree = results.windows(2).any(|w| key(&w[0]) != key(&w[1]));
    if disagree {
        results.extend(run(&params.reseeded(RESEED_STREAM)));
    }
    (results, disagree)
}

/// Generic local rigidity in `d` dimensions: rank `d n - d` at random points.
pub fn generic_local_rigidity(
    g: &Graph,
    d: usize,
    p: PExponent,
    params: &GenericParams,
) -> LocalRigidity {
    let n = g.n();
    let target = (d * n).saturating_sub(d);
    let field = params.field;
    let (trial_ranks, reseeded) = with_reseed(
        params,
        |prm| {
            (0..prm.trials)
                .map(|t| {
                    let mut rng = prm.rng(t);
                    let c = sample_configuration(&field, n, d, &mut rng);
                    let j = rigidity_matrix(&field, g, &c, p).expect("sizes agree");
                    linalg::rank(&field, &j)
                })
                .collect()
        },
        |&r| r,
    );
    let rank = trial_ranks.iter().copied().max().unwrap_or(0);
    LocalRigidity {
        rigid: rank == target,
        rank,
        target,
        trial_ranks,
        reseeded,
    }
}

/// A replayable witness: configuration and stress over `F_q`, with the ranks
/// of the coordinated Laplacians they produce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StressCertificate {
    pub modulus: u64,
    pub d: usize,
    /// Row-major `n x d` coordinates.
    pub configuration: Vec<u64>,
    pub stress: Vec<u64>,
    pub per_axis_rank: Vec<usize>,
}

impl StressCertificate {
    /// Recomputes equilibrium and every Laplacian rank from scratch.
    pub fn verify(&self, g: &Graph, p: PExponent) -> bool {
        let Ok(field) = PrimeField::new(self.modulus) else {
            return false;
        };
        let Ok(c) = Configuration::new(g.n(), self.d, self.configuration.clone()) else {
            return false;
        };
        let stress = Stress(self.stress.clone());
        let nonzero = self.stress.iter().any(|&x| x != 0);
        let balanced = super::is_self_stress(&field, g, &c, p, &self.stress).unwrap_or(false);
        let ranks = coordinated_laplacian_ranks(&field, g, &stress, &c, p);
        nonzero && balanced && ranks.as_deref() == Ok(&self.per_axis_rank[..])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StressConditionReport {
    /// Per-axis maximum of `rank L_{G, omega^k}`; empty when there is no stress.
    pub per_axis_rank: Vec<usize>,
    /// Some axis reaches `n - 2`.
    pub some_k: bool,
    /// Every axis reaches `n - 2`.
    pub all_k: bool,
    pub target: usize,
    /// Largest observed dimension of the self-stress space.
    pub stress_dim: usize,
    pub reseeded: bool,
    pub certificate: Option<StressCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct StressTrial {
    dim: usize,
    ranks: Vec<usize>,
    config: Vec<u64>,
    stress: Vec<u64>,
}

impl StressTrial {
    fn key(&self) -> (usize, Vec<usize>) {
        (self.dim, self.ranks.clone())
    }
}

fn stress_trial(
    g: &Graph,
    d: usize,
    p: PExponent,
    field: &PrimeField,
    rng: &mut ChaCha8Rng,
) -> Option<StressTrial> {
    let c = sample_configuration(field, g.n(), d, rng);
    let basis = stress_basis(field, g, &c, p).expect("sizes agree");
    let stress = random_stress_combination(field, &basis, rng).ok()?;
    let ranks = coordinated_laplacian_ranks(field, g, &stress, &c, p).expect("sizes agree");
    for &r in &ranks {
        assert!(
            r + 2 <= g.n(),
            "coordinated Laplacian rank {r} exceeds n - 2"
        );
    }
    Some(StressTrial {
        dim: basis.len(),
        ranks,
        config: c.coords().to_vec(),
        stress: stress.0,
    })
}

/// Samples generic frameworks and generic stresses and reports the ranks of
/// the coordinated-stress Laplacians on every axis.
pub fn stress_condition_report(
    g: &Graph,
    d: usize,
    p: PExponent,
    params: &GenericParams,
) -> StressConditionReport {
    let target = g.n().saturating_sub(2);
    let field = params.field;
    let (trials, reseeded) = with_reseed(
        params,
        |prm| {
            (0..prm.trials)
                .map(|t| stress_trial(g, d, p, &field, &mut prm.rng(t)))
                .collect()
        },
        |t: &Option<StressTrial>| t.as_ref().map(StressTrial::key),
    );
    let trials: Vec<StressTrial> = trials.into_iter().flatten().collect();
    if trials.is_empty() {
        return StressConditionReport {
            per_axis_rank: Vec::new(),
            some_k: false,
            all_k: false,
            target,
            stress_dim: 0,
            reseeded,
            certificate: None,
        };
    }
    let mut per_axis_rank = vec![0; d];
    for t in &trials {
        for (best, &r) in per_axis_rank.iter_mut().zip(&t.ranks) {
            *best = (*best).max(r);
        }
    }
    let best = trials
        .iter()
        .max_by_key(|t| (t.ranks.iter().copied().min(), t.ranks.iter().sum::<usize>()))
        .expect("nonempty");
    StressConditionReport {
        some_k: per_axis_rank.iter().any(|&r| r == target),
        all_k: per_axis_rank.iter().all(|&r| r == target),
        per_axis_rank,
        target,
        stress_dim: trials.iter().map(|t| t.dim).max().unwrap_or(0),
        reseeded,
        certificate: Some(StressCertificate {
            modulus: field.modulus(),
            d,
            configuration: best.config.clone(),
            stress: best.stress.clone(),
            per_axis_rank: best.ranks.clone(),
        }),
    }
}
