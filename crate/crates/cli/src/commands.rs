use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lp_rigidity::constructions::generate_corpus;
use lp_rigidity::experiments::threshold_report;
use lp_rigidity::field::{primitive_integer_vector, Field, PrimeField, Rationals};
use lp_rigidity::global::{check_global, GlobalError, Mode, Outcome};
use lp_rigidity::graph::{
    connectivity_profile, is_redundantly_two_tree_connected, two_tree_packing, Graph,
};
use lp_rigidity::io::{parse_configuration, parse_graph, write_graph};
use lp_rigidity::linalg::{self, Matrix};
use lp_rigidity::rigidity::{
    coordinated_stress, derive_seed, generic_local_rigidity, random_stress_combination,
    rigidity_matrix, sample_configuration, stress_basis, weighted_laplacian, Configuration,
    GenericParams, PExponent, RigidityError, Stress,
};

use crate::report::{
    edge_list, InputSummary, Parameters, Report, EXIT_INCONCLUSIVE, EXIT_MISMATCH, EXIT_NO,
    EXIT_YES,
};

const PACKING_RESEED_STREAM: u64 = 0x7061_636b;
const STRESS_STREAM: u64 = 0x7374_7265_7373;

/// Settings shared by every subcommand.
pub struct Ctx {
    pub seed: u64,
    pub field: PrimeField,
}

impl Ctx {
    fn params(&self, trials: usize) -> GenericParams {
        GenericParams {
            field: self.field,
            trials: trials.max(1),
            seed: self.seed,
        }
    }

    fn parameters(
        &self,
        d: Option<usize>,
        p: Option<PExponent>,
        trials: Option<usize>,
        mode: Option<Mode>,
    ) -> Parameters {
        Parameters {
            d,
            p: p.map(PExponent::value),
            seed: self.seed,
            field: self.field.config(),
            trials,
            mode,
        }
    }
}

fn exponent(p: u32) -> Result<PExponent> {
    PExponent::new(p).map_err(Into::into)
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn graph_input(path: &Path, g: &Graph) -> InputSummary {
    InputSummary {
        graph: Some(path.display().to_string()),
        config: None,
        n: Some(g.n()),
        m: Some(g.m()),
    }
}

fn matrix_strings<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| field.format(x)).collect())
        .collect()
}

fn vector_strings<F: Field>(field: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|x| field.format(x)).collect()
}

pub fn check_local(ctx: &Ctx, path: &Path, d: usize, p: u32, trials: usize) -> Result<Report> {
    let p = exponent(p)?;
    if d == 0 {
        bail!("dimension must be at least 1");
    }
    let g = read_graph(path)?;
    let params = ctx.params(trials);
    let mut local = generic_local_rigidity(&g, d, p, &params);
    let mut text = Vec::new();

    let (combinatorial, witness) = match d {
        1 => (Some(g.is_connected()), Value::Null),
        2 => {
            let pair = two_tree_packing(&g);
            match &pair {
                Some(t) => {
                    text.push("tree packing: two edge-disjoint spanning trees".into());
                    text.push(format!("  tree 1: {}", edge_list(&t.first)));
                    text.push(format!("  tree 2: {}", edge_list(&t.second)));
                }
                None => text.push("tree packing: no two edge-disjoint spanning trees".into()),
            }
            (Some(pair.is_some()), serde_json::to_value(&pair)?)
        }
        _ => (None, Value::Null),
    };
    if d == 1 {
        text.push(format!("connected: {}", g.is_connected()));
    }

    let mut reseeded = false;
    if combinatorial.is_some_and(|c| c != local.rigid) {
        reseeded = true;
        local = generic_local_rigidity(&g, d, p, &params.reseeded(PACKING_RESEED_STREAM));
    }
    text.insert(
        0,
        format!(
            "rank test (d={d}, p={}): rank {} of {} -> {}",
            p.value(),
            local.rank,
            local.target,
            if local.rigid { "rigid" } else { "not rigid" }
        ),
    );
    let mismatch = combinatorial.is_some_and(|c| c != local.rigid);
    let (outcome, exit_code) = if mismatch {
        text.push("rank test and combinatorial test disagree".into());
        ("mismatch", EXIT_MISMATCH)
    } else if local.rigid {
        ("rigid", EXIT_YES)
    } else {
        ("not_rigid", EXIT_NO)
    };

    Ok(Report {
        command: "check-local",
        input: graph_input(path, &g),
        parameters: ctx.parameters(Some(d), Some(p), Some(params.trials), None),
        outcome,
        exit_code,
        warnings: Vec::new(),
        result: json!({
            "rigid": local.rigid,
            "rank": local,
            "combinatorial": combinatorial,
            "tree_packing": witness,
            "cross_check_reseeded": reseeded,
        }),
        timing_ms: None,
        text,
    })
}

fn outcome_label(o: Outcome) -> (&'static str, i32) {
    match o {
        Outcome::GloballyRigid => ("globally_rigid", EXIT_YES),
        Outcome::NotGloballyRigid => ("not_globally_rigid", EXIT_NO),
        Outcome::Inconclusive => ("inconclusive", EXIT_INCONCLUSIVE),
    }
}

fn flag(v: Option<bool>) -> String {
    v.map_or("-".to_string(), |b| b.to_string())
}

pub fn check_global_cmd(
    ctx: &Ctx,
    path: &Path,
    d: usize,
    p: u32,
    mode: Mode,
    trials: usize,
) -> Result<Report> {
    let p = exponent(p)?;
    let g = read_graph(path)?;
    let params = ctx.params(trials);
    let parameters = ctx.parameters(Some(d), Some(p), Some(params.trials), Some(mode));
    let input = graph_input(path, &g);
    match check_global(&g, d, p, mode, &params) {
        Ok(v) => {
            let (outcome, exit_code) = outcome_label(v.outcome);
            let mut text = vec![
                format!("combinatorial: {}", flag(v.combinatorial)),
                format!("algebraic (some axis): {}", flag(v.algebraic_some_k)),
                format!("algebraic (every axis): {}", flag(v.algebraic_all_k)),
            ];
            if let Some(s) = &v.certificates.stress {
                text.push(format!(
                    "coordinated Laplacian ranks: {:?} (target {})",
                    s.per_axis_rank, s.target
                ));
            }
            if let Some(c) = &v.certificates.combinatorial {
                text.push(format!("2-connected: {}", c.two_connected));
                if let Some(f) = &c.redundancy_failure {
                    text.push(format!("redundancy failure: {}", serde_json::to_string(f)?));
                }
            }
            if v.suff_via_d_plus_1.is_some() {
                text.push(format!(
                    "2-connected and rigid in dimension {}: {}",
                    d + 1,
                    flag(v.suff_via_d_plus_1)
                ));
            }
            let mut warnings = Vec::new();
            if v.experimental {
                warnings.push("only sufficient conditions are known in this dimension".into());
            }
            Ok(Report {
                command: "check-global",
                input,
                parameters,
                outcome,
                exit_code,
                warnings,
                result: serde_json::to_value(&v)?,
                timing_ms: None,
                text,
            })
        }
        Err(GlobalError::CrossCheckMismatch(v)) => Ok(Report {
            command: "check-global",
            input,
            parameters,
            outcome: "mismatch",
            exit_code: EXIT_MISMATCH,
            warnings: vec!["combinatorial and algebraic verdicts disagree after one reseed".into()],
            text: vec![
                format!("combinatorial: {}", flag(v.combinatorial)),
                format!("algebraic (some axis): {}", flag(v.algebraic_some_k)),
                format!("algebraic (every axis): {}", flag(v.algebraic_all_k)),
            ],
            result: serde_json::to_value(&*v)?,
            timing_ms: None,
        }),
        Err(e) => Err(e.into()),
    }
}

struct StressData {
    configuration: Vec<Vec<String>>,
    basis: Vec<Vec<String>>,
    stress: Vec<String>,
    rigidity_rank: usize,
    per_axis_rank: Vec<usize>,
    laplacians: Vec<Vec<Vec<String>>>,
}

fn stress_data<F: Field>(
    field: &F,
    g: &Graph,
    c: &Configuration<F::Elem>,
    p: PExponent,
    basis: &[Stress<F::Elem>],
    stress: &Stress<F::Elem>,
) -> Result<StressData> {
    let mut per_axis_rank = Vec::new();
    let mut laplacians = Vec::new();
    for k in 0..c.d() {
        let wk = coordinated_stress(field, g, stress, c, k, p)?;
        let l = weighted_laplacian(field, g, &wk.values)?;
        per_axis_rank.push(linalg::rank(field, &l));
        laplacians.push(matrix_strings(field, &l));
    }
    Ok(StressData {
        configuration: (0..c.n())
            .map(|i| vector_strings(field, c.point(i)))
            .collect(),
        basis: basis
            .iter()
            .map(|b| vector_strings(field, b.values()))
            .collect(),
        stress: vector_strings(field, stress.values()),
        rigidity_rank: linalg::rank(field, &rigidity_matrix(field, g, c, p)?),
        per_axis_rank,
        laplacians,
    })
}

pub fn stress_cmd(
    ctx: &Ctx,
    path: &Path,
    dim: Option<usize>,
    p: u32,
    config: Option<&PathBuf>,
) -> Result<Report> {
    let p = exponent(p)?;
    let g = read_graph(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(ctx.seed, STRESS_STREAM));
    let mut warnings = Vec::new();
    let mut input = graph_input(path, &g);

    let (mode, d, data) = match config {
        Some(cpath) => {
            let text = fs::read_to_string(cpath)
                .with_context(|| format!("reading {}", cpath.display()))?;
            let c = parse_configuration(&text)
                .with_context(|| format!("parsing {}", cpath.display()))?;
            input.config = Some(cpath.display().to_string());
            if c.n() != g.n() {
                bail!(
                    "configuration has {} points, graph has {} vertices",
                    c.n(),
                    g.n()
                );
            }
            if let Some(d) = dim.filter(|&d| d != c.d()) {
                bail!(
                    "--dim {d} does not match the {}-dimensional configuration",
                    c.d()
                );
            }
            let degenerate = c.degenerate_axes();
            if !degenerate.is_empty() {
                warnings.push(format!(
                    "configuration repeats a coordinate on axes {:?}; ranks certify this framework only",
                    degenerate.iter().map(|k| k + 1).collect::<Vec<_>>()
                ));
            }
            let basis = stress_basis(&Rationals, &g, &c, p)?;
            let combo = match basis.len() {
                1 => basis[0].clone(),
                _ => random_stress_combination(&Rationals, &basis, &mut rng).map_err(no_stress)?,
            };
            let stress = Stress(primitive_integer_vector(combo.values()));
            (
                "certificate",
                c.d(),
                stress_data(&Rationals, &g, &c, p, &basis, &stress),
            )
        }
        None => {
            let d = dim.unwrap_or(2);
            if d == 0 {
                bail!("dimension must be at least 1");
            }
            let c = sample_configuration(&ctx.field, g.n(), d, &mut rng);
            let basis = stress_basis(&ctx.field, &g, &c, p)?;
            let data = random_stress_combination(&ctx.field, &basis, &mut rng)
                .map_err(no_stress)
                .and_then(|s| stress_data(&ctx.field, &g, &c, p, &basis, &s));
            ("generic", d, data)
        }
    };
    let target = g.n().saturating_sub(2);
    let data = match data {
        Ok(data) => data,
        Err(e) if e.is::<NoStress>() => {
            return Ok(Report {
                command: "stress",
                input,
                parameters: ctx.parameters(Some(d), Some(p), None, None),
                outcome: "no_stress",
                exit_code: EXIT_NO,
                warnings,
                result: json!({ "mode": mode, "stress_dim": 0 }),
                timing_ms: None,
                text: vec!["the framework has no nonzero self-stress".into()],
            })
        }
        Err(e) => return Err(e),
    };
    let mut text = vec![
        format!("mode: {mode}"),
        format!("rigidity matrix rank: {}", data.rigidity_rank),
        format!("stress space dimension: {}", data.basis.len()),
        format!("stress: {}", data.stress.join(" ")),
        format!(
            "coordinated Laplacian ranks: {:?} (n - 2 = {target})",
            data.per_axis_rank
        ),
    ];
    for (k, l) in data.laplacians.iter().enumerate() {
        text.push(format!("L for axis {}:", k + 1));
        for row in l {
            text.push(format!("  [{}]", row.join(", ")));
        }
    }
    Ok(Report {
        command: "stress",
        input,
        parameters: ctx.parameters(Some(d), Some(p), None, None),
        outcome: "stress_found",
        exit_code: EXIT_YES,
        warnings,
        result: json!({
            "mode": mode,
            "configuration": data.configuration,
            "rigidity_rank": data.rigidity_rank,
            "stress_dim": data.basis.len(),
            "basis": data.basis,
            "stress": data.stress,
            "per_axis_rank": data.per_axis_rank,
            "target": target,
            "some_k": data.per_axis_rank.iter().any(|&r| r == target),
            "all_k": data.per_axis_rank.iter().all(|&r| r == target),
            "laplacians": data.laplacians,
        }),
        timing_ms: None,
        text,
    })
}

#[derive(Debug, thiserror::Error)]
#[error("the framework has no nonzero self-stress")]
struct NoStress;

fn no_stress(e: RigidityError) -> anyhow::Error {
    match e {
        RigidityError::NoStress => NoStress.into(),
        other => other.into(),
    }
}

pub fn generate(ctx: &Ctx, count: usize, max_n: usize, out: Option<&PathBuf>) -> Result<Report> {
    if max_n < 5 {
        bail!("--max-n must be at least 5");
    }
    let corpus = generate_corpus(count, max_n, ctx.seed);
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut entries = Vec::with_capacity(corpus.len());
    let mut all_pass = true;
    for (i, entry) in corpus.iter().enumerate() {
        let g = &entry.graph;
        let passes = connectivity_profile(g).two_connected && is_redundantly_two_tree_connected(g);
        all_pass &= passes;
        let file = format!("graph_{i:04}.txt");
        if let Some(dir) = out {
            fs::write(dir.join(&file), write_graph(g))
                .with_context(|| format!("writing {file}"))?;
        }
        entries.push(json!({
            "file": file,
            "n": g.n(),
            "m": g.m(),
            "base": entry.base,
            "trace": entry.trace,
            "passes_combinatorial_test": passes,
        }));
    }
    let manifest = json!({ "seed": ctx.seed, "max_n": max_n, "graphs": entries });
    if let Some(dir) = out {
        fs::write(
            dir.join("manifest.json"),
            serde_json::to_string_pretty(&manifest)? + "\n",
        )
        .context("writing manifest.json")?;
    }
    let text = vec![
        format!(
            "generated {} graphs with at most {max_n} vertices",
            corpus.len()
        ),
        format!("all pass the combinatorial test: {all_pass}"),
    ];
    Ok(Report {
        command: "generate",
        input: InputSummary {
            graph: None,
            config: None,
            n: None,
            m: None,
        },
        parameters: ctx.parameters(None, None, None, None),
        outcome: if all_pass { "ok" } else { "invariant_violated" },
        exit_code: if all_pass { EXIT_YES } else { EXIT_NO },
        warnings: Vec::new(),
        result: json!({
            "count": corpus.len(),
            "out": out.map(|d| d.display().to_string()),
            "manifest": manifest,
        }),
        timing_ms: None,
        text,
    })
}

pub fn thresholds(ctx: &Ctx, n_list: &[usize], d: usize, p: u32, trials: usize) -> Result<Report> {
    let p = exponent(p)?;
    if d == 0 {
        bail!("dimension must be at least 1");
    }
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    if let Some(&n) = n_list.iter().find(|&&n| n < d + 2) {
        bail!("n = {n} is too small for dimension {d}");
    }
    let report = threshold_report(n_list, d, p, trials, ctx.seed, &ctx.params(1));
    let mut text = vec![format!(
        "{:>6} {:>8} {:>10} {:>10} {:>9} {:>9}",
        "n", "trials", "P[LR=M_d]", "P[GR=M_d+1]", "gap LR", "gap GR"
    )];
    for r in &report.rows {
        text.push(format!(
            "{:>6} {:>8} {:>10.3} {:>10.3} {:>9.3} {:>9.3}",
            r.n,
            r.trials,
            r.freq_local_at_min_degree,
            r.freq_global_at_min_degree,
            r.mean_gap_local,
            r.mean_gap_global
        ));
    }
    Ok(Report {
        command: "thresholds",
        input: InputSummary {
            graph: None,
            config: None,
            n: None,
            m: None,
        },
        parameters: ctx.parameters(Some(d), Some(p), Some(trials), None),
        outcome: "ok",
        exit_code: EXIT_YES,
        warnings: Vec::new(),
        result: serde_json::to_value(&report)?,
        timing_ms: None,
        text,
    })
}
