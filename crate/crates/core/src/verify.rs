//! The inequality and identity battery behind `globcorr verify`.
//!
//! Each trial draws (or reuses) a distribution and records observations for
//! a fixed list of named checks. Observations are folded per check into the
//! worst case across all trials, so the report lists every check exactly once.
//! Trials are independent and evaluated through [`Execution`]; each trial has
//! its own random stream, so the report is identical for every strategy.

use rand::Rng;
use serde::Serialize;

use crate::combinatorics::{
    enumerate_all_partitions, enumerate_partitions, permutations, stirling2,
};
use crate::dist::{Axis, JointDistribution};
use crate::error::Result;
use crate::exec::Execution;
use crate::info::{
    chain_rule_terms, conditional_mutual_information, entropy_decomposition, mi_upper_bound,
    mutual_information, npartite_information, shannon_entropy, total_correlation,
};
use crate::maxent::{maxent_update, MomentConstraint, SolverOptions};
use crate::partition::Partition;
use crate::random;
use crate::sufficiency::{apply_statistic, joint_processed_information, npartite_processing_chain};
use crate::watanabe::{branch_trees, full_branch_trees, watanabe_sum};

/// How an observation's two sides are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|lhs - rhs| <= tolerance`
    Eq,
    /// `lhs <= rhs + tolerance`
    Le,
}

impl Relation {
    /// Amount by which the comparison is violated; `<= 0` passes.
    fn excess(self, lhs: f64, rhs: f64, tolerance: f64) -> f64 {
        let raw = match self {
            Relation::Eq => {
                if lhs == rhs {
                    0.0
                } else {
                    (lhs - rhs).abs()
                }
            }
            Relation::Le => lhs - rhs,
        };
        if raw.is_nan() {
            f64::INFINITY
        } else {
            raw - tolerance
        }
    }
}

/// Check names, relations and tolerances, in report order.
pub const CHECKS: &[(&str, Relation, f64)] = &[
    ("tc_entropy_decomposition", Relation::Eq, 1e-10),
    ("npi_entropy_decomposition", Relation::Eq, 1e-10),
    ("npi_le_tc", Relation::Le, 1e-10),
    ("singleton_npi_eq_tc", Relation::Eq, 1e-12),
    ("chain_rule", Relation::Eq, 1e-10),
    ("watanabe_full_trees", Relation::Eq, 1e-10),
    ("watanabe_partial_trees", Relation::Eq, 1e-10),
    ("nonnegativity", Relation::Le, 1e-12),
    ("independent_tc_zero", Relation::Le, 1e-12),
    ("cmi_chain_rule", Relation::Eq, 1e-10),
    ("mi_upper_bound", Relation::Le, 1e-10),
    ("data_processing", Relation::Le, 1e-10),
    ("npartite_processing_chain", Relation::Le, 1e-10),
    ("joint_processing", Relation::Le, 1e-10),
    ("joint_processing_coarse_between", Relation::Le, 1e-10),
    ("subsystem_additivity", Relation::Eq, 1e-10),
    ("relabel_invariance", Relation::Eq, 0.0),
    ("noise_invariance", Relation::Eq, 1e-12),
    ("redundancy_invariance", Relation::Eq, 1e-12),
    ("bayes_column_normalization", Relation::Eq, 1e-12),
    ("maxent_residual", Relation::Le, 0.0),
    ("maxent_gibbs_form", Relation::Eq, 1e-8),
    ("stirling_enumeration", Relation::Eq, 0.0),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub relation: Relation,
    pub passed: bool,
    /// Sides of the worst observation.
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub observations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_axes: usize,
    pub max_labels: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            seed: 42,
            trials: 100,
            max_axes: 4,
            max_labels: 4,
        }
    }
}

/// Runs the battery. With `fixed` every trial uses that distribution and
/// only the random statistics, orderings and companions vary.
pub fn run_battery(
    config: &BatteryConfig,
    fixed: Option<&JointDistribution>,
    exec: Execution,
) -> Result<VerifyReport> {
    let per_trial = exec.map_range(config.trials, |t| {
        let mut rng = random::trial_rng(config.seed, t as u64);
        let dist = match fixed {
            Some(d) => d.clone(),
            None => {
                let cards = random::shape(&mut rng, 2, config.max_axes.max(2), config.max_labels);
                random::distribution(&mut rng, "x", &cards)?
            }
        };
        let mut log = Log::new();
        trial(&dist, &mut rng, &mut log)?;
        Ok(log)
    });
    let mut total = Log::new();
    for log in per_trial {
        total.merge(log?);
    }
    stirling_check(&mut total)?;
    Ok(total.into_report(config.seed, config.trials))
}

#[derive(Debug, Clone, Copy)]
struct Worst {
    excess: f64,
    lhs: f64,
    rhs: f64,
    count: u64,
}

struct Log {
    worst: Vec<Option<Worst>>,
}

impl Log {
    fn new() -> Self {
        Log {
            worst: vec![None; CHECKS.len()],
        }
    }

    fn record(&mut self, name: &str, lhs: f64, rhs: f64) {
        let k = CHECKS
            .iter()
            .position(|c| c.0 == name)
            .unwrap_or_else(|| panic!("unknown check {name}"));
        let (_, relation, tol) = CHECKS[k];
        let excess = relation.excess(lhs, rhs, tol);
        let slot = &mut self.worst[k];
        match slot {
            Some(w) => {
                w.count += 1;
                if excess > w.excess {
                    w.excess = excess;
                    w.lhs = lhs;
                    w.rhs = rhs;
                }
            }
            None => {
                *slot = Some(Worst {
                    excess,
                    lhs,
                    rhs,
                    count: 1,
                })
            }
        }
    }

    fn merge(&mut self, other: Log) {
        for (mine, theirs) in self.worst.iter_mut().zip(other.worst) {
            match (mine.as_mut(), theirs) {
                (Some(m), Some(t)) => {
                    m.count += t.count;
                    if t.excess > m.excess {
                        m.excess = t.excess;
                        m.lhs = t.lhs;
                        m.rhs = t.rhs;
                    }
                }
                (None, Some(t)) => *mine = Some(t),
                _ => {}
            }
        }
    }

    fn into_report(self, seed: u64, trials: usize) -> VerifyReport {
        let checks: Vec<CheckResult> = CHECKS
            .iter()
            .zip(self.worst)
            .map(|(&(name, relation, tolerance), w)| {
                let w = w.unwrap_or(Worst {
                    excess: f64::NEG_INFINITY,
                    lhs: 0.0,
                    rhs: 0.0,
                    count: 0,
                });
                CheckResult {
                    name: name.to_string(),
                    relation,
                    passed: w.excess <= 0.0,
                    lhs: w.lhs,
                    rhs: w.rhs,
                    tolerance,
                    observations: w.count,
                }
            })
            .collect();
        VerifyReport {
            seed,
            trials,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

fn stirling_check(log: &mut Log) -> Result<()> {
    for big_n in 1..=8 {
        for n in 1..=big_n {
            let counted = enumerate_partitions(big_n, n)?.len() as f64;
            log.record("stirling_enumeration", stirling2(big_n, n)? as f64, counted);
        }
    }
    Ok(())
}

/// An axis name not present in `dist`, starting from `base`.
fn fresh_name(dist: &JointDistribution, base: &str) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while dist.axis_index(&name).is_some() {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

/// A prefix no axis name of `dist` starts with.
fn fresh_prefix(dist: &JointDistribution, base: &str) -> String {
    let mut prefix = base.to_string();
    let mut k = 0;
    while dist.axes().iter().any(|a| a.name().starts_with(&prefix)) {
        k += 1;
        prefix = format!("{base}{k}_");
    }
    prefix
}

/// A random bipartition `(a, b)` of the axes (requires at least two axes).
fn random_bipartition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Vec<usize>, Vec<usize>) {
    loop {
        let mask: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let a: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
        let b: Vec<usize> = (0..n).filter(|&i| !mask[i]).collect();
        if !a.is_empty() && !b.is_empty() {
            return (a, b);
        }
    }
}

fn trial<R: Rng + ?Sized>(dist: &JointDistribution, rng: &mut R, log: &mut Log) -> Result<()> {
    let n = dist.axis_count();
    let tc = total_correlation(dist);
    let joint_entropy = shannon_entropy(dist);
    let singles = Partition::singletons(n);

    let dec = entropy_decomposition(dist, &singles)?;
    log.record("tc_entropy_decomposition", tc, dec.information());
    log.record("nonnegativity", -joint_entropy, 0.0);
    log.record("nonnegativity", -tc, 0.0);
    log.record(
        "singleton_npi_eq_tc",
        npartite_information(dist, &singles)?,
        tc,
    );

    let pm = dist.product_marginal(&singles)?;
    log.record("independent_tc_zero", total_correlation(&pm), 0.0);

    // every partition of the axes
    let partitions = if n <= 6 {
        enumerate_all_partitions(n)?
    } else {
        vec![singles.clone()]
    };
    for p in &partitions {
        let npi = npartite_information(dist, p)?;
        log.record("npi_le_tc", npi, tc);
        log.record("nonnegativity", -npi, 0.0);
        log.record(
            "npi_entropy_decomposition",
            npi,
            entropy_decomposition(dist, p)?.information(),
        );
        if p.block_count() >= 2 && p.block_count() <= 5 {
            for order in permutations(p.block_count()) {
                let sum: f64 = chain_rule_terms(dist, &p.reordered(&order)?)?.iter().sum();
                log.record("chain_rule", sum, npi);
            }
        }
    }

    if n <= 5 {
        let all: Vec<usize> = (0..n).collect();
        for tree in full_branch_trees(&all) {
            log.record("watanabe_full_trees", watanabe_sum(dist, &tree)?, tc);
        }
        for tree in branch_trees(&all) {
            let npi = npartite_information(dist, &tree.leaf_partition(n)?)?;
            log.record("watanabe_partial_trees", watanabe_sum(dist, &tree)?, npi);
        }
    }

    // mutual information between a random bipartition
    let (a, b) = random_bipartition(rng, n);
    let mi = mutual_information(dist, &a, &b)?;
    log.record("nonnegativity", -mi, 0.0);
    log.record("mi_upper_bound", mi, mi_upper_bound(dist, &a, &b)?);

    // I[A; B1 B2] = I[A; B2] + I[A; B1 | B2] whenever B splits
    if b.len() >= 2 {
        let cut = rng.random_range(1..b.len());
        let (b1, b2) = b.split_at(cut);
        let lhs = conditional_mutual_information(dist, &a, b2, &[])?
            + conditional_mutual_information(dist, &a, b1, b2)?;
        log.record("cmi_chain_rule", lhs, mi);
        log.record(
            "nonnegativity",
            -conditional_mutual_information(dist, &a, b1, b2)?,
            0.0,
        );
    }

    // data processing on block a against b
    let name = fresh_name(dist, "f");
    let stat = random::statistic(rng, dist, a.clone(), &name, 4)?;
    let pushed = apply_statistic(dist, &stat, true)?;
    let out = pushed.axis_index(&name).expect("statistic axis");
    let rest: Vec<usize> = (0..pushed.axis_count()).filter(|&i| i != out).collect();
    log.record(
        "data_processing",
        mutual_information(&pushed, &[out], &rest)?,
        mi,
    );

    // statistics applied block by block never raise the n-partite information
    let p = &partitions[rng.random_range(0..partitions.len())];
    let stats = p
        .blocks()
        .iter()
        .enumerate()
        .map(|(k, block)| {
            random::statistic(
                rng,
                dist,
                block.clone(),
                &fresh_name(dist, &format!("g{k}_")),
                4,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let chain = npartite_processing_chain(dist, p, &stats)?;
    for w in chain.windows(2) {
        log.record("npartite_processing_chain", w[1], w[0]);
    }

    // merging the first two blocks of a random partition with >= 3 blocks
    let wide: Vec<&Partition> = partitions.iter().filter(|p| p.block_count() >= 3).collect();
    if !wide.is_empty() {
        let p = wide[rng.random_range(0..wide.len())];
        let merged_block = [p.blocks()[0].clone(), p.blocks()[1].clone()].concat();
        let stat = random::statistic(rng, dist, merged_block.clone(), &fresh_name(dist, "h"), 6)?;
        let processed = joint_processed_information(dist, p, &stat)?;
        let npi = npartite_information(dist, p)?;
        let mut coarse_blocks = vec![merged_block];
        coarse_blocks.extend_from_slice(&p.blocks()[2..]);
        let coarse = npartite_information(dist, &Partition::new(coarse_blocks, n)?)?;
        log.record("joint_processing", processed, npi);
        log.record("joint_processing_coarse_between", processed, coarse);
        log.record("joint_processing_coarse_between", coarse, npi);
    }

    // TC is additive over independent subsystems
    let cards = random::shape(rng, 1, 2, 3);
    let other = random::distribution(rng, &fresh_prefix(dist, "y"), &cards)?;
    let product = dist.product_independent(&other)?;
    log.record(
        "subsystem_additivity",
        total_correlation(&product),
        tc + total_correlation(&other),
    );

    // relabeling an axis leaves every functional bit-identical
    let axis = rng.random_range(0..n);
    let card = dist.axes()[axis].cardinality();
    let perm = random::permutation(rng, card);
    let relabeled = dist.relabel(axis, perm.iter().map(|i| format!("r{i}")).collect())?;
    log.record("relabel_invariance", total_correlation(&relabeled), tc);
    log.record(
        "relabel_invariance",
        shannon_entropy(&relabeled),
        joint_entropy,
    );
    log.record(
        "relabel_invariance",
        mutual_information(&relabeled, &a, &b)?,
        mi,
    );
    log.record(
        "relabel_invariance",
        npartite_information(&relabeled, p)?,
        npartite_information(dist, p)?,
    );

    // an independent noise axis leaves I[A; B] unchanged
    let noise_card = rng.random_range(2..=3);
    let noise = random::distribution(rng, &fresh_prefix(dist, "noise"), &[noise_card])?;
    let noisy = dist.product_independent(&noise)?;
    log.record(
        "noise_invariance",
        conditional_mutual_information(&noisy, &a, &b, &[])?,
        mi,
    );

    // a copy of a function of A, added to A, leaves I[A; B] unchanged
    let name = fresh_name(dist, "copy");
    let redundant = dist.embed_statistic(&random::statistic(rng, dist, a.clone(), &name, 4)?)?;
    let mut a_plus = a.clone();
    a_plus.push(redundant.axis_index(&name).expect("embedded axis"));
    log.record(
        "redundancy_invariance",
        mutual_information(&redundant, &a_plus, &b)?,
        mi,
    );

    bayes_checks(dist, rng, log)?;
    maxent_checks(dist, rng, log)?;
    Ok(())
}

fn bayes_checks<R: Rng + ?Sized>(
    dist: &JointDistribution,
    rng: &mut R,
    log: &mut Log,
) -> Result<()> {
    let axis = rng.random_range(0..dist.axis_count());
    let ax: &Axis = &dist.axes()[axis];
    let label_pos = rng.random_range(0..ax.cardinality());
    let others: Vec<usize> = (0..dist.axis_count()).filter(|&i| i != axis).collect();
    let order: Vec<usize> = others.iter().copied().chain([axis]).collect();
    // column normalization: p(rest, y) / sum_rest p(rest, y)
    let table = dist.marginal_probs(&order)?;
    let card = ax.cardinality();
    let column: Vec<f64> = table
        .iter()
        .skip(label_pos)
        .step_by(card)
        .copied()
        .collect();
    let mass: f64 = column.iter().sum();
    if mass <= 0.0 {
        return Ok(());
    }
    let post = crate::maxent::bayes_update(dist, axis, &ax.labels()[label_pos])?;
    for (p, c) in post.probs().iter().zip(&column) {
        log.record("bayes_column_normalization", *p, c / mass);
    }
    Ok(())
}

fn maxent_checks<R: Rng + ?Sized>(
    dist: &JointDistribution,
    rng: &mut R,
    log: &mut Log,
) -> Result<()> {
    // targets taken from a random fully supported distribution are attainable
    let witness = random::simplex(rng, dist.cell_count());
    let k = rng.random_range(1..=2);
    let constraints = (0..k)
        .map(|_| {
            let values: Vec<f64> = (0..dist.cell_count())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let target = values.iter().zip(&witness).map(|(f, w)| f * w).sum();
            MomentConstraint::new(values, target)
        })
        .collect::<Result<Vec<_>>>()?;
    let options = SolverOptions::default();
    let result = maxent_update(dist, &constraints, options)?;
    log.record("maxent_residual", result.max_residual(), options.tolerance);
    // log(p/q) + sum_k beta_k f_k is the same constant on every cell
    let offsets: Vec<f64> = (0..dist.cell_count())
        .filter(|&i| dist.probs()[i] > 0.0)
        .map(|i| {
            (result.posterior.probs()[i] / dist.probs()[i]).ln()
                + constraints
                    .iter()
                    .zip(&result.multipliers)
                    .map(|(c, b)| b * c.values()[i])
                    .sum::<f64>()
        })
        .collect();
    for o in &offsets[1..] {
        log.record("maxent_gibbs_form", *o, offsets[0]);
    }
    Ok(())
}
