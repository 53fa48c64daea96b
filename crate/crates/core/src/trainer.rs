//! Automated configuration generation.
//!
//! Candidate configurations are enumerated from the component pool, each is
//! run once on every training instance, objective values are normalised per
//! instance against the minimum (P0) and median (P50) over all candidates,
//! and the candidate with the smallest sum of normalised values wins.

use std::collections::HashSet;
use std::fmt::Write as _;

use itertools::Itertools;
use log::warn;
use rayon::prelude::*;

use crate::cmcs::{self, Budget, Configuration, Transition};
use crate::components::ComponentKind;
use crate::instance::Instance;
use crate::seed::{derive_seed, rng_from_seed};
use crate::solution::Solution;

/// Number of deterministic configurations over `k`-subsets of a pool of
/// `pool` components, counting every start choice: `C(pool, k) · k · k^(2k)`.
pub fn raw_space_size(pool: usize, k: usize) -> u64 {
    let subsets = (0..pool).combinations(k).count() as u64;
    subsets * k as u64 * (k as u64).pow(2 * k as u32)
}

/// Every deterministic configuration over `k`-subsets of `pool`, unfiltered,
/// in enumeration order.
pub fn enumerate_raw(pool: &[ComponentKind], k: usize) -> impl Iterator<Item = Configuration> + '_ {
    let mut sorted = pool.to_vec();
    sorted.sort();
    sorted.dedup();
    let tables = (k as u64).pow(2 * k as u32);
    sorted
        .into_iter()
        .combinations(k)
        .flat_map(move |components| {
            (0..k).flat_map(move |start| {
                let components = components.clone();
                (0..tables).map(move |code| {
                    // base-k digits: first k are improved successors, rest unimproved
                    let mut digits = Vec::with_capacity(2 * k);
                    let mut rest = code;
                    for _ in 0..2 * k {
                        digits.push((rest % k as u64) as usize);
                        rest /= k as u64;
                    }
                    Configuration::deterministic(
                        "",
                        components.clone(),
                        start,
                        &digits[..k],
                        &digits[k..],
                    )
                })
            })
        })
}

/// Whether a configuration passes the structural filter: every component is
/// reachable from the start, and at least one hill climber (CO or IHC) is
/// present.
pub fn is_meaningful(config: &Configuration) -> bool {
    config.reachable().iter().all(|&r| r) && config.components.iter().any(|c| c.is_hill_climber())
}

fn canonical_key(
    config: &Configuration,
) -> (Vec<ComponentKind>, ComponentKind, Vec<ComponentKind>) {
    let target = |t: &Transition| match t {
        Transition::To(i) => config.components[*i],
        Transition::Weighted(_) => unreachable!("enumeration is deterministic"),
    };
    let succ = config
        .on_improved
        .iter()
        .chain(&config.on_unimproved)
        .map(target)
        .collect();
    (
        config.components.clone(),
        config.components[config.start],
        succ,
    )
}

/// Meaningful deterministic `k`-component configurations, named `cfgNNNN`
/// in a stable order.
pub fn enumerate_meaningful(pool: &[ComponentKind], k: usize) -> Vec<Configuration> {
    assert!(k >= 1 && k <= pool.len(), "k must be in 1..=pool size");
    let mut seen = HashSet::new();
    let mut out: Vec<Configuration> = enumerate_raw(pool, k)
        .filter(is_meaningful)
        .filter(|c| seen.insert(canonical_key(c)))
        .collect();
    for (i, c) in out.iter_mut().enumerate() {
        c.name = format!("cfg{:04}", i + 1);
    }
    out
}

/// How long each evaluation run may take.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalBudget {
    /// Wall-clock `alpha · n · m` seconds.
    Alpha(f64),
    /// Fixed iteration count, for reproducible runs.
    Iterations(u64),
}

impl EvalBudget {
    pub fn for_instance(self, instance: &Instance) -> Budget {
        match self {
            EvalBudget::Alpha(alpha) => Budget::from_alpha(instance, alpha),
            EvalBudget::Iterations(k) => Budget::Iterations(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationMatrix {
    pub configs: Vec<Configuration>,
    pub instances: Vec<String>,
    /// `values[c][i]`: best cost of configuration `c` on instance `i`.
    pub values: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub budget: EvalBudget,
    pub seed: u64,
    /// Runs per cell; the best result is recorded.
    pub repeats: usize,
    /// Worker threads; `0` means one per available core.
    pub threads: usize,
}

impl EvalOptions {
    pub fn new(budget: EvalBudget, seed: u64) -> Self {
        EvalOptions {
            budget,
            seed,
            repeats: 1,
            threads: 0,
        }
    }
}

/// Initial solution for `instance_idx` / `repeat`, shared by every
/// configuration so they all start from the same point.
pub fn initial_solution(
    instance: &Instance,
    seed: u64,
    instance_idx: usize,
    repeat: usize,
) -> Solution {
    let mut rng = rng_from_seed(derive_seed(seed, &[0, instance_idx as u64, repeat as u64]));
    Solution::random_initial(instance, &mut rng)
        .expect("training instances have at least 3 clusters")
}

/// Runs configuration `config_idx` on instance `instance_idx`, returning the
/// best cost over `repeats` runs.
pub fn evaluate_cell(
    config: &Configuration,
    config_idx: usize,
    instance: &Instance,
    instance_idx: usize,
    opts: &EvalOptions,
) -> i64 {
    (0..opts.repeats.max(1))
        .map(|r| {
            let init = initial_solution(instance, opts.seed, instance_idx, r);
            let mut rng = rng_from_seed(derive_seed(
                opts.seed,
                &[1, config_idx as u64, instance_idx as u64, r as u64],
            ));
            cmcs::run(
                config,
                instance,
                init,
                opts.budget.for_instance(instance),
                &mut rng,
            )
            .best_cost
        })
        .min()
        .expect("at least one repeat")
}

fn thread_pool(threads: usize) -> rayon::ThreadPool {
    let threads = if threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        threads
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Evaluates every configuration on every instance. Cells are independent
/// and run in parallel; the result does not depend on scheduling.
pub fn evaluate(
    configs: &[Configuration],
    instances: &[Instance],
    opts: &EvalOptions,
) -> EvaluationMatrix {
    let cells: Vec<(usize, usize)> = (0..configs.len())
        .cartesian_product(0..instances.len())
        .collect();
    let results: Vec<i64> = thread_pool(opts.threads).install(|| {
        cells
            .par_iter()
            .map(|&(c, i)| evaluate_cell(&configs[c], c, &instances[i], i, opts))
            .collect()
    });
    let values = results
        .chunks(instances.len().max(1))
        .map(<[i64]>::to_vec)
        .collect();
    EvaluationMatrix {
        configs: configs.to_vec(),
        instances: instances.iter().map(|i| i.name().to_string()).collect(),
        values,
    }
}

/// Per-instance normalisation of an evaluation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    /// `values[c][i]`; zero in degenerate columns.
    pub values: Vec<Vec<f64>>,
    pub p0: Vec<i64>,
    pub p50: Vec<i64>,
    /// Columns with `P50 == P0`, excluded from quality sums.
    pub degenerate: Vec<bool>,
}

/// Nearest-rank percentile `p` (0..=100) of `sorted`; for the median of an
/// even count this is the lower of the two middle elements.
pub fn nearest_rank(sorted: &[i64], p: u32) -> i64 {
    assert!(!sorted.is_empty());
    let rank = (p as usize * sorted.len()).div_ceil(100).max(1);
    sorted[rank - 1]
}

pub fn normalize(values: &[Vec<i64>]) -> Normalized {
    let configs = values.len();
    let instances = values.first().map_or(0, Vec::len);
    let mut out = Normalized {
        values: vec![vec![0.0; instances]; configs],
        p0: Vec::with_capacity(instances),
        p50: Vec::with_capacity(instances),
        degenerate: Vec::with_capacity(instances),
    };
    for i in 0..instances {
        let mut column: Vec<i64> = values.iter().map(|row| row[i]).collect();
        column.sort_unstable();
        let (p0, p50) = (nearest_rank(&column, 0), nearest_rank(&column, 50));
        out.p0.push(p0);
        out.p50.push(p50);
        out.degenerate.push(p50 == p0);
        if p50 == p0 {
            warn!("instance column {i} is degenerate (P0 = P50 = {p0}); excluded from quality");
            continue;
        }
        let scale = (p50 - p0) as f64;
        for (c, row) in values.iter().enumerate() {
            out.values[c][i] = (row[i] - p0) as f64 / scale;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingReport {
    pub matrix: EvaluationMatrix,
    pub normalized: Normalized,
    pub quality: Vec<f64>,
    pub winner: usize,
    pub budget: EvalBudget,
}

impl TrainingReport {
    pub fn winner(&self) -> &Configuration {
        &self.matrix.configs[self.winner]
    }

    /// Tab-separated table: one row per configuration with its quality and
    /// per-instance raw and normalised values, followed by P0 and P50 rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        match self.budget {
            EvalBudget::Alpha(a) => {
                let _ = writeln!(out, "# budget alpha {a:e}");
            }
            EvalBudget::Iterations(k) => {
                let _ = writeln!(out, "# budget iterations {k}");
            }
        }
        let _ = writeln!(out, "# winner {}", self.winner().name);
        out.push_str("config\tdescription\tq");
        for name in &self.matrix.instances {
            let _ = write!(out, "\traw:{name}\tnorm:{name}");
        }
        out.push('\n');
        for (c, config) in self.matrix.configs.iter().enumerate() {
            let _ = write!(
                out,
                "{}\t{}\t{:.6}",
                config.name,
                config.describe(),
                self.quality[c]
            );
            for i in 0..self.matrix.instances.len() {
                let _ = write!(out, "\t{}\t", self.matrix.values[c][i]);
                if self.normalized.degenerate[i] {
                    out.push('-');
                } else {
                    let _ = write!(out, "{:.6}", self.normalized.values[c][i]);
                }
            }
            out.push('\n');
        }
        for (label, row) in [("P0", &self.normalized.p0), ("P50", &self.normalized.p50)] {
            let _ = write!(out, "{label}\t-\t-");
            for v in row {
                let _ = write!(out, "\t{v}\t-");
            }
            out.push('\n');
        }
        out
    }
}

/// Sums normalised values per configuration and picks the minimum.
///
/// Equal quality is broken by the raw cost sum, then by position. With two
/// configurations the nearest-rank median equals the minimum, so every column
/// is degenerate and only the raw sums can separate them.
pub fn select(matrix: EvaluationMatrix, budget: EvalBudget) -> TrainingReport {
    assert!(!matrix.configs.is_empty(), "nothing to select from");
    let normalized = normalize(&matrix.values);
    let quality: Vec<f64> = normalized
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&normalized.degenerate)
                .filter(|(_, &d)| !d)
                .map(|(v, _)| v)
                .sum()
        })
        .collect();
    let raw_sums: Vec<i64> = matrix.values.iter().map(|row| row.iter().sum()).collect();
    let mut winner = 0;
    for (c, &q) in quality.iter().enumerate() {
        if q < quality[winner] || (q == quality[winner] && raw_sums[c] < raw_sums[winner]) {
            winner = c;
        }
    }
    TrainingReport {
        matrix,
        normalized,
        quality,
        winner,
        budget,
    }
}

/// Evaluates `configs` on `instances` and selects the winner.
pub fn train(
    configs: &[Configuration],
    instances: &[Instance],
    opts: &EvalOptions,
) -> TrainingReport {
    select(evaluate(configs, instances, opts), opts.budget)
}
