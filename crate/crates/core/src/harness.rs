//! Benchmark harness: runs configurations on a testbed under `alpha · n · m`
//! budgets and tabulates the best cost per configuration.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::cmcs::{self, compute_budget, format_seconds, Budget, Configuration};
use crate::instance::Instance;
use crate::seed::{derive_seed, rng_from_seed};
use crate::trainer::initial_solution;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    /// Best cost observed over every configuration and repeat.
    pub best: i64,
    pub budget_secs: f64,
    /// Best-of-repeats cost per configuration.
    pub costs: Vec<i64>,
}

impl BenchRow {
    /// Index of the strictly best configuration, or `None` on a tie.
    pub fn winner(&self) -> Option<usize> {
        let min = *self.costs.iter().min()?;
        let mut winners = self.costs.iter().enumerate().filter(|(_, &c)| c == min);
        let first = winners.next().map(|(i, _)| i);
        if winners.next().is_some() {
            None
        } else {
            first
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub configs: Vec<String>,
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    pub alpha: f64,
    pub repeats: usize,
    pub seed: u64,
    /// Force sequential timed runs.
    pub serial: bool,
    /// Replaces the wall-clock budget with a fixed iteration count.
    pub iterations: Option<u64>,
}

impl BenchOptions {
    pub fn new(alpha: f64, repeats: usize, seed: u64) -> Self {
        BenchOptions {
            alpha,
            repeats,
            seed,
            serial: false,
            iterations: None,
        }
    }
}

fn bench_instance(
    idx: usize,
    instance: &Instance,
    configs: &[Configuration],
    opts: &BenchOptions,
) -> BenchRow {
    let secs = compute_budget(instance.n(), instance.m(), opts.alpha);
    let budget = match opts.iterations {
        Some(k) => Budget::Iterations(k),
        None => Budget::seconds(secs),
    };
    let mut costs = vec![i64::MAX; configs.len()];
    // configurations take turns within a repeat so that timing drift hits
    // them evenly
    for r in 0..opts.repeats.max(1) {
        for (c, config) in configs.iter().enumerate() {
            let init = initial_solution(instance, opts.seed, idx, r);
            let mut rng =
                rng_from_seed(derive_seed(opts.seed, &[2, c as u64, idx as u64, r as u64]));
            let res = cmcs::run(config, instance, init, budget, &mut rng);
            costs[c] = costs[c].min(res.best_cost);
        }
    }
    BenchRow {
        instance: instance.name().to_string(),
        n: instance.n(),
        m: instance.m(),
        best: costs.iter().copied().min().unwrap_or(i64::MAX),
        budget_secs: secs,
        costs,
    }
}

/// Benchmarks `configs` on every instance. Instances run in parallel unless
/// `opts.serial` is set; the configurations of one instance always run
/// sequentially.
pub fn run_bench(
    instances: &[Instance],
    configs: &[Configuration],
    opts: &BenchOptions,
) -> BenchTable {
    let rows = if opts.serial {
        instances
            .iter()
            .enumerate()
            .map(|(i, inst)| bench_instance(i, inst, configs, opts))
            .collect()
    } else {
        instances
            .par_iter()
            .enumerate()
            .map(|(i, inst)| bench_instance(i, inst, configs, opts))
            .collect()
    };
    BenchTable {
        configs: configs.iter().map(|c| c.name.clone()).collect(),
        rows,
    }
}

impl BenchTable {
    /// Number of rows each configuration wins outright.
    pub fn win_counts(&self) -> Vec<usize> {
        let mut wins = vec![0; self.configs.len()];
        for row in &self.rows {
            if let Some(w) = row.winner() {
                wins[w] += 1;
            }
        }
        wins
    }

    /// Rows where configuration `a` is strictly better than `b`.
    pub fn strict_wins(&self, a: usize, b: usize) -> usize {
        self.rows.iter().filter(|r| r.costs[a] < r.costs[b]).count()
    }

    /// Machine-readable tab-separated form.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("instance\tn\tm\tbest\ttime");
        for c in &self.configs {
            let _ = write!(out, "\t{c}");
        }
        out.push_str("\twinner\n");
        for row in &self.rows {
            let _ = write!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                row.instance,
                row.n,
                row.m,
                row.best,
                format_seconds(row.budget_secs)
            );
            for c in &row.costs {
                let _ = write!(out, "\t{c}");
            }
            let winner = row.winner().map_or("-", |w| self.configs[w].as_str());
            let _ = writeln!(out, "\t{winner}");
        }
        out
    }

    /// Parses [`to_tsv`](Self::to_tsv) output. Budgets come back at the
    /// printed four-decimal precision.
    pub fn from_tsv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().ok_or("empty table")?.split('\t').collect();
        if header.len() < 7 || header[..5] != ["instance", "n", "m", "best", "time"] {
            return Err("unexpected table header".into());
        }
        if header.last() != Some(&"winner") {
            return Err("missing winner column".into());
        }
        let configs: Vec<String> = header[5..header.len() - 1]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let f: Vec<&str> = line.split('\t').collect();
            let bad = |what: &str| format!("row {}: bad {what}", i + 1);
            if f.len() != header.len() {
                return Err(bad("column count"));
            }
            let costs = f[5..f.len() - 1]
                .iter()
                .map(|s| s.parse::<i64>().map_err(|_| bad("cost")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(BenchRow {
                instance: f[0].to_string(),
                n: f[1].parse().map_err(|_| bad("n"))?,
                m: f[2].parse().map_err(|_| bad("m"))?,
                best: f[3].parse().map_err(|_| bad("best"))?,
                budget_secs: f[4].parse().map_err(|_| bad("time"))?,
                costs,
            });
        }
        Ok(BenchTable { configs, rows })
    }

    /// Aligned plain-text table with the row winner marked by `*` and a win
    /// summary.
    pub fn render(&self) -> String {
        let mut out = format!("{:<12} {:>7} {:>9}", "Instance", "Best", "Time, sec");
        for c in &self.configs {
            let _ = write!(out, " {c:>9}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(
                out,
                "{:<12} {:>7} {:>9}",
                row.instance,
                row.best,
                format_seconds(row.budget_secs)
            );
            let winner = row.winner();
            for (i, cost) in row.costs.iter().enumerate() {
                let mark = if winner == Some(i) { "*" } else { " " };
                let _ = write!(out, " {:>8}{mark}", cost);
            }
            out.push('\n');
        }
        let wins = self.win_counts();
        let summary: Vec<String> = self
            .configs
            .iter()
            .zip(&wins)
            .map(|(c, w)| format!("{c} {w}"))
            .collect();
        let ties = self.rows.len() - wins.iter().sum::<usize>();
        let _ = writeln!(out, "wins: {}, ties {ties}", summary.join(", "));
        out
    }
}
