//! Self-checks on desk-scale instances: CO against the exhaustive oracle,
//! incremental deltas against full recomputation, solution invariants under
//! random component sequences, and CMCS against the global optimum.

use std::fmt;

use rand::Rng;

use crate::cmcs::{self, conf2, Budget};
use crate::components::{
    apply_component, cluster_optimisation, insertion_hill_climber, ClusterOptimiser, ComponentKind,
};
use crate::instance::Instance;
use crate::oracle;
use crate::seed::{derive_seed, rng_from_seed};
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Random relocations and vertex swaps, each delta compared with a full
/// recomputation. Returns the number of mismatches.
fn delta_mismatches<R: Rng>(instance: &Instance, trials: usize, rng: &mut R) -> usize {
    let mut sol = Solution::random_initial(instance, rng).expect("m >= 3");
    let m = instance.m();
    let mut bad = 0;
    for _ in 0..trials {
        let before = sol.tour_cost(instance).expect("valid");
        let c = rng.random_range(0..m);
        let delta = if rng.random_bool(0.5) {
            let after = rng.random_range(0..m);
            match sol.relocate(instance, c, after) {
                Some(d) => d,
                None => continue,
            }
        } else {
            let members = instance.cluster(c);
            let v = members[rng.random_range(0..members.len())];
            sol.vertex_swap(instance, c, v).expect("member")
        };
        let after = sol.tour_cost(instance).expect("valid");
        if after - before != delta || sol.cost() != after {
            bad += 1;
        }
    }
    bad
}

/// Runs every check on one instance.
pub fn verify_instance(instance: &Instance, seed: u64, report: &mut VerifyReport) {
    let name = instance.name();
    if instance.m() < 3 {
        report.push(format!("{name}: size"), false, "fewer than 3 clusters");
        return;
    }
    let mut rng = rng_from_seed(seed);

    let bad = delta_mismatches(instance, 1000, &mut rng);
    report.push(
        format!("{name}: incremental deltas"),
        bad == 0,
        format!("{bad} mismatches in 1000 moves"),
    );

    let mut sol = Solution::random_initial(instance, &mut rng).expect("m >= 3");
    let mut optimiser = ClusterOptimiser::new();
    let mut invalid = 0;
    let mut flag_errors = 0;
    for _ in 0..2000 {
        let kind = ComponentKind::ALL[rng.random_range(0..4)];
        let before = sol.cost();
        let out = apply_component(kind, instance, &mut sol, &mut optimiser, &mut rng);
        if sol.validate(instance).is_err() {
            invalid += 1;
        }
        if out.improved != (sol.cost() < before) || sol.cost() - before != out.cost_delta {
            flag_errors += 1;
        }
    }
    report.push(
        format!("{name}: component invariants"),
        invalid == 0 && flag_errors == 0,
        format!("{invalid} invalid states, {flag_errors} wrong outcomes in 2000 applications"),
    );

    let mut increases = 0;
    let mut last = sol.cost();
    for _ in 0..10_000 {
        insertion_hill_climber(instance, &mut sol, &mut rng);
        if sol.cost() > last {
            increases += 1;
        }
        last = sol.cost();
    }
    report.push(
        format!("{name}: IHC monotone"),
        increases == 0,
        format!("{increases} increases in 10000 steps"),
    );

    let mut co_checked = 0;
    let mut co_bad = 0;
    for _ in 0..10 {
        let mut s = Solution::random_initial(instance, &mut rng).expect("m >= 3");
        for _ in 0..2 * instance.m() {
            crate::components::order_mutation(instance, &mut s, &mut rng);
        }
        let order = s.order();
        match oracle::optimal_selection_for_order(instance, &order) {
            Ok((best, _)) => {
                cluster_optimisation(instance, &mut s);
                co_checked += 1;
                if s.cost() != best {
                    co_bad += 1;
                }
            }
            Err(_) => break,
        }
    }
    if co_checked > 0 {
        report.push(
            format!("{name}: CO exact"),
            co_bad == 0,
            format!("{co_bad} of {co_checked} orders differ from exhaustive search"),
        );
    }

    if let Ok((opt, _)) = oracle::global_optimum(instance) {
        let init = Solution::random_initial(instance, &mut rng).expect("m >= 3");
        let res = cmcs::run(
            &conf2(),
            instance,
            init,
            Budget::Iterations(100_000),
            &mut rng,
        );
        report.push(
            format!("{name}: optimum bound"),
            res.best_cost >= opt && (!integer_manhattan(instance) || opt % 2 == 0),
            format!("global optimum {opt}, conf2 reached {}", res.best_cost),
        );
    }
}

fn integer_manhattan(instance: &Instance) -> bool {
    instance.weight_type() == crate::instance::EdgeWeightType::Manhattan
        && instance.coords().is_some()
}

/// Checks `count` random instances with `m` clusters of up to
/// `max_cluster_size` nodes each.
pub fn verify_random(count: usize, m: usize, max_cluster_size: usize, seed: u64) -> VerifyReport {
    let mut report = VerifyReport::default();
    for k in 0..count {
        let inst =
            crate::gen::generate_bounded(m, max_cluster_size, derive_seed(seed, &[k as u64]));
        verify_instance(&inst, derive_seed(seed, &[k as u64, 1]), &mut report);
    }
    report
}
