//! Exhaustive solvers for desk-scale instances, used as ground truth.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::OracleError;
use crate::instance::Instance;
use crate::solution::Solution;

/// Size bound for [`optimal_selection_for_order`].
pub const SELECTION_LIMIT: u128 = 1_000_000;
/// Size bound for [`global_optimum`].
pub const GLOBAL_LIMIT: u128 = 10_000_000;

fn selection_space(instance: &Instance) -> u128 {
    instance
        .clusters()
        .iter()
        .map(|c| c.len() as u128)
        .fold(1u128, |acc, s| acc.saturating_mul(s))
}

fn check_order(instance: &Instance, order: &[usize]) -> Result<(), OracleError> {
    let m = instance.m();
    let mut seen = vec![false; m];
    if order.len() != m
        || order
            .iter()
            .any(|&c| c >= m || std::mem::replace(&mut seen[c], true))
    {
        return Err(OracleError::BadOrder(m));
    }
    Ok(())
}

/// Tries every vertex selection for the fixed cluster `order` and returns the
/// cheapest cost with its cluster-indexed selection.
pub fn optimal_selection_for_order(
    instance: &Instance,
    order: &[usize],
) -> Result<(i64, Vec<usize>), OracleError> {
    check_order(instance, order)?;
    let size = selection_space(instance);
    if size > SELECTION_LIMIT {
        return Err(OracleError::TooLarge {
            size,
            limit: SELECTION_LIMIT,
        });
    }
    Ok(best_selection(instance, order))
}

fn best_selection(instance: &Instance, order: &[usize]) -> (i64, Vec<usize>) {
    let m = order.len();
    let layers: Vec<&[usize]> = order.iter().map(|&c| instance.cluster(c)).collect();
    // odometer over positions in visiting order
    let mut digits = vec![0usize; m];
    let mut best = (i64::MAX, Vec::new());
    loop {
        let cost: i64 = (0..m)
            .map(|i| {
                let a = layers[i][digits[i]];
                let b = layers[(i + 1) % m][digits[(i + 1) % m]];
                instance.dist(a, b)
            })
            .sum();
        if cost < best.0 {
            let mut selection = vec![0; m];
            for (i, &c) in order.iter().enumerate() {
                selection[c] = layers[i][digits[i]];
            }
            best = (cost, selection);
        }
        let mut i = 0;
        loop {
            if i == m {
                return best;
            }
            digits[i] += 1;
            if digits[i] < layers[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Exact optimum over all cyclic cluster orders and vertex selections.
///
/// Cluster 0 is fixed first and mirror-image orders are skipped, so
/// `(m - 1)! / 2` orders are examined.
pub fn global_optimum(instance: &Instance) -> Result<(i64, Solution), OracleError> {
    let m = instance.m();
    let orders = (1..m as u128).product::<u128>().max(1);
    let size = orders.saturating_mul(selection_space(instance));
    if size > GLOBAL_LIMIT {
        return Err(OracleError::TooLarge {
            size,
            limit: GLOBAL_LIMIT,
        });
    }
    let candidates: Vec<Vec<usize>> = (1..m)
        .permutations(m - 1)
        .filter(|rest| rest.len() < 2 || rest[0] < rest[rest.len() - 1])
        .map(|rest| std::iter::once(0).chain(rest).collect())
        .collect();
    let (cost, order, selection) = candidates
        .into_par_iter()
        .enumerate()
        .map(|(i, order)| {
            let (cost, selection) = best_selection(instance, &order);
            (cost, i, order, selection)
        })
        .min_by_key(|(cost, i, _, _)| (*cost, *i))
        .map(|(cost, _, order, selection)| (cost, order, selection))
        .expect("at least one cluster order");
    let solution =
        Solution::from_order(instance, &order, selection).expect("oracle builds valid solutions");
    debug_assert_eq!(solution.cost(), cost);
    Ok((cost, solution))
}
