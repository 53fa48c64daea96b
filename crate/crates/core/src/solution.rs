//! GTSP solutions stored as a cyclic doubly-linked list over cluster indices
//! plus one selected node per cluster.
//!
//! The ordering and the vertex selection are kept separate, so relocating a
//! cluster and swapping its selected node are both O(1) splices with O(1)
//! cost deltas.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{SolutionError, Violation};
use crate::instance::Instance;

/// Smallest cluster count a solver accepts.
pub const MIN_CLUSTERS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    next: Vec<usize>,
    prev: Vec<usize>,
    chosen: Vec<usize>,
    cost: i64,
}

impl Solution {
    /// Builds a solution visiting clusters in `order` with the given
    /// cluster-indexed selection.
    pub fn from_order(
        instance: &Instance,
        order: &[usize],
        chosen: Vec<usize>,
    ) -> Result<Self, SolutionError> {
        let m = instance.m();
        if order.len() != m || chosen.len() != m {
            return Err(SolutionError::BadOrder(m));
        }
        let mut seen = vec![false; m];
        for &c in order {
            if c >= m || std::mem::replace(&mut seen[c], true) {
                return Err(SolutionError::BadOrder(m));
            }
        }
        for (c, &v) in chosen.iter().enumerate() {
            if v >= instance.n() || instance.cluster_of(v) != c {
                return Err(SolutionError::NotInCluster {
                    cluster: c,
                    node: v,
                });
            }
        }
        let mut next = vec![0; m];
        let mut prev = vec![0; m];
        for (i, &c) in order.iter().enumerate() {
            let s = order[(i + 1) % m];
            next[c] = s;
            prev[s] = c;
        }
        let mut sol = Solution {
            next,
            prev,
            chosen,
            cost: 0,
        };
        sol.cost = sol.recompute_cost(instance);
        Ok(sol)
    }

    /// Selects the first listed node of every cluster and visits the
    /// clusters in a uniformly random order.
    pub fn random_initial<R: Rng + ?Sized>(
        instance: &Instance,
        rng: &mut R,
    ) -> Result<Self, SolutionError> {
        let m = instance.m();
        if m < MIN_CLUSTERS {
            return Err(SolutionError::TooFewClusters(m));
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        let chosen = instance.clusters().iter().map(|c| c[0]).collect();
        Self::from_order(instance, &order, chosen)
    }

    pub fn m(&self) -> usize {
        self.next.len()
    }

    pub fn cost(&self) -> i64 {
        self.cost
    }

    #[inline]
    pub fn next(&self, c: usize) -> usize {
        self.next[c]
    }

    #[inline]
    pub fn prev(&self, c: usize) -> usize {
        self.prev[c]
    }

    #[inline]
    pub fn chosen(&self, c: usize) -> usize {
        self.chosen[c]
    }

    pub fn selection(&self) -> &[usize] {
        &self.chosen
    }

    /// Cluster sequence starting at `start`.
    pub fn order_from(&self, start: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.m());
        let mut c = start;
        loop {
            order.push(c);
            c = self.next[c];
            if c == start || order.len() > self.m() {
                break;
            }
        }
        order
    }

    /// Cluster sequence starting at cluster 0.
    pub fn order(&self) -> Vec<usize> {
        self.order_from(0)
    }

    /// Selected nodes in visiting order, starting at cluster 0.
    pub fn tour(&self) -> Vec<usize> {
        self.order().into_iter().map(|c| self.chosen[c]).collect()
    }

    fn recompute_cost(&self, instance: &Instance) -> i64 {
        (0..self.m())
            .map(|c| instance.dist(self.chosen[c], self.chosen[self.next[c]]))
            .sum()
    }

    /// Full recomputation of the tour length, including the closing edge.
    pub fn tour_cost(&self, instance: &Instance) -> Result<i64, SolutionError> {
        let violations: Vec<_> = self.structural_violations(instance).into_iter().collect();
        if !violations.is_empty() {
            return Err(SolutionError::Invalid(violations));
        }
        Ok(self.recompute_cost(instance))
    }

    fn structural_violations(&self, instance: &Instance) -> Vec<Violation> {
        let m = instance.m();
        let mut out = Vec::new();
        for (len, expected) in [self.next.len(), self.prev.len(), self.chosen.len()]
            .into_iter()
            .zip([m; 3])
        {
            if len != expected {
                out.push(Violation::WrongLength {
                    expected,
                    found: len,
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut links_ok = true;
        for c in 0..m {
            if self.next[c] >= m {
                out.push(Violation::SuccessorOutOfRange {
                    cluster: c,
                    succ: self.next[c],
                });
                links_ok = false;
            }
            if self.prev[c] >= m {
                out.push(Violation::PredecessorOutOfRange {
                    cluster: c,
                    pred: self.prev[c],
                });
                links_ok = false;
            }
        }
        if links_ok {
            for c in 0..m {
                if self.prev[self.next[c]] != c {
                    out.push(Violation::BrokenLink(c));
                }
            }
            let mut steps = 0;
            let mut c = 0;
            loop {
                c = self.next[c];
                steps += 1;
                if c == 0 || steps > m {
                    break;
                }
            }
            if steps != m {
                out.push(Violation::NotHamiltonian(steps));
            }
        }
        for (c, &v) in self.chosen.iter().enumerate() {
            if v >= instance.n() || instance.cluster_of(v) != c {
                out.push(Violation::ForeignSelection {
                    cluster: c,
                    node: v,
                });
            }
        }
        out
    }

    /// Checks every solution invariant, reporting all violations found.
    pub fn validate(&self, instance: &Instance) -> Result<(), Vec<Violation>> {
        let mut violations = self.structural_violations(instance);
        if violations.is_empty() {
            let actual = self.recompute_cost(instance);
            if actual != self.cost {
                violations.push(Violation::StaleCost {
                    cached: self.cost,
                    actual,
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Cost change of moving cluster `c` to sit immediately after `after`.
    ///
    /// Returns `None` when the placement leaves the tour unchanged
    /// (`after == c` or `after == prev[c]`).
    #[inline]
    pub fn relocate_delta(&self, instance: &Instance, c: usize, after: usize) -> Option<i64> {
        let p = self.prev[c];
        if after == c || after == p {
            return None;
        }
        let s = self.next[c];
        let a2 = self.next[after];
        let (vp, vc, vs) = (self.chosen[p], self.chosen[c], self.chosen[s]);
        let (va, va2) = (self.chosen[after], self.chosen[a2]);
        let removal = instance.dist(vp, vs) - instance.dist(vp, vc) - instance.dist(vc, vs);
        let insertion = instance.dist(va, vc) + instance.dist(vc, va2) - instance.dist(va, va2);
        Some(removal + insertion)
    }

    /// Moves cluster `c` after `after`, shifting the cached cost by `delta`
    /// as returned from [`relocate_delta`](Self::relocate_delta).
    pub fn apply_relocate(&mut self, c: usize, after: usize, delta: i64) {
        debug_assert!(after != c && after != self.prev[c]);
        let p = self.prev[c];
        let s = self.next[c];
        self.next[p] = s;
        self.prev[s] = p;
        let a2 = self.next[after];
        self.next[after] = c;
        self.prev[c] = after;
        self.next[c] = a2;
        self.prev[a2] = c;
        self.cost += delta;
    }

    /// Evaluates and applies a relocation, returning its delta. No-op
    /// placements return `None` and leave the solution untouched.
    pub fn relocate(&mut self, instance: &Instance, c: usize, after: usize) -> Option<i64> {
        let delta = self.relocate_delta(instance, c, after)?;
        self.apply_relocate(c, after, delta);
        Some(delta)
    }

    /// Cost change of selecting node `v` in cluster `c`.
    #[inline]
    pub fn vertex_swap_delta(
        &self,
        instance: &Instance,
        c: usize,
        v: usize,
    ) -> Result<i64, SolutionError> {
        if v >= instance.n() || instance.cluster_of(v) != c {
            return Err(SolutionError::NotInCluster {
                cluster: c,
                node: v,
            });
        }
        let old = self.chosen[c];
        let vp = self.chosen[self.prev[c]];
        let vs = self.chosen[self.next[c]];
        Ok(instance.dist(vp, v) + instance.dist(v, vs)
            - instance.dist(vp, old)
            - instance.dist(old, vs))
    }

    pub fn apply_vertex_swap(&mut self, c: usize, v: usize, delta: i64) {
        self.chosen[c] = v;
        self.cost += delta;
    }

    pub fn vertex_swap(
        &mut self,
        instance: &Instance,
        c: usize,
        v: usize,
    ) -> Result<i64, SolutionError> {
        let delta = self.vertex_swap_delta(instance, c, v)?;
        self.apply_vertex_swap(c, v, delta);
        Ok(delta)
    }

    /// Replaces the whole selection; the caller supplies the new cost.
    pub(crate) fn set_selection(&mut self, chosen: &[usize], cost: i64) {
        self.chosen.copy_from_slice(chosen);
        self.cost = cost;
    }

    /// Overwrites `self` with `other` without reallocating.
    pub fn copy_from(&mut self, other: &Solution) {
        self.next.clone_from(&other.next);
        self.prev.clone_from(&other.prev);
        self.chosen.clone_from(&other.chosen);
        self.cost = other.cost;
    }
}
