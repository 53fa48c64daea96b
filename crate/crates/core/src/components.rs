//! The component pool: Cluster Optimisation (CO), Insertion Hill Climber
//! (IHC), Order Mutation (OM) and Vertex Mutation (VM).
//!
//! Every component mutates a [`Solution`] in place and reports whether the
//! tour got strictly shorter.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::instance::Instance;
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    /// Cluster Optimisation: optimal vertex selection for the current order.
    CO,
    /// Insertion Hill Climber: one random relocation, kept only if improving.
    IHC,
    /// Order Mutation: one random relocation, always kept.
    OM,
    /// Vertex Mutation: one random vertex replacement, always kept.
    VM,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; 4] = [
        ComponentKind::CO,
        ComponentKind::IHC,
        ComponentKind::OM,
        ComponentKind::VM,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::CO => "CO",
            ComponentKind::IHC => "IHC",
            ComponentKind::OM => "OM",
            ComponentKind::VM => "VM",
        }
    }

    /// Whether the component can improve a solution deterministically rather
    /// than only by chance.
    pub fn is_hill_climber(self) -> bool {
        matches!(self, ComponentKind::CO | ComponentKind::IHC)
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComponentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ComponentKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| s.to_string())
    }
}

/// Result of one component application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentOutcome {
    pub improved: bool,
    pub cost_delta: i64,
}

impl ComponentOutcome {
    pub fn from_delta(cost_delta: i64) -> Self {
        ComponentOutcome {
            improved: cost_delta < 0,
            cost_delta,
        }
    }

    pub const UNCHANGED: ComponentOutcome = ComponentOutcome {
        improved: false,
        cost_delta: 0,
    };
}

/// Scratch buffers for the layered shortest-path pass of CO, reused across
/// calls.
#[derive(Debug, Default, Clone)]
pub struct ClusterOptimiser {
    order: Vec<usize>,
    /// Cheapest path cost from the root node to each node of the current layer.
    dist: Vec<i64>,
    /// Predecessor node on that path, indexed by node.
    pred: Vec<usize>,
    best_selection: Vec<usize>,
}

impl ClusterOptimiser {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces the vertex selection with a cheapest one for the current
    /// cluster order. The order itself is left untouched.
    pub fn apply(&mut self, instance: &Instance, solution: &mut Solution) -> ComponentOutcome {
        let m = solution.m();
        if m < 2 {
            return ComponentOutcome::UNCHANGED;
        }
        let n = instance.n();
        let root = (0..m)
            .min_by_key(|&c| instance.cluster(c).len())
            .expect("non-empty instance");
        self.order.clear();
        self.order.extend(solution.order_from(root));
        self.dist.resize(n, 0);
        self.pred.resize(n, 0);
        self.best_selection.resize(m, 0);

        let mut best = i64::MAX;
        for &r in instance.cluster(root) {
            for &v in instance.cluster(self.order[1]) {
                self.dist[v] = instance.dist(r, v);
                self.pred[v] = r;
            }
            for w in self.order.windows(2).skip(1) {
                let (from, to) = (instance.cluster(w[0]), instance.cluster(w[1]));
                for &v in to {
                    let mut cheapest = i64::MAX;
                    let mut via = from[0];
                    for &u in from {
                        let d = self.dist[u] + instance.dist(u, v);
                        if d < cheapest {
                            cheapest = d;
                            via = u;
                        }
                    }
                    self.dist[v] = cheapest;
                    self.pred[v] = via;
                }
            }
            let last = self.order[m - 1];
            let (mut closing, mut end) = (i64::MAX, 0);
            for &u in instance.cluster(last) {
                let d = self.dist[u] + instance.dist(u, r);
                if d < closing {
                    closing = d;
                    end = u;
                }
            }
            if closing < best {
                best = closing;
                let mut v = end;
                for &c in self.order[1..].iter().rev() {
                    self.best_selection[c] = v;
                    v = self.pred[v];
                }
                self.best_selection[root] = r;
            }
        }

        let delta = best - solution.cost();
        if delta < 0 {
            solution.set_selection(&self.best_selection, best);
            ComponentOutcome::from_delta(delta)
        } else {
            ComponentOutcome::UNCHANGED
        }
    }
}

/// One-shot CO without reusable buffers.
pub fn cluster_optimisation(instance: &Instance, solution: &mut Solution) -> ComponentOutcome {
    ClusterOptimiser::new().apply(instance, solution)
}

/// Draws a uniformly random cluster and a uniformly random anchor among the
/// `m - 2` clusters after which it could be genuinely reinserted.
pub fn draw_relocation<R: Rng + ?Sized>(solution: &Solution, rng: &mut R) -> (usize, usize) {
    let m = solution.m();
    debug_assert!(m >= 3);
    let c = rng.random_range(0..m);
    let p = solution.prev(c);
    let (lo, hi) = if c < p { (c, p) } else { (p, c) };
    let mut after = rng.random_range(0..m - 2);
    if after >= lo {
        after += 1;
    }
    if after >= hi {
        after += 1;
    }
    (c, after)
}

pub fn insertion_hill_climber<R: Rng + ?Sized>(
    instance: &Instance,
    solution: &mut Solution,
    rng: &mut R,
) -> ComponentOutcome {
    if solution.m() < 3 {
        return ComponentOutcome::UNCHANGED;
    }
    let (c, after) = draw_relocation(solution, rng);
    match solution.relocate_delta(instance, c, after) {
        Some(delta) if delta < 0 => {
            solution.apply_relocate(c, after, delta);
            ComponentOutcome::from_delta(delta)
        }
        _ => ComponentOutcome::UNCHANGED,
    }
}

pub fn order_mutation<R: Rng + ?Sized>(
    instance: &Instance,
    solution: &mut Solution,
    rng: &mut R,
) -> ComponentOutcome {
    if solution.m() < 3 {
        return ComponentOutcome::UNCHANGED;
    }
    let (c, after) = draw_relocation(solution, rng);
    let delta = solution
        .relocate(instance, c, after)
        .expect("drawn anchors are never no-op placements");
    ComponentOutcome::from_delta(delta)
}

pub fn vertex_mutation<R: Rng + ?Sized>(
    instance: &Instance,
    solution: &mut Solution,
    rng: &mut R,
) -> ComponentOutcome {
    let c = rng.random_range(0..solution.m());
    let members = instance.cluster(c);
    let v = members[rng.random_range(0..members.len())];
    let delta = solution
        .vertex_swap(instance, c, v)
        .expect("replacement drawn from the same cluster");
    ComponentOutcome::from_delta(delta)
}

/// Applies any component, reusing `optimiser` for CO.
pub fn apply_component<R: Rng + ?Sized>(
    kind: ComponentKind,
    instance: &Instance,
    solution: &mut Solution,
    optimiser: &mut ClusterOptimiser,
    rng: &mut R,
) -> ComponentOutcome {
    match kind {
        ComponentKind::CO => optimiser.apply(instance, solution),
        ComponentKind::IHC => insertion_hill_climber(instance, solution, rng),
        ComponentKind::OM => order_mutation(instance, solution, rng),
        ComponentKind::VM => vertex_mutation(instance, solution, rng),
    }
}
