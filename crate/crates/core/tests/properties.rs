use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use wopgtsp::cmcs::{self, conf1, conf2, Budget};
use wopgtsp::components::{
    apply_component, cluster_optimisation, draw_relocation, insertion_hill_climber, order_mutation,
    ClusterOptimiser, ComponentKind,
};
use wopgtsp::gen::{generate, generate_bounded, GeneratorParams};
use wopgtsp::seed::rng_from_seed;
use wopgtsp::trainer::{normalize, select, EvalBudget, EvaluationMatrix};
use wopgtsp::{gtsplib, oracle, Instance, Point, Solution};

fn small_instance() -> impl Strategy<Value = Instance> {
    (3usize..10, 1usize..5, any::<u64>())
        .prop_map(|(m, size, seed)| generate_bounded(m, size, seed))
}

fn warehouse_instance() -> impl Strategy<Value = Instance> {
    (3usize..20, 0usize..40, any::<u64>())
        .prop_map(|(m, extra, seed)| generate(GeneratorParams::new(m + extra, m, seed)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deltas_match_recomputation(inst in small_instance(), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let mut sol = Solution::random_initial(&inst, &mut rng).unwrap();
        for _ in 0..200 {
            let before = sol.cost();
            let c = rng.random_range(0..inst.m());
            let delta = if rng.random_bool(0.5) {
                match sol.relocate(&inst, c, rng.random_range(0..inst.m())) {
                    Some(d) => d,
                    None => continue,
                }
            } else {
                let members = inst.cluster(c);
                sol.vertex_swap(&inst, c, members[rng.random_range(0..members.len())]).unwrap()
            };
            let actual = sol.tour_cost(&inst).unwrap();
            prop_assert_eq!(actual - before, delta);
            prop_assert_eq!(sol.cost(), actual);
        }
    }

    #[test]
    fn components_keep_solutions_valid(inst in warehouse_instance(), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let mut sol = Solution::random_initial(&inst, &mut rng).unwrap();
        let mut optimiser = ClusterOptimiser::new();
        for _ in 0..100 {
            let kind = ComponentKind::ALL[rng.random_range(0..4)];
            let before = sol.cost();
            let out = apply_component(kind, &inst, &mut sol, &mut optimiser, &mut rng);
            prop_assert!(sol.validate(&inst).is_ok());
            prop_assert_eq!(out.cost_delta, sol.cost() - before);
            prop_assert_eq!(out.improved, sol.cost() < before);
            if kind.is_hill_climber() {
                prop_assert!(sol.cost() <= before);
            }
        }
    }

    #[test]
    fn links_are_mutually_inverse(inst in small_instance(), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let mut sol = Solution::random_initial(&inst, &mut rng).unwrap();
        for _ in 0..50 {
            order_mutation(&inst, &mut sol, &mut rng);
            for c in 0..inst.m() {
                prop_assert_eq!(sol.prev(sol.next(c)), c);
                prop_assert_eq!(sol.next(sol.prev(c)), c);
            }
            let mut order = sol.order();
            order.sort_unstable();
            prop_assert_eq!(order, (0..inst.m()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn integer_manhattan_tours_are_even(inst in warehouse_instance(), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        for _ in 0..10 {
            let mut sol = Solution::random_initial(&inst, &mut rng).unwrap();
            prop_assert_eq!(sol.cost() % 2, 0);
            order_mutation(&inst, &mut sol, &mut rng);
            prop_assert_eq!(sol.cost() % 2, 0);
        }
    }

    #[test]
    fn ihc_and_om_draw_the_same_move(inst in small_instance(), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let start = Solution::random_initial(&inst, &mut rng).unwrap();
        let (mut a, mut b) = (start.clone(), start.clone());
        let mut ra = rng_from_seed(seed ^ 1);
        let mut rb = rng_from_seed(seed ^ 1);
        let ihc = insertion_hill_climber(&inst, &mut a, &mut ra);
        let om = order_mutation(&inst, &mut b, &mut rb);
        prop_assert_eq!(ra.random::<u64>(), rb.random::<u64>());
        if om.cost_delta < 0 {
            prop_assert_eq!(ihc, om);
            prop_assert_eq!(a, b);
        } else {
            prop_assert!(!ihc.improved);
            prop_assert_eq!(a, start);
        }
    }

    #[test]
    fn relocation_anchor_is_never_a_no_op(inst in small_instance(), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let sol = Solution::random_initial(&inst, &mut rng).unwrap();
        for _ in 0..50 {
            let (c, after) = draw_relocation(&sol, &mut rng);
            prop_assert!(after != c && after != sol.prev(c));
        }
    }

    #[test]
    fn co_is_exact(m in 3usize..7, size in 1usize..5, seed in any::<u64>()) {
        let inst = generate_bounded(m, size, seed);
        let mut rng = rng_from_seed(seed);
        let mut sol = Solution::random_initial(&inst, &mut rng).unwrap();
        for _ in 0..m {
            order_mutation(&inst, &mut sol, &mut rng);
        }
        let (best, chosen) = oracle::optimal_selection_for_order(&inst, &sol.order()).unwrap();
        let order = sol.order();
        cluster_optimisation(&inst, &mut sol);
        prop_assert_eq!(sol.cost(), best);
        prop_assert_eq!(sol.order(), order.clone());
        let oracle_sol = Solution::from_order(&inst, &order, chosen).unwrap();
        prop_assert_eq!(oracle_sol.cost(), best);
    }

    #[test]
    fn global_optimum_ignores_labels(m in 3usize..6, size in 1usize..4, seed in any::<u64>()) {
        let inst = generate_bounded(m, size, seed);
        let mut rng = rng_from_seed(seed);
        let mut node_perm: Vec<usize> = (0..inst.n()).collect();
        node_perm.shuffle(&mut rng);
        let mut cluster_perm: Vec<usize> = (0..m).collect();
        cluster_perm.shuffle(&mut rng);

        let coords = inst.coords().unwrap();
        let mut new_coords = vec![Point::new(0, 0); inst.n()];
        for (old, &new) in node_perm.iter().enumerate() {
            new_coords[new] = coords[old];
        }
        let new_clusters: Vec<Vec<usize>> = cluster_perm
            .iter()
            .map(|&c| inst.cluster(c).iter().map(|&v| node_perm[v]).collect())
            .collect();
        let relabelled = Instance::from_points("relabelled", new_coords, new_clusters).unwrap();

        let (a, sol_a) = oracle::global_optimum(&inst).unwrap();
        let (b, sol_b) = oracle::global_optimum(&relabelled).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a % 2, 0);
        prop_assert_eq!(sol_a.tour_cost(&inst).unwrap(), a);
        prop_assert_eq!(sol_b.tour_cost(&relabelled).unwrap(), b);
    }

    #[test]
    fn normalisation_is_affine_invariant(
        values in prop::collection::vec(prop::collection::vec(0i64..1000, 4), 3..8),
        scale in 1i64..50,
        shift in -500i64..500,
    ) {
        let moved: Vec<Vec<i64>> = values
            .iter()
            .map(|row| row.iter().map(|v| scale * v + shift).collect())
            .collect();
        let a = normalize(&values);
        let b = normalize(&moved);
        prop_assert_eq!(&a.degenerate, &b.degenerate);
        for (ra, rb) in a.values.iter().zip(&b.values) {
            for (x, y) in ra.iter().zip(rb) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn selection_ignores_instance_order(
        values in prop::collection::vec(prop::collection::vec(0i64..1000, 5), 3..8),
        seed in any::<u64>(),
    ) {
        let configs: Vec<_> = (0..values.len())
            .map(|k| {
                let mut c = if k % 2 == 0 { conf1() } else { conf2() };
                c.name = format!("c{k}");
                c
            })
            .collect();
        let mut perm: Vec<usize> = (0..5).collect();
        perm.shuffle(&mut rng_from_seed(seed));
        let permuted: Vec<Vec<i64>> = values.iter().map(|row| perm.iter().map(|&i| row[i]).collect()).collect();
        let matrix = |v: Vec<Vec<i64>>| EvaluationMatrix {
            configs: configs.clone(),
            instances: (0..5).map(|i| format!("i{i}")).collect(),
            values: v,
        };
        let a = select(matrix(values.clone()), EvalBudget::Iterations(1));
        let b = select(matrix(permuted), EvalBudget::Iterations(1));
        for (x, y) in a.quality.iter().zip(&b.quality) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let q = a.quality[a.winner];
        let near_tie = a
            .quality
            .iter()
            .enumerate()
            .any(|(c, &x)| c != a.winner && (x - q).abs() < 1e-9);
        if !near_tie {
            prop_assert_eq!(a.winner, b.winner);
        }
    }

    #[test]
    fn best_cost_is_monotone_in_iterations(inst in warehouse_instance(), seed in any::<u64>(), k in 0u64..2000) {
        let mut rng = rng_from_seed(seed);
        let init = Solution::random_initial(&inst, &mut rng).unwrap();
        let short = cmcs::run(&conf2(), &inst, init.clone(), Budget::Iterations(k), &mut rng_from_seed(seed));
        let long = cmcs::run(&conf2(), &inst, init.clone(), Budget::Iterations(2 * k + 1), &mut rng_from_seed(seed));
        prop_assert!(long.best_cost <= short.best_cost);
        prop_assert!(short.best_cost <= init.cost());
        prop_assert_eq!(short.best_solution.tour_cost(&inst).unwrap(), short.best_cost);
    }

    #[test]
    fn runs_are_reproducible(inst in warehouse_instance(), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let init = Solution::random_initial(&inst, &mut rng).unwrap();
        let a = cmcs::run(&conf1(), &inst, init.clone(), Budget::Iterations(1500), &mut rng_from_seed(seed));
        let b = cmcs::run(&conf1(), &inst, init, Budget::Iterations(1500), &mut rng_from_seed(seed));
        prop_assert_eq!(a.best_cost, b.best_cost);
        prop_assert_eq!(a.best_solution, b.best_solution);
        prop_assert_eq!(a.iterations, b.iterations);
        prop_assert_eq!(a.improvements, b.improvements);
    }

    #[test]
    fn gtsplib_text_is_stable(inst in warehouse_instance()) {
        let first = gtsplib::to_string(&inst);
        let back = gtsplib::parse(&first).unwrap();
        prop_assert!(back.same_problem(&inst));
        prop_assert_eq!(gtsplib::to_string(&back), first);
    }
}

#[test]
fn gtsplib_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(GeneratorParams::new(120, 25, 3)).unwrap();
    let path = dir.path().join("x.gtsp");
    gtsplib::write(&inst, std::fs::File::create(&path).unwrap()).unwrap();
    let back = gtsplib::read(std::fs::File::open(&path).unwrap()).unwrap();
    assert!(back.same_problem(&inst));
    assert_eq!(back.name(), "120wop25");
    assert_eq!(
        gtsplib::to_string(&back),
        std::fs::read_to_string(&path).unwrap()
    );
}
