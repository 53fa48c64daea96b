use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use wopgtsp::components::{
    draw_relocation, insertion_hill_climber, order_mutation, vertex_mutation, ClusterOptimiser,
};
use wopgtsp::gen::{generate, GeneratorParams};
use wopgtsp::seed::rng_from_seed;
use wopgtsp::Solution;

fn components(c: &mut Criterion) {
    for (n, m) in [(150, 30), (602, 119)] {
        let inst = generate(GeneratorParams::new(n, m, 1)).unwrap();
        let mut rng = rng_from_seed(2);
        let sol = Solution::random_initial(&inst, &mut rng).unwrap();
        let name = inst.name().to_string();

        let mut optimiser = ClusterOptimiser::new();
        c.bench_function(&format!("CO/{name}"), |b| {
            b.iter_batched_ref(
                || sol.clone(),
                |s| optimiser.apply(&inst, s),
                BatchSize::SmallInput,
            )
        });

        let mut s = sol.clone();
        c.bench_function(&format!("relocate_delta/{name}"), |b| {
            b.iter(|| {
                let (cl, after) = draw_relocation(&s, &mut rng);
                black_box(s.relocate_delta(&inst, cl, after))
            })
        });
        c.bench_function(&format!("IHC/{name}"), |b| {
            b.iter(|| insertion_hill_climber(&inst, &mut s, &mut rng))
        });
        c.bench_function(&format!("OM/{name}"), |b| {
            b.iter(|| order_mutation(&inst, &mut s, &mut rng))
        });
        c.bench_function(&format!("VM/{name}"), |b| {
            b.iter(|| vertex_mutation(&inst, &mut s, &mut rng))
        });
    }
}

criterion_group!(benches, components);
criterion_main!(benches);
