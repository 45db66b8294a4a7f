use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use variastar_bench::{aligned_weighted, solvable_instances};
use variastar_core::search::{astar, dijkstra};
use variastar_core::{Connectivity, HeuristicSpec, SearchOptions};

fn planners(c: &mut Criterion) {
    let cases = [
        ("32x32", (32, 32, 1), Connectivity::Eight),
        ("12x12x12", (12, 12, 12), Connectivity::TwentySix),
    ];
    for (name, dims, conn) in cases {
        let instances = solvable_instances(8, dims, 0.25, conn);
        let opts = SearchOptions { record_trace: false, ..SearchOptions::with_connectivity(conn) };
        let mut group = c.benchmark_group(format!("plan/{name}"));
        group.bench_function("dijkstra", |b| {
            b.iter(|| {
                for inst in &instances {
                    black_box(dijkstra(&inst.map, &inst.start, &inst.goal, &opts).unwrap());
                }
            })
        });
        for spec in [HeuristicSpec::euclidean(), HeuristicSpec::diagonal(), aligned_weighted(2.0)] {
            group.bench_with_input(BenchmarkId::new("astar", spec.to_string()), &spec, |b, spec| {
                b.iter(|| {
                    for inst in &instances {
                        black_box(astar(&inst.map, &inst.start, &inst.goal, spec, &opts).unwrap());
                    }
                })
            });
        }
        group.finish();
    }
}

criterion_group!(benches, planners);
criterion_main!(benches);
