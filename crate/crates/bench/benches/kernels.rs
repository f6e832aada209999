use std::collections::BTreeSet;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lexgames::gen::{random_game, rng, GameParams};
use lexgames::graph::{chain_graph, loop_graph, morphism_search};
use lexgames::solver::{auto_universal, LiftingTable};
use lexgames::universal::{power_graph, signature_graph, wrap_top, PowerLevel};
use lexgames::verify::{graph_count, graph_from_index, satisfies_exact};
use lexgames::{ColourFamily, ObjectiveExpr, Ordinal};

fn signature(c: &mut Criterion) {
    let mut group = c.benchmark_group("signature_graph");
    for (alpha, kappa) in [(2u64, 4usize), (4, 3), (6, 3)] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("a{alpha}_k{kappa}")),
            &(alpha, kappa),
            |b, &(a, k)| b.iter(|| signature_graph(a, k).unwrap()),
        );
    }
    group.finish();
}

fn power(c: &mut Criterion) {
    let levels = || {
        let f0 = ColourFamily::singletons([0u64]);
        let f1 = ColourFamily::singletons([1u64]);
        vec![
            PowerLevel::new(loop_graph(&f0)).unwrap(),
            PowerLevel::new(chain_graph(&f1, 3).unwrap()).unwrap(),
        ]
    };
    c.bench_function("power_graph/beta4", |b| {
        b.iter(|| power_graph(levels(), 4).unwrap())
    });
}

fn morphisms(c: &mut Criterion) {
    let u = wrap_top(&signature_graph(3, 3).unwrap(), 2).unwrap();
    let w: ObjectiveExpr = "MaxParity(3)".parse().unwrap();
    let colours = ColourFamily::singletons(0u64..3);
    let total = graph_count(&colours, 2).unwrap();
    let graphs: Vec<_> = (0..total)
        .step_by(7)
        .map(|i| graph_from_index(&colours, 2, i))
        .filter(|g| satisfies_exact(g, &w).unwrap().satisfied)
        .collect();
    c.bench_function("morphism_search/maxparity3_n2", |b| {
        b.iter(|| {
            for g in &graphs {
                black_box(morphism_search(g, &u));
            }
        })
    });
}

fn lifting(c: &mut Criterion) {
    let mut group = c.benchmark_group("lifting");
    for name in ["MaxParity(3)", "MinParity(3)"] {
        let w: ObjectiveExpr = name.parse().unwrap();
        let colours = w.family().unwrap();
        let params = GameParams {
            max_vertices: 6,
            max_edges: 12,
            epsilon_rate: 0.1,
        };
        let games: Vec<_> = (0..32)
            .map(|s| random_game(&mut rng(s), &w, &colours, &params).unwrap())
            .collect();
        let indices = colours.indices().cloned().collect::<BTreeSet<Ordinal>>();
        let table = LiftingTable::new(&auto_universal(&w, &indices, 6, 200_000).unwrap()).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| {
                for g in &games {
                    black_box(table.solve(g).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, signature, power, morphisms, lifting);
criterion_main!(benches);
