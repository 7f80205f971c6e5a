use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use graphsense::lab::{experiment2_matrix, gen_ba, BarabasiAlbertSpec};
use graphsense::oracle::dense_i64;
use graphsense::*;

fn l1_line(c: &mut Criterion) {
    let a = line_matrix(60, 4).unwrap();
    let dense = a.to_dense_f64();
    let mut x = vec![0.0; 60];
    for (j, v) in [(3, 1.2), (17, -0.8), (31, 2.0), (52, 0.5)] {
        x[j] = v;
    }
    let y = a.apply(&x).unwrap();
    c.bench_function("l1_minimize line(60,4)", |b| {
        b.iter(|| l1_minimize(black_box(&dense), black_box(&y)).unwrap())
    });
}

fn general_design(c: &mut Criterion) {
    let g = gen_ba(&BarabasiAlbertSpec {
        n: 500,
        m: 2,
        m0: 10,
        seed: 1,
    })
    .unwrap();
    let spec = CompleteKernelSpec::binary();
    c.bench_function("algorithm1 ba(500)", |b| {
        b.iter(|| algorithm1(black_box(&g), 1, &spec).unwrap())
    });
}

fn robust_decode(c: &mut Criterion) {
    let g = gen_ba(&BarabasiAlbertSpec {
        n: 200,
        m: 2,
        m0: 10,
        seed: 3,
    })
    .unwrap();
    let (a, hubs) = experiment2_matrix(&g, 32, 7).unwrap();
    let mut x = vec![0.0; 200];
    for (j, v) in [(5, 1.0), (40, -0.6), (120, 0.9)] {
        x[j] = v;
    }
    let mut y = a.apply(&x).unwrap();
    for &h in &hubs {
        y[h] += 0.3;
    }
    c.bench_function("augmented_l1_recover ba(200)", |b| {
        b.iter(|| augmented_l1_recover(black_box(&a), black_box(&y), &hubs).unwrap())
    });
}

fn rank_oracle(c: &mut Criterion) {
    let d = dense_i64(&line_matrix(12, 2).unwrap());
    c.bench_function("columns_2k_independent line(12,2)", |b| {
        b.iter(|| columns_2k_independent(black_box(&d), 12, 2).unwrap())
    });
    let f = line_matrix(12, 2).unwrap().to_dense_f64();
    c.bench_function("nsp_verify line(12,2)", |b| {
        b.iter(|| nsp_verify(black_box(&f), 12, 2).unwrap())
    });
}

criterion_group!(benches, l1_line, general_design, robust_decode, rank_oracle);
criterion_main!(benches);
