//! `d_β²` on every tree of a `B̂cAs` window, through `par::map` and through
//! a plain loop. Built with `--no-default-features` both arms are sequential.

use criterion::{criterion_group, criterion_main, Criterion};
use curvop::barcobar::{bar, bar_square_brackets};
use curvop::operadcore::cas;
use curvop::{par, Truncation};
use std::hint::black_box;

fn bar_square(c: &mut Criterion) {
    let op = cas(8, 8, 2);
    let b = bar(&op, Truncation::new(3, 4, 2)).unwrap();
    let trees = b.all_basis();
    let mut g = c.benchmark_group(format!("bar_square_{}_trees", trees.len()));
    g.sample_size(10);
    g.bench_function(if par::is_parallel() { "rayon" } else { "par_map_sequential_build" }, |x| {
        x.iter(|| black_box(par::map(&trees, |t| bar_square_brackets(&b, t))))
    });
    g.bench_function("sequential", |x| {
        x.iter(|| black_box(trees.iter().map(|t| bar_square_brackets(&b, t)).collect::<Vec<_>>()))
    });
    g.finish();
}

criterion_group!(benches, bar_square);
criterion_main!(benches);
