use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nine_fields::curve_models::{global_data, kraus_criterion};
use nine_fields::field_arith::factor;
use nine_fields::mod2_square_disc::search_square_disc;
use nine_fields::Field;
use nine_fields_bench::{sample_curves, sample_elements};

fn field_ops(c: &mut Criterion) {
    let k = Field::new(163).unwrap();
    let xs = sample_elements(k, 12);
    c.bench_function("quadint mul+add d=163", |b| {
        b.iter(|| xs.iter().fold(k.zero(), |acc, x| &(&acc * x) + x))
    });
    c.bench_function("factor norms <= 10^5 d=163", |b| {
        b.iter(|| {
            for x in &xs {
                if !x.is_zero() {
                    black_box(factor(&(&(&x.square() * 17) + &k.int(3))));
                }
            }
        })
    });
}

fn reduction(c: &mut Criterion) {
    for d in [1, 11] {
        let k = Field::new(d).unwrap();
        let curves = sample_curves(k);
        c.bench_function(&format!("global_data d={d}"), |b| {
            b.iter(|| curves.iter().map(|e| global_data(e).unwrap().disc_min).count())
        });
        let q = k.ctx().two_primes[0].clone();
        let invs: Vec<_> = curves.iter().map(|e| e.c_invariants()).collect();
        c.bench_function(&format!("kraus d={d}"), |b| {
            b.iter(|| invs.iter().filter(|(c4, c6)| kraus_criterion(c4, c6, &q).unwrap().holds).count())
        });
    }
}

fn searches(c: &mut Criterion) {
    let mut g = c.benchmark_group("searches");
    g.sample_size(10);
    g.bench_function("mod2 search d=11 bound 30", |b| b.iter(|| search_square_disc(11, 30).unwrap().len()));
    g.finish();
}

criterion_group!(benches, field_ops, reduction, searches);
criterion_main!(benches);
