//! Sequential vs rayon-parallel dense polynomial multiplication.
//!
//! Run with `cargo bench -p trinomial`. The inputs mirror the expansion
//! work the curve verifiers do: products of large powers with big integer
//! coefficients.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use trinomial::upoly::{xpow, UPoly};
use trinomial::Tower;

fn expansion_operand(t: &Tower, degree: usize) -> UPoly {
    // (x^5 + 1)^k (2x^5 + 1)^k trimmed to the requested degree; coefficients
    // grow into the hundreds of bits like the construction verifiers see.
    let a = UPoly::from_int_coeffs(t, &[1, 0, 0, 0, 0, 1]);
    let b = UPoly::from_int_coeffs(t, &[1, 0, 0, 0, 0, 2]);
    let k = (degree / 10) as u64;
    let p = a.pow(k).mul_seq(&b.pow(k));
    let coeffs = p.coeffs()[..=degree.min(p.degree().unwrap())].to_vec();
    UPoly::from_coeffs(t, coeffs).add(&xpow(t, degree))
}

fn bench_mul(c: &mut Criterion) {
    let t = Tower::rationals();
    let mut group = c.benchmark_group("dense_mul");
    group.sample_size(10);
    for degree in [64usize, 256, 1024] {
        let p = expansion_operand(&t, degree);
        let q = expansion_operand(&t, degree);
        group.bench_with_input(BenchmarkId::new("seq", degree), &degree, |b, _| {
            b.iter(|| p.mul_seq(&q))
        });
        group.bench_with_input(BenchmarkId::new("par", degree), &degree, |b, _| {
            b.iter(|| p.mul_par(&q))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_mul);
criterion_main!(benches);
