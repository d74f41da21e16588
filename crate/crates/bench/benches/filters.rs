use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kif_core::testimage::gradient_texture;
use kif_core::{
    adaptive_median_filter, inject_salt_pepper, kif_denoise, median_filter, predict_many,
    FilterConfig, NoiseSpec, SamplePoint, VariogramModel,
};
use std::hint::black_box;

fn kif_window_sizes(c: &mut Criterion) {
    let clean = gradient_texture(128, 128);
    let mut group = c.benchmark_group("kif_window");
    for density in [0.1, 0.5, 0.9] {
        let noisy = inject_salt_pepper(&clean, &NoiseSpec::with_density(density, 1).unwrap());
        for k in [4, 8, 16] {
            let cfg = FilterConfig {
                window_size: k,
                ..FilterConfig::default()
            };
            let id = BenchmarkId::new(format!("k{k}"), format!("{}%", (density * 100.0) as u32));
            group.bench_with_input(id, &noisy, |b, img| b.iter(|| kif_denoise(black_box(img), &cfg)));
        }
    }
    group.finish();
}

fn baselines(c: &mut Criterion) {
    let clean = gradient_texture(128, 128);
    let noisy = inject_salt_pepper(&clean, &NoiseSpec::with_density(0.5, 1).unwrap());
    c.bench_function("smf_3x3", |b| b.iter(|| median_filter(black_box(&noisy), 3).unwrap()));
    c.bench_function("amf_max7", |b| {
        b.iter(|| adaptive_median_filter(black_box(&noisy), 7).unwrap())
    });
}

fn kriging_solve(c: &mut Criterion) {
    let samples: Vec<SamplePoint> = (0..64)
        .filter(|i| i % 3 != 0)
        .map(|i| SamplePoint::new((i % 8) as f64, (i / 8) as f64, 50.0 + (i * 7 % 31) as f64))
        .collect();
    let targets: Vec<(f64, f64)> = (0..64)
        .filter(|i| i % 3 == 0)
        .map(|i| ((i % 8) as f64, (i / 8) as f64))
        .collect();
    let model = VariogramModel::Linear {
        nugget: 4.0,
        slope: 2.0,
    };
    c.bench_function("ordinary_kriging_8x8", |b| {
        b.iter(|| predict_many(black_box(&samples), &targets, &model, 1e-8).unwrap())
    });
}

criterion_group!(benches, kif_window_sizes, baselines, kriging_solve);
criterion_main!(benches);
