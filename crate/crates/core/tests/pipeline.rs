use kif_core::kif::{denoise_tiles, tiles};
use kif_core::testimage::gradient_texture;
use kif_core::{
    detect_noise, inject_salt_pepper, kif_denoise, median_filter, psnr, FilterConfig, GrayImage,
    ModelKind, NoiseSpec,
};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = FilterConfig> {
    (
        2usize..12,
        prop_oneof![Just(ModelKind::Nugget), Just(ModelKind::Linear), Just(ModelKind::Exponential)],
        1usize..6,
        0usize..4,
    )
        .prop_map(|(window_size, model_kind, min_samples, max_expansion)| FilterConfig {
            window_size,
            model_kind,
            min_samples,
            max_expansion,
            ..FilterConfig::default()
        })
}

fn noisy_image() -> impl Strategy<Value = GrayImage> {
    (4usize..40, 4usize..40, 0.0f64..=1.0, any::<u64>()).prop_map(|(w, h, d, seed)| {
        let clean = GrayImage::from_fn(w, h, |x, y| (30 + (x * 5 + y * 3) % 190) as u8);
        inject_salt_pepper(&clean, &NoiseSpec::with_density(d, seed).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preserves_clean_pixels_and_is_idempotent(img in noisy_image(), cfg in config()) {
        let out = kif_denoise(&img, &cfg);
        for (&a, &b) in img.pixels().iter().zip(out.pixels()) {
            if a != 0 && a != 255 {
                prop_assert_eq!(a, b);
            } else {
                prop_assert!((1..=254).contains(&b));
            }
        }
        prop_assert_eq!(detect_noise(&out).count(), 0);
        prop_assert_eq!(kif_denoise(&out, &cfg), out.clone());
        prop_assert_eq!(kif_denoise(&img, &cfg), out);
    }

    #[test]
    fn tile_order_does_not_matter(img in noisy_image(), cfg in config(), seed in any::<u64>()) {
        let mask = detect_noise(&img);
        let mut order = tiles(img.width(), img.height(), cfg.window_size);
        let forward = denoise_tiles(&img, &mask, &order, &cfg);
        let mut s = seed;
        for i in (1..order.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(denoise_tiles(&img, &mask, &order, &cfg), forward);
    }
}

#[test]
fn outperforms_median_on_synthetic_image() {
    let clean = gradient_texture(64, 64);
    for (i, density) in [0.3, 0.5, 0.7, 0.9].into_iter().enumerate() {
        let noisy = inject_salt_pepper(&clean, &NoiseSpec::with_density(density, i as u64).unwrap());
        let kif = psnr(&clean, &kif_denoise(&noisy, &FilterConfig::default())).unwrap();
        let smf = psnr(&clean, &median_filter(&noisy, 3).unwrap()).unwrap();
        assert!(kif.psnr_db > smf.psnr_db, "{density}: kif {} smf {}", kif.psnr_db, smf.psnr_db);
    }
}

#[test]
fn psnr_declines_with_density() {
    let clean = gradient_texture(64, 64);
    let mut prev = f64::INFINITY;
    for p in 1..=9 {
        let noisy = inject_salt_pepper(&clean, &NoiseSpec::with_density(p as f64 / 10.0, p).unwrap());
        let db = psnr(&clean, &kif_denoise(&noisy, &FilterConfig::default())).unwrap().psnr_db;
        assert!(db < prev, "{p}0%: {db} >= {prev}");
        prev = db;
    }
}
