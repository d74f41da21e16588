//! Salt & pepper impulse-noise removal by ordinary kriging.
//!
//! The filter walks the image in non-overlapping `k×k` tiles, keeps only the
//! pixels that are neither 0 nor 255, fits a semivariogram to them and krigs
//! every impulse-valued position of the tile from those samples. Median and
//! adaptive-median baselines plus PSNR/MSE metrics are included so the
//! filters can be compared on the same noisy inputs.
//!
//! ```
//! use kif_core::{inject_salt_pepper, kif_denoise, psnr, FilterConfig, GrayImage, NoiseSpec};
//!
//! let clean = GrayImage::from_fn(32, 32, |x, y| (40 + 3 * x + 2 * y) as u8);
//! let noisy = inject_salt_pepper(&clean, &NoiseSpec::new(0.2, 0.5, 7).unwrap());
//! let restored = kif_denoise(&noisy, &FilterConfig::default());
//! assert!(psnr(&clean, &restored).unwrap().psnr_db > 30.0);
//! ```

pub mod baseline;
mod error;
pub mod image_io;
pub mod kif;
pub mod kriging;
pub mod linalg;
pub mod metrics;
pub mod noise;
pub mod sweep;
pub mod testimage;
pub mod variogram;

pub use baseline::{adaptive_median_filter, median_filter};
pub use error::{Error, PgmError, PgmErrorKind, Result};
pub use image_io::{read_pgm, write_pgm, GrayImage};
pub use kif::{denoise_window, extract_samples, kif_denoise, FilterConfig, Window};
pub use kriging::{predict_many, solve_ordinary_kriging, KrigingSolution, OrdinaryKriging};
pub use metrics::{mse, psnr, QualityReport};
pub use noise::{detect_noise, inject_salt_pepper, NoiseMask, NoiseSpec};
pub use sweep::{FilterChoice, SweepConfig, SweepRow};
pub use variogram::{
    empirical_semivariogram, fit_model, EmpiricalVariogram, ModelKind, SamplePoint, VariogramBin,
    VariogramModel,
};
