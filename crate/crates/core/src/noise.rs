//! Salt & pepper impulse noise: seeded injection and the extreme-value detector.
//!
//! Injection draws from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`)
//! in row-major pixel order. Each pixel consumes one uniform `f64`; a pixel
//! selected for corruption consumes a second one to choose salt (255) or
//! pepper (0). The output is therefore a pure function of image and spec on
//! every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

pub const PEPPER: u8 = 0;
pub const SALT: u8 = 255;

/// Parameters of one noise realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    density: f64,
    salt_fraction: f64,
    seed: u64,
}

impl NoiseSpec {
    pub const DEFAULT_SALT_FRACTION: f64 = 0.5;

    pub fn new(density: f64, salt_fraction: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::InvalidParameter(format!(
                "density must lie in [0, 1], got {density}"
            )));
        }
        if !(0.0..=1.0).contains(&salt_fraction) {
            return Err(Error::InvalidParameter(format!(
                "salt fraction must lie in [0, 1], got {salt_fraction}"
            )));
        }
        Ok(Self {
            density,
            salt_fraction,
            seed,
        })
    }

    /// Equal salt/pepper split.
    pub fn with_density(density: f64, seed: u64) -> Result<Self> {
        Self::new(density, Self::DEFAULT_SALT_FRACTION, seed)
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn salt_fraction(&self) -> f64 {
        self.salt_fraction
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Per-pixel "treated as noisy" flags, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseMask {
    width: usize,
    height: usize,
    flags: Vec<bool>,
}

impl NoiseMask {
    pub fn new(width: usize, height: usize, flags: Vec<bool>) -> Result<Self> {
        if flags.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "mask of {} flags does not match {width}x{height}",
                flags.len()
            )));
        }
        Ok(Self {
            width,
            height,
            flags,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    #[inline]
    pub fn is_noisy(&self, x: usize, y: usize) -> bool {
        self.flags[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }
}

/// Corrupts `image` according to `spec`. See the module docs for the draw order.
pub fn inject_salt_pepper(image: &GrayImage, spec: &NoiseSpec) -> GrayImage {
    inject_salt_pepper_counted(image, spec).0
}

/// Like [`inject_salt_pepper`], also returning how many pixels were replaced.
pub fn inject_salt_pepper_counted(image: &GrayImage, spec: &NoiseSpec) -> (GrayImage, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = image.clone();
    let mut replaced = 0;
    for px in out.pixels_mut() {
        if rng.random::<f64>() < spec.density {
            *px = if rng.random::<f64>() < spec.salt_fraction {
                SALT
            } else {
                PEPPER
            };
            replaced += 1;
        }
    }
    (out, replaced)
}

/// Flags every pixel whose value is 0 or 255.
pub fn detect_noise(image: &GrayImage) -> NoiseMask {
    NoiseMask {
        width: image.width(),
        height: image.height(),
        flags: image
            .pixels()
            .iter()
            .map(|&v| v == PEPPER || v == SALT)
            .collect(),
    }
}
