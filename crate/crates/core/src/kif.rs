//! The kriging interpolation filter.
//!
//! The image is cut into non-overlapping `k×k` tiles in row-major order
//! (right and bottom tiles may be smaller). Inside each tile the pixels that
//! are neither 0 nor 255 become kriging samples and every impulse-valued
//! pixel is predicted from them. All tiles read the original noisy image and
//! its mask, so tiles are independent: processing order and parallelism never
//! change the result.
//!
//! Tiles with fewer than `min_samples` clean pixels widen their sampling
//! area by `k` pixels per side, at most `max_expansion` times. Predictions are
//! still written only inside the tile. A tile that finds no clean pixel at
//! all falls back to the median of all clean pixels in the image.
//!
//! Pixels that are genuinely black or white in the original are
//! indistinguishable from impulses and get re-predicted as well.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image_io::GrayImage;
use crate::kriging::{OrdinaryKriging, DEFAULT_RIDGE};
use crate::noise::{detect_noise, NoiseMask};
use crate::variogram::{
    empirical_semivariogram, fit_model, ModelKind, SamplePoint, VariogramModel, DEFAULT_BIN_WIDTH,
};

/// Lowest and highest value the filter writes; neither is an impulse extreme.
pub const MIN_PREDICTION: u8 = 1;
pub const MAX_PREDICTION: u8 = 254;

/// Used when the whole image is impulse-valued.
const ALL_NOISY_FALLBACK: u8 = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub window_size: usize,
    pub model_kind: ModelKind,
    pub bin_width: f64,
    pub ridge: f64,
    pub min_samples: usize,
    /// Maximum number of `window_size`-wide expansion steps.
    pub max_expansion: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            window_size: 8,
            model_kind: ModelKind::Linear,
            bin_width: DEFAULT_BIN_WIDTH,
            ridge: DEFAULT_RIDGE,
            min_samples: 3,
            max_expansion: 3,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "window size must be >= 2, got {}",
                self.window_size
            )));
        }
        if self.min_samples < 1 {
            return Err(Error::InvalidParameter("min_samples must be >= 1".into()));
        }
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bin width must be positive, got {}",
                self.bin_width
            )));
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ridge must be >= 0, got {}",
                self.ridge
            )));
        }
        Ok(())
    }
}

/// Axis-aligned pixel rectangle: columns `x..x+width`, rows `y..y+height`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Window {
    pub const fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    pub fn full(image: &GrayImage) -> Self {
        Self::new(0, 0, image.width(), image.height())
    }

    fn right(&self) -> usize {
        self.x + self.width
    }

    fn bottom(&self) -> usize {
        self.y + self.height
    }

    fn fits(&self, image: &GrayImage) -> bool {
        self.right() <= image.width() && self.bottom() <= image.height()
    }

    /// Grows by `by` pixels on every side, clipped to `width × height`.
    fn grown(&self, by: usize, width: usize, height: usize) -> Self {
        let x = self.x.saturating_sub(by);
        let y = self.y.saturating_sub(by);
        let right = (self.right() + by).min(width);
        let bottom = (self.bottom() + by).min(height);
        Self::new(x, y, right - x, bottom - y)
    }

    fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.y..self.bottom()).flat_map(move |y| (self.x..self.right()).map(move |x| (x, y)))
    }
}

/// Non-overlapping `k×k` tiles covering the image in row-major order.
pub fn tiles(width: usize, height: usize, k: usize) -> Vec<Window> {
    assert!(k > 0, "tile size must be positive");
    (0..height)
        .step_by(k)
        .flat_map(|y| {
            (0..width)
                .step_by(k)
                .map(move |x| Window::new(x, y, k.min(width - x), k.min(height - y)))
        })
        .collect()
}

/// Clean pixels of `window` in row-major order, coordinates relative to the
/// window's top-left corner.
pub fn extract_samples(image: &GrayImage, mask: &NoiseMask, window: Window) -> Vec<SamplePoint> {
    samples_around(image, mask, window, window)
}

/// Clean pixels of `area`, coordinates relative to `origin`'s corner.
fn samples_around(
    image: &GrayImage,
    mask: &NoiseMask,
    area: Window,
    origin: Window,
) -> Vec<SamplePoint> {
    area.positions()
        .filter(|&(x, y)| !mask.is_noisy(x, y))
        .map(|(x, y)| {
            SamplePoint::new(
                x as f64 - origin.x as f64,
                y as f64 - origin.y as f64,
                f64::from(image.get(x, y)),
            )
        })
        .collect()
}

/// Predicted values for the masked pixels of `window`, as `((x, y), value)`
/// in image coordinates and row-major order.
///
/// # Panics
/// If `window` is not inside the image or the mask size differs from the image.
pub fn denoise_window(
    image: &GrayImage,
    mask: &NoiseMask,
    window: Window,
    cfg: &FilterConfig,
) -> Vec<((usize, usize), u8)> {
    assert!(window.fits(image), "window {window:?} outside image");
    assert_eq!(
        (mask.width(), mask.height()),
        (image.width(), image.height()),
        "mask does not match image"
    );

    let targets: Vec<(usize, usize)> = window.positions().filter(|&(x, y)| mask.is_noisy(x, y)).collect();
    if targets.is_empty() {
        return Vec::new();
    }

    let mut samples = extract_samples(image, mask, window);
    let mut step = 0;
    while samples.len() < cfg.min_samples && step < cfg.max_expansion {
        step += 1;
        let area = window.grown(step * cfg.window_size, image.width(), image.height());
        samples = samples_around(image, mask, area, window);
    }

    if samples.is_empty() {
        let fill = clean_median(image, mask);
        return targets.into_iter().map(|p| (p, fill)).collect();
    }

    let predict = predictor(&samples, cfg);
    targets
        .into_iter()
        .map(|(x, y)| {
            let local = ((x - window.x) as f64, (y - window.y) as f64);
            ((x, y), quantize(predict(local)))
        })
        .collect()
}

/// Builds the per-tile prediction function, degrading to a pure-nugget model
/// and finally to the sample mean if the fitted system is unusable.
fn predictor<'a>(samples: &'a [SamplePoint], cfg: &FilterConfig) -> Box<dyn Fn((f64, f64)) -> f64 + 'a> {
    let mean = samples.iter().map(|s| s.z).sum::<f64>() / samples.len() as f64;
    let model = fit_samples(samples, cfg);
    let system = OrdinaryKriging::new(samples, model, cfg.ridge)
        .or_else(|_| OrdinaryKriging::new(samples, VariogramModel::default(), cfg.ridge.max(DEFAULT_RIDGE)));
    match system {
        Ok(system) => Box::new(move |(x, y)| {
            let v = system.predict(x, y);
            if v.is_finite() {
                v
            } else {
                mean
            }
        }),
        Err(_) => Box::new(move |_| mean),
    }
}

fn fit_samples(samples: &[SamplePoint], cfg: &FilterConfig) -> VariogramModel {
    empirical_semivariogram(samples, cfg.bin_width)
        .and_then(|ev| fit_model(&ev, cfg.model_kind))
        .unwrap_or_default()
}

/// Round half away from zero, then keep clear of the impulse extremes.
fn quantize(v: f64) -> u8 {
    v.round()
        .clamp(f64::from(MIN_PREDICTION), f64::from(MAX_PREDICTION)) as u8
}

/// Lower median of the unmasked pixels, or mid-gray if there are none.
fn clean_median(image: &GrayImage, mask: &NoiseMask) -> u8 {
    let mut hist = [0usize; 256];
    for (&v, &noisy) in image.pixels().iter().zip(mask.flags()) {
        if !noisy {
            hist[v as usize] += 1;
        }
    }
    let total: usize = hist.iter().sum();
    if total == 0 {
        return ALL_NOISY_FALLBACK;
    }
    let rank = (total - 1) / 2;
    let mut seen = 0;
    for (v, &c) in hist.iter().enumerate() {
        seen += c;
        if seen > rank {
            return v as u8;
        }
    }
    unreachable!("rank lies below the total count")
}

/// Runs the filter over the given tiles and writes every prediction into a
/// copy of `image`. Tiles may be listed in any order.
pub fn denoise_tiles(image: &GrayImage, mask: &NoiseMask, tiles: &[Window], cfg: &FilterConfig) -> GrayImage {
    let predictions: Vec<Vec<((usize, usize), u8)>> = tiles
        .par_iter()
        .map(|&w| denoise_window(image, mask, w, cfg))
        .collect();
    let mut out = image.clone();
    for ((x, y), v) in predictions.into_iter().flatten() {
        out.set(x, y, v);
    }
    out
}

/// Removes salt & pepper noise from `image`.
///
/// # Panics
/// If `cfg` fails [`FilterConfig::validate`].
pub fn kif_denoise(image: &GrayImage, cfg: &FilterConfig) -> GrayImage {
    if let Err(e) = cfg.validate() {
        panic!("invalid filter configuration: {e}");
    }
    let mask = detect_noise(image);
    if mask.count() == 0 {
        return image.clone();
    }
    let tiles = tiles(image.width(), image.height(), cfg.window_size);
    denoise_tiles(image, &mask, &tiles, cfg)
}
