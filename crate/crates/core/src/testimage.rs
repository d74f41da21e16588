//! Deterministic synthetic test images.

use crate::image_io::GrayImage;

/// Diagonal gradient with a sinusoidal texture and a bright disc, kept
/// inside `[16, 240]` so no pixel looks like an impulse.
pub fn gradient_texture(width: usize, height: usize) -> GrayImage {
    let (w, h) = (width.max(1) as f64, height.max(1) as f64);
    GrayImage::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f64 / w, y as f64 / h);
        let ramp = 40.0 + 120.0 * (0.6 * fx + 0.4 * fy);
        let texture = 18.0 * (x as f64 * 0.9).sin() * (y as f64 * 0.55).cos();
        let (dx, dy) = (fx - 0.65, fy - 0.35);
        let disc = if dx * dx + dy * dy < 0.04 { 45.0 } else { 0.0 };
        (ramp + texture + disc).round().clamp(16.0, 240.0) as u8
    })
}
