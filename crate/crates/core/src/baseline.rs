//! Median-family baselines: the standard median filter (SMF) and the
//! Hwang–Haddad adaptive median filter (AMF). Both replicate border pixels.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

pub const DEFAULT_SMF_WINDOW: usize = 3;
pub const DEFAULT_AMF_MAX_WINDOW: usize = 7;

fn check_odd(k: usize, what: &str) -> Result<()> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "{what} must be an odd integer >= 3, got {k}"
        )));
    }
    Ok(())
}

/// Collects the `k×k` neighbourhood of `(x, y)` into `buf`, clamping at the borders.
fn gather(image: &GrayImage, x: usize, y: usize, k: usize, buf: &mut Vec<u8>) {
    let r = (k / 2) as isize;
    let (cx, cy) = (x as isize, y as isize);
    buf.clear();
    for dy in -r..=r {
        for dx in -r..=r {
            buf.push(image.get_clamped(cx + dx, cy + dy));
        }
    }
}

/// Applies `f(x, y, scratch)` to every pixel, rows in parallel.
fn map_pixels<F>(image: &GrayImage, f: F) -> GrayImage
where
    F: Fn(usize, usize, &mut Vec<u8>) -> u8 + Sync,
{
    let w = image.width();
    let mut pixels = vec![0u8; image.len()];
    pixels.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        let mut scratch = Vec::new();
        for (x, px) in row.iter_mut().enumerate() {
            *px = f(x, y, &mut scratch);
        }
    });
    GrayImage::new(w, image.height(), pixels).expect("same dimensions as input")
}

/// Standard median filter with an odd `k×k` window.
pub fn median_filter(image: &GrayImage, k: usize) -> Result<GrayImage> {
    check_odd(k, "median window")?;
    let mid = k * k / 2;
    Ok(map_pixels(image, |x, y, buf| {
        gather(image, x, y, k, buf);
        *buf.select_nth_unstable(mid).1
    }))
}

/// Adaptive median filter growing from 3×3 up to `max_window`.
///
/// Level A: if `min < median < max` the window is trusted, go to level B;
/// otherwise grow the window, or output the median once `max_window` is
/// exceeded. Level B: keep the pixel if `min < pixel < max`, else output
/// the median.
pub fn adaptive_median_filter(image: &GrayImage, max_window: usize) -> Result<GrayImage> {
    check_odd(max_window, "maximum window")?;
    Ok(map_pixels(image, |x, y, buf| {
        let center = image.get(x, y);
        let mut k = 3;
        loop {
            gather(image, x, y, k, buf);
            buf.sort_unstable();
            let (lo, med, hi) = (buf[0], buf[buf.len() / 2], buf[buf.len() - 1]);
            if lo < med && med < hi {
                return if lo < center && center < hi { center } else { med };
            }
            if k + 2 > max_window {
                return med;
            }
            k += 2;
        }
    }))
}
