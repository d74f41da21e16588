//! Mean squared error and peak signal-to-noise ratio for 8-bit images.

use std::fmt;

use crate::error::{Error, Result};
use crate::image_io::GrayImage;

const PEAK_SQUARED: f64 = 255.0 * 255.0;

/// MSE together with the PSNR it implies. `psnr_db` is `+∞` for identical images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub psnr_db: f64,
}

impl QualityReport {
    pub fn from_mse(mse: f64) -> Self {
        Self {
            mse,
            psnr_db: psnr_from_mse(mse),
        }
    }

    pub fn is_lossless(&self) -> bool {
        self.mse == 0.0
    }

    /// PSNR formatted for reports: shortest round-trip decimal, or `inf`.
    pub fn psnr_display(&self) -> String {
        format_psnr(self.psnr_db)
    }
}

impl fmt::Display for QualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mse={} psnr={}", self.mse, self.psnr_display())
    }
}

pub fn format_psnr(psnr_db: f64) -> String {
    if psnr_db.is_infinite() && psnr_db > 0.0 {
        "inf".to_string()
    } else {
        psnr_db.to_string()
    }
}

/// `10·log10(255² / mse)`; infinite when `mse` is zero.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK_SQUARED / mse).log10()
    }
}

/// Mean of squared pixel differences, summed exactly in integers.
pub fn mse(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    if (reference.width(), reference.height()) != (test.width(), test.height()) {
        return Err(Error::DimensionMismatch(
            reference.width(),
            reference.height(),
            test.width(),
            test.height(),
        ));
    }
    let sum: u64 = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(&a, &b)| {
            let d = u64::from(a.abs_diff(b));
            d * d
        })
        .sum();
    Ok(sum as f64 / reference.len() as f64)
}

pub fn psnr(reference: &GrayImage, test: &GrayImage) -> Result<QualityReport> {
    mse(reference, test).map(QualityReport::from_mse)
}
