//! Density sweeps: inject, filter and score every (density, filter) cell.
//!
//! The noise seed for a cell is `base_seed XOR round(100·density)`, so a
//! cell's noisy image does not depend on which other densities or filters
//! are in the sweep. Rows come out density-major, filter-minor.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::baseline::{adaptive_median_filter, median_filter, DEFAULT_AMF_MAX_WINDOW, DEFAULT_SMF_WINDOW};
use crate::error::{Error, Result};
use crate::image_io::GrayImage;
use crate::kif::{kif_denoise, FilterConfig};
use crate::metrics::{format_psnr, psnr, QualityReport};
use crate::noise::{inject_salt_pepper, NoiseSpec};

pub const CSV_HEADER: &str = "density_percent,filter,psnr_db,mse,wall_time_ms";

/// A denoiser together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterChoice {
    Kif(FilterConfig),
    Smf { window: usize },
    Amf { max_window: usize },
}

impl FilterChoice {
    pub fn name(&self) -> &'static str {
        match self {
            FilterChoice::Kif(_) => "kif",
            FilterChoice::Smf { .. } => "smf",
            FilterChoice::Amf { .. } => "amf",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let odd = |k: usize, what: &str| {
            if k < 3 || k % 2 == 0 {
                Err(Error::InvalidParameter(format!("{what} must be an odd integer >= 3, got {k}")))
            } else {
                Ok(())
            }
        };
        match self {
            FilterChoice::Kif(cfg) => cfg.validate(),
            FilterChoice::Smf { window } => odd(*window, "smf window"),
            FilterChoice::Amf { max_window } => odd(*max_window, "amf maximum window"),
        }
    }

    pub fn apply(&self, image: &GrayImage) -> Result<GrayImage> {
        self.validate()?;
        match self {
            FilterChoice::Kif(cfg) => Ok(kif_denoise(image, cfg)),
            FilterChoice::Smf { window } => median_filter(image, *window),
            FilterChoice::Amf { max_window } => adaptive_median_filter(image, *max_window),
        }
    }
}

impl fmt::Display for FilterChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a filter name into its default configuration.
impl FromStr for FilterChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kif" | "kriging" => Ok(FilterChoice::Kif(FilterConfig::default())),
            "smf" | "median" => Ok(FilterChoice::Smf {
                window: DEFAULT_SMF_WINDOW,
            }),
            "amf" => Ok(FilterChoice::Amf {
                max_window: DEFAULT_AMF_MAX_WINDOW,
            }),
            other => Err(Error::InvalidParameter(format!("unknown filter {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub densities: Vec<f64>,
    pub filters: Vec<FilterChoice>,
    pub seed: u64,
    pub salt_fraction: f64,
}

impl SweepConfig {
    /// 10 %, 20 %, …, 90 %.
    pub fn default_densities() -> Vec<f64> {
        (1..=9).map(|i| i as f64 / 10.0).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.densities.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
            return Err(Error::InvalidParameter(format!("density {d} outside (0, 1]")));
        }
        NoiseSpec::new(0.0, self.salt_fraction, 0)?;
        self.filters.iter().try_for_each(FilterChoice::validate)
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            densities: Self::default_densities(),
            filters: vec![
                FilterChoice::Kif(FilterConfig::default()),
                FilterChoice::Smf {
                    window: DEFAULT_SMF_WINDOW,
                },
                FilterChoice::Amf {
                    max_window: DEFAULT_AMF_MAX_WINDOW,
                },
            ],
            seed: 0,
            salt_fraction: NoiseSpec::DEFAULT_SALT_FRACTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub density_percent: u32,
    pub filter: &'static str,
    pub quality: QualityReport,
    pub wall_time_ms: f64,
}

impl SweepRow {
    /// One CSV line without the trailing newline.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.3}",
            self.density_percent,
            self.filter,
            format_psnr(self.quality.psnr_db),
            self.quality.mse,
            self.wall_time_ms
        )
    }
}

pub fn density_percent(density: f64) -> u32 {
    (density * 100.0).round() as u32
}

/// Seed used for the noise realization at `density`.
pub fn cell_seed(base_seed: u64, density: f64) -> u64 {
    base_seed ^ u64::from(density_percent(density))
}

/// Runs the sweep, handing each row to `sink` as soon as it is scored.
/// Rows already delivered stay delivered if a later cell fails.
pub fn run_sweep<F>(original: &GrayImage, cfg: &SweepConfig, mut sink: F) -> Result<Vec<SweepRow>>
where
    F: FnMut(&SweepRow) -> Result<()>,
{
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.densities.len() * cfg.filters.len());
    for &density in &cfg.densities {
        let spec = NoiseSpec::new(density, cfg.salt_fraction, cell_seed(cfg.seed, density))?;
        let noisy = inject_salt_pepper(original, &spec);
        for filter in &cfg.filters {
            let start = Instant::now();
            let restored = filter.apply(&noisy)?;
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            let row = SweepRow {
                density_percent: density_percent(density),
                filter: filter.name(),
                quality: psnr(original, &restored)?,
                wall_time_ms,
            };
            sink(&row)?;
            rows.push(row);
        }
    }
    Ok(rows)
}
