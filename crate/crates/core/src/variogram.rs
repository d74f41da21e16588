//! Empirical semivariogram estimation and parametric model fitting.
//!
//! The estimator is isotropic: every unordered sample pair contributes its
//! Euclidean lag and half its squared value difference to the lag class
//! `floor(d / bin_width)`. Three model families are fitted by weighted least
//! squares, weighting each bin by its pair count.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smallest nugget a fitted model may carry. An all-zero variogram would make
/// the kriging matrix singular; at the floor the solver degrades to equal weights.
pub const NUGGET_FLOOR: f64 = 1e-6;

pub const DEFAULT_BIN_WIDTH: f64 = 1.0;

/// One observed, non-noisy pixel: column `x`, row `y`, intensity `z`.
///
/// Filter-extracted samples always carry `1 <= z <= 254`; the estimators
/// themselves accept any finite `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SamplePoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Sample for an 8-bit pixel, or `None` if the value is an impulse extreme.
    pub fn from_pixel(x: i64, y: i64, value: u8) -> Option<Self> {
        (value != 0 && value != 255).then(|| Self::new(x as f64, y as f64, f64::from(value)))
    }

    #[inline]
    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        (self.x - x).hypot(self.y - y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariogramBin {
    /// Mean pair distance of the bin members.
    pub lag: f64,
    pub semivariance: f64,
    pub pair_count: usize,
}

/// Non-empty lag classes in increasing lag order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmpiricalVariogram {
    pub bins: Vec<VariogramBin>,
}

impl EmpiricalVariogram {
    pub fn total_pairs(&self) -> usize {
        self.bins.iter().map(|b| b.pair_count).sum()
    }
}

/// Half the mean squared difference of every sample pair, grouped by lag class.
pub fn empirical_semivariogram(samples: &[SamplePoint], bin_width: f64) -> Result<EmpiricalVariogram> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }

    // (sum of distances, sum of squared differences, count) per lag class
    let mut acc: Vec<(f64, f64, usize)> = Vec::new();
    for (i, a) in samples.iter().enumerate() {
        for b in &samples[i + 1..] {
            let d = a.distance_to(b.x, b.y);
            let class = (d / bin_width).floor() as usize;
            if class >= acc.len() {
                acc.resize(class + 1, (0.0, 0.0, 0));
            }
            let dz = a.z - b.z;
            let slot = &mut acc[class];
            slot.0 += d;
            slot.1 += dz * dz;
            slot.2 += 1;
        }
    }

    let bins = acc
        .into_iter()
        .filter(|&(_, _, n)| n > 0)
        .map(|(dsum, sqsum, n)| VariogramBin {
            lag: dsum / n as f64,
            semivariance: sqsum / (2.0 * n as f64),
            pair_count: n,
        })
        .collect();
    Ok(EmpiricalVariogram { bins })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ModelKind {
    Nugget,
    #[default]
    Linear,
    Exponential,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Nugget => "nugget",
            ModelKind::Linear => "linear",
            ModelKind::Exponential => "exponential",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nugget" => Ok(ModelKind::Nugget),
            "linear" => Ok(ModelKind::Linear),
            "exponential" | "exp" => Ok(ModelKind::Exponential),
            other => Err(Error::InvalidParameter(format!("unknown variogram model {other:?}"))),
        }
    }
}

/// Parametric semivariogram `γ(h)`. All parameters are nonnegative and
/// `γ(0) = 0` regardless of the nugget, so kriging reproduces observed values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VariogramModel {
    Nugget { nugget: f64 },
    Linear { nugget: f64, slope: f64 },
    Exponential { nugget: f64, sill: f64, range: f64 },
}

impl Default for VariogramModel {
    fn default() -> Self {
        VariogramModel::Nugget {
            nugget: NUGGET_FLOOR,
        }
    }
}

impl VariogramModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            VariogramModel::Nugget { .. } => ModelKind::Nugget,
            VariogramModel::Linear { .. } => ModelKind::Linear,
            VariogramModel::Exponential { .. } => ModelKind::Exponential,
        }
    }

    #[inline]
    pub fn evaluate(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return 0.0;
        }
        match *self {
            VariogramModel::Nugget { nugget } => nugget,
            VariogramModel::Linear { nugget, slope } => nugget + slope * h,
            VariogramModel::Exponential { nugget, sill, range } => {
                nugget + sill * (1.0 - (-h / range).exp())
            }
        }
    }
}

/// Fits a model of the requested kind to `ev`.
///
/// A fit that comes out identically zero (e.g. all samples equal) is replaced
/// by a nugget model at [`NUGGET_FLOOR`]. An exponential fit with fewer than
/// three bins, or whose best range sits on the search boundary, falls back
/// to the linear fit.
pub fn fit_model(ev: &EmpiricalVariogram, kind: ModelKind) -> Result<VariogramModel> {
    if ev.bins.is_empty() || ev.total_pairs() == 0 {
        return Err(Error::InsufficientData);
    }
    let model = match kind {
        ModelKind::Nugget => fit_nugget(ev),
        ModelKind::Linear => fit_linear(ev),
        ModelKind::Exponential => fit_exponential(ev).unwrap_or_else(|| fit_linear(ev)),
    };
    Ok(if is_degenerate(&model) {
        VariogramModel::default()
    } else {
        model
    })
}

fn is_degenerate(model: &VariogramModel) -> bool {
    match *model {
        VariogramModel::Nugget { nugget } => nugget < NUGGET_FLOOR,
        VariogramModel::Linear { nugget, slope } => nugget < NUGGET_FLOOR && slope < NUGGET_FLOOR,
        VariogramModel::Exponential { nugget, sill, .. } => {
            nugget < NUGGET_FLOOR && sill < NUGGET_FLOOR
        }
    }
}

fn weighted_mean(ev: &EmpiricalVariogram) -> f64 {
    let (num, den) = ev.bins.iter().fold((0.0, 0.0), |(num, den), b| {
        let w = b.pair_count as f64;
        (num + w * b.semivariance, den + w)
    });
    num / den
}

fn fit_nugget(ev: &EmpiricalVariogram) -> VariogramModel {
    VariogramModel::Nugget {
        nugget: weighted_mean(ev).max(NUGGET_FLOOR),
    }
}

/// Weighted least squares for `γ = a + b·f(h)` with `a, b >= 0`.
/// Returns `(a, b, weighted SSE)`.
fn nonneg_affine_fit(ev: &EmpiricalVariogram, f: impl Fn(f64) -> f64) -> (f64, f64, f64) {
    let mut sw = 0.0;
    let mut sf = 0.0;
    let mut sg = 0.0;
    let mut sff = 0.0;
    let mut sfg = 0.0;
    for b in &ev.bins {
        let w = b.pair_count as f64;
        let fx = f(b.lag);
        sw += w;
        sf += w * fx;
        sg += w * b.semivariance;
        sff += w * fx * fx;
        sfg += w * fx * b.semivariance;
    }
    let fbar = sf / sw;
    let gbar = sg / sw;
    let sxx = sff - sf * fbar;
    let sxy = sfg - sf * gbar;

    let (mut a, mut b) = if sxx > 1e-12 * sff.max(1.0) {
        let b = sxy / sxx;
        (gbar - b * fbar, b)
    } else {
        (gbar, 0.0)
    };
    if b < 0.0 {
        a = gbar;
        b = 0.0;
    }
    if a < 0.0 {
        a = 0.0;
        b = if sff > 0.0 { (sfg / sff).max(0.0) } else { 0.0 };
    }

    let sse = ev
        .bins
        .iter()
        .map(|bin| {
            let r = bin.semivariance - (a + b * f(bin.lag));
            bin.pair_count as f64 * r * r
        })
        .sum();
    (a, b, sse)
}

fn fit_linear(ev: &EmpiricalVariogram) -> VariogramModel {
    let (nugget, slope, _) = nonneg_affine_fit(ev, |h| h);
    VariogramModel::Linear { nugget, slope }
}

/// For a fixed range the exponential model is affine in (nugget, sill), so
/// the range is found by a log-spaced scan refined with golden-section search.
fn fit_exponential(ev: &EmpiricalVariogram) -> Option<VariogramModel> {
    if ev.bins.len() < 3 {
        return None;
    }
    let min_lag = ev.bins.first()?.lag;
    let max_lag = ev.bins.last()?.lag;
    if !(min_lag > 0.0 && max_lag > min_lag) {
        return None;
    }

    let sse_at = |range: f64| nonneg_affine_fit(ev, |h| 1.0 - (-h / range).exp()).2;

    const STEPS: usize = 48;
    let lo = (min_lag / 10.0).ln();
    let hi = (max_lag * 10.0).ln();
    let grid: Vec<f64> = (0..=STEPS)
        .map(|i| (lo + (hi - lo) * i as f64 / STEPS as f64).exp())
        .collect();
    let (best, _) = grid
        .iter()
        .enumerate()
        .map(|(i, &r)| (i, sse_at(r)))
        .filter(|(_, s)| s.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))?;
    if best == 0 || best == STEPS {
        return None;
    }

    // golden-section refinement on ln(range) within the bracketing cells
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (grid[best - 1].ln(), grid[best + 1].ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (sse_at(c.exp()), sse_at(d.exp()));
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sse_at(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sse_at(d.exp());
        }
        if (b - a).abs() < 1e-10 {
            break;
        }
    }
    let range = ((a + b) / 2.0).exp();
    let (nugget, sill, sse) = nonneg_affine_fit(ev, |h| 1.0 - (-h / range).exp());
    if !(sse.is_finite() && range.is_finite() && range > 0.0) || sill <= 0.0 {
        return None;
    }
    Some(VariogramModel::Exponential { nugget, sill, range })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bin(lag: f64, semivariance: f64, pair_count: usize) -> VariogramBin {
        VariogramBin {
            lag,
            semivariance,
            pair_count,
        }
    }

    fn figure_one_samples() -> Vec<SamplePoint> {
        // (col, row, z) in 1-based grid labels
        [(2, 1, 88), (3, 1, 85), (1, 2, 88), (2, 3, 88), (3, 3, 86)]
            .iter()
            .map(|&(x, y, z)| SamplePoint::new(x as f64, y as f64, z as f64))
            .collect()
    }

    #[test]
    fn single_pair() {
        let s = [SamplePoint::new(0.0, 0.0, 100.0), SamplePoint::new(1.0, 0.0, 104.0)];
        let ev = empirical_semivariogram(&s, 1.5).unwrap();
        assert_eq!(ev.bins, vec![bin(1.0, 8.0, 1)]);
    }

    #[test]
    fn constant_field_is_flat_zero() {
        let s: Vec<_> = (0..9)
            .map(|i| SamplePoint::new((i % 3) as f64, (i / 3) as f64, 42.0))
            .collect();
        let ev = empirical_semivariogram(&s, 1.0).unwrap();
        assert!(ev.bins.iter().all(|b| b.semivariance == 0.0));
        assert_eq!(ev.total_pairs(), 36);
        for kind in [ModelKind::Nugget, ModelKind::Linear, ModelKind::Exponential] {
            assert_eq!(
                fit_model(&ev, kind).unwrap(),
                VariogramModel::Nugget {
                    nugget: NUGGET_FLOOR
                }
            );
        }
    }

    #[test]
    fn figure_one_bins() {
        // pairs at d=1: (88,85),(88,86); d=√2: (88,88)×2;
        // d=2: (88,88),(85,86); d=√5: (88,86),(85,88),(85,88),(88,86)
        let ev = empirical_semivariogram(&figure_one_samples(), 1.0).unwrap();
        assert_eq!(ev.bins.len(), 2);
        let r2 = 2f64.sqrt();
        let r5 = 5f64.sqrt();
        assert_eq!(ev.bins[0].pair_count, 4);
        assert!((ev.bins[0].semivariance - 13.0 / 8.0).abs() < 1e-12);
        assert!((ev.bins[0].lag - (2.0 + 2.0 * r2) / 4.0).abs() < 1e-12);
        assert_eq!(ev.bins[1].pair_count, 6);
        assert!((ev.bins[1].semivariance - 27.0 / 12.0).abs() < 1e-12);
        assert!((ev.bins[1].lag - (4.0 + 4.0 * r5) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            empirical_semivariogram(&[SamplePoint::new(0.0, 0.0, 1.0)], 1.0),
            Err(Error::InsufficientSamples { needed: 2, got: 1 })
        ));
        let s = [SamplePoint::new(0.0, 0.0, 1.0), SamplePoint::new(1.0, 0.0, 2.0)];
        assert!(empirical_semivariogram(&s, 0.0).is_err());
        assert!(matches!(
            fit_model(&EmpiricalVariogram::default(), ModelKind::Linear),
            Err(Error::InsufficientData)
        ));
    }

    #[test]
    fn constant_bins_fit_nugget() {
        let ev = EmpiricalVariogram {
            bins: vec![bin(1.0, 5.0, 3), bin(2.0, 5.0, 7), bin(3.0, 5.0, 1)],
        };
        assert_eq!(
            fit_model(&ev, ModelKind::Nugget).unwrap(),
            VariogramModel::Nugget { nugget: 5.0 }
        );
        match fit_model(&ev, ModelKind::Linear).unwrap() {
            VariogramModel::Linear { nugget, slope } => {
                assert!((nugget - 5.0).abs() < 1e-12 && slope.abs() < 1e-12)
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn linear_through_two_points() {
        let ev = EmpiricalVariogram {
            bins: vec![bin(1.0, 2.0, 4), bin(2.0, 4.0, 4)],
        };
        match fit_model(&ev, ModelKind::Linear).unwrap() {
            VariogramModel::Linear { nugget, slope } => {
                assert!(nugget.abs() < 1e-12, "{nugget}");
                assert!((slope - 2.0).abs() < 1e-12, "{slope}");
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn linear_clamps_negative_parameters() {
        // decreasing: slope clamps to 0, nugget to the weighted mean
        let ev = EmpiricalVariogram {
            bins: vec![bin(1.0, 6.0, 1), bin(2.0, 2.0, 3)],
        };
        assert_eq!(
            fit_model(&ev, ModelKind::Linear).unwrap(),
            VariogramModel::Linear {
                nugget: 3.0,
                slope: 0.0
            }
        );
        // steep line with negative intercept: refit through the origin
        let ev = EmpiricalVariogram {
            bins: vec![bin(1.0, 1.0, 1), bin(2.0, 5.0, 1)],
        };
        match fit_model(&ev, ModelKind::Linear).unwrap() {
            VariogramModel::Linear { nugget, slope } => {
                assert_eq!(nugget, 0.0);
                assert!((slope - 11.0 / 5.0).abs() < 1e-12);
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn exponential_recovers_parameters() {
        let truth = VariogramModel::Exponential {
            nugget: 1.5,
            sill: 10.0,
            range: 2.5,
        };
        let bins = (1..=10)
            .map(|i| {
                let h = i as f64 * 0.8;
                bin(h, truth.evaluate(h), 5 + i)
            })
            .collect();
        let fitted = fit_model(&EmpiricalVariogram { bins }, ModelKind::Exponential).unwrap();
        match fitted {
            VariogramModel::Exponential { nugget, sill, range } => {
                assert!((nugget - 1.5).abs() < 1e-4, "{fitted:?}");
                assert!((sill - 10.0).abs() < 1e-4, "{fitted:?}");
                assert!((range - 2.5).abs() < 1e-4, "{fitted:?}");
            }
            m => panic!("{m:?}"),
        }
    }

    #[test]
    fn exponential_falls_back_to_linear() {
        let ev = EmpiricalVariogram {
            bins: vec![bin(1.0, 2.0, 4), bin(2.0, 4.0, 4)],
        };
        assert_eq!(fit_model(&ev, ModelKind::Exponential).unwrap().kind(), ModelKind::Linear);
        // unbounded linear growth: best range runs off the scan
        let ev = EmpiricalVariogram {
            bins: (1..=6).map(|i| bin(i as f64, 3.0 * i as f64, 2)).collect(),
        };
        assert_eq!(fit_model(&ev, ModelKind::Exponential).unwrap().kind(), ModelKind::Linear);
    }

    #[test]
    fn evaluate_values() {
        let n = VariogramModel::Nugget { nugget: 3.0 };
        let l = VariogramModel::Linear {
            nugget: 1.0,
            slope: 2.0,
        };
        let e = VariogramModel::Exponential {
            nugget: 1.0,
            sill: 4.0,
            range: 2.0,
        };
        for m in [n, l, e] {
            assert_eq!(m.evaluate(0.0), 0.0);
        }
        assert_eq!(n.evaluate(2.5), 3.0);
        assert_eq!(l.evaluate(3.0), 7.0);
        assert!((e.evaluate(2.0) - (1.0 + 4.0 * (1.0 - (-1f64).exp()))).abs() < 1e-15);
    }

    #[test]
    fn model_kind_parsing() {
        assert_eq!("Linear".parse::<ModelKind>().unwrap(), ModelKind::Linear);
        assert_eq!("exp".parse::<ModelKind>().unwrap(), ModelKind::Exponential);
        assert!("spherical".parse::<ModelKind>().is_err());
        assert_eq!(ModelKind::default().to_string(), "linear");
    }

    fn samples_strategy() -> impl Strategy<Value = Vec<SamplePoint>> {
        prop::collection::btree_set((0i32..12, 0i32..12), 2..20).prop_flat_map(|coords| {
            let n = coords.len();
            (Just(coords), prop::collection::vec(1u8..=254, n)).prop_map(|(coords, zs)| {
                coords
                    .into_iter()
                    .zip(zs)
                    .map(|((x, y), z)| SamplePoint::new(x as f64, y as f64, z as f64))
                    .collect()
            })
        })
    }

    fn assert_same(a: &EmpiricalVariogram, b: &EmpiricalVariogram, scale: f64) {
        assert_eq!(a.bins.len(), b.bins.len());
        for (p, q) in a.bins.iter().zip(&b.bins) {
            assert_eq!(p.pair_count, q.pair_count);
            assert!((p.lag - q.lag).abs() < 1e-9);
            assert!((p.semivariance * scale - q.semivariance).abs() < 1e-9 * (1.0 + q.semivariance));
        }
    }

    proptest! {
        #[test]
        fn permutation_invariant(s in samples_strategy(), seed in any::<u64>()) {
            let base = empirical_semivariogram(&s, 1.0).unwrap();
            let mut shuffled = s.clone();
            let mut k = seed;
            for i in (1..shuffled.len()).rev() {
                k = k.wrapping_mul(6364136223846793005).wrapping_add(1);
                shuffled.swap(i, (k >> 33) as usize % (i + 1));
            }
            assert_same(&base, &empirical_semivariogram(&shuffled, 1.0).unwrap(), 1.0);
        }

        #[test]
        fn translation_and_value_shift_invariant(s in samples_strategy(), dx in -50i32..50, dy in -50i32..50, c in -100.0f64..100.0) {
            let base = empirical_semivariogram(&s, 1.0).unwrap();
            let moved: Vec<_> = s.iter()
                .map(|p| SamplePoint::new(p.x + dx as f64, p.y + dy as f64, p.z + c))
                .collect();
            assert_same(&base, &empirical_semivariogram(&moved, 1.0).unwrap(), 1.0);
        }

        #[test]
        fn value_scaling_scales_semivariance(s in samples_strategy(), c in -4.0f64..4.0) {
            let base = empirical_semivariogram(&s, 1.0).unwrap();
            let scaled: Vec<_> = s.iter().map(|p| SamplePoint::new(p.x, p.y, p.z * c)).collect();
            assert_same(&base, &empirical_semivariogram(&scaled, 1.0).unwrap(), c * c);
        }

        #[test]
        fn fitted_models_are_nondecreasing(s in samples_strategy(), kind in prop_oneof![
            Just(ModelKind::Nugget), Just(ModelKind::Linear), Just(ModelKind::Exponential)
        ]) {
            let ev = empirical_semivariogram(&s, 1.0).unwrap();
            let m = fit_model(&ev, kind).unwrap();
            let mut prev = m.evaluate(1e-9);
            prop_assert!(prev >= 0.0);
            for i in 1..200 {
                let g = m.evaluate(i as f64 * 0.1);
                prop_assert!(g + 1e-12 >= prev);
                prev = g;
            }
        }
    }
}
