//! Ordinary kriging.
//!
//! For samples `p₁…p_N` and a target `p₀` the weights solve
//!
//! ```text
//! [ Γ + ρI   1 ] [ λ ]   [ γ₀ ]
//! [ 1ᵀ       0 ] [ μ ] = [ 1  ]
//! ```
//!
//! with `Γᵢⱼ = γ(‖pᵢ − pⱼ‖)`, `γ₀ᵢ = γ(‖pᵢ − p₀‖)` and ridge `ρ` on the
//! sample block only. The prediction is `Σ λᵢ zᵢ` and the estimation
//! variance `Σ λᵢ γ₀ᵢ + μ`, clamped at zero.
//!
//! The matrix depends only on sample geometry and the model, so
//! [`OrdinaryKriging`] factors it once and solves each target against it.

use crate::error::{Error, Result};
use crate::linalg::LuDecomposition;
use crate::variogram::{SamplePoint, VariogramModel};

pub const DEFAULT_RIDGE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct KrigingSolution {
    pub weights: Vec<f64>,
    pub lagrange: f64,
    pub predicted: f64,
    pub variance: f64,
}

/// A factored ordinary kriging system, reusable across targets.
#[derive(Debug, Clone)]
pub struct OrdinaryKriging<'a> {
    samples: &'a [SamplePoint],
    model: VariogramModel,
    lu: LuDecomposition,
}

impl<'a> OrdinaryKriging<'a> {
    pub fn new(samples: &'a [SamplePoint], model: VariogramModel, ridge: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientSamples { needed: 1, got: 0 });
        }
        if !(ridge >= 0.0 && ridge.is_finite()) {
            return Err(Error::InvalidParameter(format!("ridge must be >= 0, got {ridge}")));
        }
        check_distinct(samples)?;

        let n = samples.len();
        let dim = n + 1;
        let mut a = vec![0.0; dim * dim];
        for (i, p) in samples.iter().enumerate() {
            for (j, q) in samples.iter().enumerate().skip(i + 1) {
                let g = model.evaluate(p.distance_to(q.x, q.y));
                a[i * dim + j] = g;
                a[j * dim + i] = g;
            }
            a[i * dim + i] = ridge;
            a[i * dim + n] = 1.0;
            a[n * dim + i] = 1.0;
        }
        let lu = LuDecomposition::factor(a, dim).map_err(|_| Error::DegenerateGeometry)?;
        Ok(Self { samples, model, lu })
    }

    pub fn samples(&self) -> &[SamplePoint] {
        self.samples
    }

    pub fn model(&self) -> &VariogramModel {
        &self.model
    }

    pub fn solve(&self, x: f64, y: f64) -> KrigingSolution {
        let n = self.samples.len();
        let mut rhs: Vec<f64> = self
            .samples
            .iter()
            .map(|s| self.model.evaluate(s.distance_to(x, y)))
            .collect();
        rhs.push(1.0);

        let mut sol = self.lu.solve(&rhs);
        let lagrange = sol[n];
        sol.truncate(n);
        let predicted = sol.iter().zip(self.samples).map(|(w, s)| w * s.z).sum();
        let variance = sol.iter().zip(&rhs).map(|(w, g)| w * g).sum::<f64>() + lagrange;
        KrigingSolution {
            weights: sol,
            lagrange,
            predicted,
            variance: variance.max(0.0),
        }
    }

    pub fn predict(&self, x: f64, y: f64) -> f64 {
        self.solve(x, y).predicted
    }
}

fn check_distinct(samples: &[SamplePoint]) -> Result<()> {
    let mut coords: Vec<(f64, f64)> = samples.iter().map(|s| (s.x, s.y)).collect();
    coords.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    match coords.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::DuplicateSamples(w[0].0, w[0].1)),
        None => Ok(()),
    }
}

/// Krigs a single target.
pub fn solve_ordinary_kriging(
    samples: &[SamplePoint],
    target: (f64, f64),
    model: &VariogramModel,
    ridge: f64,
) -> Result<KrigingSolution> {
    Ok(OrdinaryKriging::new(samples, *model, ridge)?.solve(target.0, target.1))
}

/// Predicted values at every target, sharing one factorization.
pub fn predict_many(
    samples: &[SamplePoint],
    targets: &[(f64, f64)],
    model: &VariogramModel,
    ridge: f64,
) -> Result<Vec<f64>> {
    let system = OrdinaryKriging::new(samples, *model, ridge)?;
    Ok(targets.iter().map(|&(x, y)| system.predict(x, y)).collect())
}
