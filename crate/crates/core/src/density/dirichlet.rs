use rand::Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::ln_gamma;

use super::{DensityError, Result, SimplexDensity};
use crate::geometry::BarycentricPoint;

/// Concentration parameters of a Dirichlet distribution.
///
/// The normalizing constant is `Γ(Σα) / ∏Γ(α_j)`, evaluated in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletParams {
    alpha: Vec<f64>,
    ln_norm: f64,
}

impl DirichletParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(DensityError::TooFewComponents);
        }
        if let Some(i) = alpha.iter().position(|a| !a.is_finite() || *a <= 0.0) {
            return Err(DensityError::NonPositiveAlpha {
                index: i + 1,
                value: alpha[i],
            });
        }
        let total: f64 = alpha.iter().sum();
        let ln_norm = ln_gamma(total) - alpha.iter().map(|&a| ln_gamma(a)).sum::<f64>();
        Ok(Self { alpha, ln_norm })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn ln_pdf(&self, p: &BarycentricPoint) -> Result<f64> {
        let w = p.weights();
        if w.len() != self.alpha.len() {
            return Err(DensityError::DimensionMismatch {
                expected: w.len(),
                got: self.alpha.len(),
            });
        }
        Ok(self.ln_norm
            + self
                .alpha
                .iter()
                .zip(w)
                .map(|(a, x)| (a - 1.0) * x.ln())
                .sum::<f64>())
    }

    /// Density with respect to the patch `(π_1, …, π_{J−1})`.
    pub fn pdf(&self, p: &BarycentricPoint) -> Result<f64> {
        self.ln_pdf(p).map(f64::exp)
    }

    /// Distribution of the renormalized sub-composition on `keep` (1-based):
    /// the concentrations of the kept components.
    pub fn marginal(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(DensityError::EmptyIndexSet);
        }
        let dim = self.alpha.len();
        let alpha = keep
            .iter()
            .map(|&k| {
                k.checked_sub(1)
                    .and_then(|i| self.alpha.get(i).copied())
                    .ok_or(DensityError::IndexOutOfRange { index: k, dim })
            })
            .collect::<Result<Vec<f64>>>()?;
        if alpha.len() < 2 {
            return Err(DensityError::TooFewComponents);
        }
        Self::new(alpha)
    }

    /// Draws a point by normalizing independent Gamma(α_j, 1) variates.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BarycentricPoint {
        let gammas: Vec<Gamma<f64>> = self
            .alpha
            .iter()
            .map(|&a| Gamma::new(a, 1.0).expect("alpha validated"))
            .collect();
        loop {
            let g: Vec<f64> = gammas.iter().map(|d| d.sample(rng)).collect();
            let s: f64 = g.iter().sum();
            let w: Vec<f64> = g.iter().map(|x| x / s).collect();
            // tiny concentrations can underflow a component to zero
            if let Ok(p) = BarycentricPoint::new(w) {
                return p;
            }
        }
    }
}

impl SimplexDensity for DirichletParams {
    fn dim(&self) -> usize {
        self.alpha.len()
    }

    fn eval(&self, x: &BarycentricPoint) -> Result<f64> {
        self.pdf(x)
    }
}
