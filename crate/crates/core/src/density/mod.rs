//! Marginal densities on the facets of a simplex.
//!
//! For every node `z` of a regular grid on the facet opposite `v_j`, the
//! density is sampled at `M` equidistant points of the segment from `z` to
//! `v_j` and summed. The two end samples are always zero (the density may be
//! undefined on the boundary).
//!
//! Two weightings are available:
//!
//! - [`Mode::LineIntegral`]: `Σ p(x_m)·|s|/M`, the plain line integral along the
//!   segment in a unit-edge regular simplex.
//! - [`Mode::Pushforward`]: `Σ p(x_m)·τ_m^{J−2}/(M−1)`, where `τ_m` is the
//!   fractional distance of `x_m` from the vertex. This is the density of the
//!   projected point, in facet coordinates; the grid is then rescaled so that
//!   it integrates to one.
//!
//! Densities are expressed with respect to the coordinate patch
//! `(π_1, …, π_{J−1})`, so the uniform density on the triangle is 2 and a
//! facet grid of a triangle integrates over area 1/2.

mod dirichlet;
mod grid;
mod marginal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::BarycentricPoint;

pub use dirichlet::DirichletParams;
pub use grid::{subdivision_nodes, DensityGrid, MAX_DEPTH, MAX_NODES};
pub use marginal::{marginalize, recursive_marginalize, GridDensity};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("density has J = {got}, point has {expected} components")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("concentration alpha_{index} = {value} must be positive and finite")]
    NonPositiveAlpha { index: usize, value: f64 },
    #[error("a Dirichlet distribution needs at least 2 components")]
    TooFewComponents,
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("index {index} is out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("depth {0} is outside 1..={MAX_DEPTH}")]
    DepthOutOfRange(u32),
    #[error("grid would have {0} nodes, more than the {MAX_NODES} allowed")]
    GridTooLarge(u64),
    #[error("integration accuracy M = {0} is below 2")]
    AccuracyTooLow(usize),
    #[error("density evaluation failed near node {node}: {reason}")]
    EvalFailure { node: usize, reason: String },
    #[error("query point lies outside the facet")]
    OutsideFacet,
    #[error("a face with {0} vertices cannot be marginalized further")]
    FacetTooSmall(usize),
    #[error("label {0} is not a vertex of this grid's face")]
    SubFacetAbsent(usize),
    #[error("malformed grid: {0}")]
    Malformed(String),
}

pub type Result<T, E = DensityError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    LineIntegral,
    #[default]
    Pushforward,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::LineIntegral => "line_integral",
            Mode::Pushforward => "pushforward",
        }
    }
}

/// A nonnegative density over the open simplex with `dim()` components.
///
/// Evaluations may run concurrently; a density that cannot tolerate that
/// returns `true` from [`is_serial`](Self::is_serial).
pub trait SimplexDensity: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &BarycentricPoint) -> Result<f64>;

    fn is_serial(&self) -> bool {
        false
    }
}

/// Affine-cell quadrature of the grid values over the facet patch.
pub fn grid_integral(grid: &DensityGrid) -> f64 {
    grid.integral()
}
