//! The simplex projection: all `J` facet projections of a point, and its exact
//! inverse.
//!
//! Every facet projection keeps the ratios of its surviving components. One
//! ratio per facet, taken around the cycle `π1/π2, π2/π3, …, πJ/π1`, pins the
//! original point down together with the sum-to-one constraint:
//!
//! ```text
//! π_j − r_{j,j+1} π_{j+1} = 0      for j = 1..J−1
//! π_1 + … + π_J           = 1
//! ```
//!
//! The default solver chains the ratios back from `π_J = 1` and divides by the
//! sum. [`Solver::Dense`] solves the same system by Gaussian elimination and is
//! kept for cross-checks.

use thiserror::Error;

use crate::geometry::{
    self, is_compatible, BarycentricPoint, FacetProjection, GeometryError,
    LabeledWeights,
};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectionError {
    #[error("bundle is not in the image of the projection (incompatible facets)")]
    IncompatibleBundle,
    #[error("facet projections are not compatible")]
    IncompatiblePair,
    #[error("both projections lie on the facet opposite vertex {0}")]
    SameFacet(usize),
    #[error("linear system is singular or produced a non-positive solution")]
    SingularSystem,
    #[error("malformed bundle: {0}")]
    MalformedBundle(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub type Result<T, E = ProjectionError> = std::result::Result<T, E>;

/// One projection per facet; entry `j-1` lies on the facet opposite `v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionBundle {
    dim: usize,
    projections: Vec<FacetProjection>,
}

impl ProjectionBundle {
    /// Structural checks only; image membership is [`validate_image`].
    pub fn new(projections: Vec<FacetProjection>) -> Result<Self> {
        let dim = projections.len();
        if dim < 3 {
            return Err(ProjectionError::MalformedBundle(format!(
                "need at least 3 facets, got {dim}"
            )));
        }
        for (i, p) in projections.iter().enumerate() {
            if p.dim() != dim {
                return Err(ProjectionError::MalformedBundle(format!(
                    "projection {} lives in J = {}, bundle has J = {dim}",
                    i + 1,
                    p.dim()
                )));
            }
            if p.dropped() != i + 1 {
                return Err(ProjectionError::MalformedBundle(format!(
                    "slot {} holds the facet opposite v{}",
                    i + 1,
                    p.dropped()
                )));
            }
        }
        Ok(Self { dim, projections })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projections(&self) -> &[FacetProjection] {
        &self.projections
    }

    /// Projection on the facet opposite `vertex` (1-based).
    pub fn facet(&self, vertex: usize) -> &FacetProjection {
        &self.projections[vertex - 1]
    }
}

/// Ratios of consecutive components around the cycle
/// `(r_{1,2}, r_{2,3}, …, r_{J−1,J}, r_{J,1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCycle {
    ratios: Vec<f64>,
}

impl RatioCycle {
    pub fn new(ratios: Vec<f64>) -> Result<Self> {
        if ratios.len() < 3 {
            return Err(ProjectionError::MalformedBundle(format!(
                "a ratio cycle needs at least 3 entries, got {}",
                ratios.len()
            )));
        }
        if ratios.iter().any(|r| !r.is_finite() || *r <= 0.0) {
            return Err(ProjectionError::SingularSystem);
        }
        Ok(Self { ratios })
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    /// Product of all entries; one for any cycle taken from a single point.
    pub fn product(&self) -> f64 {
        self.ratios.iter().product()
    }

    pub fn is_well_conditioned(&self) -> bool {
        self.ratios.iter().all(|&r| {
            (1.0 / tol::RATIO_CONDITIONING..=tol::RATIO_CONDITIONING).contains(&r)
        })
    }
}

/// Facet (1-based dropped vertex) that supplies `r_{j,j+1}` in the cycle: the
/// facet opposite `v_{j+2}`, indices taken mod `J`.
pub fn cycle_facet(dim: usize, j: usize) -> usize {
    (j + 1) % dim + 1
}

/// Labels `(j, j+1)` of the `j`-th cycle ratio, wrapping `J+1` to `1`.
pub fn cycle_labels(dim: usize, j: usize) -> (usize, usize) {
    (j, j % dim + 1)
}

pub fn project_all(p: &BarycentricPoint) -> ProjectionBundle {
    let dim = p.weights().len();
    let projections = (1..=dim)
        .map(|v| geometry::perspective_project(p, v).expect("vertex index in range"))
        .collect();
    ProjectionBundle { dim, projections }
}

/// Image membership: every pair of facet projections is compatible and the
/// ratio cycle closes.
///
/// For `J = 3` two edges share a single label, so pairwise compatibility holds
/// for any triple of edge points; the cycle product is what rules out mixtures.
pub fn validate_image(b: &ProjectionBundle, tol: f64) -> bool {
    let p = &b.projections;
    for i in 0..p.len() {
        for k in i + 1..p.len() {
            if !is_compatible(&p[i], &p[k], tol) {
                return false;
            }
        }
    }
    (extract_cycle(b).product() - 1.0).abs() <= tol
}

pub fn extract_cycle(b: &ProjectionBundle) -> RatioCycle {
    let dim = b.dim;
    let ratios = (1..=dim)
        .map(|j| {
            let (n, m) = cycle_labels(dim, j);
            geometry::ratio(b.facet(cycle_facet(dim, j)), n, m)
                .expect("cycle facet retains both labels")
        })
        .collect();
    RatioCycle { ratios }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Chain ratios from `π_J = 1` and normalize.
    #[default]
    BackSubstitution,
    /// Gaussian elimination on the explicit `J×J` system.
    Dense,
}

/// Solves the ratio system for the `J−1` consecutive ratios
/// `r_{1,2}, …, r_{J−1,J}`.
pub fn solve_ratio_chain(ratios: &[f64], solver: Solver) -> Result<Vec<f64>> {
    if ratios.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(ProjectionError::SingularSystem);
    }
    if ratios
        .iter()
        .any(|&r| !(1.0 / tol::RATIO_CONDITIONING..=tol::RATIO_CONDITIONING).contains(&r))
    {
        log::warn!("ill-conditioned ratio chain: {ratios:?}");
    }
    let pi = match solver {
        Solver::BackSubstitution => back_substitute(ratios),
        Solver::Dense => dense_solve(ratios)?,
    };
    if pi.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(ProjectionError::SingularSystem);
    }
    Ok(pi)
}

fn back_substitute(ratios: &[f64]) -> Vec<f64> {
    let dim = ratios.len() + 1;
    let mut pi = vec![0.0; dim];
    pi[dim - 1] = 1.0;
    for j in (0..dim - 1).rev() {
        pi[j] = ratios[j] * pi[j + 1];
    }
    let s: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|w| *w /= s);
    pi
}

fn dense_solve(ratios: &[f64]) -> Result<Vec<f64>> {
    let n = ratios.len() + 1;
    // augmented matrix, row-major
    let mut a = vec![vec![0.0; n + 1]; n];
    for (j, &r) in ratios.iter().enumerate() {
        a[j][j] = 1.0;
        a[j][j + 1] = -r;
    }
    a[n - 1][..n].fill(1.0);
    a[n - 1][n] = 1.0;

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < f64::MIN_POSITIVE {
            return Err(ProjectionError::SingularSystem);
        }
        a.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..=n {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][n] - tail) / a[row][row];
    }
    Ok(x)
}

/// Inverse of [`project_all`], with the default compatibility tolerance.
pub fn reconstruct(b: &ProjectionBundle) -> Result<BarycentricPoint> {
    reconstruct_with(b, tol::COMPAT, Solver::default())
}

pub fn reconstruct_with(b: &ProjectionBundle, tol: f64, solver: Solver) -> Result<BarycentricPoint> {
    if !validate_image(b, tol) {
        return Err(ProjectionError::IncompatibleBundle);
    }
    let cycle = extract_cycle(b);
    // the closing ratio r_{J,1} is implied by the others
    let chain = &cycle.ratios[..b.dim - 1];
    Ok(BarycentricPoint::from_weights_unchecked(solve_ratio_chain(
        chain, solver,
    )?))
}

/// Recovers the point from two projections on different facets.
pub fn reconstruct_from_two(a: &FacetProjection, b: &FacetProjection) -> Result<BarycentricPoint> {
    reconstruct_from_two_with(a, b, tol::COMPAT)
}

pub fn reconstruct_from_two_with(
    a: &FacetProjection,
    b: &FacetProjection,
    tol: f64,
) -> Result<BarycentricPoint> {
    if a.dim() != b.dim() {
        return Err(ProjectionError::MalformedBundle(format!(
            "projections from J = {} and J = {}",
            a.dim(),
            b.dim()
        )));
    }
    if a.dropped() == b.dropped() {
        return Err(ProjectionError::SameFacet(a.dropped()));
    }
    if !is_compatible(a, b, tol) {
        return Err(ProjectionError::IncompatiblePair);
    }
    let dim = a.dim();
    let n = a.dropped();
    let shared: Vec<usize> = (1..=dim).filter(|&l| l != n && l != b.dropped()).collect();
    // `a` fixes every weight but π_n up to scale; `b` gives π_n relative to the
    // shared labels, using their whole sum rather than a single component.
    let shared_in_a: f64 = shared.iter().map(|&l| a.weight(l).unwrap()).sum();
    let shared_in_b: f64 = shared.iter().map(|&l| b.weight(l).unwrap()).sum();
    let pi_n = b.weight(n).unwrap() * shared_in_a / shared_in_b;
    let mut w: Vec<f64> = (1..=dim)
        .map(|l| if l == n { pi_n } else { a.weight(l).unwrap() })
        .collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    if w.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(ProjectionError::SingularSystem);
    }
    Ok(BarycentricPoint::from_weights_unchecked(w))
}
