//! Barycentric coordinates on the open simplex.
//!
//! A composition of `J` parts is a point of the (J−1)-simplex with strictly
//! positive weights that sum to one. Component labels are 1-based everywhere
//! in the public API; storage is 0-based.
//!
//! The perspective projection about vertex `j` drops component `j` and
//! renormalizes the rest. Ratios between surviving components are unchanged by
//! any number of such steps, which is what makes the projection invertible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("a composition needs at least 2 components, got {0}")]
    DimensionTooSmall(usize),
    #[error("component {label} = {value} is not strictly inside (0, 1)")]
    NonPositiveComponent { label: usize, value: f64 },
    #[error("component {label} is not finite")]
    NonFiniteComponent { label: usize },
    #[error("components sum to {sum}, outside the accepted window")]
    SumOutOfTolerance { sum: f64 },
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("label {label} is not carried by this point")]
    IndexAbsent { label: usize },
    #[error("vertex index {index} is out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("ratio needs two distinct labels, got {0} twice")]
    SameIndex(usize),
    #[error("expected {expected} weights, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("2D rendering supports J = 3 or J = 4, got J = {0}")]
    UnsupportedDimensionForRendering(usize),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

/// How raw input weights are turned into a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// Accept only weights that already sum to one within [`tol::SUM`].
    #[default]
    Strict,
    /// Divide by the sum when it lies within [`tol::RENORMALIZE_WINDOW`] of one.
    /// Never repairs a sign.
    Renormalize,
}

/// Anything that carries weights for a subset of the labels `1..=J`.
pub trait LabeledWeights {
    /// Dimension `J` of the ambient simplex.
    fn dim(&self) -> usize;
    /// Surviving labels in increasing order.
    fn labels(&self) -> Vec<usize>;
    fn weight(&self, label: usize) -> Option<f64>;
}

/// A point in the open (J−1)-simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricPoint {
    weights: Vec<f64>,
}

impl BarycentricPoint {
    /// Strict construction.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::validate(&weights, Policy::Strict)
    }

    pub fn validate(raw: &[f64], policy: Policy) -> Result<Self> {
        if raw.len() < 2 {
            return Err(GeometryError::DimensionTooSmall(raw.len()));
        }
        if let Some(i) = raw.iter().position(|w| !w.is_finite()) {
            return Err(GeometryError::NonFiniteComponent { label: i + 1 });
        }
        let sum: f64 = raw.iter().sum();
        let weights: Vec<f64> = match policy {
            Policy::Strict => {
                check_open(raw)?;
                if (sum - 1.0).abs() > tol::SUM {
                    return Err(GeometryError::SumOutOfTolerance { sum });
                }
                raw.to_vec()
            }
            Policy::Renormalize => {
                if (sum - 1.0).abs() > tol::RENORMALIZE_WINDOW {
                    return Err(GeometryError::SumOutOfTolerance { sum });
                }
                let w: Vec<f64> = raw.iter().map(|x| x / sum).collect();
                check_open(&w)?;
                w
            }
        };
        Ok(Self { weights })
    }

    /// Caller guarantees positivity and unit sum.
    pub(crate) fn from_weights_unchecked(weights: Vec<f64>) -> Self {
        debug_assert!(weights.iter().all(|w| *w > 0.0));
        Self { weights }
    }

    pub fn centroid(dim: usize) -> Self {
        assert!(dim >= 2, "centroid needs J >= 2");
        Self {
            weights: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    pub fn renormalize(&self, keep: &[usize]) -> Result<Vec<f64>> {
        renormalize(self, keep)
    }

    pub fn ratio(&self, n: usize, m: usize) -> Result<f64> {
        ratio(self, n, m)
    }

    pub fn project(&self, vertex: usize) -> Result<FacetProjection> {
        perspective_project(self, vertex)
    }

    /// Maximum componentwise distance to `other`.
    pub fn max_abs_diff(&self, other: &BarycentricPoint) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Relabel components: the weight at label `i` moves to label `perm[i-1]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.weights.len());
        let mut w = vec![0.0; self.weights.len()];
        for (i, &target) in perm.iter().enumerate() {
            w[target - 1] = self.weights[i];
        }
        Self { weights: w }
    }
}

fn check_open(w: &[f64]) -> Result<()> {
    match w.iter().position(|&x| x <= 0.0 || x >= 1.0) {
        Some(i) => Err(GeometryError::NonPositiveComponent {
            label: i + 1,
            value: w[i],
        }),
        None => Ok(()),
    }
}

impl LabeledWeights for BarycentricPoint {
    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn labels(&self) -> Vec<usize> {
        (1..=self.weights.len()).collect()
    }

    fn weight(&self, label: usize) -> Option<f64> {
        label.checked_sub(1).and_then(|i| self.weights.get(i).copied())
    }
}

/// The image of a point under the perspective projection about one vertex:
/// a point of the facet opposite `dropped`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetProjection {
    dim: usize,
    dropped: usize,
    /// Weights for labels `1..=dim` without `dropped`, in label order.
    weights: Vec<f64>,
}

impl FacetProjection {
    /// Builds a facet point from weights listed in surviving-label order.
    ///
    /// Weights are checked for positivity and unit sum like a strict input.
    pub fn new(dim: usize, dropped: usize, weights: Vec<f64>) -> Result<Self> {
        if dim < 3 {
            return Err(GeometryError::DimensionTooSmall(dim));
        }
        if dropped == 0 || dropped > dim {
            return Err(GeometryError::IndexOutOfRange { index: dropped, dim });
        }
        if weights.len() != dim - 1 {
            return Err(GeometryError::LengthMismatch {
                expected: dim - 1,
                got: weights.len(),
            });
        }
        let p = BarycentricPoint::validate(&weights, Policy::Strict)?;
        Ok(Self {
            dim,
            dropped,
            weights: p.into_weights(),
        })
    }

    pub(crate) fn from_parts_unchecked(dim: usize, dropped: usize, weights: Vec<f64>) -> Self {
        Self {
            dim,
            dropped,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The facet point as a composition of its own `J−1` parts.
    pub fn as_point(&self) -> BarycentricPoint {
        BarycentricPoint::from_weights_unchecked(self.weights.clone())
    }

    fn slot(&self, label: usize) -> Option<usize> {
        if label == 0 || label > self.dim || label == self.dropped {
            None
        } else if label < self.dropped {
            Some(label - 1)
        } else {
            Some(label - 2)
        }
    }
}

impl LabeledWeights for FacetProjection {
    fn dim(&self) -> usize {
        self.dim
    }

    fn labels(&self) -> Vec<usize> {
        (1..=self.dim).filter(|&l| l != self.dropped).collect()
    }

    fn weight(&self, label: usize) -> Option<f64> {
        self.slot(label).map(|i| self.weights[i])
    }
}

/// Weights of the labels in `keep`, divided by their sum. Output follows the
/// order of `keep`.
pub fn renormalize<P: LabeledWeights + ?Sized>(p: &P, keep: &[usize]) -> Result<Vec<f64>> {
    if keep.is_empty() {
        return Err(GeometryError::EmptyIndexSet);
    }
    let picked = keep
        .iter()
        .map(|&l| {
            p.weight(l).ok_or(if l == 0 || l > p.dim() {
                GeometryError::IndexOutOfRange {
                    index: l,
                    dim: p.dim(),
                }
            } else {
                GeometryError::IndexAbsent { label: l }
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let sum: f64 = picked.iter().sum();
    Ok(picked.into_iter().map(|w| w / sum).collect())
}

/// `π_n / π_m`, invariant under any renormalization that keeps both labels.
pub fn ratio<P: LabeledWeights + ?Sized>(p: &P, n: usize, m: usize) -> Result<f64> {
    if n == m {
        return Err(GeometryError::SameIndex(n));
    }
    let a = p.weight(n).ok_or(GeometryError::IndexAbsent { label: n })?;
    let b = p.weight(m).ok_or(GeometryError::IndexAbsent { label: m })?;
    Ok(a / b)
}

/// Projection of `p` about vertex `vertex` onto the opposite facet.
pub fn perspective_project(p: &BarycentricPoint, vertex: usize) -> Result<FacetProjection> {
    let dim = p.dim();
    if vertex == 0 || vertex > dim {
        return Err(GeometryError::IndexOutOfRange { index: vertex, dim });
    }
    if dim < 3 {
        return Err(GeometryError::DimensionTooSmall(dim));
    }
    let keep: Vec<usize> = (1..=dim).filter(|&l| l != vertex).collect();
    let weights = renormalize(p, &keep)?;
    Ok(FacetProjection::from_parts_unchecked(dim, vertex, weights))
}

/// Whether two facet points agree on the renormalized weights of the labels
/// they share, within `tol` per component.
///
/// Points of different ambient dimension are never compatible.
pub fn is_compatible(a: &FacetProjection, b: &FacetProjection, tol: f64) -> bool {
    if a.dim != b.dim {
        return false;
    }
    let shared: Vec<usize> = (1..=a.dim)
        .filter(|&l| l != a.dropped && l != b.dropped)
        .collect();
    let (Ok(ra), Ok(rb)) = (renormalize(a, &shared), renormalize(b, &shared)) else {
        return false;
    };
    ra.iter().zip(&rb).all(|(x, y)| (x - y).abs() <= tol)
}

/// A point in the drawing plane, in abstract length units (unit simplex edge).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CartesianPoint2D {
    pub x: f64,
    pub y: f64,
}

impl CartesianPoint2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        Self::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }
}

/// A labeled triangle in the plane. `vertices[i]` is the position of simplex
/// vertex `labels[i]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle2D {
    pub labels: [usize; 3],
    pub vertices: [CartesianPoint2D; 3],
}

impl Triangle2D {
    /// Weighted average of the vertex positions; `weights` follow `labels`.
    pub fn point_at(&self, weights: [f64; 3]) -> CartesianPoint2D {
        let mut p = CartesianPoint2D::default();
        for (w, v) in weights.iter().zip(&self.vertices) {
            p.x += w * v.x;
            p.y += w * v.y;
        }
        p
    }

    pub fn vertex(&self, label: usize) -> Option<CartesianPoint2D> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.vertices[i])
    }

    /// Position of a facet point whose surviving labels match this triangle.
    pub fn place(&self, p: &FacetProjection) -> Option<CartesianPoint2D> {
        let mut w = [0.0; 3];
        for (slot, &label) in self.labels.iter().enumerate() {
            w[slot] = p.weight(label)?;
        }
        Some(self.point_at(w))
    }
}

/// Unit-edge regular triangle: first vertex at the origin, base along +x.
pub fn unit_triangle(labels: [usize; 3]) -> Triangle2D {
    Triangle2D {
        labels,
        vertices: [
            CartesianPoint2D::new(0.0, 0.0),
            CartesianPoint2D::new(1.0, 0.0),
            CartesianPoint2D::new(0.5, 3f64.sqrt() / 2.0),
        ],
    }
}

/// Unfolded tetrahedron: the facet opposite `v4` in the middle, the other three
/// folded out across its edges so each outer apex is a copy of `v4`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetLayout {
    /// `(dropped vertex, triangle)`, ordered by dropped vertex `1..=4`.
    pub facets: Vec<(usize, Triangle2D)>,
}

impl NetLayout {
    pub fn facet(&self, dropped: usize) -> Option<&Triangle2D> {
        self.facets
            .iter()
            .find(|(d, _)| *d == dropped)
            .map(|(_, t)| t)
    }

    pub fn bounds(&self) -> (CartesianPoint2D, CartesianPoint2D) {
        bounds(self.facets.iter().flat_map(|(_, t)| t.vertices))
    }
}

pub(crate) fn bounds(
    points: impl IntoIterator<Item = CartesianPoint2D>,
) -> (CartesianPoint2D, CartesianPoint2D) {
    let mut lo = CartesianPoint2D::new(f64::INFINITY, f64::INFINITY);
    let mut hi = CartesianPoint2D::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

pub fn net_layout() -> NetLayout {
    let h = 3f64.sqrt() / 2.0;
    let v1 = CartesianPoint2D::new(0.0, 0.0);
    let v2 = CartesianPoint2D::new(1.0, 0.0);
    let v3 = CartesianPoint2D::new(0.5, h);
    // v4 mirrored across each edge of the central triangle
    let v4_below = CartesianPoint2D::new(0.5, -h);
    let v4_left = CartesianPoint2D::new(-0.5, h);
    let v4_right = CartesianPoint2D::new(1.5, h);
    NetLayout {
        facets: vec![
            (
                1,
                Triangle2D {
                    labels: [2, 3, 4],
                    vertices: [v2, v3, v4_right],
                },
            ),
            (
                2,
                Triangle2D {
                    labels: [1, 3, 4],
                    vertices: [v1, v3, v4_left],
                },
            ),
            (
                3,
                Triangle2D {
                    labels: [1, 2, 4],
                    vertices: [v1, v2, v4_below],
                },
            ),
            (
                4,
                Triangle2D {
                    labels: [1, 2, 3],
                    vertices: [v1, v2, v3],
                },
            ),
        ],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexEmbedding {
    Triangle(Triangle2D),
    Net(NetLayout),
}

/// Planar embedding used for drawing: the triangle itself for `J = 3`, the
/// unfolded net of facets for `J = 4`.
pub fn embed_regular_simplex(dim: usize) -> Result<SimplexEmbedding> {
    match dim {
        3 => Ok(SimplexEmbedding::Triangle(unit_triangle([1, 2, 3]))),
        4 => Ok(SimplexEmbedding::Net(net_layout())),
        d => Err(GeometryError::UnsupportedDimensionForRendering(d)),
    }
}

/// Euclidean distance between two points given as full weight vectors of a
/// regular simplex with unit edges. Weights need not be interior.
pub(crate) fn regular_distance(a: &[f64], b: &[f64]) -> f64 {
    // Unit-edge regular simplex is the standard simplex scaled by 1/sqrt(2).
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (sq / 2.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pt(w: &[f64]) -> BarycentricPoint {
        BarycentricPoint::new(w.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        let p = BarycentricPoint::validate(&[0.2, 0.3, 0.5], Policy::Strict).unwrap();
        assert_eq!(p.weights(), &[0.2, 0.3, 0.5]);

        let raw = [0.2, 0.3, 0.5000001];
        let p = BarycentricPoint::validate(&raw, Policy::Renormalize).unwrap();
        let s: f64 = raw.iter().sum();
        for (a, b) in p.weights().iter().zip(raw) {
            assert_eq!(*a, b / s);
        }
        assert!(matches!(
            BarycentricPoint::validate(&raw, Policy::Strict),
            Err(GeometryError::SumOutOfTolerance { .. })
        ));

        assert!(matches!(
            BarycentricPoint::validate(&[0.0, 0.5, 0.5], Policy::Strict),
            Err(GeometryError::NonPositiveComponent { label: 1, .. })
        ));
        assert!(matches!(
            BarycentricPoint::validate(&[-0.1, 0.6, 0.5], Policy::Renormalize),
            Err(GeometryError::NonPositiveComponent { label: 1, .. })
        ));
        assert_eq!(
            BarycentricPoint::validate(&[1.0], Policy::Strict),
            Err(GeometryError::DimensionTooSmall(1))
        );
        assert!(matches!(
            BarycentricPoint::validate(&[0.5, 0.4], Policy::Renormalize),
            Err(GeometryError::SumOutOfTolerance { .. })
        ));
        assert!(matches!(
            BarycentricPoint::validate(&[f64::NAN, 0.5], Policy::Strict),
            Err(GeometryError::NonFiniteComponent { label: 1 })
        ));
    }

    #[test]
    fn renormalize_examples() {
        let r = pt(&[0.2, 0.3, 0.5]).renormalize(&[2, 3]).unwrap();
        assert_relative_eq!(r[0], 0.375, epsilon = 1e-15);
        assert_relative_eq!(r[1], 0.625, epsilon = 1e-15);

        let third = 1.0 / 3.0;
        let r = pt(&[third, third, third]).renormalize(&[1, 2]).unwrap();
        assert_eq!(r, vec![0.5, 0.5]);

        let r = pt(&[0.1, 0.2, 0.3, 0.4]).renormalize(&[2, 3, 4]).unwrap();
        for (a, b) in r.iter().zip([2.0 / 9.0, 3.0 / 9.0, 4.0 / 9.0]) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        assert_eq!(
            pt(&[0.5, 0.5]).renormalize(&[]),
            Err(GeometryError::EmptyIndexSet)
        );
        assert!(matches!(
            pt(&[0.5, 0.5]).renormalize(&[3]),
            Err(GeometryError::IndexOutOfRange { index: 3, dim: 2 })
        ));
    }

    #[test]
    fn ratio_examples() {
        let p = pt(&[0.2, 0.3, 0.5]);
        assert_relative_eq!(p.ratio(2, 3).unwrap(), 0.6, epsilon = 1e-15);
        let f = p.project(1).unwrap();
        assert_relative_eq!(ratio(&f, 2, 3).unwrap(), 0.6, epsilon = 1e-15);
        assert_eq!(ratio(&f, 1, 3), Err(GeometryError::IndexAbsent { label: 1 }));
        assert_eq!(p.ratio(2, 2), Err(GeometryError::SameIndex(2)));

        let q = BarycentricPoint::centroid(4);
        for n in 1..=4 {
            for m in 1..=4 {
                if n != m {
                    assert_eq!(q.ratio(n, m).unwrap(), 1.0);
                }
            }
        }
    }

    #[test]
    fn perspective_project_examples() {
        let f = pt(&[0.15, 0.3, 0.55]).project(1).unwrap();
        assert_eq!(f.dropped(), 1);
        assert_relative_eq!(f.weights()[0], 0.3 / 0.85, epsilon = 1e-15);
        assert_relative_eq!(f.weights()[1], 0.55 / 0.85, epsilon = 1e-15);
        assert_relative_eq!(f.weights()[0], 0.352_941_176_470_588_2, epsilon = 1e-12);

        let f = BarycentricPoint::centroid(4).project(4).unwrap();
        assert_eq!(f.labels(), vec![1, 2, 3]);
        for w in f.weights() {
            assert_relative_eq!(*w, 1.0 / 3.0, epsilon = 1e-15);
        }

        let f = pt(&[0.1, 0.2, 0.3, 0.4]).project(2).unwrap();
        assert_eq!(f.labels(), vec![1, 3, 4]);
        for (a, b) in f.weights().iter().zip([0.125, 0.375, 0.5]) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(matches!(
            pt(&[0.1, 0.2, 0.3, 0.4]).project(5),
            Err(GeometryError::IndexOutOfRange { index: 5, dim: 4 })
        ));
        assert!(matches!(
            pt(&[0.1, 0.2, 0.3, 0.4]).project(0),
            Err(GeometryError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn compatibility_examples() {
        let x = pt(&[0.1, 0.2, 0.3, 0.4]);
        let p2 = x.project(2).unwrap();
        let p4 = x.project(4).unwrap();
        assert!(is_compatible(&p2, &p4, tol::COMPAT));
        assert!(is_compatible(&p2, &p2, 0.0));

        let y = pt(&[0.25, 0.15, 0.35, 0.25]);
        assert!(!is_compatible(
            &x.project(1).unwrap(),
            &y.project(2).unwrap(),
            tol::COMPAT
        ));
    }

    #[test]
    fn compatibility_of_distinct_random_points_fails() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Exp1};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut sample = |j: usize| {
            let e: Vec<f64> = (0..j).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = e.iter().sum();
            pt(&e.iter().map(|v| v / s).collect::<Vec<_>>())
        };
        for j in 4..=6 {
            for _ in 0..200 {
                let (a, b) = (sample(j), sample(j));
                let (pa, pb) = (a.project(1).unwrap(), b.project(2).unwrap());
                // oracle: direct comparison of shared-label ratios
                let shared: Vec<usize> = (3..=j).collect();
                let ra = a.renormalize(&shared).unwrap();
                let rb = b.renormalize(&shared).unwrap();
                let differ = ra.iter().zip(&rb).any(|(x, y)| (x - y).abs() > tol::COMPAT);
                assert!(differ);
                assert!(!is_compatible(&pa, &pb, tol::COMPAT));
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let SimplexEmbedding::Triangle(t) = embed_regular_simplex(3).unwrap() else {
            panic!("expected triangle")
        };
        assert_eq!(t.vertices[0], CartesianPoint2D::new(0.0, 0.0));
        assert_eq!(t.vertices[1], CartesianPoint2D::new(1.0, 0.0));
        assert_relative_eq!(t.vertices[2].x, 0.5);
        assert_relative_eq!(t.vertices[2].y, 3f64.sqrt() / 2.0);
        assert_eq!(t.point_at([1.0, 0.0, 0.0]), CartesianPoint2D::new(0.0, 0.0));
        let c = t.point_at([1.0 / 3.0; 3]);
        assert_relative_eq!(c.x, 0.5, epsilon = 1e-15);
        assert_relative_eq!(c.y, 3f64.sqrt() / 6.0, epsilon = 1e-15);

        assert!(matches!(
            embed_regular_simplex(4).unwrap(),
            SimplexEmbedding::Net(_)
        ));
        assert_eq!(
            embed_regular_simplex(5),
            Err(GeometryError::UnsupportedDimensionForRendering(5))
        );
    }

    #[test]
    fn regular_distance_is_unit_on_edges() {
        assert_relative_eq!(regular_distance(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]), 1.0);
        // vertex to opposite edge midpoint of an equilateral triangle
        assert_relative_eq!(
            regular_distance(&[1.0, 0.0, 0.0], &[0.0, 0.5, 0.5]),
            3f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
    }

    fn composition(max_dim: usize) -> impl Strategy<Value = BarycentricPoint> {
        (3..=max_dim)
            .prop_flat_map(|j| prop::collection::vec(0.01f64..1.0, j))
            .prop_map(|raw| {
                let s: f64 = raw.iter().sum();
                BarycentricPoint::from_weights_unchecked(raw.iter().map(|x| x / s).collect())
            })
    }

    proptest! {
        #[test]
        fn ratios_survive_renormalization(p in composition(8), mask in any::<u16>()) {
            let j = p.dim();
            let mut keep: Vec<usize> = (1..=j).filter(|l| mask & (1 << (l - 1)) != 0).collect();
            if keep.len() < 2 {
                keep = vec![1, 2];
            }
            let r = renormalize(&p, &keep).unwrap();
            let s: f64 = r.iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
            let sub = BarycentricPoint::from_weights_unchecked(r);
            for a in 0..keep.len() {
                for b in 0..keep.len() {
                    if a == b { continue; }
                    let direct = p.ratio(keep[a], keep[b]).unwrap();
                    let via = sub.ratio(a + 1, b + 1).unwrap();
                    prop_assert!(((direct - via) / direct).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn two_step_projection_matches_one_step(p in composition(8), a in 1usize..9, b in 1usize..9) {
            let j = p.dim();
            let (a, b) = (1 + (a - 1) % j, 1 + (b - 1) % j);
            prop_assume!(a != b && j >= 4);
            let keep: Vec<usize> = (1..=j).filter(|&l| l != a && l != b).collect();
            let one = p.renormalize(&keep).unwrap();
            let two = renormalize(&p.project(a).unwrap(), &keep).unwrap();
            for (x, y) in one.iter().zip(&two) {
                prop_assert!((x - y).abs() < 1e-14);
            }
        }

        #[test]
        fn all_facet_pairs_compatible(p in composition(8)) {
            let j = p.dim();
            let proj: Vec<_> = (1..=j).map(|v| p.project(v).unwrap()).collect();
            for a in &proj {
                for b in &proj {
                    prop_assert!(is_compatible(a, b, tol::COMPAT));
                    prop_assert_eq!(is_compatible(a, b, tol::COMPAT), is_compatible(b, a, tol::COMPAT));
                }
            }
        }

        #[test]
        fn projection_is_permutation_equivariant(p in composition(6), seed in any::<u64>(), v in 1usize..7) {
            use rand::{seq::SliceRandom, SeedableRng};
            let j = p.dim();
            let v = 1 + (v - 1) % j;
            let mut perm: Vec<usize> = (1..=j).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let moved = p.permuted(&perm).project(perm[v - 1]).unwrap();
            let direct = p.project(v).unwrap();
            for l in direct.labels() {
                let a = direct.weight(l).unwrap();
                let b = moved.weight(perm[l - 1]).unwrap();
                prop_assert!((a - b).abs() < 1e-15);
            }
        }
    }
}
