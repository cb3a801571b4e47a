//! Lossless projection of compositional data onto the facets of its simplex.
//!
//! A `J`-part composition is projected about each vertex onto the opposite
//! facet. The `J` projections together determine the point exactly, and for
//! a set of points the facet projections determine the set even after the
//! per-facet labels are lost. Densities over the simplex are carried to the
//! facets by integrating along the projection rays.
//!
//! - [`geometry`]: barycentric points, renormalization, perspective projection
//! - [`projection`]: the full projection bundle and its inverse
//! - [`matching`]: recovering an unlabeled point set from per-facet multisets
//! - [`density`]: facet marginals of densities, Dirichlet reference densities
//! - [`render`]: SVG ternary plots and unfolded tetrahedron nets
//! - [`cli`]: the `simproj` command-line front end

pub mod cli;
pub mod density;
pub mod geometry;
pub mod matching;
pub mod projection;
pub mod render;
pub mod tol;

pub use geometry::{BarycentricPoint, FacetProjection, Policy};
pub use projection::{project_all, reconstruct, reconstruct_from_two, ProjectionBundle};
