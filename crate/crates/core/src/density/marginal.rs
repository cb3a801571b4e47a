use rayon::prelude::*;

use super::grid::{DensityGrid, Lattice};
use super::{DensityError, Mode, Result, SimplexDensity};
use crate::geometry::{regular_distance, BarycentricPoint};

/// Marginal density on the facet opposite `facet` (1-based), sampled on the
/// depth-`depth` grid with `accuracy` points per segment.
pub fn marginalize<P: SimplexDensity + ?Sized>(
    density: &P,
    facet: usize,
    depth: u32,
    accuracy: usize,
    mode: Mode,
) -> Result<DensityGrid> {
    let dim = density.dim();
    if facet == 0 || facet > dim {
        return Err(DensityError::IndexOutOfRange { index: facet, dim });
    }
    if dim < 3 {
        return Err(DensityError::FacetTooSmall(dim));
    }
    if accuracy < 2 {
        return Err(DensityError::AccuracyTooLow(accuracy));
    }
    let lattice = Lattice::new(dim - 1, depth)?;
    let apex = facet - 1;

    let node_value = |node: usize| -> Result<f64> {
        let k = &lattice.points()[node];
        if k.contains(&0) {
            // the whole segment runs along the boundary
            return Ok(0.0);
        }
        let z: Vec<f64> = lattice.coords(k);
        let mut full = z.clone();
        full.insert(apex, 0.0);
        let mut vertex = vec![0.0; dim];
        vertex[apex] = 1.0;

        let last = (accuracy - 1) as f64;
        let mut acc = 0.0;
        // m = 0 and m = M-1 are the segment ends, fixed at zero
        for m in 1..accuracy - 1 {
            let t = m as f64 / last;
            let from_vertex = 1.0 - t;
            let x: Vec<f64> = full
                .iter()
                .enumerate()
                .map(|(i, &w)| if i == apex { t } else { from_vertex * w })
                .collect();
            let p = density
                .eval(&BarycentricPoint::from_weights_unchecked(x))
                .map_err(|e| DensityError::EvalFailure {
                    node,
                    reason: e.to_string(),
                })?;
            if !p.is_finite() || p < 0.0 {
                return Err(DensityError::EvalFailure {
                    node,
                    reason: format!("density returned {p}"),
                });
            }
            acc += match mode {
                Mode::LineIntegral => p,
                Mode::Pushforward => p * from_vertex.powi(dim as i32 - 2),
            };
        }
        Ok(match mode {
            Mode::LineIntegral => acc * regular_distance(&full, &vertex) / accuracy as f64,
            Mode::Pushforward => acc / last,
        })
    };

    let count = lattice.points().len();
    let values: Vec<f64> = if density.is_serial() {
        (0..count).map(node_value).collect::<Result<_>>()?
    } else {
        (0..count).into_par_iter().map(node_value).collect::<Result<_>>()?
    };

    let labels: Vec<usize> = (1..=dim).filter(|&l| l != facet).collect();
    let mut grid = DensityGrid::from_parts(dim, labels, facet, depth, mode, lattice, values);
    if mode == Mode::Pushforward {
        let total = grid.integral();
        if total > 0.0 && total.is_finite() {
            grid.scale(1.0 / total);
        }
    }
    Ok(grid)
}

/// A grid read as a density over its own face, by linear interpolation.
#[derive(Debug, Clone, Copy)]
pub struct GridDensity<'a> {
    grid: &'a DensityGrid,
}

impl<'a> GridDensity<'a> {
    pub fn new(grid: &'a DensityGrid) -> Self {
        Self { grid }
    }
}

impl SimplexDensity for GridDensity<'_> {
    fn dim(&self) -> usize {
        self.grid.labels().len()
    }

    fn eval(&self, x: &BarycentricPoint) -> Result<f64> {
        self.grid.interpolate(x.weights())
    }
}

/// Marginalizes a face grid once more, removing vertex `sub_facet` (an
/// original label). The interpolated grid stands in for the density.
pub fn recursive_marginalize(
    grid: &DensityGrid,
    sub_facet: usize,
    depth: u32,
    accuracy: usize,
) -> Result<DensityGrid> {
    let labels = grid.labels();
    if labels.len() < 3 {
        return Err(DensityError::FacetTooSmall(labels.len()));
    }
    let local = labels
        .iter()
        .position(|&l| l == sub_facet)
        .ok_or(DensityError::SubFacetAbsent(sub_facet))?;
    let mut out = marginalize(&GridDensity::new(grid), local + 1, depth, accuracy, grid.mode())?;
    let remaining: Vec<usize> = labels.iter().copied().filter(|&l| l != sub_facet).collect();
    out.relabel(grid.dim(), remaining, sub_facet);
    Ok(out)
}
