//! Regular barycentric grids on a face and affine interpolation over them.
//!
//! A face with `d+1` vertices at depth `D` carries the lattice points
//! `k/N`, `N = 2^D`, `k ∈ ℕ^{d+1}`, `Σk = N`. In cumulative coordinates
//! `c_i = k_1 + … + k_i` (`i = 1..d`) the face is `0 ≤ c_1 ≤ … ≤ c_d ≤ N`,
//! and the Freudenthal triangulation of the unit cubes restricted to that
//! region gives the cells used for interpolation and quadrature. For a
//! triangle these are the usual up and down sub-triangles.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Deserialize;

use super::{DensityError, Mode, Result};

/// Largest accepted subdivision depth.
pub const MAX_DEPTH: u32 = 14;

/// Largest accepted node count of a single grid.
pub const MAX_NODES: u64 = 1 << 23;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Lattice {
    parts: usize,
    steps: u32,
    points: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn node_count(parts: usize, steps: u32) -> u64 {
    // C(N + d, d)
    let d = parts as u64 - 1;
    let n = steps as u64;
    let mut c: u64 = 1;
    for i in 1..=d {
        c = c.saturating_mul(n + i) / i;
    }
    c
}

impl Lattice {
    pub(crate) fn new(parts: usize, depth: u32) -> Result<Self> {
        if !(1..=MAX_DEPTH).contains(&depth) {
            return Err(DensityError::DepthOutOfRange(depth));
        }
        if parts < 2 {
            return Err(DensityError::FacetTooSmall(parts));
        }
        let steps = 1u32 << depth;
        let count = node_count(parts, steps);
        if count > MAX_NODES {
            return Err(DensityError::GridTooLarge(count));
        }
        let mut points = Vec::with_capacity(count as usize);
        let mut k = vec![0u32; parts];
        fill(&mut k, 0, steps, &mut points);
        let index = points.iter().cloned().zip(0..).collect();
        Ok(Self {
            parts,
            steps,
            points,
            index,
        })
    }

    pub(crate) fn steps(&self) -> u32 {
        self.steps
    }

    pub(crate) fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub(crate) fn coords(&self, k: &[u32]) -> Vec<f64> {
        let n = self.steps as f64;
        k.iter().map(|&x| x as f64 / n).collect()
    }

    fn lookup_cumulative(&self, c: &[i64]) -> Option<usize> {
        let n = self.steps as i64;
        let mut k = Vec::with_capacity(self.parts);
        let mut prev = 0;
        for &ci in c {
            let part = ci - prev;
            if part < 0 {
                return None;
            }
            k.push(part as u32);
            prev = ci;
        }
        if prev > n {
            return None;
        }
        k.push((n - prev) as u32);
        self.index.get(&k).copied()
    }

    fn cumulative(k: &[u32]) -> Vec<i64> {
        k[..k.len() - 1]
            .iter()
            .scan(0i64, |acc, &x| {
                *acc += x as i64;
                Some(*acc)
            })
            .collect()
    }

    /// All Freudenthal cells, as node indices.
    pub(crate) fn cells(&self) -> Vec<Vec<usize>> {
        let d = self.parts - 1;
        let perms = permutations(d);
        let mut cells = Vec::new();
        for k in &self.points {
            let base = Self::cumulative(k);
            'perm: for perm in &perms {
                let mut c = base.clone();
                let mut cell = Vec::with_capacity(d + 1);
                cell.push(self.index[k]);
                for &axis in perm {
                    c[axis] += 1;
                    match self.lookup_cumulative(&c) {
                        Some(i) => cell.push(i),
                        None => continue 'perm,
                    }
                }
                cells.push(cell);
            }
        }
        cells
    }

    /// Vertices and weights of the cell containing `x` (face coordinates).
    pub(crate) fn locate(&self, x: &[f64]) -> Result<Vec<(usize, f64)>> {
        if x.len() != self.parts {
            return Err(DensityError::OutsideFacet);
        }
        const SLACK: f64 = 1e-9;
        if x.iter().any(|v| !v.is_finite() || *v < -SLACK)
            || (x.iter().sum::<f64>() - 1.0).abs() > SLACK
        {
            return Err(DensityError::OutsideFacet);
        }
        let n = self.steps as f64;
        let d = self.parts - 1;
        let mut base = Vec::with_capacity(d);
        let mut frac = Vec::with_capacity(d);
        let mut acc = 0.0;
        for v in &x[..d] {
            acc += v.max(0.0);
            let c = (acc * n).clamp(0.0, n);
            let b = c.floor().min(n);
            base.push(b as i64);
            frac.push(if b >= n { 0.0 } else { c - b });
        }
        // descending fraction; ties broken by descending axis keep c_i <= c_{i+1}
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| frac[b].total_cmp(&frac[a]).then(b.cmp(&a)));

        let mut out = Vec::with_capacity(d + 1);
        let mut c = base;
        let push = |c: &[i64], w: f64, out: &mut Vec<(usize, f64)>| -> Result<()> {
            if w > 0.0 {
                let i = self.lookup_cumulative(c).ok_or(DensityError::OutsideFacet)?;
                out.push((i, w));
            }
            Ok(())
        };
        let first = if d == 0 { 1.0 } else { 1.0 - frac[order[0]] };
        push(&c, first, &mut out)?;
        for s in 0..d {
            c[order[s]] += 1;
            let w = if s + 1 < d {
                frac[order[s]] - frac[order[s + 1]]
            } else {
                frac[order[s]]
            };
            push(&c, w, &mut out)?;
        }
        Ok(out)
    }
}

fn fill(k: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == k.len() {
        k[pos] = remaining;
        out.push(k.clone());
        return;
    }
    for v in 0..=remaining {
        k[pos] = v;
        fill(k, pos + 1, remaining - v, out);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Node coordinates of the depth-`depth` grid on the facet opposite `facet`
/// of a simplex with `dim` vertices. Each node lists the weights of the
/// surviving labels in increasing label order; boundary nodes are included.
pub fn subdivision_nodes(dim: usize, facet: usize, depth: u32) -> Result<Vec<Vec<f64>>> {
    if facet == 0 || facet > dim {
        return Err(DensityError::IndexOutOfRange { index: facet, dim });
    }
    if dim < 3 {
        return Err(DensityError::FacetTooSmall(dim));
    }
    let lattice = Lattice::new(dim - 1, depth)?;
    Ok(lattice.points().iter().map(|k| lattice.coords(k)).collect())
}

/// Approximate marginal density on a face of the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    dim: usize,
    labels: Vec<usize>,
    facet: usize,
    depth: u32,
    mode: Mode,
    nodes: Vec<Vec<f64>>,
    values: Vec<f64>,
    lattice: Lattice,
}

impl DensityGrid {
    pub(crate) fn from_parts(
        dim: usize,
        labels: Vec<usize>,
        facet: usize,
        depth: u32,
        mode: Mode,
        lattice: Lattice,
        values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(values.len(), lattice.points().len());
        let nodes = lattice.points().iter().map(|k| lattice.coords(k)).collect();
        Self {
            dim,
            labels,
            facet,
            depth,
            mode,
            nodes,
            values,
            lattice,
        }
    }

    /// A grid with explicit node values, e.g. for tests or rendering.
    pub fn with_values(
        dim: usize,
        labels: Vec<usize>,
        facet: usize,
        depth: u32,
        mode: Mode,
        values: Vec<f64>,
    ) -> Result<Self> {
        if labels.len() < 2 || labels.iter().any(|&l| l == 0 || l > dim) {
            return Err(DensityError::Malformed(format!(
                "labels {labels:?} do not describe a face of a {dim}-vertex simplex"
            )));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DensityError::Malformed("labels must increase".into()));
        }
        if labels.contains(&facet) {
            return Err(DensityError::Malformed(format!(
                "facet {facet} is listed among the surviving labels"
            )));
        }
        let lattice = Lattice::new(labels.len(), depth)?;
        if values.len() != lattice.points().len() {
            return Err(DensityError::Malformed(format!(
                "{} values for {} nodes",
                values.len(),
                lattice.points().len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(DensityError::Malformed(
                "values must be finite and nonnegative".into(),
            ));
        }
        Ok(Self::from_parts(dim, labels, facet, depth, mode, lattice, values))
    }

    /// Dimension `J` of the original simplex.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices of the face this grid lives on.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Vertex removed in the last marginalization step.
    pub fn facet(&self) -> usize {
        self.facet
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn steps(&self) -> u32 {
        self.lattice.steps()
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.lattice.points()[node].contains(&0)
    }

    /// Node index at integer lattice coordinates `k` (`Σk = 2^depth`).
    pub fn node_at(&self, k: &[u32]) -> Option<usize> {
        self.lattice.index.get(k).copied()
    }

    /// Grid cells as tuples of node indices.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        self.lattice.cells()
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
    }

    pub(crate) fn relabel(&mut self, dim: usize, labels: Vec<usize>, facet: usize) {
        self.dim = dim;
        self.labels = labels;
        self.facet = facet;
    }

    /// Linear interpolation inside the enclosing grid cell. `x` lists weights
    /// for [`labels`](Self::labels) in order.
    pub fn interpolate(&self, x: &[f64]) -> Result<f64> {
        Ok(self
            .lattice
            .locate(x)?
            .into_iter()
            .map(|(i, w)| w * self.values[i])
            .sum())
    }

    /// Integral of the piecewise-affine interpolant over the face patch
    /// (length 1 for an edge, area 1/2 for a triangle).
    pub fn integral(&self) -> f64 {
        let d = self.labels.len() - 1;
        let cell_volume = 1.0 / (factorial(d) * (self.steps() as f64).powi(d as i32));
        self.cells()
            .iter()
            .map(|cell| cell.iter().map(|&i| self.values[i]).sum::<f64>() / cell.len() as f64)
            .sum::<f64>()
            * cell_volume
    }

    /// JSON document with every real printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut s = String::with_capacity(64 + self.values.len() * 48);
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        write!(
            s,
            "{{\"dim\":{},\"facet\":{},\"labels\":[{}],\"depth\":{},\"mode\":\"{}\",\"nodes\":[",
            self.dim,
            self.facet,
            labels.join(","),
            self.depth,
            self.mode.as_str()
        )
        .unwrap();
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push('[');
            for (k, v) in node.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                write!(s, "{v:.16e}").unwrap();
            }
            s.push(']');
        }
        s.push_str("],\"values\":[");
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "{v:.16e}").unwrap();
        }
        s.push_str("]}");
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            dim: usize,
            facet: usize,
            labels: Option<Vec<usize>>,
            depth: u32,
            mode: Mode,
            nodes: Vec<Vec<f64>>,
            values: Vec<f64>,
        }
        let doc: Doc =
            serde_json::from_str(text).map_err(|e| DensityError::Malformed(e.to_string()))?;
        let labels = doc
            .labels
            .unwrap_or_else(|| (1..=doc.dim).filter(|&l| l != doc.facet).collect());
        let grid = Self::with_values(doc.dim, labels, doc.facet, doc.depth, doc.mode, doc.values)?;
        if grid.nodes != doc.nodes {
            return Err(DensityError::Malformed(
                "node coordinates do not match the regular grid of this depth".into(),
            ));
        }
        Ok(grid)
    }
}
