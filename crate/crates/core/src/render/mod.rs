//! Deterministic SVG figures: ternary scatters, unfolded tetrahedron nets with
//! per-facet scatters or density heatmaps, and edge marginal curves.
//!
//! Coordinates are written with six decimals and elements are emitted in a
//! fixed order, so identical specs give identical bytes.

mod palette;
mod tables;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::DensityGrid;
use crate::geometry::{
    bounds, net_layout, unit_triangle, BarycentricPoint, CartesianPoint2D, FacetProjection, LabeledWeights,
    NetLayout, Triangle2D,
};
use crate::projection::{project_all, ProjectionBundle};

pub use palette::Palette;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("inconsistent figure spec: {0}")]
    InconsistentSpec(String),
    #[error("no net layout for J = {0}; only J = 4 unfolds")]
    UnsupportedDimension(usize),
}

pub type Result<T, E = RenderError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureKind {
    TernaryScatter,
    NetScatter,
    NetDensity,
    EdgeCurves,
}

impl FigureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureKind::TernaryScatter => "ternary_scatter",
            FigureKind::NetScatter => "net_scatter",
            FigureKind::NetDensity => "net_density",
            FigureKind::EdgeCurves => "edge_curves",
        }
    }
}

impl std::str::FromStr for FigureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "ternary_scatter" => Ok(FigureKind::TernaryScatter),
            "net_scatter" => Ok(FigureKind::NetScatter),
            "net_density" => Ok(FigureKind::NetDensity),
            "edge_curves" => Ok(FigureKind::EdgeCurves),
            _ => Err(format!("unknown figure kind {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Content {
    Points(Vec<BarycentricPoint>),
    Bundles(Vec<ProjectionBundle>),
    /// Facet grids (three labels) and edge grids (two labels).
    Grids(Vec<DensityGrid>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Style {
    /// Canvas size in pixels.
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub point_radius: f64,
    pub palette: Palette,
    pub curve_palette: Palette,
    /// Height of the tallest edge curve, in unit edge lengths.
    pub curve_height: f64,
    /// Marker jitter in pixels; zero disables it.
    pub jitter: f64,
    pub seed: u64,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            width: 800.0,
            height: 800.0,
            margin: 40.0,
            point_radius: 3.0,
            palette: Palette::Viridis,
            curve_palette: Palette::Plasma,
            curve_height: 0.3,
            jitter: 0.0,
            seed: 0,
        }
    }
}

impl Style {
    fn check(&self) -> Result<()> {
        let positive = [
            ("width", self.width),
            ("height", self.height),
            ("point_radius", self.point_radius),
            ("curve_height", self.curve_height),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(inconsistent(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("margin", self.margin), ("jitter", self.jitter)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(inconsistent(format!("{name} must be nonnegative, got {v}")));
            }
        }
        if 2.0 * self.margin >= self.width.min(self.height) {
            return Err(inconsistent("margin leaves no drawing area"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub kind: FigureKind,
    pub content: Content,
    pub style: Style,
}

fn inconsistent(msg: impl Into<String>) -> RenderError {
    RenderError::InconsistentSpec(msg.into())
}

/// Affine map from layout units (unit edges, y up) to SVG pixels (y down).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canvas {
    scale: f64,
    x0: f64,
    y0: f64,
}

impl Canvas {
    /// Fits the box `lo..hi` into the style's drawing area, centered.
    pub fn fit(style: &Style, lo: CartesianPoint2D, hi: CartesianPoint2D) -> Self {
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let avail_w = style.width - 2.0 * style.margin;
        let avail_h = style.height - 2.0 * style.margin;
        let scale = (avail_w / w).min(avail_h / h);
        let x0 = style.margin + 0.5 * (avail_w - scale * w) - scale * lo.x;
        let y0 = style.margin + 0.5 * (avail_h - scale * h) + scale * hi.y;
        Self { scale, x0, y0 }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn map(&self, p: CartesianPoint2D) -> CartesianPoint2D {
        CartesianPoint2D::new(self.x0 + self.scale * p.x, self.y0 - self.scale * p.y)
    }

    pub fn map_triangle(&self, t: &Triangle2D) -> Triangle2D {
        Triangle2D {
            labels: t.labels,
            vertices: t.vertices.map(|v| self.map(v)),
        }
    }
}

/// The unfolded tetrahedron in layout units, checked for `J = 4`.
pub fn layout_net(dim: usize) -> Result<NetLayout> {
    if dim != 4 {
        return Err(RenderError::UnsupportedDimension(dim));
    }
    Ok(net_layout())
}

/// The four net triangles in canvas pixels for `style`.
pub fn layout_net_canvas(dim: usize, style: &Style) -> Result<NetLayout> {
    let net = layout_net(dim)?;
    let (lo, hi) = net.bounds();
    let canvas = Canvas::fit(style, lo, hi);
    Ok(NetLayout {
        facets: net
            .facets
            .iter()
            .map(|(d, t)| (*d, canvas.map_triangle(t)))
            .collect(),
    })
}

struct Frame {
    canvas: Canvas,
    /// `(dropped vertex, triangle)` in layout units; `0` marks the lone
    /// triangle of a ternary plot.
    triangles: Vec<(usize, Triangle2D)>,
    dim: usize,
}

impl Frame {
    fn new(dim: usize, style: &Style, curves: bool) -> Result<Self> {
        let triangles = match dim {
            3 => vec![(0, unit_triangle([1, 2, 3]))],
            _ => layout_net(dim)?.facets,
        };
        let (mut lo, mut hi) = bounds(triangles.iter().flat_map(|(_, t)| t.vertices));
        let pad = if curves { style.curve_height } else { 0.08 };
        lo.x -= pad;
        lo.y -= pad;
        hi.x += pad;
        hi.y += pad;
        Ok(Self {
            canvas: Canvas::fit(style, lo, hi),
            triangles,
            dim,
        })
    }

    fn facet(&self, dropped: usize) -> Option<&Triangle2D> {
        self.triangles
            .iter()
            .find(|(d, _)| *d == dropped || (self.dim == 3 && *d == 0))
            .map(|(_, t)| t)
    }

    /// Every drawn copy of edge `{a, b}`: end positions and the outward unit
    /// normal away from the owning triangle.
    fn edge_copies(&self, a: usize, b: usize) -> Vec<(CartesianPoint2D, CartesianPoint2D, CartesianPoint2D)> {
        let mut out = Vec::new();
        for (dropped, t) in &self.triangles {
            // interior net edges belong to the central triangle only
            let owns = self.dim == 3 || *dropped == 4 || a == 4 || b == 4;
            let (Some(pa), Some(pb)) = (t.vertex(a), t.vertex(b)) else {
                continue;
            };
            if !owns {
                continue;
            }
            let third = t
                .labels
                .iter()
                .find(|&&l| l != a && l != b)
                .and_then(|&l| t.vertex(l))
                .expect("triangle has three labels");
            let (dx, dy) = (pb.x - pa.x, pb.y - pa.y);
            let len = dx.hypot(dy);
            let mut n = CartesianPoint2D::new(-dy / len, dx / len);
            let mid = pa.lerp(&pb, 0.5);
            if n.x * (third.x - mid.x) + n.y * (third.y - mid.y) > 0.0 {
                n = CartesianPoint2D::new(-n.x, -n.y);
            }
            out.push((pa, pb, n));
        }
        out
    }
}

fn check_points(points: &[BarycentricPoint], dim: usize) -> Result<()> {
    match points.iter().position(|p| p.dim() != dim) {
        Some(i) => Err(inconsistent(format!(
            "point {} has {} components, this figure needs {dim}",
            i + 1,
            points[i].dim()
        ))),
        None => Ok(()),
    }
}

fn check_grids(grids: &[DensityGrid], kind: FigureKind) -> Result<usize> {
    let Some(first) = grids.first() else {
        return Err(inconsistent("no grids to draw"));
    };
    let dim = first.dim();
    let mut seen: Vec<&[usize]> = Vec::new();
    for g in grids {
        if g.dim() != dim {
            return Err(inconsistent("grids come from simplices of different size"));
        }
        let parts = g.labels().len();
        let ok = match kind {
            FigureKind::NetDensity => dim == 4 && (parts == 2 || parts == 3),
            _ => (dim == 3 || dim == 4) && parts == 2,
        };
        if !ok {
            return Err(inconsistent(format!(
                "{} cannot show a {parts}-vertex face of a J = {dim} simplex",
                kind.as_str()
            )));
        }
        if seen.contains(&g.labels()) {
            return Err(inconsistent(format!("face {:?} appears twice", g.labels())));
        }
        seen.push(g.labels());
    }
    if kind == FigureKind::NetDensity && !grids.iter().any(|g| g.labels().len() == 3) {
        return Err(inconsistent("net_density needs at least one facet grid"));
    }
    Ok(dim)
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn polygon(out: &mut String, pts: &[CartesianPoint2D], attrs: &str) {
    let coords: Vec<String> = pts.iter().map(|p| format!("{},{}", fmt(p.x), fmt(p.y))).collect();
    let _ = writeln!(out, r#"<polygon points="{}" {attrs}/>"#, coords.join(" "));
}

/// Position of a face point given its labels and weights.
fn place(t: &Triangle2D, labels: &[usize], weights: &[f64]) -> CartesianPoint2D {
    let mut w = [0.0; 3];
    for (slot, l) in t.labels.iter().enumerate() {
        if let Some(i) = labels.iter().position(|x| x == l) {
            w[slot] = weights[i];
        }
    }
    t.point_at(w)
}

/// Canvas position of a facet point in the figure `spec` would draw. Useful
/// for checking marker placement without parsing the SVG.
pub fn facet_position(spec: &FigureSpec, p: &FacetProjection) -> Result<CartesianPoint2D> {
    spec.style.check()?;
    let frame = Frame::new(p.dim(), &spec.style, false)?;
    let t = frame
        .facet(p.dropped())
        .ok_or_else(|| inconsistent("facet not in layout"))?;
    let pos = t.place(p).ok_or_else(|| inconsistent("labels do not match facet"))?;
    Ok(frame.canvas.map(pos))
}

pub fn render(spec: &FigureSpec) -> Result<String> {
    spec.style.check()?;
    let style = &spec.style;
    let mut body = String::new();

    let frame = match (&spec.kind, &spec.content) {
        (FigureKind::TernaryScatter, Content::Points(points)) => {
            check_points(points, 3)?;
            let frame = Frame::new(3, style, false)?;
            outlines(&mut body, &frame);
            let t = frame.triangles[0].1;
            let placed: Vec<(usize, usize, CartesianPoint2D)> = points
                .iter()
                .enumerate()
                .map(|(i, p)| (0, i, frame.canvas.map(t.point_at([p.weights()[0], p.weights()[1], p.weights()[2]]))))
                .collect();
            markers(&mut body, style, &placed, points.len(), false);
            frame
        }
        (FigureKind::NetScatter, Content::Points(points)) => {
            check_points(points, 4)?;
            let bundles: Vec<ProjectionBundle> = points.iter().map(project_all).collect();
            net_scatter(&mut body, style, &bundles)?
        }
        (FigureKind::NetScatter, Content::Bundles(bundles)) => {
            if let Some(b) = bundles.iter().find(|b| b.dim() != 4) {
                return Err(inconsistent(format!("net_scatter needs J = 4 bundles, got J = {}", b.dim())));
            }
            net_scatter(&mut body, style, bundles)?
        }
        (FigureKind::NetDensity | FigureKind::EdgeCurves, Content::Grids(grids)) => {
            let dim = check_grids(grids, spec.kind)?;
            let has_curves = grids.iter().any(|g| g.labels().len() == 2);
            let frame = Frame::new(dim, style, has_curves)?;
            let facets: Vec<&DensityGrid> = grids.iter().filter(|g| g.labels().len() == 3).collect();
            let edges: Vec<&DensityGrid> = grids.iter().filter(|g| g.labels().len() == 2).collect();
            let heat_scale = heatmaps(&mut body, style, &frame, &facets);
            outlines(&mut body, &frame);
            let curve_scale = curves(&mut body, style, &frame, &edges);
            let mut note = Vec::new();
            if let Some((lo, hi)) = heat_scale {
                note.push(format!(
                    "{}: {} at 0, {} at 1",
                    style.palette.name(),
                    sci(lo),
                    sci(hi)
                ));
            }
            if let Some(hi) = curve_scale {
                note.push(format!("curve height {} = {}", fmt(style.curve_height), sci(hi)));
            }
            let _ = writeln!(
                body,
                r#"<text id="scale" x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
                fmt(style.margin * 0.25),
                fmt(style.height - style.margin * 0.25),
                note.join("; ")
            );
            frame
        }
        (kind, _) => {
            return Err(inconsistent(format!(
                "content does not fit a {} figure",
                kind.as_str()
            )))
        }
    };
    vertex_labels(&mut body, &frame);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt(style.width),
        h = fmt(style.height)
    );
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        fmt(style.width),
        fmt(style.height)
    );
    svg.push_str(&body);
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn net_scatter(body: &mut String, style: &Style, bundles: &[ProjectionBundle]) -> Result<Frame> {
    let frame = Frame::new(4, style, false)?;
    outlines(body, &frame);
    let mut placed = Vec::new();
    for dropped in 1..=4 {
        let t = frame.facet(dropped).expect("net has every facet");
        for (i, b) in bundles.iter().enumerate() {
            let pos = t.place(b.facet(dropped)).expect("labels match facet");
            placed.push((dropped, i, frame.canvas.map(pos)));
        }
    }
    markers(body, style, &placed, bundles.len(), true);
    Ok(frame)
}

fn outlines(body: &mut String, frame: &Frame) {
    body.push_str("<g id=\"facets\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\">\n");
    for (dropped, t) in &frame.triangles {
        let pts = t.vertices.map(|v| frame.canvas.map(v));
        polygon(body, &pts, &format!(r#"data-facet="{dropped}""#));
    }
    body.push_str("</g>\n");
}

fn markers(
    body: &mut String,
    style: &Style,
    placed: &[(usize, usize, CartesianPoint2D)],
    count: usize,
    tagged: bool,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(style.seed);
    body.push_str("<g id=\"markers\" stroke=\"#000000\" stroke-width=\"0.5\">\n");
    for &(facet, i, p) in placed {
        let mut p = p;
        if style.jitter > 0.0 {
            p.x += rng.random_range(-style.jitter..=style.jitter);
            p.y += rng.random_range(-style.jitter..=style.jitter);
        }
        let t = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.5 };
        let tag = if tagged {
            format!(r#"data-facet="{facet}" "#)
        } else {
            String::new()
        };
        let _ = writeln!(
            body,
            r#"<circle {tag}data-point="{}" cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            i + 1,
            fmt(p.x),
            fmt(p.y),
            fmt(style.point_radius),
            style.palette.hex(t)
        );
    }
    body.push_str("</g>\n");
}

/// Draws facet heatmaps; returns the value range mapped onto the palette.
fn heatmaps(body: &mut String, style: &Style, frame: &Frame, grids: &[&DensityGrid]) -> Option<(f64, f64)> {
    if grids.is_empty() {
        return None;
    }
    let mut order: Vec<&&DensityGrid> = grids.iter().collect();
    order.sort_by_key(|g| g.facet());
    let cells: Vec<Vec<Vec<usize>>> = order.iter().map(|g| g.cells()).collect();
    let mean = |g: &DensityGrid, cell: &[usize]| {
        cell.iter().map(|&i| g.values()[i]).sum::<f64>() / cell.len() as f64
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (g, cs) in order.iter().zip(&cells) {
        for c in cs {
            let v = mean(g, c);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let span = hi - lo;
    body.push_str("<g id=\"cells\" stroke-width=\"0.25\">\n");
    for (g, cs) in order.iter().zip(&cells) {
        let t = frame.facet(g.facet()).expect("facet grid on net");
        for c in cs {
            let v = mean(g, c);
            let u = if span > 0.0 { (v - lo) / span } else { 0.0 };
            let color = style.palette.hex(u);
            let pts: Vec<CartesianPoint2D> = c
                .iter()
                .map(|&i| frame.canvas.map(place(t, g.labels(), &g.nodes()[i])))
                .collect();
            polygon(body, &pts, &format!(r#"fill="{color}" stroke="{color}""#));
        }
    }
    body.push_str("</g>\n");
    Some((lo, hi))
}

/// Draws edge marginals outward from their edges; returns the value drawn at
/// full curve height.
fn curves(body: &mut String, style: &Style, frame: &Frame, grids: &[&DensityGrid]) -> Option<f64> {
    if grids.is_empty() {
        return None;
    }
    let mut order: Vec<&&DensityGrid> = grids.iter().collect();
    order.sort_by_key(|g| g.labels().to_vec());
    let hi = order
        .iter()
        .flat_map(|g| g.values().iter().copied())
        .fold(0.0f64, f64::max);
    let unit = if hi > 0.0 { style.curve_height / hi } else { 0.0 };
    body.push_str("<g id=\"curves\" fill=\"none\" stroke-width=\"1.5\">\n");
    for (k, g) in order.iter().enumerate() {
        let (a, b) = (g.labels()[0], g.labels()[1]);
        let color = style
            .curve_palette
            .hex(if order.len() > 1 { k as f64 / (order.len() - 1) as f64 } else { 0.5 });
        let mut nodes: Vec<usize> = (0..g.nodes().len()).collect();
        nodes.sort_by(|&i, &j| g.nodes()[j][0].total_cmp(&g.nodes()[i][0]));
        for (pa, pb, n) in frame.edge_copies(a, b) {
            let pts: Vec<String> = nodes
                .iter()
                .map(|&i| {
                    let base = pb.lerp(&pa, g.nodes()[i][0]);
                    let h = unit * g.values()[i];
                    let p = frame
                        .canvas
                        .map(CartesianPoint2D::new(base.x + h * n.x, base.y + h * n.y));
                    format!("{},{}", fmt(p.x), fmt(p.y))
                })
                .collect();
            let _ = writeln!(
                body,
                r#"<polyline data-edge="{a}-{b}" points="{}" stroke="{color}"/>"#,
                pts.join(" ")
            );
        }
    }
    body.push_str("</g>\n");
    Some(hi)
}

fn vertex_labels(body: &mut String, frame: &Frame) {
    let (lo, hi) = bounds(frame.triangles.iter().flat_map(|(_, t)| t.vertices));
    let center = lo.lerp(&hi, 0.5);
    let mut seen: Vec<(usize, CartesianPoint2D)> = Vec::new();
    for (_, t) in &frame.triangles {
        for (l, v) in t.labels.iter().zip(t.vertices) {
            if seen.iter().any(|(sl, sv)| sl == l && sv.distance(&v) < 1e-9) {
                continue;
            }
            seen.push((*l, v));
        }
    }
    body.push_str("<g id=\"labels\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">\n");
    for (l, v) in seen {
        let (dx, dy) = (v.x - center.x, v.y - center.y);
        let len = dx.hypot(dy).max(1e-12);
        let off = 16.0 / frame.canvas.scale();
        let p = frame
            .canvas
            .map(CartesianPoint2D::new(v.x + off * dx / len, v.y + off * dy / len));
        let _ = writeln!(
            body,
            r#"<text x="{}" y="{}" dominant-baseline="middle">v{l}</text>"#,
            fmt(p.x),
            fmt(p.y)
        );
    }
    body.push_str("</g>\n");
}
