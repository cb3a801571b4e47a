//! The `simproj` command-line front end.
//!
//! Every command reads its inputs from files, writes artifacts to files, and
//! reports failures on stderr as a single JSON object. Exit codes: 0 success,
//! 2 invalid input or configuration, 3 infeasible matching, 4 I/O failure.

mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::density::{self, DensityError, DensityGrid, DirichletParams, Mode};
use crate::geometry::{BarycentricPoint, GeometryError, Policy};
use crate::matching::{self, MatchError, MatchOptions, UnlabeledFacetSets};
use crate::projection::{self, ProjectionBundle, ProjectionError, Solver};
use crate::render::{self, Content, FigureKind, FigureSpec, Palette, RenderError, Style};
use crate::tol;

pub use io::{ingest_csv, Manifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse { row: u64, column: u64, message: String },
    #[error("invalid row {row}: {reason}")]
    Validation { row: u64, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 4,
            CliError::Match(
                MatchError::NoFeasibleAssignment
                | MatchError::AmbiguousAssignment { .. }
                | MatchError::PostMatchIncompatibility { .. },
            ) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Validation { .. } => "validation",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Geometry(_) => "geometry",
            CliError::Projection(_) => "projection",
            CliError::Match(_) => "matching",
            CliError::Density(_) => "density",
            CliError::Render(_) => "render",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        match self {
            CliError::Parse { row, column, .. } => {
                v["row"] = json!(row);
                v["column"] = json!(column);
            }
            CliError::Validation { row, .. } => v["row"] = json!(row),
            CliError::Io { path, .. } => v["path"] = json!(path),
            _ => {}
        }
        v
    }
}

type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Project every point of a CSV onto all facets; one CSV per facet
    Project,
    /// Invert row-aligned facet files back to points
    Reconstruct,
    /// Recover a point set from shuffled facet files
    Match,
    /// Facet marginal of a Dirichlet density on a regular grid
    Marginalize,
    /// Marginalize a facet grid once more, onto one of its own facets
    Recursive,
    /// Draw points or grids as SVG
    Render,
    /// Compare numeric facet marginals of a Dirichlet with the analytic ones
    ValidateDirichlet,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Project => "project",
            Command::Reconstruct => "reconstruct",
            Command::Match => "match",
            Command::Marginalize => "marginalize",
            Command::Recursive => "recursive",
            Command::Render => "render",
            Command::ValidateDirichlet => "validate-dirichlet",
        }
    }
}

/// Everything a command needs. Fields a command does not use are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub dim: Option<usize>,
    pub depth: u32,
    pub accuracy: usize,
    pub mode: Mode,
    pub tol_cycle: f64,
    pub tol_compat: f64,
    pub policy: Policy,
    pub seed: u64,
    pub shuffle: bool,
    pub alpha: Option<Vec<f64>>,
    pub facet: Option<usize>,
    pub facets: Option<(usize, usize)>,
    pub sub_facet: Option<usize>,
    pub kind: Option<FigureKind>,
    pub style: Style,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: Vec::new(),
            output: None,
            report: None,
            dim: None,
            depth: 8,
            accuracy: 500,
            mode: Mode::Pushforward,
            tol_cycle: tol::CYCLE,
            tol_compat: tol::MATCH_COMPAT,
            policy: Policy::Strict,
            seed: 0,
            shuffle: true,
            alpha: None,
            facet: None,
            facets: None,
            sub_facet: None,
            kind: None,
            style: Style::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=density::MAX_DEPTH).contains(&self.depth) {
            return Err(CliError::Config(format!(
                "depth {} is outside 1..={}",
                self.depth,
                density::MAX_DEPTH
            )));
        }
        if self.accuracy < 2 {
            return Err(CliError::Config(format!(
                "accuracy {} is below 2",
                self.accuracy
            )));
        }
        for (name, t) in [("tol-cycle", self.tol_cycle), ("tol-compat", self.tol_compat)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Config(format!("{name} must be positive, got {t}")));
            }
        }
        if let Some(d) = self.dim {
            if d < 2 {
                return Err(CliError::Config(format!("dim {d} is below 2")));
            }
        }
        Ok(())
    }

    fn input(&self) -> Result<&Path> {
        match self.input.as_slice() {
            [one] => Ok(one),
            [] => Err(CliError::Config(format!("{} needs --input", self.command.name()))),
            _ => Err(CliError::Config(format!(
                "{} takes a single --input",
                self.command.name()
            ))),
        }
    }

    fn output(&self) -> Result<&Path> {
        self.output
            .as_deref()
            .ok_or_else(|| CliError::Config(format!("{} needs --output", self.command.name())))
    }

    fn alpha(&self) -> Result<DirichletParams> {
        let alpha = self
            .alpha
            .clone()
            .ok_or_else(|| CliError::Config(format!("{} needs --alpha", self.command.name())))?;
        if let Some(d) = self.dim.filter(|&d| d != alpha.len()) {
            return Err(CliError::Config(format!(
                "--dim {d} disagrees with {} concentrations",
                alpha.len()
            )));
        }
        Ok(DirichletParams::new(alpha)?)
    }

    fn match_options(&self) -> MatchOptions {
        MatchOptions {
            tol_cycle: self.tol_cycle,
            tol_compat: self.tol_compat,
        }
    }
}

/// Summary printed to stdout on success.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub command: &'static str,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let mut outcome = Outcome {
        command: config.command.name(),
        outputs: Vec::new(),
        count: None,
    };
    match config.command {
        Command::Project => {
            let points = ingest_csv(config.input()?, config.dim, config.policy)?;
            let dir = config.output()?;
            let seed = config.shuffle.then_some(config.seed);
            let sets = matching::project_set(&points, seed)?;
            let manifest = Manifest {
                dim: sets.dim(),
                count: sets.count(),
                shuffled: config.shuffle,
                seed,
                facets: (1..=sets.dim()).map(|j| (j, io::facet_file_name(j))).collect(),
            };
            io::write_facets(dir, sets.per_facet(), &manifest)?;
            outcome.count = Some(points.len());
            outcome.outputs.push(dir.display().to_string());
        }
        Command::Reconstruct => {
            let (dir, manifest) = io::read_manifest(config.input()?)?;
            let per_facet = io::read_facets(&dir, &manifest)?;
            let points = reconstruct_rows(&per_facet, config)?;
            let out = config.output()?;
            io::write_points(out, &points)?;
            outcome.count = Some(points.len());
            outcome.outputs.push(out.display().to_string());
        }
        Command::Match => {
            let (dir, manifest) = io::read_manifest(config.input()?)?;
            let sets = UnlabeledFacetSets::new(io::read_facets(&dir, &manifest)?)?;
            let opts = config.match_options();
            let (assignment, points) = matching::recover(&sets, opts)?;
            let out = config.output()?;
            io::write_points(out, &points)?;
            let report_path = config
                .report
                .clone()
                .unwrap_or_else(|| out.with_extension("report.json"));
            let max = assignment.residuals.iter().copied().fold(0.0, f64::max);
            let rows: Vec<Vec<usize>> = assignment
                .tuples
                .iter()
                .map(|t| t.iter().map(|i| i + 1).collect())
                .collect();
            io::write_json(
                &report_path,
                &json!({
                    "dim": sets.dim(),
                    "count": sets.count(),
                    "tol_cycle": opts.tol_cycle,
                    "tol_compat": opts.tol_compat,
                    "max_residual": max,
                    "residuals": assignment.residuals,
                    "rows": rows,
                    "degeneracies": assignment.notes,
                }),
            )?;
            outcome.count = Some(points.len());
            outcome.outputs.push(out.display().to_string());
            outcome.outputs.push(report_path.display().to_string());
        }
        Command::Marginalize => {
            let d = config.alpha()?;
            let facet = config
                .facet
                .ok_or_else(|| CliError::Config("marginalize needs --facet".into()))?;
            let grid = density::marginalize(&d, facet, config.depth, config.accuracy, config.mode)?;
            let out = config.output()?;
            io::write_text(out, &grid.to_json())?;
            outcome.count = Some(grid.values().len());
            outcome.outputs.push(out.display().to_string());
        }
        Command::Recursive => {
            let grid = read_grid(config.input()?)?;
            let sub = config
                .sub_facet
                .ok_or_else(|| CliError::Config("recursive needs --sub-facet".into()))?;
            let edge = density::recursive_marginalize(&grid, sub, config.depth, config.accuracy)?;
            let out = config.output()?;
            io::write_text(out, &edge.to_json())?;
            outcome.count = Some(edge.values().len());
            outcome.outputs.push(out.display().to_string());
        }
        Command::Render => {
            let kind = config
                .kind
                .ok_or_else(|| CliError::Config("render needs --kind".into()))?;
            let content = match kind {
                FigureKind::TernaryScatter | FigureKind::NetScatter => {
                    Content::Points(ingest_csv(config.input()?, config.dim, config.policy)?)
                }
                FigureKind::NetDensity | FigureKind::EdgeCurves => {
                    if config.input.is_empty() {
                        return Err(CliError::Config("render needs --input".into()));
                    }
                    Content::Grids(config.input.iter().map(|p| read_grid(p)).collect::<Result<_>>()?)
                }
            };
            let svg = render::render(&FigureSpec {
                kind,
                content,
                style: config.style.clone(),
            })?;
            let out = config.output()?;
            io::write_text(out, &svg)?;
            outcome.outputs.push(out.display().to_string());
        }
        Command::ValidateDirichlet => {
            let d = config.alpha()?;
            let report = validate_dirichlet(&d, config.depth, config.accuracy)?;
            let out = config.output()?;
            io::write_json(out, &report)?;
            outcome.outputs.push(out.display().to_string());
        }
    }
    Ok(outcome)
}

fn read_grid(path: &Path) -> Result<DensityGrid> {
    Ok(DensityGrid::from_json(&io::read_text(path)?)?)
}

fn reconstruct_rows(
    per_facet: &[Vec<crate::FacetProjection>],
    config: &RunConfig,
) -> Result<Vec<BarycentricPoint>> {
    let count = per_facet[0].len();
    if let Some(j) = per_facet.iter().position(|s| s.len() != count) {
        return Err(CliError::Validation {
            row: 0,
            reason: format!(
                "facet {} has {} rows, facet 1 has {count}",
                j + 1,
                per_facet[j].len()
            ),
        });
    }
    let dim = per_facet.len();
    (0..count)
        .map(|i| {
            let row = i as u64 + 2;
            let misaligned = |e: ProjectionError| CliError::Validation {
                row,
                reason: format!("{e}; rows may be shuffled, use `match` instead"),
            };
            match config.facets {
                Some((a, b)) => {
                    if a == 0 || b == 0 || a > dim || b > dim {
                        return Err(CliError::Config(format!(
                            "--facets {a},{b} outside 1..={dim}"
                        )));
                    }
                    projection::reconstruct_from_two_with(
                        &per_facet[a - 1][i],
                        &per_facet[b - 1][i],
                        config.tol_compat,
                    )
                    .map_err(|e| match e {
                        ProjectionError::IncompatiblePair => misaligned(e),
                        other => other.into(),
                    })
                }
                None => {
                    let bundle =
                        ProjectionBundle::new(per_facet.iter().map(|s| s[i].clone()).collect())?;
                    projection::reconstruct_with(&bundle, config.tol_compat, Solver::default())
                        .map_err(|e| match e {
                            ProjectionError::IncompatibleBundle => misaligned(e),
                            other => other.into(),
                        })
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
struct ModeReport {
    max_abs_error: f64,
    integral: f64,
}

#[derive(Debug, Clone, Serialize)]
struct FacetReport {
    facet: usize,
    labels: Vec<usize>,
    marginal_alpha: Vec<f64>,
    pushforward: ModeReport,
    line_integral: ModeReport,
}

/// Max-abs error over interior grid nodes against the analytic marginal.
fn validate_dirichlet(d: &DirichletParams, depth: u32, accuracy: usize) -> Result<serde_json::Value> {
    let dim = d.alpha().len();
    let mut facets = Vec::new();
    for facet in 1..=dim {
        let labels: Vec<usize> = (1..=dim).filter(|&l| l != facet).collect();
        let analytic = d.marginal(&labels)?;
        let report = |mode: Mode| -> Result<ModeReport> {
            let g = density::marginalize(d, facet, depth, accuracy, mode)?;
            let mut max = 0.0f64;
            for (i, node) in g.nodes().iter().enumerate() {
                if g.is_boundary(i) {
                    continue;
                }
                let exact = analytic.pdf(&BarycentricPoint::new(node.clone())?)?;
                max = max.max((g.values()[i] - exact).abs());
            }
            Ok(ModeReport {
                max_abs_error: max,
                integral: g.integral(),
            })
        };
        let push = report(Mode::Pushforward)?;
        let line = report(Mode::LineIntegral)?;
        facets.push(FacetReport {
            facet,
            labels,
            marginal_alpha: analytic.alpha().to_vec(),
            pushforward: push,
            line_integral: line,
        });
    }
    Ok(json!({
        "alpha": d.alpha(),
        "depth": depth,
        "accuracy": accuracy,
        "facets": facets,
    }))
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("{x:?} is not a number")))
        .collect()
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|_| format!("{a:?} is not an index"))?,
            b.parse().map_err(|_| format!("{b:?} is not an index"))?,
        )),
        _ => Err("expected two indices, e.g. 1,3".into()),
    }
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    match s {
        "line-integral" | "line_integral" => Ok(Mode::LineIntegral),
        "pushforward" => Ok(Mode::Pushforward),
        _ => Err(format!("unknown mode {s:?}; use line-integral or pushforward")),
    }
}

fn parse_policy(s: &str) -> std::result::Result<Policy, String> {
    match s {
        "strict" => Ok(Policy::Strict),
        "renormalize" => Ok(Policy::Renormalize),
        _ => Err(format!("unknown policy {s:?}; use strict or renormalize")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "simproj", version, about = "Lossless facet projections of compositional data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Args)]
struct Opts {
    /// Input file or projection directory; render accepts several grids
    #[arg(long, global = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Residual report path for `match` (default: next to the output)
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Expected number of components J
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Grid subdivision depth D (2^D intervals per edge)
    #[arg(long, global = true, default_value_t = 8)]
    depth: u32,
    /// Samples per integration segment M
    #[arg(long, global = true, default_value_t = 500)]
    accuracy: usize,
    #[arg(long, global = true, value_parser = parse_mode, default_value = "pushforward")]
    mode: Mode,
    #[arg(long, global = true, default_value_t = tol::CYCLE)]
    tol_cycle: f64,
    #[arg(long, global = true, default_value_t = tol::MATCH_COMPAT)]
    tol_compat: f64,
    #[arg(long, global = true, value_parser = parse_policy, default_value = "strict")]
    policy: Policy,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Keep facet rows in input order
    #[arg(long, global = true)]
    no_shuffle: bool,
    /// Dirichlet concentrations, comma separated
    #[arg(long, global = true, value_parser = parse_list)]
    alpha: Option<::std::vec::Vec<f64>>,
    /// Vertex whose opposite facet receives the marginal
    #[arg(long, global = true)]
    facet: Option<usize>,
    /// Reconstruct from just these two facets, e.g. 1,3
    #[arg(long, global = true, value_parser = parse_pair)]
    facets: Option<(usize, usize)>,
    /// Vertex (original label) removed by `recursive`
    #[arg(long, global = true)]
    sub_facet: Option<usize>,
    /// ternary-scatter, net-scatter, net-density or edge-curves
    #[arg(long, global = true)]
    kind: Option<FigureKind>,
    #[arg(long, global = true, default_value_t = 800.0)]
    width: f64,
    #[arg(long, global = true, default_value_t = 800.0)]
    height: f64,
    #[arg(long, global = true, default_value_t = 3.0)]
    point_radius: f64,
    #[arg(long, global = true, default_value = "viridis")]
    palette: Palette,
    #[arg(long, global = true, default_value = "plasma")]
    curve_palette: Palette,
    /// Marker jitter in pixels
    #[arg(long, global = true, default_value_t = 0.0)]
    jitter: f64,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let o = cli.opts;
        RunConfig {
            command: cli.command,
            input: o.input,
            output: o.output,
            report: o.report,
            dim: o.dim,
            depth: o.depth,
            accuracy: o.accuracy,
            mode: o.mode,
            tol_cycle: o.tol_cycle,
            tol_compat: o.tol_compat,
            policy: o.policy,
            seed: o.seed,
            shuffle: !o.no_shuffle,
            alpha: o.alpha,
            facet: o.facet,
            facets: o.facets,
            sub_facet: o.sub_facet,
            kind: o.kind,
            style: Style {
                width: o.width,
                height: o.height,
                point_radius: o.point_radius,
                palette: o.palette,
                curve_palette: o.curve_palette,
                jitter: o.jitter,
                seed: o.seed,
                ..Style::default()
            },
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&RunConfig::from(cli)) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string(&outcome).expect("serializable"));
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
