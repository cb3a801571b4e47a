use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::geometry::{BarycentricPoint, FacetProjection, Policy};

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn reader(path: &Path) -> Result<csv::Reader<fs::File>, CliError> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file))
}

/// Reads rows of numbers. The first record is taken as a header when none of
/// its fields is a number. Rows are numbered from 1 as lines in the file.
/// Header fields are skipped.
fn read_numeric(path: &Path) -> Result<Vec<(u64, Vec<f64>)>, CliError> {
    let mut rdr = reader(path)?;
    let mut rows = Vec::new();
    let mut width: Option<usize> = None;
    for (n, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => io_err(path, &e),
            _ => CliError::Parse {
                row: e.position().map_or(0, |p| p.line()),
                column: 0,
                message: e.to_string(),
            },
        })?;
        let line = record.position().map_or(n as u64 + 1, |p| p.line());
        if n == 0 && record.iter().all(|f| f.parse::<f64>().is_err()) {
            width = Some(record.len());
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(CliError::Parse {
                row: line,
                column: record.len().min(expected) as u64 + 1,
                message: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(c, f)| {
                f.parse::<f64>().map_err(|_| CliError::Parse {
                    row: line,
                    column: c as u64 + 1,
                    message: format!("{f:?} is not a number"),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push((line, values));
    }
    if rows.is_empty() {
        return Err(CliError::Parse {
            row: 1,
            column: 1,
            message: "no data rows".into(),
        });
    }
    Ok(rows)
}

/// Reads compositions, one per row, validating each under `policy`. With
/// `dim` set, every row must have exactly that many components.
pub fn ingest_csv(
    path: &Path,
    dim: Option<usize>,
    policy: Policy,
) -> Result<Vec<BarycentricPoint>, CliError> {
    let rows = read_numeric(path)?;
    rows.into_iter()
        .map(|(line, values)| {
            if let Some(d) = dim {
                if values.len() != d {
                    return Err(CliError::Parse {
                        row: line,
                        column: values.len().min(d) as u64 + 1,
                        message: format!("expected J = {d} components, found {}", values.len()),
                    });
                }
            }
            BarycentricPoint::validate(&values, policy).map_err(|e| CliError::Validation {
                row: line,
                reason: e.to_string(),
            })
        })
        .collect()
}

fn write_rows<'a>(
    path: &Path,
    header: Vec<String>,
    rows: impl IntoIterator<Item = &'a [f64]>,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(&header).map_err(|e| io_err(path, e))?;
    for row in rows {
        // shortest representation that parses back to the same f64
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn label_header(labels: impl IntoIterator<Item = usize>) -> Vec<String> {
    labels.into_iter().map(|l| format!("pi_{l}")).collect()
}

pub fn write_points(path: &Path, points: &[BarycentricPoint]) -> Result<(), CliError> {
    let dim = points.first().map_or(0, |p| p.weights().len());
    write_rows(path, label_header(1..=dim), points.iter().map(|p| p.weights()))
}

pub fn facet_file_name(dropped: usize) -> String {
    format!("facet_{dropped}.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub dim: usize,
    pub count: usize,
    pub shuffled: bool,
    pub seed: Option<u64>,
    /// `(dropped vertex, file name)`.
    pub facets: Vec<(usize, String)>,
}

pub fn write_facets(
    dir: &Path,
    per_facet: &[Vec<FacetProjection>],
    manifest: &Manifest,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (j, set) in per_facet.iter().enumerate() {
        let dropped = j + 1;
        let labels = (1..=manifest.dim).filter(|&l| l != dropped);
        write_rows(
            &dir.join(facet_file_name(dropped)),
            label_header(labels),
            set.iter().map(|p| p.weights()),
        )?;
    }
    write_json(&dir.join("manifest.json"), manifest)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    write_text(path, &(text + "\n"))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

/// Resolves a projection directory or its manifest file.
pub fn read_manifest(input: &Path) -> Result<(PathBuf, Manifest), CliError> {
    let (dir, file) = if input.is_dir() {
        (input.to_path_buf(), input.join("manifest.json"))
    } else {
        let dir = input.parent().unwrap_or(Path::new(".")).to_path_buf();
        (dir, input.to_path_buf())
    };
    let manifest: Manifest = serde_json::from_str(&read_text(&file)?).map_err(|e| {
        CliError::Parse {
            row: e.line() as u64,
            column: e.column() as u64,
            message: format!("manifest: {e}"),
        }
    })?;
    Ok((dir, manifest))
}

/// Loads the facet files listed in a manifest, in dropped-vertex order.
pub fn read_facets(dir: &Path, manifest: &Manifest) -> Result<Vec<Vec<FacetProjection>>, CliError> {
    let mut facets = manifest.facets.clone();
    facets.sort();
    if facets.iter().map(|(d, _)| *d).ne(1..=manifest.dim) {
        return Err(CliError::Validation {
            row: 0,
            reason: format!("manifest must list one file per facet 1..={}", manifest.dim),
        });
    }
    facets
        .iter()
        .map(|(dropped, name)| {
            let path = dir.join(name);
            let rows = read_numeric(&path)?;
            rows.into_iter()
                .map(|(line, w)| {
                    FacetProjection::new(manifest.dim, *dropped, w).map_err(|e| {
                        CliError::Validation {
                            row: line,
                            reason: format!("{}: {e}", path.display()),
                        }
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn ingest_examples() {
        let f = file("0.25,0.25,0.25,0.25\n");
        let pts = ingest_csv(f.path(), None, Policy::Strict).unwrap();
        assert_eq!(pts, vec![BarycentricPoint::centroid(4)]);

        let f = file("a,b,c\n0.2, 0.3, 0.5\n0.1,0.1,0.8\n");
        assert_eq!(ingest_csv(f.path(), Some(3), Policy::Strict).unwrap().len(), 2);

        let f = file("0.3,0.3,0.3995\n");
        assert!(matches!(
            ingest_csv(f.path(), None, Policy::Strict),
            Err(CliError::Validation { row: 1, .. })
        ));
        assert_eq!(ingest_csv(f.path(), None, Policy::Renormalize).unwrap().len(), 1);

        let f = file("");
        assert!(matches!(
            ingest_csv(f.path(), None, Policy::Strict),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn parse_errors_carry_position() {
        let f = file("0.2,0.3,0.5\n0.2,x,0.5\n");
        assert!(matches!(
            ingest_csv(f.path(), None, Policy::Strict),
            Err(CliError::Parse { row: 2, column: 2, .. })
        ));
        let f = file("0.2,0.3,0.5\n0.5,0.5\n");
        assert!(matches!(
            ingest_csv(f.path(), None, Policy::Strict),
            Err(CliError::Parse { row: 2, column: 3, .. })
        ));
        let f = file("0.2,0.3,0.5\n");
        assert!(matches!(
            ingest_csv(f.path(), Some(4), Policy::Strict),
            Err(CliError::Parse { row: 1, column: 4, .. })
        ));
        assert!(matches!(
            ingest_csv(Path::new("/nonexistent/points.csv"), None, Policy::Strict),
            Err(CliError::Io { .. })
        ));
    }

    #[test]
    fn written_points_read_back_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let pts = vec![
            BarycentricPoint::new(vec![0.1, 0.2, 0.7]).unwrap(),
            BarycentricPoint::new(vec![1.0 / 3.0, 1.0 / 7.0, 1.0 - 1.0 / 3.0 - 1.0 / 7.0]).unwrap(),
        ];
        write_points(&path, &pts).unwrap();
        assert_eq!(ingest_csv(&path, Some(3), Policy::Strict).unwrap(), pts);
    }
}
