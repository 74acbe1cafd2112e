//! File formats: ball JSON, radii CSV/JSON, spectrum and matrix CSV.
//!
//! Floats are written with Rust's `Display`, the shortest text that parses
//! back to the same `f64`.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::ball::PolygonBall;
use crate::error::{CycloidError, Result};
use crate::geom::Point;
use crate::spectrum::CycloidSpectrum;
use crate::tolerance::Tolerances;

/// Ball JSON, either the full vertex list or half of it plus symmetry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BallFile {
    Full {
        vertices: Vec<[f64; 2]>,
    },
    Half {
        half_vertices: Vec<[f64; 2]>,
        symmetric: bool,
    },
}

impl BallFile {
    pub fn into_vertices(self) -> Result<Vec<Point>> {
        match self {
            BallFile::Full { vertices } => Ok(to_points(&vertices)),
            BallFile::Half {
                half_vertices,
                symmetric,
            } => {
                if !symmetric {
                    return Err(CycloidError::Format(
                        "half_vertices requires \"symmetric\": true".into(),
                    ));
                }
                let half = to_points(&half_vertices);
                Ok(half
                    .iter()
                    .copied()
                    .chain(half.iter().map(|p| -p))
                    .collect())
            }
        }
    }

    pub fn from_ball(ball: &PolygonBall) -> Self {
        BallFile::Full {
            vertices: ball.vertices().iter().map(|p| [p.x, p.y]).collect(),
        }
    }
}

fn to_points(v: &[[f64; 2]]) -> Vec<Point> {
    v.iter().map(|[x, y]| Point::new(*x, *y)).collect()
}

pub fn parse_ball_json(text: &str, tol: Tolerances) -> Result<PolygonBall> {
    let file: BallFile =
        serde_json::from_str(text).map_err(|e| CycloidError::Format(format!("ball JSON: {e}")))?;
    Ok(PolygonBall::validate_with(file.into_vertices()?, tol)?)
}

pub fn read_ball(path: &Path, tol: Tolerances) -> Result<PolygonBall> {
    let text = read_text(path)?;
    parse_ball_json(&text, tol).map_err(|e| match e {
        CycloidError::Format(msg) => CycloidError::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn ball_to_json(ball: &PolygonBall) -> String {
    serde_json::to_string_pretty(&BallFile::from_ball(ball)).expect("plain data serializes")
}

/// Radii JSON: `{"radii": [...], "ball": "path/to/ball.json"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiiFile {
    pub radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball: Option<PathBuf>,
}

/// Radii from CSV (`index,r`) or JSON, chosen by the first non-blank byte.
pub fn parse_radii(text: &str) -> Result<RadiiFile> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| CycloidError::Format(format!("radii JSON: {e}")))
    } else {
        Ok(RadiiFile {
            radii: parse_radii_csv(text)?,
            ball: None,
        })
    }
}

pub fn read_radii(path: &Path) -> Result<RadiiFile> {
    let mut file = parse_radii(&read_text(path)?)
        .map_err(|e| CycloidError::Format(format!("{}: {e}", path.display())))?;
    // a relative ball reference is resolved against the radii file
    if let (Some(b), Some(dir)) = (&file.ball, path.parent()) {
        if b.is_relative() {
            file.ball = Some(dir.join(b));
        }
    }
    Ok(file)
}

pub fn parse_radii_csv(text: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CycloidError::Format(e.to_string()))?
        .clone();
    let col = headers
        .iter()
        .position(|h| h == "r")
        .ok_or_else(|| CycloidError::Format("radii CSV needs an `r` column".into()))?;
    let idx_col = headers.iter().position(|h| h == "index");
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CycloidError::Format(e.to_string()))?;
        let field = |c: usize| {
            rec.get(c)
                .ok_or_else(|| CycloidError::Format(format!("row {}: missing column", line + 1)))
        };
        let r: f64 = field(col)?
            .parse()
            .map_err(|e| CycloidError::Format(format!("row {}: {e}", line + 1)))?;
        let i = match idx_col {
            Some(c) => field(c)?
                .parse()
                .map_err(|e| CycloidError::Format(format!("row {}: {e}", line + 1)))?,
            None => line,
        };
        rows.push((i, r));
    }
    rows.sort_by_key(|(i, _)| *i);
    if rows.iter().enumerate().any(|(k, (i, _))| k != *i) {
        return Err(CycloidError::Format(
            "radii CSV indices must be 0..len without gaps".into(),
        ));
    }
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

pub fn radii_csv(values: &[f64]) -> String {
    let mut w = csv_writer();
    w.write_record(["index", "r"]).expect("in-memory write");
    for (i, r) in values.iter().enumerate() {
        w.write_record([i.to_string(), r.to_string()])
            .expect("in-memory write");
    }
    finish(w)
}

pub fn radii_json(values: &[f64], ball: Option<&Path>) -> String {
    let file = RadiiFile {
        radii: values.to_vec(),
        ball: ball.map(Path::to_path_buf),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// One row per eigenpair; `k_fractional` is added for traversed balls.
pub fn spectrum_csv(spectrum: &CycloidSpectrum) -> String {
    let multi = spectrum.ball().turns() > 1;
    let mut w = csv_writer();
    let mut header = vec!["index", "k_label", "branch", "eigenvalue", "class", "cusps"];
    if multi {
        header.push("k_fractional");
    }
    w.write_record(&header).expect("in-memory write");
    for (i, c) in spectrum.cycloids().iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            c.label.text(),
            c.label.branch.map(|b| b.to_string()).unwrap_or_default(),
            c.eigenvalue.to_string(),
            c.space_class.to_string(),
            c.cusp_count().to_string(),
        ];
        if multi {
            row.push(c.label.value().to_string());
        }
        w.write_record(&row).expect("in-memory write");
    }
    finish(w)
}

#[derive(Serialize)]
struct SpectrumRow {
    index: usize,
    k_label: String,
    k_fractional: f64,
    branch: Option<u8>,
    eigenvalue: f64,
    class: String,
    cusps: usize,
    ordinary: bool,
    radii: Vec<f64>,
}

pub fn spectrum_json(spectrum: &CycloidSpectrum) -> String {
    let rows: Vec<SpectrumRow> = spectrum
        .cycloids()
        .iter()
        .enumerate()
        .map(|(i, c)| SpectrumRow {
            index: i,
            k_label: c.label.text(),
            k_fractional: c.label.value(),
            branch: c.label.branch,
            eigenvalue: c.eigenvalue,
            class: c.space_class.to_string(),
            cusps: c.cusp_count(),
            ordinary: c.cusps.ordinary,
            radii: c.radii.values().to_vec(),
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("plain data serializes")
}

/// Eigenvectors as columns `e0, e1, ...` with one row per radius index.
pub fn eigenvectors_csv(spectrum: &CycloidSpectrum) -> String {
    let mut w = csv_writer();
    let mut header = vec!["index".to_string()];
    header.extend((0..spectrum.len()).map(|j| format!("e{j}")));
    w.write_record(&header).expect("in-memory write");
    for i in 0..spectrum.ball().len() {
        let mut row = vec![i.to_string()];
        row.extend(
            spectrum
                .cycloids()
                .iter()
                .map(|c| c.radii.values()[i].to_string()),
        );
        w.write_record(&row).expect("in-memory write");
    }
    finish(w)
}

/// Row-major dump without a header.
pub fn matrix_csv(m: &DMatrix<f64>) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for i in 0..m.nrows() {
        w.write_record(m.row(i).iter().map(|x| x.to_string()))
            .expect("in-memory write");
    }
    finish(w)
}

pub fn parse_matrix_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CycloidError::Format(e.to_string()))?;
        let row = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CycloidError::Format(e.to_string()))?;
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(CycloidError::Format("ragged matrix CSV".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CycloidError::Format(format!("{}: {e}", path.display())))
}
