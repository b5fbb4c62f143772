//! File formats: models and sample sets as JSON, traces, spectra and
//! per-point errors as CSV, solver configuration as TOML or JSON.

use std::fs;
use std::path::Path;

use faer::Mat;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::compression::CompressionReport;
use crate::error::{Error, Result};
use crate::linalg::{c64, cx};
use crate::model::{AlphaFunction, EvalPoint, StructuredModel};
use crate::optimizer::{SolverConfig, TraceRow};
use crate::samples::SampleSet;

/// Row-major matrix of `[re, im]` pairs.
pub type MatrixRepr = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_repr(m: &Mat<c64>) -> MatrixRepr {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_repr(rows: &MatrixRepr, cols_if_empty: usize) -> Result<Mat<c64>> {
    let ncols = rows.first().map_or(cols_if_empty, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Format("ragged matrix rows".into()));
    }
    Ok(Mat::from_fn(rows.len(), ncols, |i, j| cx(rows[i][j][0], rows[i][j][1])))
}

fn vector_to_repr(v: &[c64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn vector_from_repr(v: &[[f64; 2]]) -> Vec<c64> {
    v.iter().map(|p| cx(p[0], p[1])).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub alphas: Vec<AlphaFunction>,
    #[serde(rename = "A")]
    pub a: Vec<MatrixRepr>,
    #[serde(rename = "B")]
    pub b: MatrixRepr,
    #[serde(rename = "C")]
    pub c: MatrixRepr,
    #[serde(default)]
    pub symmetric: bool,
}

impl ModelFile {
    pub fn from_model(model: &StructuredModel) -> Self {
        ModelFile {
            alphas: model.alphas.clone(),
            a: model.a.iter().map(matrix_to_repr).collect(),
            b: matrix_to_repr(&model.b),
            c: matrix_to_repr(&model.c),
            symmetric: model.symmetric,
        }
    }

    pub fn into_model(self) -> Result<StructuredModel> {
        let r = self.a.first().map_or(0, Vec::len);
        let a = self.a.iter().map(|m| matrix_from_repr(m, r)).collect::<Result<Vec<_>>>()?;
        let b = matrix_from_repr(&self.b, 0)?;
        let c = matrix_from_repr(&self.c, r)?;
        StructuredModel::new(self.alphas, a, b, c, self.symmetric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRepr {
    Frequency { s: [f64; 2] },
    Parameter { p: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleEntry {
    pub point: PointRepr,
    #[serde(rename = "H")]
    pub h: MatrixRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleFile {
    pub l: usize,
    pub m: usize,
    #[serde(default)]
    pub conjugate_closed: bool,
    pub samples: Vec<SampleEntry>,
}

impl SampleFile {
    pub fn from_samples(set: &SampleSet) -> Self {
        let samples = (0..set.len())
            .map(|i| SampleEntry {
                point: match &set.points[i] {
                    EvalPoint::Frequency(s) => PointRepr::Frequency { s: [s.re, s.im] },
                    EvalPoint::Parameter(p) => PointRepr::Parameter { p: p.clone() },
                },
                h: matrix_to_repr(&set.responses[i]),
                b: set.right_dirs.as_ref().map(|d| vector_to_repr(&d[i])),
                c: set.left_dirs.as_ref().map(|d| vector_to_repr(&d[i])),
            })
            .collect();
        SampleFile { l: set.outputs(), m: set.inputs(), conjugate_closed: set.conjugate_closed, samples }
    }

    pub fn into_samples(self) -> Result<SampleSet> {
        let mut points = Vec::with_capacity(self.samples.len());
        let mut responses = Vec::with_capacity(self.samples.len());
        let mut right = Vec::new();
        let mut left = Vec::new();
        for (i, e) in self.samples.into_iter().enumerate() {
            points.push(match e.point {
                PointRepr::Frequency { s } => EvalPoint::s(s[0], s[1]),
                PointRepr::Parameter { p } => EvalPoint::Parameter(p),
            });
            let h = matrix_from_repr(&e.h, self.m)?;
            if h.nrows() != self.l || h.ncols() != self.m {
                return Err(Error::Format(format!(
                    "sample {i}: response is {}x{}, header says {}x{}",
                    h.nrows(),
                    h.ncols(),
                    self.l,
                    self.m
                )));
            }
            responses.push(h);
            if let Some(b) = e.b {
                right.push(vector_from_repr(&b));
            }
            if let Some(c) = e.c {
                left.push(vector_from_repr(&c));
            }
        }
        let dirs = |d: Vec<Vec<c64>>| if d.is_empty() { None } else { Some(d) };
        SampleSet::with_directions(points, responses, dirs(right), dirs(left), self.conjugate_closed)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn write_model(path: &Path, model: &StructuredModel) -> Result<()> {
    write_json(path, &ModelFile::from_model(model))
}

pub fn read_model(path: &Path) -> Result<StructuredModel> {
    read_json::<ModelFile>(path)?.into_model()
}

pub fn write_samples(path: &Path, samples: &SampleSet) -> Result<()> {
    write_json(path, &SampleFile::from_samples(samples))
}

pub fn read_samples(path: &Path) -> Result<SampleSet> {
    read_json::<SampleFile>(path)?.into_samples()
}

pub fn write_summary<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_json(path, value)
}

pub fn read_summary<T: DeserializeOwned>(path: &Path) -> Result<T> {
    read_json(path)
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?)
}

pub fn write_trace(path: &Path, rows: &[TraceRow]) -> Result<()> {
    write_csv(path, rows)
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>> {
    read_csv(path)
}

/// One line of a singular-value decay file. Missing entries are left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub sv_horizontal: Option<f64>,
    pub sv_vertical: Option<f64>,
}

pub fn spectrum_rows(report: &CompressionReport) -> Vec<SpectrumRow> {
    let len = report.sv_horizontal.len().max(report.sv_vertical.len());
    (0..len)
        .map(|i| SpectrumRow {
            index: i + 1,
            sv_horizontal: report.sv_horizontal.get(i).copied(),
            sv_vertical: report.sv_vertical.get(i).copied(),
        })
        .collect()
}

pub fn write_spectrum(path: &Path, report: &CompressionReport) -> Result<()> {
    write_csv(path, &spectrum_rows(report))
}

pub fn read_spectrum(path: &Path) -> Result<Vec<SpectrumRow>> {
    read_csv(path)
}

/// One evaluated test point: its coordinates as text and the error there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub index: usize,
    pub point: String,
    pub error: f64,
    pub failed: bool,
}

pub fn write_errors(path: &Path, rows: &[ErrorRow]) -> Result<()> {
    write_csv(path, rows)
}

pub fn read_errors(path: &Path) -> Result<Vec<ErrorRow>> {
    read_csv(path)
}

/// Text form of a point used in error files: `re+imi` or `p0;p1;…`.
pub fn point_label(p: &EvalPoint) -> String {
    match p {
        EvalPoint::Frequency(s) => format!("{}{:+}i", s.re, s.im),
        EvalPoint::Parameter(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
    }
}

/// Reads a solver configuration; `.toml` files are parsed as TOML, anything else as JSON.
pub fn read_config(path: &Path) -> Result<SolverConfig> {
    let text = fs::read_to_string(path)?;
    let config: SolverConfig = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml")) {
        toml::from_str(&text).map_err(|e| Error::Format(e.to_string()))?
    } else {
        serde_json::from_str(&text)?
    };
    config.validate()?;
    Ok(config)
}

pub fn write_config(path: &Path, config: &SolverConfig) -> Result<()> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml")) {
        fs::write(path, toml::to_string(config).map_err(|e| Error::Format(e.to_string()))?)?;
        Ok(())
    } else {
        write_json(path, config)
    }
}
