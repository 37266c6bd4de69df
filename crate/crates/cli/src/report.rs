//! Run reports (JSON) and residual profiles (CSV).

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use fracnoether::frac_kernels::SampledFunction;
use fracnoether::problems::ResidualReport;

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub a: f64,
    pub b: f64,
    pub m: usize,
    pub h: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    /// Serialized as null when the residual is undefined inside the window.
    pub sup_norm: f64,
    pub l2_norm: f64,
    pub excluded_band: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub profile: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintEntry {
    pub index: usize,
    pub value: f64,
    pub level: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverInfo {
    pub converged: bool,
    pub newton_converged: bool,
    pub iterations: usize,
    pub newton_residual: f64,
    pub newton_tolerance: f64,
    /// max |q − reference| over the band-excluded nodes divided by max |reference|.
    pub scaled_deviation: Option<f64>,
    pub trajectory: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub which: Option<String>,
    pub spec: Option<String>,
    pub alpha: Option<f64>,
    pub grid: Option<GridInfo>,
    pub dim: Option<usize>,
    pub multipliers: Vec<f64>,
    pub tolerance: Option<f64>,
    pub checks: Vec<CheckEntry>,
    pub constraints: Vec<ConstraintEntry>,
    pub boundary_residual: Option<f64>,
    pub solver: Option<SolverInfo>,
    pub selftest: Option<Vec<crate::selftest::SelftestEntry>>,
    pub warnings: Vec<String>,
    pub status: String,
    pub exit_code: i32,
}

/// Writes residual profiles and the report under one directory.
pub struct Sink {
    dir: PathBuf,
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

impl Sink {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    fn path(&self, name: &str) -> (PathBuf, String) {
        let p = self.dir.join(name);
        let label = p.display().to_string();
        (p, label)
    }

    fn write_rows(&self, name: &str, header: Vec<String>, rows: impl Iterator<Item = Vec<f64>>) -> Result<String> {
        let (path, label) = self.path(name);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("cannot write {label}"))?;
        w.write_record(&header)?;
        for row in rows {
            w.write_record(row.into_iter().map(num))?;
        }
        w.flush()?;
        Ok(label)
    }

    /// Columns t, r1..rd, abs.
    pub fn profile(&self, name: &str, report: &ResidualReport) -> Result<String> {
        let r = &report.pointwise;
        let d = r.dim();
        let mut header = vec!["t".to_string()];
        header.extend((1..=d).map(|c| format!("r{c}")));
        header.push("abs".into());
        let grid = *r.grid();
        let rows = (0..grid.len()).map(|i| {
            let mut row = vec![grid.node(i)];
            row.extend_from_slice(r.at(i));
            row.push(report.magnitude[i]);
            row
        });
        self.write_rows(name, header, rows)
    }

    /// Columns t, q1..qn and, with a reference, ref1..refn and deviation.
    pub fn trajectory(&self, name: &str, q: &SampledFunction, reference: Option<&SampledFunction>) -> Result<String> {
        let n = q.dim();
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|c| format!("q{c}")));
        if reference.is_some() {
            header.extend((1..=n).map(|c| format!("ref{c}")));
            header.push("deviation".into());
        }
        let grid = *q.grid();
        let rows = (0..grid.len()).map(|i| {
            let mut row = vec![grid.node(i)];
            row.extend_from_slice(q.at(i));
            if let Some(r) = reference {
                row.extend_from_slice(r.at(i));
                let dev = q.at(i).iter().zip(r.at(i)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                row.push(dev);
            }
            row
        });
        self.write_rows(name, header, rows)
    }

    pub fn report(&self, report: &RunReport) -> Result<String> {
        let (path, label) = self.path("report.json");
        let mut text = serde_json::to_string_pretty(report)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("cannot write {label}"))?;
        Ok(label)
    }
}

impl CheckEntry {
    pub fn from_report(name: &str, report: &ResidualReport, tolerance: f64, profile: Option<String>) -> Self {
        Self {
            name: name.to_string(),
            sup_norm: report.sup_norm,
            l2_norm: report.l2_norm,
            excluded_band: report.excluded_band,
            tolerance,
            passed: report.passes(tolerance),
            profile,
        }
    }
}
