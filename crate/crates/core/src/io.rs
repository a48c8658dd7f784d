//! Matrix files (JSON) and trial report tables (CSV).

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{RadError, Result};
use crate::harness::{TheoremAggregate, TrialRecord, FORMAT_VERSION};
use crate::linalg::ComplexMatrix;

/// One named matrix, row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl NamedMatrix {
    pub fn from_matrix(name: &str, m: &ComplexMatrix) -> Self {
        NamedMatrix {
            name: name.to_string(),
            dim: m.dim(),
            data: m.to_row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.data.len() != self.dim * self.dim {
            return Err(RadError::Format(format!(
                "matrix '{}' has {} entries, expected {}",
                self.name,
                self.data.len(),
                self.dim * self.dim
            )));
        }
        if self.data.iter().flatten().any(|v| !v.is_finite()) {
            return Err(RadError::Format(format!("matrix '{}' has non-finite entries", self.name)));
        }
        let entries: Vec<Complex64> = self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_row_major(self.dim, &entries)
    }
}

/// Document holding named matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub format_version: String,
    pub matrices: Vec<NamedMatrix>,
}

impl Default for MatrixFile {
    fn default() -> Self {
        MatrixFile {
            format_version: FORMAT_VERSION.to_string(),
            matrices: Vec::new(),
        }
    }
}

impl MatrixFile {
    pub fn push(&mut self, name: &str, m: &ComplexMatrix) {
        self.matrices.push(NamedMatrix::from_matrix(name, m));
    }

    /// Looks a matrix up by name.
    pub fn get(&self, name: &str) -> Result<ComplexMatrix> {
        self.matrices
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| RadError::Format(format!("no matrix named '{name}'")))?
            .to_matrix()
    }

    fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(RadError::Format(format!(
                "unsupported format_version '{}', expected '{FORMAT_VERSION}'",
                self.format_version
            )));
        }
        for m in &self.matrices {
            m.to_matrix()?;
        }
        Ok(())
    }

    pub fn from_reader(r: impl Read) -> Result<Self> {
        let file: MatrixFile = serde_json::from_reader(r).map_err(|e| RadError::Format(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_writer(&self, mut w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self).map_err(|e| RadError::Format(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.to_writer(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

/// Frozen column order of the trial table.
pub const REPORT_HEADER: [&str; 19] = [
    "theorem",
    "trial",
    "dim",
    "ensemble",
    "nu_or_alpha",
    "p",
    "q",
    "r",
    "N",
    "n_ops",
    "lhs_lower",
    "norm_term",
    "refinement_upper",
    "rhs_refined_est",
    "rhs_baseline",
    "refinement_gain",
    "pointwise_violations",
    "status",
    "seed",
];

/// Column order of the per-theorem gain summary.
pub const GAIN_HEADER: [&str; 8] = [
    "theorem",
    "trials",
    "errors",
    "min_gain",
    "mean_gain",
    "max_gain",
    "dominance_violations",
    "pointwise_violations",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn opt_real(v: Option<f64>) -> String {
    v.map(format_real).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> RadError {
    RadError::Io(e.to_string())
}

/// Writes the trial table: header row then one row per record.
pub fn write_report(records: &[TrialRecord], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(REPORT_HEADER).map_err(csv_err)?;
    for r in records {
        out.write_record([
            r.theorem.clone(),
            r.trial.to_string(),
            r.dim.to_string(),
            r.ensemble.clone(),
            opt_real(r.nu_or_alpha),
            opt_real(r.p),
            opt_real(r.q),
            opt_real(r.r),
            r.levels.map(|n| n.to_string()).unwrap_or_default(),
            r.n_ops.to_string(),
            format_real(r.lhs_lower),
            format_real(r.norm_term),
            format_real(r.refinement_upper),
            format_real(r.rhs_refined_est),
            format_real(r.rhs_baseline),
            format_real(r.refinement_gain),
            r.pointwise_violations.to_string(),
            r.status.clone(),
            r.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the per-theorem gain summary table.
pub fn write_gain_summary(aggregates: &[TheoremAggregate], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(GAIN_HEADER).map_err(csv_err)?;
    for a in aggregates {
        out.write_record([
            a.theorem.clone(),
            a.trials.to_string(),
            a.errors.to_string(),
            opt_real(a.min_gain),
            opt_real(a.mean_gain),
            opt_real(a.max_gain),
            a.dominance_violations.to_string(),
            a.pointwise_violations.to_string(),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Parsed rows of a trial table, as strings keyed by the frozen header.
pub fn read_report(r: impl Read) -> Result<Vec<Vec<String>>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header != REPORT_HEADER {
        return Err(RadError::Format(format!("unexpected report header {header:?}")));
    }
    rdr.records()
        .map(|row| Ok(row.map_err(csv_err)?.iter().map(str::to_string).collect()))
        .collect()
}
