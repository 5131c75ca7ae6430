//! Verification reports (CSV and JSON) and plot data.

use std::io::Write;

use serde::{Deserialize, Serialize};
use sparsefrac_core::verify::{TestCase, VerificationReport};

use crate::io::fmt_f64;

/// One row of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub case_id: String,
    pub theorem: String,
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
    pub gamma: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub depth: u32,
    pub k_char: u32,
    pub characteristic: f64,
    pub lhs: f64,
    pub rhs_without_constant: f64,
    pub measured_constant: f64,
    pub threshold: f64,
    pub violations: usize,
    pub pass: bool,
}

pub const CSV_HEADER: [&str; 17] = [
    "case_id",
    "theorem",
    "n",
    "alpha",
    "p",
    "q",
    "gamma",
    "x0",
    "depth",
    "k_char",
    "characteristic",
    "lhs",
    "rhs_without_constant",
    "measured_constant",
    "threshold",
    "violations",
    "pass",
];

impl ReportRow {
    pub fn new(case: &TestCase, r: &VerificationReport, threshold: f64) -> Self {
        let e = case.exponents;
        let x0 = match case.weight {
            sparsefrac_core::weights::WeightSpec::Power { x0, .. } => Some(x0[..e.n()].to_vec()),
            _ => None,
        };
        let pass = r.violations == 0 && (r.degenerate || r.measured_constant <= threshold);
        Self {
            case_id: case.id.clone(),
            theorem: r.theorem.id().to_string(),
            n: e.n(),
            alpha: e.alpha(),
            p: e.p(),
            q: e.q(),
            gamma: case.gamma(),
            x0,
            depth: r.depth,
            k_char: r.k_char,
            characteristic: r.characteristic,
            lhs: r.lhs,
            rhs_without_constant: r.rhs(),
            measured_constant: r.measured_constant,
            threshold,
            violations: r.violations,
            pass,
        }
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.case_id.clone(),
            self.theorem.clone(),
            self.n.to_string(),
            fmt_f64(self.alpha),
            fmt_f64(self.p),
            fmt_f64(self.q),
            self.gamma.map(fmt_f64).unwrap_or_default(),
            self.x0.as_ref().map(|x| x.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(";")).unwrap_or_default(),
            self.depth.to_string(),
            self.k_char.to_string(),
            fmt_f64(self.characteristic),
            fmt_f64(self.lhs),
            fmt_f64(self.rhs_without_constant),
            fmt_f64(self.measured_constant),
            fmt_f64(self.threshold),
            self.violations.to_string(),
            self.pass.to_string(),
        ]
    }

    fn from_csv(rec: &csv::StringRecord) -> Result<Self, ReportError> {
        let bad = |what: &str| ReportError::Field(what.to_string());
        let f = |i: usize| -> Result<f64, ReportError> { rec[i].parse().map_err(|_| bad(CSV_HEADER[i])) };
        let opt = |i: usize| -> Result<Option<f64>, ReportError> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                f(i).map(Some)
            }
        };
        if rec.len() != CSV_HEADER.len() {
            return Err(bad("record length"));
        }
        let x0 = if rec[7].is_empty() {
            None
        } else {
            Some(rec[7].split(';').map(|s| s.parse().map_err(|_| bad("x0"))).collect::<Result<Vec<f64>, _>>()?)
        };
        Ok(Self {
            case_id: rec[0].to_string(),
            theorem: rec[1].to_string(),
            n: rec[2].parse().map_err(|_| bad("n"))?,
            alpha: f(3)?,
            p: f(4)?,
            q: f(5)?,
            gamma: opt(6)?,
            x0,
            depth: rec[8].parse().map_err(|_| bad("depth"))?,
            k_char: rec[9].parse().map_err(|_| bad("k_char"))?,
            characteristic: f(10)?,
            lhs: f(11)?,
            rhs_without_constant: f(12)?,
            measured_constant: f(13)?,
            threshold: f(14)?,
            violations: rec[15].parse().map_err(|_| bad("violations"))?,
            pass: rec[16].parse().map_err(|_| bad("pass"))?,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid field `{0}`")]
    Field(String),
}

pub fn write_csv<W: Write>(w: W, rows: &[ReportRow]) -> Result<(), ReportError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.write_record(r.csv_fields())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<ReportRow>, ReportError> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.records().map(|rec| ReportRow::from_csv(&rec?)).collect()
}

pub fn write_json<W: Write>(mut w: W, rows: &[ReportRow]) -> Result<(), ReportError> {
    serde_json::to_writer_pretty(&mut w, rows)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_json<R: std::io::Read>(r: R) -> Result<Vec<ReportRow>, ReportError> {
    Ok(serde_json::from_reader(r)?)
}

/// One point of a `γ`-sweep plot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub gamma: f64,
    pub log_characteristic: f64,
    pub log_normalized_lhs: f64,
}

pub fn write_plot_csv<W: Write>(w: W, theorem: &str, points: &[PlotPoint]) -> Result<(), ReportError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["theorem", "gamma", "log_characteristic", "log_normalized_lhs"])?;
    for p in points {
        out.write_record([
            theorem.to_string(),
            fmt_f64(p.gamma),
            fmt_f64(p.log_characteristic),
            fmt_f64(p.log_normalized_lhs),
        ])?;
    }
    out.flush()?;
    Ok(())
}
