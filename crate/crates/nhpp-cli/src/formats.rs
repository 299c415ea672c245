//! Output encodings: event series and matrices as CSV or JSON, and the
//! validation report table.
//!
//! Events CSV is long-format `run_id,event_index,time`. Matrix CSV holds one
//! series per row, right-padded with empty cells to the widest row. JSON
//! encodes runs as an object `{"runs": [[...], ...]}` with jagged rows (no
//! padding). Report rows are keyed by metric name and serialize to both JSON
//! and a fixed-column CSV.

use std::io::Write;

use serde::Serialize;

use nhpp_core::batch::EventMatrix;
use nhpp_core::EventSeries;

use crate::error::CliError;
use crate::runner::SamplerReport;

pub fn write_runs_csv<W: Write>(mut w: W, runs: &[EventSeries]) -> Result<(), CliError> {
    writeln!(w, "run_id,event_index,time")?;
    for (run_id, series) in runs.iter().enumerate() {
        for (event_index, t) in series.times().iter().enumerate() {
            writeln!(w, "{run_id},{event_index},{t}")?;
        }
    }
    Ok(())
}

pub fn write_matrix_csv<W: Write>(mut w: W, runs: &[EventSeries]) -> Result<(), CliError> {
    let cols = runs.iter().map(EventSeries::len).max().unwrap_or(0);
    for series in runs {
        let mut line = String::new();
        for i in 0..cols {
            if i > 0 {
                line.push(',');
            }
            if let Some(&t) = series.times().get(i) {
                line.push_str(&t.to_string());
            }
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_event_matrix_csv<W: Write>(mut w: W, matrix: &EventMatrix) -> Result<(), CliError> {
    for i in 0..matrix.rows() {
        let row = matrix.row_events(i);
        let mut line = String::new();
        for j in 0..matrix.cols() {
            if j > 0 {
                line.push(',');
            }
            if let Some(&t) = row.get(j) {
                line.push_str(&t.to_string());
            }
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn runs_to_json(runs: &[EventSeries]) -> serde_json::Value {
    serde_json::json!({
        "runs": runs.iter().map(|s| s.times().to_vec()).collect::<Vec<_>>(),
    })
}

pub fn matrix_to_json(matrix: &EventMatrix) -> serde_json::Value {
    let rows: Vec<Vec<f64>> = matrix.iter_rows().map(|r| r.to_vec()).collect();
    serde_json::json!(rows)
}

/// Flat, metric-keyed rendering of a [`SamplerReport`].
#[derive(Debug, Serialize)]
pub struct ReportRow {
    pub sampler: String,
    pub runs: usize,
    pub theoretical_mass: f64,
    pub sample_mean: f64,
    pub bias_mean: f64,
    pub bias_mean_rel: f64,
    pub bias_mean_rel_pct: f64,
    pub sample_variance: f64,
    pub bias_variance: f64,
    pub bias_variance_rel: f64,
    pub bias_variance_rel_pct: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub ci90_lo: f64,
    pub ci90_hi: f64,
    pub ci75_lo: f64,
    pub ci75_hi: f64,
    pub ci50_lo: f64,
    pub ci50_hi: f64,
    pub count_chi2: f64,
    pub count_chi2_p: f64,
    pub count_chi2_classical: f64,
    pub count_chi2_p_calibrated: f64,
    pub count_chi2_dof: u32,
    pub count_w1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_w1_p: Option<f64>,
    pub time_bins: usize,
    pub time_chi2: f64,
    pub time_chi2_p: f64,
    pub time_chi2_classical: f64,
    pub time_chi2_p_calibrated: f64,
    pub time_w1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_w1_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<f64>,
}

impl From<&SamplerReport> for ReportRow {
    fn from(r: &SamplerReport) -> Self {
        ReportRow {
            sampler: r.label.clone(),
            runs: r.runs,
            theoretical_mass: r.theoretical_mass,
            sample_mean: r.summary.sample_mean,
            bias_mean: r.summary.bias_mean,
            bias_mean_rel: r.summary.bias_mean_rel,
            bias_mean_rel_pct: r.summary.bias_mean_rel_pct,
            sample_variance: r.summary.sample_variance,
            bias_variance: r.summary.bias_variance,
            bias_variance_rel: r.summary.bias_variance_rel,
            bias_variance_rel_pct: r.summary.bias_variance_rel_pct,
            ci95_lo: r.summary.ci95.0,
            ci95_hi: r.summary.ci95.1,
            ci90_lo: r.summary.ci90.0,
            ci90_hi: r.summary.ci90.1,
            ci75_lo: r.summary.ci75.0,
            ci75_hi: r.summary.ci75.1,
            ci50_lo: r.summary.ci50.0,
            ci50_hi: r.summary.ci50.1,
            count_chi2: r.count_gof.statistic,
            count_chi2_p: r.count_gof.p_value,
            count_chi2_classical: r.count_gof.statistic_classical,
            count_chi2_p_calibrated: r.count_gof.p_value_calibrated,
            count_chi2_dof: r.count_gof.dof,
            count_w1: r.count_w1,
            count_w1_p: r.count_w1_p,
            time_bins: r.time_bins,
            time_chi2: r.time_gof.chi2.statistic,
            time_chi2_p: r.time_gof.chi2.p_value,
            time_chi2_classical: r.time_gof.chi2.statistic_classical,
            time_chi2_p_calibrated: r.time_gof.chi2.p_value_calibrated,
            time_w1: r.time_gof.w1,
            time_w1_p: r.time_gof.w1_p,
            efficiency: r.efficiency,
        }
    }
}

pub fn reports_to_json(reports: &[SamplerReport]) -> serde_json::Value {
    let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from).collect();
    serde_json::json!({ "reports": rows })
}

pub fn write_reports_csv<W: Write>(w: W, reports: &[SamplerReport]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(w);
    writer
        .write_record([
            "sampler",
            "runs",
            "theoretical_mass",
            "sample_mean",
            "bias_mean",
            "bias_mean_rel",
            "bias_mean_rel_pct",
            "sample_variance",
            "bias_variance",
            "bias_variance_rel",
            "bias_variance_rel_pct",
            "ci95_lo",
            "ci95_hi",
            "ci90_lo",
            "ci90_hi",
            "ci75_lo",
            "ci75_hi",
            "ci50_lo",
            "ci50_hi",
            "count_chi2",
            "count_chi2_p",
            "count_chi2_classical",
            "count_chi2_p_calibrated",
            "count_chi2_dof",
            "count_w1",
            "count_w1_p",
            "time_bins",
            "time_chi2",
            "time_chi2_p",
            "time_chi2_classical",
            "time_chi2_p_calibrated",
            "time_w1",
            "time_w1_p",
            "efficiency",
        ])
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    let blank = String::new();
    let opt = |v: Option<f64>| v.map(|x| x.to_string());
    for r in reports {
        let row = ReportRow::from(r);
        writer
            .write_record([
                row.sampler.clone(),
                row.runs.to_string(),
                row.theoretical_mass.to_string(),
                row.sample_mean.to_string(),
                row.bias_mean.to_string(),
                row.bias_mean_rel.to_string(),
                row.bias_mean_rel_pct.to_string(),
                row.sample_variance.to_string(),
                row.bias_variance.to_string(),
                row.bias_variance_rel.to_string(),
                row.bias_variance_rel_pct.to_string(),
                row.ci95_lo.to_string(),
                row.ci95_hi.to_string(),
                row.ci90_lo.to_string(),
                row.ci90_hi.to_string(),
                row.ci75_lo.to_string(),
                row.ci75_hi.to_string(),
                row.ci50_lo.to_string(),
                row.ci50_hi.to_string(),
                row.count_chi2.to_string(),
                row.count_chi2_p.to_string(),
                row.count_chi2_classical.to_string(),
                row.count_chi2_p_calibrated.to_string(),
                row.count_chi2_dof.to_string(),
                row.count_w1.to_string(),
                opt(row.count_w1_p).unwrap_or_else(|| blank.clone()),
                row.time_bins.to_string(),
                row.time_chi2.to_string(),
                row.time_chi2_p.to_string(),
                row.time_chi2_classical.to_string(),
                row.time_chi2_p_calibrated.to_string(),
                row.time_w1.to_string(),
                opt(row.time_w1_p).unwrap_or_else(|| blank.clone()),
                opt(row.efficiency).unwrap_or_else(|| blank.clone()),
            ])
            .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    }
    writer.flush()?;
    Ok(())
}

/// Timing table rows emitted by the bench command.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub reps: u32,
    pub median_us: f64,
    pub q25_us: f64,
    pub q75_us: f64,
}

pub fn write_bench_csv<W: Write>(mut w: W, rows: &[BenchRow]) -> Result<(), CliError> {
    writeln!(w, "name,reps,median_us,q25_us,q75_us")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.name, r.reps, r.median_us, r.q25_us, r.q75_us)?;
    }
    Ok(())
}
