//! Intensity specifications loaded from JSON or CSV files.
//!
//! JSON schema (tagged by `type`):
//!
//! ```json
//! {"type": "step", "values": [1, 2, 3], "breakpoints": [0, 1, 2, 3]}
//! {"type": "step_regular", "values": [1, 2, 3], "interval": [0.0, 3.0]}
//! {"type": "linear", "alpha": 3.0, "beta": -0.5}
//! {"type": "loglinear", "alpha": 1.0, "beta": -0.02}
//! {"type": "illustration", "growth": 0.2, "frequency": 1.0}
//! ```
//!
//! CSV files describe an irregular step intensity as `t_break,value` rows:
//! each row holds the left breakpoint of a cell and its rate; the final row
//! holds the closing breakpoint with an empty (or absent) value field.

use serde::Deserialize;

use nhpp_core::{IntensitySpec, Interval};

use crate::error::CliError;
use crate::illustration::Illustration;

/// A parsed intensity description plus its natural interval, when one is
/// implied by the file.
pub struct LoadedSpec {
    pub spec: SpecKind,
    pub interval: Option<Interval>,
}

pub enum SpecKind {
    ClosedForm(IntensitySpec),
    Illustration(Illustration),
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum JsonSpec {
    Step { values: Vec<f64>, breakpoints: Vec<f64> },
    StepRegular { values: Vec<f64>, interval: [f64; 2] },
    Linear { alpha: f64, beta: f64 },
    #[serde(alias = "log_linear")]
    Loglinear { alpha: f64, beta: f64 },
    Illustration {
        #[serde(default = "default_growth")]
        growth: f64,
        #[serde(default = "default_frequency")]
        frequency: f64,
    },
}

fn default_growth() -> f64 {
    0.2
}

fn default_frequency() -> f64 {
    1.0
}

/// Loads a spec file, dispatching on the `.json` / `.csv` extension.
pub fn load(path: &std::path::Path) -> Result<LoadedSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Spec(format!("cannot read {}: {e}", path.display())))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => parse_json(&text),
        Some("csv") => parse_csv(&text),
        _ => Err(CliError::Usage("spec files must end in .json or .csv".into())),
    }
}

pub fn parse_json(text: &str) -> Result<LoadedSpec, CliError> {
    let parsed: JsonSpec = serde_json::from_str(text)
        .map_err(|e| CliError::Spec(format!("spec JSON: {e}")))?;
    let (spec, interval) = match parsed {
        JsonSpec::Step { values, breakpoints } => {
            let spec = IntensitySpec::step(values, breakpoints).map_err(CliError::from)?;
            let interval = spec.natural_interval();
            (SpecKind::ClosedForm(spec), interval)
        }
        JsonSpec::StepRegular { values, interval } => {
            let iv = Interval::new(interval[0], interval[1]).map_err(CliError::from)?;
            (
                SpecKind::ClosedForm(
                    IntensitySpec::step_regular(values, iv).map_err(CliError::from)?,
                ),
                Some(iv),
            )
        }
        JsonSpec::Linear { alpha, beta } => (
            SpecKind::ClosedForm(IntensitySpec::linear(alpha, beta).map_err(CliError::from)?),
            None,
        ),
        JsonSpec::Loglinear { alpha, beta } => (
            SpecKind::ClosedForm(IntensitySpec::log_linear(alpha, beta).map_err(CliError::from)?),
            None,
        ),
        JsonSpec::Illustration { growth, frequency } => {
            let ill = Illustration::new(growth, frequency);
            let interval = ill.interval();
            (SpecKind::Illustration(ill), Some(interval))
        }
    };
    Ok(LoadedSpec { spec, interval })
}

pub fn parse_csv(text: &str) -> Result<LoadedSpec, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut breakpoints = Vec::new();
    let mut values = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 1;
        let record =
            record.map_err(|e| CliError::Spec(format!("spec CSV line {line}: {e}")))?;
        if record.is_empty() || record.iter().all(|f| f.is_empty()) {
            continue;
        }
        // Skip a leading header row.
        if idx == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let t: f64 = record
            .get(0)
            .ok_or_else(|| CliError::Spec(format!("spec CSV line {line}: missing t_break")))?
            .parse()
            .map_err(|e| CliError::Spec(format!("spec CSV line {line}, field t_break: {e}")))?;
        breakpoints.push(t);
        match record.get(1) {
            Some(field) if !field.is_empty() => {
                let v: f64 = field.parse().map_err(|e| {
                    CliError::Spec(format!("spec CSV line {line}, field value: {e}"))
                })?;
                values.push(v);
            }
            _ => {} // closing breakpoint row
        }
    }
    if breakpoints.len() != values.len() + 1 {
        return Err(CliError::Spec(format!(
            "spec CSV: {} breakpoints need {} values, found {}",
            breakpoints.len(),
            breakpoints.len().saturating_sub(1),
            values.len()
        )));
    }
    let spec = IntensitySpec::step(values, breakpoints).map_err(CliError::from)?;
    let interval = spec.natural_interval();
    Ok(LoadedSpec { spec: SpecKind::ClosedForm(spec), interval })
}
