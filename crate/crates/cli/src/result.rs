//! Monitoring results as JSON or CSV.
//!
//! CSV has one row per time point and one column per location, after the
//! timestamp column: `t,loc0,loc1,...`. Verdicts are `true`/`false` or
//! numbers, with `inf` and `-inf` for the infinite robustness values. JSON
//! stores the same table per location and uses the same strings for
//! infinities.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use moonlight_core::domain::DomainKind;
use moonlight_core::signal::ResultError;
use moonlight_core::{MonitorResult, TimeGrid, Verdicts};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    Json,
    Csv,
}

impl ResultFormat {
    /// `.csv` selects CSV; anything else is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ResultFormat::Csv,
            _ => ResultFormat::Json,
        }
    }
}

impl FromStr for ResultFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(ResultFormat::Json),
            "csv" => Ok(ResultFormat::Csv),
            other => Err(format!("unknown result format `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ResultIoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("malformed result: {0}")]
    Malformed(String),
    #[error(transparent)]
    Invalid(#[from] ResultError),
}

#[derive(Serialize, Deserialize)]
struct ResultDoc {
    domain: String,
    times: Vec<f64>,
    values: Vec<Vec<Value>>,
}

fn render(x: f64) -> String {
    // shortest decimal that parses back to the same value
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn number_cell(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(render(x))
    }
}

fn parse_number(cell: &Value) -> Result<f64, ResultIoError> {
    match cell {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| ResultIoError::Malformed(format!("number {n} out of range"))),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::String(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        other => Err(ResultIoError::Malformed(format!("expected a number, found {other}"))),
    }
}

pub fn result_to_string(r: &MonitorResult, format: ResultFormat) -> Result<String, ResultIoError> {
    match format {
        ResultFormat::Json => {
            let values = match r.verdicts() {
                Verdicts::Boolean(v) => v.iter().map(|row| row.iter().map(|&b| Value::from(b)).collect()).collect(),
                Verdicts::MinMax(v) => v.iter().map(|row| row.iter().map(|&x| number_cell(x)).collect()).collect(),
            };
            let doc = ResultDoc {
                domain: r.domain().keyword().to_string(),
                times: r.grid().points().to_vec(),
                values,
            };
            Ok(serde_json::to_string(&doc)?)
        }
        ResultFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["t".to_string()];
            header.extend((0..r.locations()).map(|l| format!("loc{l}")));
            w.write_record(&header)?;
            for (t, &time) in r.grid().points().iter().enumerate() {
                let mut record = vec![render(time)];
                match r.verdicts() {
                    Verdicts::Boolean(v) => record.extend(v.iter().map(|row| row[t].to_string())),
                    Verdicts::MinMax(v) => record.extend(v.iter().map(|row| render(row[t]))),
                }
                w.write_record(&record)?;
            }
            let bytes = w.into_inner().map_err(|e| ResultIoError::Malformed(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn result_from_str(text: &str, format: ResultFormat) -> Result<MonitorResult, ResultIoError> {
    match format {
        ResultFormat::Json => {
            let doc: ResultDoc = serde_json::from_str(text)?;
            let grid = TimeGrid::new(doc.times).map_err(|e| ResultIoError::Malformed(e.to_string()))?;
            let domain = doc.domain.parse::<DomainKind>().map_err(ResultIoError::Malformed)?;
            let verdicts = match domain {
                DomainKind::Boolean => Verdicts::Boolean(
                    doc.values
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|c| {
                                    c.as_bool()
                                        .ok_or_else(|| ResultIoError::Malformed(format!("expected a boolean, found {c}")))
                                })
                                .collect()
                        })
                        .collect::<Result<_, _>>()?,
                ),
                DomainKind::MinMax => Verdicts::MinMax(
                    doc.values
                        .iter()
                        .map(|row| row.iter().map(parse_number).collect())
                        .collect::<Result<_, _>>()?,
                ),
            };
            Ok(MonitorResult::new(grid, verdicts)?)
        }
        ResultFormat::Csv => {
            let mut reader = csv::Reader::from_reader(text.as_bytes());
            let width = reader.headers()?.len();
            if width < 2 {
                return Err(ResultError::NoLocations.into());
            }
            let mut times = Vec::new();
            let mut cells: Vec<Vec<String>> = vec![Vec::new(); width - 1];
            for record in reader.records() {
                let record = record?;
                let time = record[0]
                    .parse::<f64>()
                    .map_err(|e| ResultIoError::Malformed(format!("timestamp `{}`: {e}", &record[0])))?;
                times.push(time);
                for (l, cell) in record.iter().skip(1).enumerate() {
                    cells[l].push(cell.to_string());
                }
            }
            let grid = TimeGrid::new(times).map_err(|e| ResultIoError::Malformed(e.to_string()))?;
            let boolean = cells.iter().flatten().all(|c| c == "true" || c == "false");
            let verdicts = if boolean {
                Verdicts::Boolean(cells.iter().map(|row| row.iter().map(|c| c == "true").collect()).collect())
            } else {
                Verdicts::MinMax(
                    cells
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|c| {
                                    c.parse::<f64>()
                                        .map_err(|e| ResultIoError::Malformed(format!("cell `{c}`: {e}")))
                                })
                                .collect()
                        })
                        .collect::<Result<_, _>>()?,
                )
            };
            Ok(MonitorResult::new(grid, verdicts)?)
        }
    }
}

pub fn write_result(r: &MonitorResult, path: impl AsRef<Path>, format: ResultFormat) -> Result<(), ResultIoError> {
    let path = path.as_ref();
    fs::write(path, result_to_string(r, format)?).map_err(|source| ResultIoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a result written by [`write_result`], choosing the format by
/// extension.
pub fn load_result(path: impl AsRef<Path>) -> Result<MonitorResult, ResultIoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ResultIoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    result_from_str(&text, ResultFormat::from_path(path))
}
