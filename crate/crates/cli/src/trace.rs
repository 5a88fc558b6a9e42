//! The trace file: one JSON document holding the time grid, the per-location
//! signal values and, optionally, the evolving graph.
//!
//! ```json
//! {
//!   "times": [0, 1, 2],
//!   "locations": ["a", "b"],
//!   "signals": {
//!     "schema": [{"name": "x", "type": "real"}],
//!     "values": [[[0.5], [1.0], [2.0]], [[1.5], [0.0], [3.0]]]
//!   },
//!   "frames": [
//!     {"t": 0, "undirected": true, "edges": [[0, 1, {"hop": 1, "dist": 2.5}]]}
//!   ]
//! }
//! ```
//!
//! `values[location][time][variable]`. Edges of an `undirected` frame stand
//! for both directions. Every edge carries the same labels; `edge_labels`
//! fixes their order and is required only when no frame has an edge.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use moonlight_core::space::{DynamicSpatialModel, Edge, SpatialModel};
use moonlight_core::{SpatioTemporalSignal, TimeGrid, VarSpec, VarType};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    pub times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locations: Option<Vec<String>>,
    pub signals: SignalSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<FrameSection>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalSection {
    pub schema: Vec<VarDecl>,
    pub values: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarDecl {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

pub type EdgeEntry = (usize, usize, BTreeMap<String, f64>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSection {
    pub t: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub undirected: bool,
    pub edges: Vec<EdgeEntry>,
}

/// A loaded trace: the graph is absent for purely temporal traces.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub location_names: Option<Vec<String>>,
    pub model: Option<DynamicSpatialModel>,
    pub signal: SpatioTemporalSignal,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed trace document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation at `{field}`{}: {message}", location_suffix(*.location))]
    Schema {
        field: String,
        location: Option<usize>,
        message: String,
    },
    #[error("times must be finite and strictly increasing: times[{index}] = {value} follows {previous}")]
    NonIncreasingTimes { index: usize, previous: f64, value: f64 },
    #[error("ragged matrix at `{field}`{}: expected {expected} entries, found {found}", location_suffix(*.location))]
    Ragged {
        field: String,
        location: Option<usize>,
        expected: usize,
        found: usize,
    },
    #[error("invalid spatial model: {0}")]
    Model(#[from] moonlight_core::space::ModelError),
}

fn location_suffix(location: Option<usize>) -> String {
    location.map(|l| format!(" (location {l})")).unwrap_or_default()
}

impl TraceError {
    /// A stable identifier for each class of failure.
    pub fn code(&self) -> &'static str {
        match self {
            TraceError::Io { .. } => "TRACE_IO",
            TraceError::Json(_) => "TRACE_JSON",
            TraceError::Schema { .. } => "TRACE_SCHEMA",
            TraceError::NonIncreasingTimes { .. } => "TRACE_TIMES",
            TraceError::Ragged { .. } => "TRACE_RAGGED",
            TraceError::Model(_) => "TRACE_MODEL",
        }
    }
}

fn schema_error(field: impl Into<String>, location: Option<usize>, message: impl Into<String>) -> TraceError {
    TraceError::Schema {
        field: field.into(),
        location,
        message: message.into(),
    }
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Trace, TraceError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| TraceError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_trace(&text)
}

pub fn parse_trace(text: &str) -> Result<Trace, TraceError> {
    let file: TraceFile = serde_json::from_str(text)?;
    file.into_trace()
}

pub fn write_trace(file: &TraceFile, path: impl AsRef<Path>) -> Result<(), TraceError> {
    let path = path.as_ref();
    let text = serde_json::to_string(file)?;
    fs::write(path, text).map_err(|source| TraceError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_type(field: String, ty: &str) -> Result<VarType, TraceError> {
    match ty {
        "int" => Ok(VarType::Int),
        "real" => Ok(VarType::Real),
        other => Err(schema_error(field, None, format!("unknown type `{other}`, expected `int` or `real`"))),
    }
}

impl TraceFile {
    pub fn into_trace(self) -> Result<Trace, TraceError> {
        for (index, pair) in self.times.windows(2).enumerate() {
            if pair[0].partial_cmp(&pair[1]) != Some(std::cmp::Ordering::Less) || !pair[1].is_finite() {
                return Err(TraceError::NonIncreasingTimes {
                    index: index + 1,
                    previous: pair[0],
                    value: pair[1],
                });
            }
        }
        match self.times.first() {
            None => return Err(schema_error("times", None, "at least one time point is required")),
            Some(t) if !t.is_finite() => {
                return Err(TraceError::NonIncreasingTimes {
                    index: 0,
                    previous: f64::NEG_INFINITY,
                    value: *t,
                })
            }
            _ => {}
        }
        let grid = TimeGrid::new(self.times.clone()).map_err(|e| schema_error("times", None, e.to_string()))?;

        let mut schema = Vec::with_capacity(self.signals.schema.len());
        for (i, decl) in self.signals.schema.iter().enumerate() {
            let ty = parse_type(format!("signals.schema[{i}].type"), &decl.ty)?;
            if schema.iter().any(|s: &VarSpec| s.name == decl.name) {
                return Err(schema_error(
                    format!("signals.schema[{i}].name"),
                    None,
                    format!("duplicate variable `{}`", decl.name),
                ));
            }
            schema.push(VarSpec::new(decl.name.clone(), ty));
        }

        let values = &self.signals.values;
        if values.is_empty() {
            return Err(schema_error("signals.values", None, "at least one location is required"));
        }
        for (l, rows) in values.iter().enumerate() {
            if rows.len() != self.times.len() {
                return Err(TraceError::Ragged {
                    field: format!("signals.values[{l}]"),
                    location: Some(l),
                    expected: self.times.len(),
                    found: rows.len(),
                });
            }
            for (t, row) in rows.iter().enumerate() {
                if row.len() != schema.len() {
                    return Err(TraceError::Ragged {
                        field: format!("signals.values[{l}][{t}]"),
                        location: Some(l),
                        expected: schema.len(),
                        found: row.len(),
                    });
                }
                for (v, (&x, spec)) in row.iter().zip(&schema).enumerate() {
                    if !spec.ty.admits(x) {
                        return Err(schema_error(
                            format!("signals.values[{l}][{t}][{v}]"),
                            Some(l),
                            format!("variable `{}` is {} but holds {x}", spec.name, spec.ty),
                        ));
                    }
                }
            }
        }
        if let Some(names) = &self.locations {
            if names.len() != values.len() {
                return Err(TraceError::Ragged {
                    field: "locations".into(),
                    location: None,
                    expected: values.len(),
                    found: names.len(),
                });
            }
        }
        let signal = SpatioTemporalSignal::new(grid, schema, self.signals.values)
            .map_err(|e| schema_error("signals", None, e.to_string()))?;
        let model = match self.frames {
            None => None,
            Some(frames) => Some(build_model(&frames, self.edge_labels, signal.locations(), self.times[0])?),
        };
        Ok(Trace {
            location_names: self.locations,
            model,
            signal,
        })
    }
}

fn build_model(
    frames: &[FrameSection],
    declared: Option<Vec<String>>,
    size: usize,
    first_time: f64,
) -> Result<DynamicSpatialModel, TraceError> {
    let labels: Vec<String> = match declared {
        Some(labels) => labels,
        None => frames
            .iter()
            .flat_map(|f| f.edges.first())
            .map(|(_, _, labels)| labels.keys().cloned().collect())
            .next()
            .unwrap_or_default(),
    };
    match frames.first() {
        None => return Err(schema_error("frames", None, "an empty frame list; omit `frames` instead")),
        Some(f) if f.t > first_time => {
            return Err(schema_error(
                "frames[0].t",
                None,
                format!("first frame at t={} starts after the first time point {first_time}", f.t),
            ))
        }
        _ => {}
    }
    let mut out = Vec::with_capacity(frames.len());
    for (k, frame) in frames.iter().enumerate() {
        let mut edges = Vec::with_capacity(frame.edges.len() * if frame.undirected { 2 } else { 1 });
        for (e, (from, to, map)) in frame.edges.iter().enumerate() {
            let field = || format!("frames[{k}].edges[{e}]");
            if map.len() != labels.len() || !labels.iter().all(|l| map.contains_key(l)) {
                return Err(schema_error(
                    field(),
                    Some(*from),
                    format!(
                        "labels {:?} differ from {:?}",
                        map.keys().collect::<Vec<_>>(),
                        labels
                    ),
                ));
            }
            let values: Vec<f64> = labels.iter().map(|l| map[l]).collect();
            if *from >= size || *to >= size {
                return Err(schema_error(
                    field(),
                    Some(*from),
                    format!("endpoint outside 0..{size}"),
                ));
            }
            if frame.undirected {
                edges.push(Edge {
                    source: *to,
                    target: *from,
                    labels: values.clone(),
                });
            }
            edges.push(Edge {
                source: *from,
                target: *to,
                labels: values,
            });
        }
        out.push((frame.t, SpatialModel::new(size, labels.clone(), edges)?));
    }
    Ok(DynamicSpatialModel::new(out)?)
}

impl Trace {
    /// The canonical document for this trace, with every edge listed
    /// directed.
    pub fn to_file(&self) -> TraceFile {
        let grid = self.signal.grid().points();
        let frames = self.model.as_ref().map(|m| {
            m.frames()
                .iter()
                .map(|(t, g)| FrameSection {
                    t: if t.is_finite() { *t } else { grid[0] },
                    undirected: false,
                    edges: g
                        .edges()
                        .iter()
                        .map(|e| {
                            let labels = g.label_names().iter().cloned().zip(e.labels.iter().copied()).collect();
                            (e.source, e.target, labels)
                        })
                        .collect(),
                })
                .collect()
        });
        TraceFile {
            times: grid.to_vec(),
            locations: self.location_names.clone(),
            signals: SignalSection {
                schema: self
                    .signal
                    .schema()
                    .iter()
                    .map(|s| VarDecl {
                        name: s.name.clone(),
                        ty: s.ty.keyword().to_string(),
                    })
                    .collect(),
                values: self.signal.to_nested(),
            },
            edge_labels: self.model.as_ref().map(|m| m.label_names().to_vec()),
            frames,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "times": [0, 1, 2],
        "signals": {"schema": [{"name": "x", "type": "real"}], "values": [[[1], [2], [3]]]}
    }"#;

    #[test]
    fn minimal_trace() {
        let trace = parse_trace(MINIMAL).unwrap();
        assert_eq!(trace.signal.locations(), 1);
        assert_eq!(trace.signal.grid().len(), 3);
        assert_eq!(trace.signal.value(0, 2, 0), 3.0);
        assert!(trace.model.is_none());
    }

    #[test]
    fn repeated_time_is_rejected() {
        let text = MINIMAL.replace("[0, 1, 2]", "[0, 0]");
        let err = parse_trace(&text).unwrap_err();
        assert_eq!(err.code(), "TRACE_TIMES");
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let text = MINIMAL.replace("[[1], [2], [3]]", "[[1], [2, 4], [3]]");
        let err = parse_trace(&text).unwrap_err();
        assert_eq!(err.code(), "TRACE_RAGGED");
        assert!(err.to_string().contains("signals.values[0][1]"), "{err}");
        let text = MINIMAL.replace("[[1], [2], [3]]", "[[1], [2]]");
        assert_eq!(parse_trace(&text).unwrap_err().code(), "TRACE_RAGGED");
    }

    #[test]
    fn schema_violations_name_the_field() {
        let text = MINIMAL.replace("\"real\"", "\"float\"");
        let err = parse_trace(&text).unwrap_err();
        assert_eq!(err.code(), "TRACE_SCHEMA");
        assert!(err.to_string().contains("signals.schema[0].type"));

        let text = MINIMAL.replace("\"real\"", "\"int\"").replace("[2]", "[2.5]");
        let err = parse_trace(&text).unwrap_err();
        assert_eq!(err.code(), "TRACE_SCHEMA");
        assert!(err.to_string().contains("signals.values[0][1][0]"), "{err}");
        assert!(err.to_string().contains("location 0"), "{err}");

        assert_eq!(parse_trace("{\"times\": [0]}").unwrap_err().code(), "TRACE_JSON");
    }

    #[test]
    fn undirected_edges_are_expanded() {
        let text = MINIMAL.replace(
            "\"signals\"",
            r#""frames": [{"t": 0, "undirected": true, "edges": [[0, 1, {"hop": 1}]]}], "signals""#,
        );
        let text = text.replace("[[1], [2], [3]]", "[[1], [2], [3]], [[1], [2], [3]]");
        let trace = parse_trace(&text).unwrap();
        let model = trace.model.as_ref().unwrap();
        let edges = model.frames()[0].1.edges();
        assert_eq!(edges.len(), 2);
        let file = trace.to_file();
        assert_eq!(file.frames.as_ref().unwrap()[0].edges.len(), 2);
        assert_eq!(file.into_trace().unwrap(), trace);
    }

    #[test]
    fn edges_outside_the_graph_are_rejected() {
        let text = MINIMAL.replace(
            "\"signals\"",
            r#""frames": [{"t": 0, "edges": [[0, 3, {"hop": 1}]]}], "signals""#,
        );
        assert_eq!(parse_trace(&text).unwrap_err().code(), "TRACE_SCHEMA");
        let text = MINIMAL.replace(
            "\"signals\"",
            r#""frames": [{"t": 0, "edges": [[0, 0, {"hop": 1}]]}], "signals""#,
        );
        assert_eq!(parse_trace(&text).unwrap_err().code(), "TRACE_MODEL");
    }
}
