//! Weighted directed graphs over a fixed location set, and their evolution
//! in time.

use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("edge {from}->{target} references a location outside 0..{size}")]
    EndpointOutOfRange {
        from: usize,
        target: usize,
        size: usize,
    },
    #[error("self-loop on location {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {from}->{target}")]
    DuplicateEdge { from: usize, target: usize },
    #[error("edge {from}->{target} has {found} labels, expected {expected}")]
    LabelCount {
        from: usize,
        target: usize,
        expected: usize,
        found: usize,
    },
    #[error("edge {from}->{target}: label `{label}` is not a finite number ({value})")]
    LabelValue {
        from: usize,
        target: usize,
        label: String,
        value: f64,
    },
    #[error("a dynamic model needs at least one frame")]
    NoFrames,
    #[error("frame {index} at t={value} does not follow the previous frame at t={previous}")]
    FrameOrder {
        index: usize,
        previous: f64,
        value: f64,
    },
    #[error("frame {index} has {found} locations, expected {expected}")]
    FrameSize {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("frame {index} declares labels {found:?}, expected {expected:?}")]
    FrameLabels {
        index: usize,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("query at t={t} precedes the first frame at t={first}")]
    BeforeFirstFrame { t: f64, first: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    /// One value per label name of the owning model, in order.
    pub labels: Vec<f64>,
}

/// A directed graph with labelled edges: no self-loops and at most one edge
/// per ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialModel {
    size: usize,
    label_names: Arc<[String]>,
    edges: Vec<Edge>,
}

impl SpatialModel {
    pub fn new(
        size: usize,
        label_names: impl Into<Arc<[String]>>,
        edges: Vec<Edge>,
    ) -> Result<Self, ModelError> {
        let label_names = label_names.into();
        let mut seen = rustc_hash::FxHashSet::default();
        for edge in &edges {
            let (source, target) = (edge.source, edge.target);
            if source >= size || target >= size {
                return Err(ModelError::EndpointOutOfRange {
                    from: source,
                    target,
                    size,
                });
            }
            if source == target {
                return Err(ModelError::SelfLoop(source));
            }
            if !seen.insert((source, target)) {
                return Err(ModelError::DuplicateEdge { from: source, target });
            }
            if edge.labels.len() != label_names.len() {
                return Err(ModelError::LabelCount {
                    from: source,
                    target,
                    expected: label_names.len(),
                    found: edge.labels.len(),
                });
            }
            if let Some((label, &value)) = label_names
                .iter()
                .zip(&edge.labels)
                .find(|(_, v)| !v.is_finite())
            {
                return Err(ModelError::LabelValue {
                    from: source,
                    target,
                    label: label.clone(),
                    value,
                });
            }
        }
        Ok(SpatialModel {
            size,
            label_names,
            edges,
        })
    }

    /// Builds a model from undirected pairs, adding both directions.
    pub fn undirected(
        size: usize,
        label_names: impl Into<Arc<[String]>>,
        pairs: Vec<(usize, usize, Vec<f64>)>,
    ) -> Result<Self, ModelError> {
        let edges = pairs
            .into_iter()
            .flat_map(|(a, b, labels)| {
                [
                    Edge {
                        source: a,
                        target: b,
                        labels: labels.clone(),
                    },
                    Edge {
                        source: b,
                        target: a,
                        labels,
                    },
                ]
            })
            .collect();
        SpatialModel::new(size, label_names, edges)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.label_names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// A piecewise-constant sequence of graphs: frame `i` is in force from its
/// timestamp until the next frame's.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicSpatialModel {
    frames: Vec<(f64, SpatialModel)>,
}

impl DynamicSpatialModel {
    pub fn new(frames: Vec<(f64, SpatialModel)>) -> Result<Self, ModelError> {
        let Some((_, first)) = frames.first() else {
            return Err(ModelError::NoFrames);
        };
        for (index, (t, model)) in frames.iter().enumerate() {
            if !t.is_finite() {
                return Err(ModelError::FrameOrder {
                    index,
                    previous: f64::NEG_INFINITY,
                    value: *t,
                });
            }
            if index > 0 && *t <= frames[index - 1].0 {
                return Err(ModelError::FrameOrder {
                    index,
                    previous: frames[index - 1].0,
                    value: *t,
                });
            }
            if model.size() != first.size() {
                return Err(ModelError::FrameSize {
                    index,
                    expected: first.size(),
                    found: model.size(),
                });
            }
            if model.label_names() != first.label_names() {
                return Err(ModelError::FrameLabels {
                    index,
                    expected: first.label_names().to_vec(),
                    found: model.label_names().to_vec(),
                });
            }
        }
        Ok(DynamicSpatialModel { frames })
    }

    /// A model whose single graph holds at every time.
    pub fn constant(model: SpatialModel) -> Self {
        DynamicSpatialModel {
            frames: vec![(f64::NEG_INFINITY, model)],
        }
    }

    pub fn frames(&self) -> &[(f64, SpatialModel)] {
        &self.frames
    }

    pub fn size(&self) -> usize {
        self.frames[0].1.size()
    }

    pub fn label_names(&self) -> &[String] {
        self.frames[0].1.label_names()
    }

    /// Index of the frame with the largest timestamp not after `t`.
    pub fn frame_index_at(&self, t: f64) -> Result<usize, ModelError> {
        let count = self.frames.partition_point(|(ts, _)| *ts <= t);
        if count == 0 {
            return Err(ModelError::BeforeFirstFrame {
                t,
                first: self.frames[0].0,
            });
        }
        Ok(count - 1)
    }

    pub fn graph_at(&self, t: f64) -> Result<&SpatialModel, ModelError> {
        self.frame_index_at(t).map(|i| &self.frames[i].1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> Arc<[String]> {
        vec!["hop".to_string()].into()
    }

    fn line(n: usize) -> SpatialModel {
        let edges = (1..n)
            .map(|i| Edge {
                source: i - 1,
                target: i,
                labels: vec![1.0],
            })
            .collect();
        SpatialModel::new(n, labels(), edges).unwrap()
    }

    #[test]
    fn model_invariants() {
        let e = |s, t| Edge {
            source: s,
            target: t,
            labels: vec![1.0],
        };
        assert_eq!(
            SpatialModel::new(2, labels(), vec![e(0, 0)]),
            Err(ModelError::SelfLoop(0))
        );
        assert!(matches!(
            SpatialModel::new(2, labels(), vec![e(0, 1), e(0, 1)]),
            Err(ModelError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            SpatialModel::new(2, labels(), vec![e(0, 2)]),
            Err(ModelError::EndpointOutOfRange { .. })
        ));
        let undirected = SpatialModel::undirected(2, labels(), vec![(0, 1, vec![1.0])]).unwrap();
        assert_eq!(undirected.edges().len(), 2);
    }

    fn linear_scan(model: &DynamicSpatialModel, t: f64) -> Option<usize> {
        model.frames().iter().rposition(|(ts, _)| *ts <= t)
    }

    #[test]
    fn graph_at_picks_latest_frame() {
        let single = DynamicSpatialModel::new(vec![(0.0, line(2))]).unwrap();
        assert_eq!(single.graph_at(7.3).unwrap(), &line(2));

        let two = DynamicSpatialModel::new(vec![(0.0, line(3)), (5.0, {
            SpatialModel::new(3, labels(), vec![]).unwrap()
        })])
        .unwrap();
        assert_eq!(two.frame_index_at(5.0).unwrap(), 1);
        assert_eq!(two.frame_index_at(4.99).unwrap(), linear_scan(&two, 4.99).unwrap());
        assert_eq!(two.frame_index_at(4.99).unwrap(), 0);
        for t in [0.0, 0.5, 2.0, 4.999, 5.0, 5.1, 1e9] {
            assert_eq!(two.frame_index_at(t).ok(), linear_scan(&two, t));
        }
        assert!(matches!(
            two.graph_at(-1.0),
            Err(ModelError::BeforeFirstFrame { .. })
        ));
        // stable between consecutive frame timestamps
        assert!(std::ptr::eq(two.graph_at(1.0).unwrap(), two.graph_at(4.0).unwrap()));
    }

    #[test]
    fn frames_must_agree() {
        assert!(matches!(
            DynamicSpatialModel::new(vec![(1.0, line(2)), (1.0, line(2))]),
            Err(ModelError::FrameOrder { .. })
        ));
        assert!(matches!(
            DynamicSpatialModel::new(vec![(0.0, line(2)), (1.0, line(3))]),
            Err(ModelError::FrameSize { .. })
        ));
        assert_eq!(DynamicSpatialModel::new(vec![]), Err(ModelError::NoFrames));
    }
}
