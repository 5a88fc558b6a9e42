//! Spatio-temporal input signals and monitoring results.

use std::fmt;

use thiserror::Error;

use crate::domain::DomainKind;
use crate::time::TimeGrid;

/// Declared type of a signal variable or edge label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarType {
    Int,
    Real,
}

impl VarType {
    pub fn keyword(self) -> &'static str {
        match self {
            VarType::Int => "int",
            VarType::Real => "real",
        }
    }

    pub fn admits(self, x: f64) -> bool {
        match self {
            VarType::Int => x.is_finite() && x.fract() == 0.0,
            VarType::Real => !x.is_nan(),
        }
    }
}

impl fmt::Display for VarType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpec {
    pub name: String,
    pub ty: VarType,
}

impl VarSpec {
    pub fn new(name: impl Into<String>, ty: VarType) -> Self {
        VarSpec {
            name: name.into(),
            ty,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("a signal needs at least one location")]
    NoLocations,
    #[error("location {location} has {found} rows, expected {expected}")]
    RowCount {
        location: usize,
        expected: usize,
        found: usize,
    },
    #[error("location {location}, row {row} has {found} values, expected {expected}")]
    RowWidth {
        location: usize,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("location {location}, row {row}: variable `{variable}` is {ty} but holds {value}")]
    BadValue {
        location: usize,
        row: usize,
        variable: String,
        ty: VarType,
        value: f64,
    },
    #[error("duplicate variable `{0}` in signal schema")]
    DuplicateVariable(String),
}

/// Per-location, piecewise-constant record signals on a shared time grid.
///
/// Values are stored densely so every `(location, time, variable)` lookup is
/// total.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatioTemporalSignal {
    grid: TimeGrid,
    schema: Vec<VarSpec>,
    locations: usize,
    data: Vec<f64>,
}

impl SpatioTemporalSignal {
    /// `values[location][time][variable]`.
    pub fn new(
        grid: TimeGrid,
        schema: Vec<VarSpec>,
        values: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self, SignalError> {
        if values.is_empty() {
            return Err(SignalError::NoLocations);
        }
        for (i, spec) in schema.iter().enumerate() {
            if schema[..i].iter().any(|s| s.name == spec.name) {
                return Err(SignalError::DuplicateVariable(spec.name.clone()));
            }
        }
        let width = schema.len();
        let mut data = Vec::with_capacity(values.len() * grid.len() * width);
        for (location, rows) in values.iter().enumerate() {
            if rows.len() != grid.len() {
                return Err(SignalError::RowCount {
                    location,
                    expected: grid.len(),
                    found: rows.len(),
                });
            }
            for (row, record) in rows.iter().enumerate() {
                if record.len() != width {
                    return Err(SignalError::RowWidth {
                        location,
                        row,
                        expected: width,
                        found: record.len(),
                    });
                }
                for (spec, &value) in schema.iter().zip(record) {
                    if !spec.ty.admits(value) {
                        return Err(SignalError::BadValue {
                            location,
                            row,
                            variable: spec.name.clone(),
                            ty: spec.ty,
                            value,
                        });
                    }
                }
                data.extend_from_slice(record);
            }
        }
        Ok(SpatioTemporalSignal {
            grid,
            schema,
            locations: values.len(),
            data,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn schema(&self) -> &[VarSpec] {
        &self.schema
    }

    pub fn locations(&self) -> usize {
        self.locations
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|s| s.name == name)
    }

    pub fn row(&self, location: usize, time: usize) -> &[f64] {
        let width = self.schema.len();
        let start = (location * self.grid.len() + time) * width;
        &self.data[start..start + width]
    }

    pub fn value(&self, location: usize, time: usize, variable: usize) -> f64 {
        self.row(location, time)[variable]
    }

    /// Nested copy, `[location][time][variable]`.
    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.locations)
            .map(|l| (0..self.grid.len()).map(|t| self.row(l, t).to_vec()).collect())
            .collect()
    }

    /// Same values on a different grid of equal length.
    pub fn with_grid(&self, grid: TimeGrid) -> Option<Self> {
        (grid.len() == self.grid.len()).then(|| SpatioTemporalSignal {
            grid,
            ..self.clone()
        })
    }
}

/// Per-location verdict sequences, indexed `[location][time]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdicts {
    Boolean(Vec<Vec<bool>>),
    MinMax(Vec<Vec<f64>>),
}

impl Verdicts {
    pub fn domain(&self) -> DomainKind {
        match self {
            Verdicts::Boolean(_) => DomainKind::Boolean,
            Verdicts::MinMax(_) => DomainKind::MinMax,
        }
    }

    pub fn locations(&self) -> usize {
        match self {
            Verdicts::Boolean(v) => v.len(),
            Verdicts::MinMax(v) => v.len(),
        }
    }

    fn row_len(&self, location: usize) -> usize {
        match self {
            Verdicts::Boolean(v) => v[location].len(),
            Verdicts::MinMax(v) => v[location].len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResultError {
    #[error("a monitoring result needs at least one location")]
    NoLocations,
    #[error("location {location} has {found} verdicts, expected {expected}")]
    Length {
        location: usize,
        expected: usize,
        found: usize,
    },
}

/// The verdict signal of every location on the input grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorResult {
    grid: TimeGrid,
    verdicts: Verdicts,
}

impl MonitorResult {
    pub fn new(grid: TimeGrid, verdicts: Verdicts) -> Result<Self, ResultError> {
        if verdicts.locations() == 0 {
            return Err(ResultError::NoLocations);
        }
        for location in 0..verdicts.locations() {
            let found = verdicts.row_len(location);
            if found != grid.len() {
                return Err(ResultError::Length {
                    location,
                    expected: grid.len(),
                    found,
                });
            }
        }
        Ok(MonitorResult { grid, verdicts })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn verdicts(&self) -> &Verdicts {
        &self.verdicts
    }

    pub fn domain(&self) -> DomainKind {
        self.verdicts.domain()
    }

    pub fn locations(&self) -> usize {
        self.verdicts.locations()
    }

    pub fn as_boolean(&self) -> Option<&[Vec<bool>]> {
        match &self.verdicts {
            Verdicts::Boolean(v) => Some(v),
            Verdicts::MinMax(_) => None,
        }
    }

    pub fn as_minmax(&self) -> Option<&[Vec<f64>]> {
        match &self.verdicts {
            Verdicts::MinMax(v) => Some(v),
            Verdicts::Boolean(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> TimeGrid {
        TimeGrid::new((0..n).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn dense_lookup() {
        let schema = vec![VarSpec::new("a", VarType::Int), VarSpec::new("b", VarType::Real)];
        let values = vec![
            vec![vec![1.0, 0.5], vec![2.0, 0.25]],
            vec![vec![3.0, 1.5], vec![4.0, -0.5]],
        ];
        let s = SpatioTemporalSignal::new(grid(2), schema, values.clone()).unwrap();
        assert_eq!(s.value(1, 0, 1), 1.5);
        assert_eq!(s.row(0, 1), &[2.0, 0.25]);
        assert_eq!(s.variable_index("b"), Some(1));
        assert_eq!(s.to_nested(), values);
    }

    #[test]
    fn rejects_ragged_and_ill_typed() {
        let schema = vec![VarSpec::new("a", VarType::Int)];
        assert!(matches!(
            SpatioTemporalSignal::new(grid(2), schema.clone(), vec![vec![vec![1.0]]]),
            Err(SignalError::RowCount { .. })
        ));
        assert!(matches!(
            SpatioTemporalSignal::new(grid(1), schema.clone(), vec![vec![vec![1.0, 2.0]]]),
            Err(SignalError::RowWidth { .. })
        ));
        assert!(matches!(
            SpatioTemporalSignal::new(grid(1), schema.clone(), vec![vec![vec![1.5]]]),
            Err(SignalError::BadValue { .. })
        ));
        assert_eq!(
            SpatioTemporalSignal::new(grid(1), schema, vec![]),
            Err(SignalError::NoLocations)
        );
    }

    #[test]
    fn empty_result_is_rejected_at_construction() {
        assert_eq!(
            MonitorResult::new(grid(2), Verdicts::Boolean(vec![])),
            Err(ResultError::NoLocations)
        );
        assert!(matches!(
            MonitorResult::new(grid(2), Verdicts::MinMax(vec![vec![1.0]])),
            Err(ResultError::Length { .. })
        ));
        let ok = MonitorResult::new(grid(2), Verdicts::Boolean(vec![vec![true, false]])).unwrap();
        assert_eq!(ok.domain(), DomainKind::Boolean);
    }
}
