use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("time grid must contain at least one point")]
    Empty,
    #[error("time point {index} is {value}; times must be finite and non-negative")]
    InvalidPoint { index: usize, value: f64 },
    #[error("time point {index} ({value}) does not exceed its predecessor ({previous})")]
    NotIncreasing {
        index: usize,
        previous: f64,
        value: f64,
    },
}

/// A non-empty, strictly increasing sequence of non-negative timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self, GridError> {
        if points.is_empty() {
            return Err(GridError::Empty);
        }
        for (index, &value) in points.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(GridError::InvalidPoint { index, value });
            }
            if index > 0 && value <= points[index - 1] {
                return Err(GridError::NotIncreasing {
                    index,
                    previous: points[index - 1],
                    value,
                });
            }
        }
        Ok(TimeGrid { points })
    }

    /// Evenly spaced grid `start, start + 1/rate, ...`; each point is computed
    /// as `start + i / rate` so that decimal rates give the nearest double.
    pub fn uniform(start: f64, rate: f64, len: usize) -> Result<Self, GridError> {
        TimeGrid::new((0..len).map(|i| start + i as f64 / rate).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Index of the sample in force at `t` under step-wise interpretation.
    pub fn index_at(&self, t: f64) -> Option<usize> {
        if t < self.start() {
            return None;
        }
        Some(self.points.partition_point(|&p| p <= t) - 1)
    }

    /// Adds `offset` to every point.
    pub fn shifted(&self, offset: f64) -> Result<Self, GridError> {
        TimeGrid::new(self.points.iter().map(|p| p + offset).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(TimeGrid::new(vec![]), Err(GridError::Empty));
        assert!(matches!(
            TimeGrid::new(vec![0.0, 0.0]),
            Err(GridError::NotIncreasing { index: 1, .. })
        ));
        assert!(matches!(
            TimeGrid::new(vec![-1.0]),
            Err(GridError::InvalidPoint { index: 0, .. })
        ));
        assert!(TimeGrid::new(vec![0.0, 0.5, 2.0]).is_ok());
    }

    #[test]
    fn uniform_sampling_hits_decimal_endpoint() {
        let grid = TimeGrid::uniform(0.0, 100.0, 6400).unwrap();
        assert_eq!(grid.end(), 63.99);
    }

    #[test]
    fn step_wise_lookup() {
        let grid = TimeGrid::new(vec![0.0, 1.0, 2.5]).unwrap();
        assert_eq!(grid.index_at(-0.1), None);
        assert_eq!(grid.index_at(0.0), Some(0));
        assert_eq!(grid.index_at(0.99), Some(0));
        assert_eq!(grid.index_at(1.0), Some(1));
        assert_eq!(grid.index_at(100.0), Some(2));
    }
}
