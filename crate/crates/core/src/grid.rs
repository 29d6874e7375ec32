//! One-dimensional scan axes.

use crate::{Error, Result};

/// A strictly increasing, non-empty list of sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    points: Vec<f64>,
}

impl SweepGrid {
    /// `count` evenly spaced points from `start` to `stop` inclusive.
    pub fn linspace(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::InvalidGrid(format!("bounds must be finite, got {start}..{stop}")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("count must be at least 2, got {count}")));
        }
        if start >= stop {
            return Err(Error::InvalidGrid(format!("start {start} must be below stop {stop}")));
        }
        let span = stop - start;
        let last = (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| start + span * (i as f64 / last)).collect();
        points[count - 1] = stop;
        Self::from_points(points)
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite point {bad}")));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(format!("points not strictly increasing at {} -> {}", w[0], w[1])));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}
