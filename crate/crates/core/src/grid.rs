//! Uniform time grids.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("grid end time must be positive and finite, got {0}")]
    BadEnd(f64),
}

/// `n` equally spaced points on `[0, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t_max: T,
    n: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_max: T, n: usize) -> Result<Self, GridError> {
        if n < 2 {
            return Err(GridError::TooFewPoints(n));
        }
        if !(t_max > T::zero()) || !t_max.is_finite() {
            return Err(GridError::BadEnd(t_max.as_f64()));
        }
        Ok(TimeGrid { t_max, n })
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> T {
        self.t_max / T::lit((self.n - 1) as f64)
    }

    pub fn at(&self, i: usize) -> T {
        if i + 1 == self.n {
            self.t_max
        } else {
            self.step() * T::lit(i as f64)
        }
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(move |i| self.at(i))
    }

    /// At most `k` points spread evenly over the grid, endpoints included.
    pub fn sample(&self, k: usize) -> Vec<T> {
        if k >= self.n {
            return self.points().collect();
        }
        let k = k.max(2);
        let mut idx: Vec<usize> = (0..k).map(|j| j * (self.n - 1) / (k - 1)).collect();
        idx.dedup();
        idx.into_iter().map(|i| self.at(i)).collect()
    }
}

impl<T: Real> Default for TimeGrid<T> {
    /// 2001 points on `[0, 20]`.
    fn default() -> Self {
        TimeGrid {
            t_max: T::lit(20.0),
            n: 2001,
        }
    }
}
