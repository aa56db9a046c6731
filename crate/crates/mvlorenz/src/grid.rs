//! Evaluation grids over the unit hypercube.

use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 101;

/// Per-dimension knot lists in [0, 1], strictly increasing from 0 to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    knots: Vec<Vec<f64>>,
}

impl GridSpec {
    /// Equally spaced knots, `points` per dimension, endpoints included.
    pub fn uniform(dim: usize, points: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("need at least one dimension".into()));
        }
        if points < 2 {
            return Err(Error::InvalidGrid(format!("need >= 2 knots per axis, got {points}")));
        }
        let axis: Vec<f64> = (0..points)
            .map(|i| {
                if i + 1 == points {
                    1.0
                } else {
                    i as f64 / (points - 1) as f64
                }
            })
            .collect();
        Ok(GridSpec { knots: vec![axis; dim] })
    }

    pub fn from_knots(knots: Vec<Vec<f64>>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidGrid("need at least one dimension".into()));
        }
        for axis in &knots {
            if axis.len() < 2 {
                return Err(Error::InvalidGrid("each axis needs >= 2 knots".into()));
            }
            if axis[0] != 0.0 || *axis.last().unwrap() != 1.0 {
                return Err(Error::InvalidGrid("knots must start at 0 and end at 1".into()));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGrid("knots must be strictly increasing".into()));
            }
        }
        Ok(GridSpec { knots })
    }

    pub fn dim(&self) -> usize {
        self.knots.len()
    }

    pub fn axis(&self, i: usize) -> &[f64] {
        &self.knots[i]
    }

    pub fn axis_len(&self, i: usize) -> usize {
        self.knots[i].len()
    }

    /// Total number of grid points (product across axes).
    pub fn len(&self) -> usize {
        self.knots.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multi-index of the flat position, last axis fastest.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dim()];
        for ax in (0..self.dim()).rev() {
            let len = self.axis_len(ax);
            idx[ax] = flat % len;
            flat /= len;
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        let mut flat = 0usize;
        for ax in 0..self.dim() {
            flat = flat * self.axis_len(ax) + idx[ax];
        }
        flat
    }

    /// Coordinates of the flat position in lexicographic grid order.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.unflatten(flat)
            .iter()
            .enumerate()
            .map(|(ax, &k)| self.knots[ax][k])
            .collect()
    }
}
