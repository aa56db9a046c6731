//! Weighted, non-negative microdata tables.

use crate::error::{Error, Result};
use crate::numeric::{fnv1a64, ksum, KahanSum};

/// An n-by-d table of non-negative amounts with positive row weights.
///
/// Weights are replication mass: a row with weight w counts like w identical
/// unit-weight rows everywhere downstream. Immutable after construction, so
/// instances can be shared freely across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    values: Vec<f64>, // row-major n*d
    weights: Vec<f64>,
    var_names: Vec<String>,
    n: usize,
    d: usize,
}

impl Dataset {
    /// Validate and build a dataset from row vectors.
    ///
    /// Rejects negative or non-finite entries, non-positive weights, columns
    /// without a single positive entry, and tables with n <= d.
    pub fn from_rows(
        rows: &[Vec<f64>],
        weights: Option<Vec<f64>>,
        var_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyResult("no rows".into()));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::EmptyResult("rows have no columns".into()));
        }
        let n = rows.len();
        let mut values = Vec::with_capacity(n * d);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::WrongDimension { expected: d, got: row.len() });
            }
            for (c, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFiniteValue { row: r, col: c });
                }
                if x < 0.0 {
                    return Err(Error::NegativeValue { row: r, col: c, value: x });
                }
                values.push(x);
            }
        }
        let weights = weights.unwrap_or_else(|| vec![1.0; n]);
        if weights.len() != n {
            return Err(Error::WrongDimension { expected: n, got: weights.len() });
        }
        for (r, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::NonpositiveWeight { row: r, value: w });
            }
        }
        let var_names = var_names.unwrap_or_else(|| (1..=d).map(|i| format!("x{i}")).collect());
        if var_names.len() != d {
            return Err(Error::WrongDimension { expected: d, got: var_names.len() });
        }
        if n <= d {
            return Err(Error::TooFewRows { n, d });
        }
        let ds = Dataset { values, weights, var_names, n, d };
        for c in 0..d {
            if !ds.column(c).iter().any(|&x| x > 0.0) {
                return Err(Error::ZeroColumn { name: ds.var_names[c].clone() });
            }
        }
        Ok(ds)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.d + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.d..(row + 1) * self.d]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n).map(|r| self.value(r, col)).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn total_weight(&self) -> f64 {
        ksum(self.weights.iter().copied())
    }

    pub fn column_mean(&self, col: usize) -> f64 {
        let mut num = KahanSum::new();
        let mut den = KahanSum::new();
        for r in 0..self.n {
            num.add(self.weights[r] * self.value(r, col));
            den.add(self.weights[r]);
        }
        num.total() / den.total()
    }

    /// Content identity over values and weights; used to tag derived artifacts.
    pub fn content_hash(&self) -> u64 {
        fnv1a64(&[&self.values, &self.weights])
    }

    /// Copy with two rows replaced, re-running full validation.
    pub(crate) fn with_rows_replaced(
        &self,
        replacements: &[(usize, Vec<f64>)],
    ) -> Result<Dataset> {
        let mut rows: Vec<Vec<f64>> = (0..self.n).map(|r| self.row(r).to_vec()).collect();
        for (idx, row) in replacements {
            rows[*idx] = row.clone();
        }
        Dataset::from_rows(&rows, Some(self.weights.clone()), Some(self.var_names.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn society1() -> Dataset {
        Dataset::from_rows(
            &[vec![3.0, 3.0], vec![4.0, 4.0], vec![6.0, 6.0]],
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn builds_three_person_society() {
        let ds = society1();
        assert_eq!(ds.n(), 3);
        assert_eq!(ds.dim(), 2);
        assert!((ds.column_mean(0) - 13.0 / 3.0).abs() < 1e-15);
        assert!((ds.column_mean(1) - 13.0 / 3.0).abs() < 1e-15);
        // order preserved
        assert_eq!(ds.row(1), &[4.0, 4.0]);
    }

    #[test]
    fn rejects_too_few_rows() {
        let err = Dataset::from_rows(&[vec![1.0, 1.0]], None, None).unwrap_err();
        assert!(matches!(err, Error::TooFewRows { n: 1, d: 2 }));
    }

    #[test]
    fn rejects_negative_value() {
        let err = Dataset::from_rows(&[vec![1.0, -2.0], vec![2.0, 1.0], vec![3.0, 1.0]], None, None)
            .unwrap_err();
        assert!(matches!(err, Error::NegativeValue { row: 0, col: 1, .. }));
    }

    #[test]
    fn rejects_zero_column() {
        let err = Dataset::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0], vec![3.0, 0.0]], None, None)
            .unwrap_err();
        assert!(matches!(err, Error::ZeroColumn { .. }));
    }

    #[test]
    fn rejects_nonpositive_weight() {
        let err = Dataset::from_rows(
            &[vec![1.0], vec![2.0], vec![3.0]],
            Some(vec![1.0, 0.0, 1.0]),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonpositiveWeight { row: 1, .. }));
    }

    #[test]
    fn zero_values_are_allowed() {
        let ds = Dataset::from_rows(&[vec![0.0], vec![0.0], vec![1.0]], None, None).unwrap();
        assert_eq!(ds.n(), 3);
    }

    #[test]
    fn hash_tracks_content() {
        let a = society1();
        let b = society1();
        assert_eq!(a.content_hash(), b.content_hash());
        let c = Dataset::from_rows(
            &[vec![3.0, 3.0], vec![4.0, 4.0], vec![6.0, 6.5]],
            None,
            None,
        )
        .unwrap();
        assert_ne!(a.content_hash(), c.content_hash());
    }
}
