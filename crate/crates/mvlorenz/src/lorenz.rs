//! Empirical univariate Lorenz curves, their generalized inverses, and the
//! Gini coefficient in the two sample conventions used throughout the crate.

use crate::error::{Error, Result};
use crate::numeric::{weighted_mean, KahanSum};

/// Validates one weighted data column. Shared by every per-column estimator.
pub(crate) fn validate_column(values: &[f64], weights: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyResult("empty column".into()));
    }
    if values.len() != weights.len() {
        return Err(Error::WrongDimension { expected: values.len(), got: weights.len() });
    }
    let mut any_positive = false;
    for (r, &x) in values.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFiniteValue { row: r, col: 0 });
        }
        if x < 0.0 {
            return Err(Error::NegativeValue { row: r, col: 0, value: x });
        }
        any_positive |= x > 0.0;
    }
    for (r, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::NonpositiveWeight { row: r, value: w });
        }
    }
    if !any_positive {
        return Err(Error::ZeroColumn { name: "column".into() });
    }
    Ok(())
}

/// Cumulative-share ranks of one column: entry j is the weighted sum of all
/// values less than or equal to value j, divided by the weighted column total.
/// Ties share one rank; the column maximum always maps to exactly 1.
pub(crate) fn column_stars(values: &[f64], weights: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    // Total over the same sequence as the running sum, so the final ratio is
    // exactly 1.0.
    let mut total = KahanSum::new();
    for &j in &order {
        total.add(weights[j] * values[j]);
    }
    let total = total.total();
    let mut stars = vec![0.0; n];
    let mut running = KahanSum::new();
    let mut i = 0;
    while i < n {
        let v = values[order[i]];
        let mut k = i;
        while k < n && values[order[k]] == v {
            running.add(weights[order[k]] * values[order[k]]);
            k += 1;
        }
        let s = running.total() / total;
        for &j in &order[i..k] {
            stars[j] = s;
        }
        i = k;
    }
    stars
}

/// Piecewise-linear empirical Lorenz curve.
///
/// Knots sit at the cumulative weight fractions of the ascending-sorted
/// values; tied values collapse into a single knot.
#[derive(Clone, Debug, PartialEq)]
pub struct LorenzCurve {
    knots_u: Vec<f64>,
    knots_s: Vec<f64>,
}

impl LorenzCurve {
    pub fn empirical(values: &[f64], weights: &[f64]) -> Result<Self> {
        validate_column(values, weights)?;
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let mut total_w = KahanSum::new();
        let mut total_v = KahanSum::new();
        for &j in &order {
            total_w.add(weights[j]);
            total_v.add(weights[j] * values[j]);
        }
        let (total_w, total_v) = (total_w.total(), total_v.total());
        let mut knots_u = vec![0.0];
        let mut knots_s = vec![0.0];
        let mut run_w = KahanSum::new();
        let mut run_v = KahanSum::new();
        let mut i = 0;
        while i < n {
            let v = values[order[i]];
            let mut k = i;
            while k < n && values[order[k]] == v {
                run_w.add(weights[order[k]]);
                run_v.add(weights[order[k]] * values[order[k]]);
                k += 1;
            }
            let u = run_w.total() / total_w;
            let s = run_v.total() / total_v;
            if u <= *knots_u.last().unwrap() {
                // zero-width step after rounding: keep the later share
                *knots_s.last_mut().unwrap() = s;
            } else {
                knots_u.push(u);
                knots_s.push(s);
            }
            i = k;
        }
        Ok(LorenzCurve { knots_u, knots_s })
    }

    pub fn knots_u(&self) -> &[f64] {
        &self.knots_u
    }

    pub fn knots_s(&self) -> &[f64] {
        &self.knots_s
    }

    /// L(u): share of the total held by the poorest fraction u.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::OutOfRange { what: "population fraction", value: u });
        }
        Ok(self.eval_unchecked(u))
    }

    fn eval_unchecked(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let ip = self.knots_u.partition_point(|&k| k < u);
        // knots_u[ip-1] < u <= knots_u[ip]
        if u == self.knots_u[ip] {
            return self.knots_s[ip];
        }
        let (u0, u1) = (self.knots_u[ip - 1], self.knots_u[ip]);
        let (s0, s1) = (self.knots_s[ip - 1], self.knots_s[ip]);
        s0 + (s1 - s0) * (u - u0) / (u1 - u0)
    }

    /// Generalized inverse: smallest t with L(t) >= s for s in (0, 1], and the
    /// supremum of the flat initial segment for s = 0 (positive when the data
    /// carries a point mass at zero).
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfRange { what: "cumulative share", value: s });
        }
        if s == 0.0 {
            let mut last = 0.0;
            for (u, sv) in self.knots_u.iter().zip(&self.knots_s) {
                if *sv == 0.0 {
                    last = *u;
                } else {
                    break;
                }
            }
            return Ok(last);
        }
        let ip = self.knots_s.partition_point(|&k| k < s);
        if ip == 0 {
            return Ok(0.0);
        }
        if ip >= self.knots_s.len() {
            return Ok(1.0);
        }
        if s == self.knots_s[ip] {
            return Ok(self.knots_u[ip]);
        }
        let (s0, s1) = (self.knots_s[ip - 1], self.knots_s[ip]);
        let (u0, u1) = (self.knots_u[ip - 1], self.knots_u[ip]);
        Ok(u0 + (u1 - u0) * (s - s0) / (s1 - s0))
    }

    /// Trapezoid integral of the polyline (exact for piecewise-linear curves).
    pub fn integral(&self) -> f64 {
        let mut acc = KahanSum::new();
        for k in 0..self.knots_u.len() - 1 {
            let du = self.knots_u[k + 1] - self.knots_u[k];
            acc.add(du * 0.5 * (self.knots_s[k] + self.knots_s[k + 1]));
        }
        acc.total()
    }
}

/// Which finite-sample Gini definition to use.
///
/// `Trapezoid` integrates the interpolated empirical Lorenz curve (the classic
/// textbook value). `Plugin` is 1 - 2 * weighted mean of the cumulative-share
/// ranks, the d = 1 reduction of the multivariate estimator; the bivariate
/// decomposition identity holds exactly under this convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GiniConvention {
    Trapezoid,
    Plugin,
}

pub fn gini(values: &[f64], weights: Option<&[f64]>, convention: GiniConvention) -> Result<f64> {
    let unit;
    let w = match weights {
        Some(w) => w,
        None => {
            unit = vec![1.0; values.len()];
            &unit
        }
    };
    validate_column(values, w)?;
    match convention {
        GiniConvention::Trapezoid => {
            let curve = LorenzCurve::empirical(values, w)?;
            Ok(1.0 - 2.0 * curve.integral())
        }
        GiniConvention::Plugin => {
            let stars = column_stars(values, w);
            Ok(1.0 - 2.0 * weighted_mean(&stars, w))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn unit(n: usize) -> Vec<f64> {
        vec![1.0; n]
    }

    /// Independent oracle: G = sum_ij w_i w_j |x_i - x_j| / (2 (sum w)^2 mu).
    fn pairwise_gini(values: &[f64], weights: &[f64]) -> f64 {
        let total_w: f64 = weights.iter().sum();
        let mu = weighted_mean(values, weights);
        let mut acc = 0.0;
        for (i, &xi) in values.iter().enumerate() {
            for (j, &xj) in values.iter().enumerate() {
                acc += weights[i] * weights[j] * (xi - xj).abs();
            }
        }
        acc / (2.0 * total_w * total_w * mu)
    }

    #[test]
    fn lorenz_partial_sums() {
        let c = LorenzCurve::empirical(&[1.0, 2.0, 3.0, 4.0, 5.0], &unit(5)).unwrap();
        assert!((c.eval(0.4).unwrap() - 0.2).abs() < 1e-15); // (1+2)/15
        assert!((c.eval(0.5).unwrap() - 0.3).abs() < 1e-15); // midpoint of segment
        assert_eq!(c.eval(1.0).unwrap(), 1.0);
        assert_eq!(c.eval(0.0).unwrap(), 0.0);
        assert!(c.eval(1.5).is_err());
    }

    #[test]
    fn equal_values_give_diagonal() {
        let c = LorenzCurve::empirical(&[7.0, 7.0, 7.0], &unit(3)).unwrap();
        for &u in &[0.0, 0.25, 0.37, 0.8, 1.0] {
            assert!((c.eval(u).unwrap() - u).abs() < 1e-15);
        }
        assert!((c.inverse(0.42).unwrap() - 0.42).abs() < 1e-15);
    }

    #[test]
    fn society_column_share() {
        let c = LorenzCurve::empirical(&[3.0, 4.0, 6.0], &unit(3)).unwrap();
        assert!((c.eval(2.0 / 3.0).unwrap() - 7.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_of_partial_sum() {
        let c = LorenzCurve::empirical(&[1.0, 2.0, 3.0, 4.0, 5.0], &unit(5)).unwrap();
        assert!((c.inverse(0.2).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(c.inverse(0.0).unwrap(), 0.0);
        assert_eq!(c.inverse(1.0).unwrap(), 1.0);
        assert!(c.inverse(-0.1).is_err());
    }

    #[test]
    fn point_mass_at_zero_uses_sup_convention() {
        let c = LorenzCurve::empirical(&[0.0, 0.0, 1.0, 1.0], &unit(4)).unwrap();
        assert!((c.inverse(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((c.inverse(0.5).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn gini_conventions_on_small_sample() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        let g_trap = gini(&v, None, GiniConvention::Trapezoid).unwrap();
        assert!((g_trap - 4.0 / 15.0).abs() < 1e-15);
        let g_plug = gini(&v, None, GiniConvention::Plugin).unwrap();
        assert!((g_plug - 1.0 / 15.0).abs() < 1e-15);
        let g = gini(&[5.0, 5.0, 5.0], None, GiniConvention::Trapezoid).unwrap();
        assert!(g.abs() < 1e-15);
        // Under the <=-tie rule every rank of an all-equal column is 1, so the
        // plugin value degenerates to -1; only the trapezoid convention reads
        // perfect equality as 0.
        let g = gini(&[5.0, 5.0, 5.0], None, GiniConvention::Plugin).unwrap();
        assert!((g + 1.0).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_matches_pairwise_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..200 {
            let n = rng.random_range(2..60);
            let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 100.0).collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 3.0 + 0.1).collect();
            if values.iter().all(|&x| x == 0.0) {
                continue;
            }
            let g = gini(&values, Some(&weights), GiniConvention::Trapezoid).unwrap();
            let oracle = pairwise_gini(&values, &weights);
            assert!((g - oracle).abs() < 1e-10, "{g} vs {oracle}");
        }
    }

    #[test]
    fn plugin_is_definitional_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..100 {
            let n = rng.random_range(2..80);
            let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 10.0).collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.2).collect();
            let g = gini(&values, Some(&weights), GiniConvention::Plugin).unwrap();
            let stars = column_stars(&values, &weights);
            let expect = 1.0 - 2.0 * weighted_mean(&stars, &weights);
            assert!((g - expect).abs() <= 1e-15);
        }
    }

    #[test]
    fn conventions_agree_for_large_samples() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let n = 20_000;
        let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let t = gini(&values, None, GiniConvention::Trapezoid).unwrap();
        let p = gini(&values, None, GiniConvention::Plugin).unwrap();
        assert!((t - p).abs() <= 5.0 / n as f64, "gap {}", (t - p).abs());
    }

    #[test]
    fn scale_invariance() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let values: Vec<f64> = (0..40).map(|_| rng.random::<f64>() * 50.0).collect();
        for conv in [GiniConvention::Trapezoid, GiniConvention::Plugin] {
            let base = gini(&values, None, conv).unwrap();
            for &c in &[0.001, 0.37, 42.0, 1e9] {
                let scaled: Vec<f64> = values.iter().map(|&x| c * x).collect();
                let g = gini(&scaled, None, conv).unwrap();
                assert!((g - base).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curve_is_convex_and_below_diagonal() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(2..50);
            let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 9.0).collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 + 0.05).collect();
            if !values.iter().any(|&x| x > 0.0) {
                continue;
            }
            let c = LorenzCurve::empirical(&values, &weights).unwrap();
            let mut prev_slope = f64::NEG_INFINITY;
            for k in 0..c.knots_u().len() - 1 {
                let slope = (c.knots_s()[k + 1] - c.knots_s()[k])
                    / (c.knots_u()[k + 1] - c.knots_u()[k]);
                assert!(slope >= prev_slope - 1e-9, "not convex");
                prev_slope = slope;
            }
            for i in 0..=20 {
                let u = i as f64 / 20.0;
                assert!(c.eval(u).unwrap() <= u + 1e-12);
            }
        }
    }

    #[test]
    fn stars_column_basics() {
        let stars = column_stars(&[3.0, 4.0, 6.0], &unit(3));
        assert!((stars[0] - 3.0 / 13.0).abs() < 1e-15);
        assert!((stars[1] - 7.0 / 13.0).abs() < 1e-15);
        assert_eq!(stars[2], 1.0);
        // all-equal column: the tie rule forces every rank to the full sum
        assert_eq!(column_stars(&[5.0, 5.0, 5.0], &unit(3)), vec![1.0, 1.0, 1.0]);
    }
}
