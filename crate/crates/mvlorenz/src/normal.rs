//! Standard normal CDF, quantile, and the bivariate normal CDF.
//!
//! The bivariate CDF integrates the conditional normal along one axis,
//!
//! $$ \Phi_2(a,b;\rho) = \int_{-\infty}^{a} \varphi(z)\,
//!    \Phi\!\left(\frac{b-\rho z}{\sqrt{1-\rho^2}}\right) dz, $$
//!
//! with composite Gauss–Legendre panels; absolute error stays below 1e-12.

use crate::quadrature;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const INV_SQRT_2PI: f64 = 0.3989422804014327;

/// Standard normal density.
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function.
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Rational initial guess for the normal quantile (Acklam's approximation).
fn quantile_guess(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Standard normal quantile, refined with Newton steps against `cdf`.
pub fn quantile(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "quantile needs p in [0,1], got {p}");
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let mut x = quantile_guess(p);
    for _ in 0..3 {
        let dens = pdf(x);
        if dens < 1e-280 {
            break;
        }
        let step = (cdf(x) - p) / dens;
        x -= step;
        if step.abs() < 1e-14 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// P(Z1 <= a, Z2 <= b) for standard bivariate normal with correlation `rho`.
pub fn bivariate_cdf(a: f64, b: f64, rho: f64) -> f64 {
    assert!((-1.0..=1.0).contains(&rho), "correlation out of range: {rho}");
    if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        return 0.0;
    }
    if a == f64::INFINITY {
        return cdf(b);
    }
    if b == f64::INFINITY {
        return cdf(a);
    }
    if rho >= 1.0 - 1e-15 {
        return cdf(a.min(b));
    }
    if rho <= -1.0 + 1e-15 {
        return (cdf(a) + cdf(b) - 1.0).max(0.0);
    }
    if rho == 0.0 {
        return cdf(a) * cdf(b);
    }
    // Reduce to a <= 0 so the integration interval stays short.
    if a > 0.0 {
        return (cdf(b) - bivariate_cdf(-a, b, -rho)).max(0.0);
    }
    let lo = -9.0;
    if a <= lo {
        return 0.0; // below 1e-18 mass
    }
    let denom = (1.0 - rho * rho).sqrt();
    let len = a - lo;
    // The conditional CDF varies on the scale of denom; resolve it.
    let width = (3.0 * denom).min(0.75).max(len / 600.0);
    let panels = (len / width).ceil() as usize + 1;
    quadrature::integrate(
        |z| pdf(z) * cdf((b - rho * z) / denom),
        lo,
        a,
        panels,
        12,
    )
    .clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_values() {
        // references computed with 40-digit arithmetic
        let refs: &[(f64, f64)] = &[
            (-9.0, 1.1285884059538406477e-19),
            (-5.0, 2.8665157187919391167e-7),
            (-2.0, 0.0227501319481792072),
            (-0.5, 0.30853753872598689636),
            (0.0, 0.5),
            (0.3, 0.61791142218895263307),
            (1.0, 0.84134474606854294859),
            (3.0, 0.99865010196836990547),
            (7.0, 0.99999999999872018746),
        ];
        for &(x, want) in refs {
            let got = cdf(x);
            assert!(
                ((got - want) / want).abs() < 1e-14,
                "cdf({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn quantile_round_trip() {
        for &p in &[1e-10, 1e-4, 0.025, 0.31, 0.5, 0.77, 0.975, 1.0 - 1e-9] {
            let x = quantile(p);
            assert!((cdf(x) - p).abs() <= 1e-14 * p.max(1e-3), "p={p}");
        }
        assert!((quantile(0.975) - 1.959963984540054).abs() < 1e-12);
        assert_eq!(quantile(0.5), 0.0);
    }

    #[test]
    fn bivariate_matches_arcsine_identity() {
        // P(Z1<=0, Z2<=0) = 1/4 + asin(rho)/(2 pi)
        for &rho in &[-0.95f64, -0.5, -0.1, 0.0, 0.3, 0.6, 0.9, 0.99] {
            let expect = 0.25 + rho.asin() / (2.0 * std::f64::consts::PI);
            let got = bivariate_cdf(0.0, 0.0, rho);
            assert!((got - expect).abs() < 1e-13, "rho={rho}: {got} vs {expect}");
        }
    }

    #[test]
    fn bivariate_independence_and_symmetry() {
        let g = bivariate_cdf(0.3, -1.2, 0.0);
        assert!((g - cdf(0.3) * cdf(-1.2)).abs() < 1e-14);
        for &(a, b, r) in &[(0.5, -0.7, 0.4), (-1.5, 2.0, -0.8), (1.1, 1.3, 0.65)] {
            let lhs = bivariate_cdf(a, b, r);
            let rhs = bivariate_cdf(b, a, r);
            assert!((lhs - rhs).abs() < 1e-13, "asymmetric at ({a},{b},{r})");
        }
    }

    #[test]
    fn bivariate_degenerate_correlations() {
        assert!((bivariate_cdf(0.5, 1.0, 1.0) - cdf(0.5)).abs() < 1e-15);
        let w = (cdf(0.5) + cdf(1.0) - 1.0).max(0.0);
        assert!((bivariate_cdf(0.5, 1.0, -1.0) - w).abs() < 1e-15);
    }

    #[test]
    fn bivariate_monotone_in_rho() {
        let mut last = 0.0;
        for i in 0..21 {
            let rho = -0.99 + 1.98 * i as f64 / 20.0;
            let v = bivariate_cdf(0.4, -0.3, rho);
            if i > 0 {
                assert!(v >= last - 1e-13);
            }
            last = v;
        }
    }

    #[test]
    fn bivariate_tail_consistency() {
        // Large b behaves like the univariate CDF.
        let v = bivariate_cdf(-0.7, 8.0, 0.5);
        assert!((v - cdf(-0.7)).abs() < 1e-13);
    }
}
