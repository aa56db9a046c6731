//! Compensated summation and deterministic number formatting.

/// Kahan–Babuška–Neumaier compensated accumulator.
///
/// Keeps running error compensation so that long weighted sums stay accurate
/// to a few ulps regardless of magnitude ordering.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator in its own order.
pub fn ksum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = KahanSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.total()
}

/// Weighted mean with compensated sums. Assumes positive total weight.
pub fn weighted_mean(values: &[f64], weights: &[f64]) -> f64 {
    let mut num = KahanSum::new();
    let mut den = KahanSum::new();
    for (&x, &w) in values.iter().zip(weights) {
        num.add(w * x);
        den.add(w);
    }
    num.total() / den.total()
}

/// Weighted population mean and standard deviation.
pub fn weighted_mean_std(values: &[f64], weights: &[f64]) -> (f64, f64) {
    let mean = weighted_mean(values, weights);
    let mut num = KahanSum::new();
    let mut den = KahanSum::new();
    for (&x, &w) in values.iter().zip(weights) {
        let d = x - mean;
        num.add(w * d * d);
        den.add(w);
    }
    (mean, (num.total() / den.total()).max(0.0).sqrt())
}

/// Format with `sig` significant digits in plain decimal notation.
///
/// Fixed-width output (trailing zeros kept) so that repeated runs diff cleanly.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// 17 significant decimal digits: enough to reproduce any f64 exactly on parse.
pub fn fmt_full(x: f64) -> String {
    fmt_sig(x, 17)
}

/// FNV-1a over raw little-endian f64 bit patterns, used for content identity.
pub fn fnv1a64(chunks: &[&[f64]]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x1000_0000_01b3;
    let mut h = OFFSET;
    for chunk in chunks {
        for &x in *chunk {
            for b in x.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(PRIME);
            }
        }
    }
    h
}
