//! Kolmogorov-Smirnov statistics used as distributional oracles.

use crate::error::{Error, Result};

/// Outcome of a KS comparison.
#[derive(Debug, Clone)]
pub struct KsReport {
    /// Supremum absolute difference between the two CDFs.
    pub statistic: f64,
    /// Sample sizes; for one-sample tests both entries equal the size.
    pub sample_sizes: (usize, usize),
    pub threshold: f64,
    pub passed: bool,
}

impl KsReport {
    fn new(statistic: f64, sample_sizes: (usize, usize), threshold: f64) -> Self {
        Self { statistic, sample_sizes, threshold, passed: statistic < threshold }
    }
}

/// Asymptotic two-sample critical value at the 1% level.
pub fn two_sample_threshold(n_a: usize, n_b: usize) -> f64 {
    1.63 * ((n_a + n_b) as f64 / (n_a as f64 * n_b as f64)).sqrt()
}

/// Asymptotic one-sample critical value at the 1% level.
pub fn one_sample_threshold(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

fn check_sorted<T: PartialOrd>(name: &str, xs: &[T]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::invalid(format!("{name}: empty sample")));
    }
    if xs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid(format!("{name}: sample must be sorted ascending")));
    }
    Ok(())
}

/// Two-sample KS statistic by the standard merge sweep over sorted inputs,
/// judged against the default 1% threshold.
pub fn ks_two_sample<T: PartialOrd + Copy>(a: &[T], b: &[T]) -> Result<KsReport> {
    ks_two_sample_with(a, b, two_sample_threshold(a.len().max(1), b.len().max(1)))
}

pub fn ks_two_sample_with<T: PartialOrd + Copy>(a: &[T], b: &[T], threshold: f64) -> Result<KsReport> {
    check_sorted("a", a)?;
    check_sorted("b", b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    // sweep the merged distinct values; both empirical CDFs are compared
    // just after each one
    while i < a.len() || j < b.len() {
        let v = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => {
                if x <= y {
                    x
                } else {
                    y
                }
            }
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        let d = (i as f64 / na - j as f64 / nb).abs();
        if d > sup {
            sup = d;
        }
    }
    Ok(KsReport::new(sup, (a.len(), b.len()), threshold))
}

/// One-sample KS statistic of sorted samples against a model CDF:
/// max over order statistics of `|i/n - F(x_i)|` and `|(i-1)/n - F(x_i)|`.
pub fn ks_against_cdf<T, F>(a: &[T], cdf: F) -> Result<KsReport>
where
    T: PartialOrd + Copy,
    F: Fn(T) -> f64,
{
    ks_against_cdf_with(a, cdf, one_sample_threshold(a.len().max(1)))
}

pub fn ks_against_cdf_with<T, F>(a: &[T], cdf: F, threshold: f64) -> Result<KsReport>
where
    T: PartialOrd + Copy,
    F: Fn(T) -> f64,
{
    check_sorted("a", a)?;
    let n = a.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in a.iter().enumerate() {
        let f = cdf(x);
        if !(-1e-12..=1.0 + 1e-12).contains(&f) {
            return Err(Error::numeric(format!("cdf returned {f} outside [0, 1]")));
        }
        let hi = ((i + 1) as f64 / n - f).abs();
        let lo = (i as f64 / n - f).abs();
        sup = sup.max(hi).max(lo);
    }
    Ok(KsReport::new(sup, (a.len(), a.len()), threshold))
}

/// Sup distance between the empirical CDF of a sorted sample and a model
/// CDF that may carry atoms. `cdf_left` must return the left limit
/// `P(X < x)`; for continuous laws it equals `cdf`.
pub fn sup_distance_vs_cdf<F, G>(a: &[f64], cdf: F, cdf_left: G) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    check_sorted("a", a)?;
    let n = a.len() as f64;
    let mut sup = 0.0f64;
    let mut i = 0usize;
    while i < a.len() {
        let v = a[i];
        let before = i;
        while i < a.len() && a[i] == v {
            i += 1;
        }
        sup = sup.max((i as f64 / n - cdf(v)).abs());
        sup = sup.max((before as f64 / n - cdf_left(v)).abs());
    }
    Ok(sup)
}

/// Sort helper for raw simulation output headed into a KS comparison.
pub fn sorted(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(|x, y| x.partial_cmp(y).expect("samples must not contain NaN"));
    xs
}
