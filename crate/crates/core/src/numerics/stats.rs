//! Small statistical helpers shared by the validation harnesses.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Sample mean and standard error of the mean (iid samples).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Mean of a long, possibly autocorrelated series with a batch-means
/// standard error.
pub fn batch_means(xs: &[f64], batches: usize) -> (f64, f64) {
    let b = batches.max(2).min(xs.len());
    let len = xs.len() / b;
    let used = len * b;
    let mut means = Vec::with_capacity(b);
    for k in 0..b {
        let chunk = &xs[k * len..(k + 1) * len];
        means.push(chunk.iter().sum::<f64>() / len as f64);
    }
    let grand = xs[..used].iter().sum::<f64>() / used as f64;
    let var = means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / (b as f64 - 1.0);
    (grand, (var / b as f64).sqrt())
}

/// Result of a chi-square independence test on a contingency table.
#[derive(Debug, Clone)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub critical_value: f64,
    pub rejected: bool,
}

/// Pearson chi-square test of independence for an `r x c` count table at
/// significance `alpha`. Columns whose expected counts fall below
/// `min_expected` are merged (rightmost first) to keep the asymptotic
/// approximation honest.
pub fn chi_square_independence(
    table: &[Vec<u64>],
    alpha: f64,
    min_expected: f64,
) -> Result<ChiSquareReport> {
    if table.is_empty() || table[0].is_empty() {
        return Err(Error::invalid("empty contingency table"));
    }
    let cols = table[0].len();
    if table.iter().any(|row| row.len() != cols) {
        return Err(Error::invalid("ragged contingency table"));
    }

    let mut merged: Vec<Vec<f64>> =
        table.iter().map(|row| row.iter().map(|&x| x as f64).collect()).collect();

    loop {
        let rows = merged.len();
        let cols = merged[0].len();
        let total: f64 = merged.iter().flatten().sum();
        if total <= 0.0 {
            return Err(Error::invalid("contingency table has no observations"));
        }
        let row_sums: Vec<f64> = merged.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<f64> =
            (0..cols).map(|j| merged.iter().map(|r| r[j]).sum()).collect();

        let thin_col = (0..cols).find(|&j| {
            (0..rows).any(|i| row_sums[i] * col_sums[j] / total < min_expected)
        });
        match thin_col {
            Some(j) if cols > 2 => {
                // fold the thin column into its neighbour
                let into = if j + 1 < cols { j + 1 } else { j - 1 };
                for row in merged.iter_mut() {
                    let v = row[j];
                    row[into] += v;
                    row.remove(j);
                }
            }
            _ => {
                let mut statistic = 0.0;
                for i in 0..rows {
                    for j in 0..cols {
                        let expected = row_sums[i] * col_sums[j] / total;
                        if expected > 0.0 {
                            let d = merged[i][j] - expected;
                            statistic += d * d / expected;
                        }
                    }
                }
                let df = (rows - 1) * (cols - 1);
                if df == 0 {
                    return Err(Error::invalid("table collapsed to a single category"));
                }
                let critical = ChiSquared::new(df as f64)
                    .map_err(|e| Error::numeric(format!("chi-square df: {e}")))?
                    .inverse_cdf(1.0 - alpha);
                return Ok(ChiSquareReport {
                    statistic,
                    degrees_of_freedom: df,
                    critical_value: critical,
                    rejected: statistic > critical,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_se_basics() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-15);
        // sd = sqrt(5/3), se = sd/2
        assert!((se - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn independent_table_is_not_rejected() {
        // perfectly proportional rows
        let table = vec![vec![50u64, 100, 150], vec![100, 200, 300]];
        let r = chi_square_independence(&table, 0.01, 1.0).unwrap();
        assert!(r.statistic < 1e-9);
        assert!(!r.rejected);
    }

    #[test]
    fn dependent_table_is_rejected() {
        let table = vec![vec![200u64, 10], vec![10, 200]];
        let r = chi_square_independence(&table, 0.01, 1.0).unwrap();
        assert!(r.rejected);
    }

    #[test]
    fn thin_columns_get_merged() {
        let table = vec![vec![500u64, 400, 1], vec![480, 420, 2]];
        let r = chi_square_independence(&table, 0.01, 5.0).unwrap();
        assert_eq!(r.degrees_of_freedom, 1);
        assert!(!r.rejected);
    }
}
