//! Autocovariance diagnostics of the waiting-time series. The lag-k
//! covariance of the stationary chain alternates sign with the parity of
//! k and decays geometrically; batch means supply standard errors that
//! stay honest under the serial dependence of the products.

use crate::error::{Error, Result};
use crate::numerics::stats::batch_means;

#[derive(Debug, Clone, Copy)]
pub struct LagCovariance {
    pub lag: usize,
    pub estimate: f64,
    pub std_error: f64,
}

/// Autocovariance estimates for lags `0..=max_lag`.
pub fn covariance_diagnostics(waits: &[f64], max_lag: usize) -> Result<Vec<LagCovariance>> {
    if max_lag == 0 {
        return Err(Error::invalid("max_lag must be positive"));
    }
    if waits.len() < 100 * max_lag {
        return Err(Error::invalid(format!(
            "series of length {} is too short for lag {max_lag} (need 100x)",
            waits.len()
        )));
    }
    let n = waits.len();
    let mean = waits.iter().sum::<f64>() / n as f64;
    let batches = 100;
    let mut out = Vec::with_capacity(max_lag + 1);
    let mut products = Vec::with_capacity(n);
    for lag in 0..=max_lag {
        products.clear();
        products.extend(
            waits[..n - lag]
                .iter()
                .zip(&waits[lag..])
                .map(|(a, b)| (a - mean) * (b - mean)),
        );
        let (estimate, std_error) = batch_means(&products, batches);
        out.push(LagCovariance { lag, estimate, std_error });
    }
    Ok(out)
}
