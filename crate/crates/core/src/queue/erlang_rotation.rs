//! Stationary waiting time for a general pick law (with closed-form
//! Laplace-Stieltjes transform derivatives) and an Erlang rotation with
//! rate `mu` and `n` stages.
//!
//! The transform values `psi^(k)(mu)`, `k = 0..n-1`, solve the linear
//! system
//!
//! `psi(mu) = 1 - sum_{i<n} (-mu)^i (1 - 2^{i-n})
//!            sum_{k<=i} psi^(k)(mu) alpha^(i-k)(mu) / (k! (i-k)!)`
//!
//! and, for `l = 1..n-1`,
//!
//! `psi^(l)(mu) = sum_{i<n} mu^{i-l} ((-1)^{i+l} / 2^{n-i+l})
//!               ((n-i+l-1)! / (n-i-1)!)
//!               sum_{k<=i} psi^(k)(mu) alpha^(i-k)(mu) / (k! (i-k)!)`.
//!
//! With `phi^(i)(mu) = sum_k C(i,k) psi^(k)(mu) alpha^(i-k)(mu)` the
//! waiting time has mass `pi0 = 1 - sum_i ((-mu)^i / i!) phi^(i)(mu)` at
//! zero and density
//! `mu^n e^{-mu x} sum_i ((-1)^i / i!) phi^(i)(mu) x^{n-1-i} / (n-1-i)!`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::linalg::solve_linear;
use crate::queue::dist::{erlang_cdf, DistributionSpec};

/// Solved transform values and the distribution they induce.
#[derive(Debug, Clone)]
pub struct ErlangRotationSolution {
    pub pick: DistributionSpec,
    pub mu: f64,
    pub stages: usize,
    /// `psi^(k)(mu)` for `k = 0..stages`.
    pub psi_derivatives: Vec<f64>,
    /// `phi^(i)(mu)` for `i = 0..stages`.
    pub phi_derivatives: Vec<f64>,
    pub pi0: f64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Assembles and solves the balance system.
pub fn solve_erlang_rotation(
    pick: &DistributionSpec,
    mu: f64,
    stages: usize,
) -> Result<ErlangRotationSolution> {
    if mu <= 0.0 || !mu.is_finite() {
        return Err(Error::invalid(format!("rotation rate {mu} must be positive")));
    }
    if stages == 0 {
        return Err(Error::invalid("rotation needs at least one Erlang stage"));
    }
    let n = stages;
    let alpha = pick.lst_derivatives(mu, n)?;

    // unknowns x_k = psi^(k)(mu); rows: the psi(mu) equation, then the
    // psi^(l)(mu) equations for l = 1..n-1
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for k in 0..n {
        a[(0, k)] = if k == 0 { 1.0 } else { 0.0 };
        for i in k..n {
            let weight = (-mu).powi(i as i32) * (1.0 - 0.5f64.powi((n - i) as i32));
            a[(0, k)] += weight * alpha[i - k] / (factorial(k) * factorial(i - k));
        }
    }
    b[0] = 1.0;
    for l in 1..n {
        for k in 0..n {
            a[(l, k)] = if k == l { 1.0 } else { 0.0 };
            for i in k..n {
                let sign = if (i + l) % 2 == 0 { 1.0 } else { -1.0 };
                let weight = mu.powi(i as i32 - l as i32) * sign
                    / 2f64.powi((n - i + l) as i32)
                    * factorial(n - i + l - 1)
                    / factorial(n - i - 1);
                a[(l, k)] -= weight * alpha[i - k] / (factorial(k) * factorial(i - k));
            }
        }
        b[l] = 0.0;
    }

    let x = solve_linear(&a, &b).map_err(|e| match e {
        Error::SingularSystem(msg) => {
            Error::invalid(format!("balance system is singular for these inputs: {msg}"))
        }
        other => other,
    })?;
    let psi: Vec<f64> = x.iter().cloned().collect();

    let phi: Vec<f64> = (0..n)
        .map(|i| {
            (0..=i)
                .map(|k| {
                    factorial(i) / (factorial(k) * factorial(i - k)) * psi[k] * alpha[i - k]
                })
                .sum()
        })
        .collect();

    let pi0 = 1.0
        - (0..n).map(|i| (-mu).powi(i as i32) / factorial(i) * phi[i]).sum::<f64>();
    if !(-1e-8..=1.0 + 1e-8).contains(&pi0) {
        return Err(Error::numeric(format!("zero-wait mass {pi0} escapes [0, 1]")));
    }

    Ok(ErlangRotationSolution {
        pick: pick.clone(),
        mu,
        stages,
        psi_derivatives: psi,
        phi_derivatives: phi,
        pi0: pi0.clamp(0.0, 1.0),
    })
}

impl ErlangRotationSolution {
    /// Waiting-time density on `(0, infinity)`.
    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let n = self.stages;
        let mu = self.mu;
        let mut sum = 0.0;
        for i in 0..n {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign / factorial(i) * self.phi_derivatives[i] * x.powi((n - 1 - i) as i32)
                / factorial(n - 1 - i);
        }
        mu.powi(n as i32) * (-mu * x).exp() * sum
    }

    /// Waiting-time CDF: the polynomial-times-exponential density
    /// integrates to a combination of Erlang CDFs.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let n = self.stages;
        let mu = self.mu;
        let mut acc = self.pi0;
        for i in 0..n {
            acc += (-mu).powi(i as i32) / factorial(i)
                * self.phi_derivatives[i]
                * erlang_cdf(mu, n - i, x);
        }
        acc.clamp(0.0, 1.0)
    }

    /// Continuous mass `1 - pi0`, evaluated from the density closed form
    /// (equals `sum_i ((-mu)^i / i!) phi^(i)(mu)`).
    pub fn continuous_mass(&self) -> f64 {
        (0..self.stages)
            .map(|i| (-self.mu).powi(i as i32) / factorial(i) * self.phi_derivatives[i])
            .sum()
    }

    pub fn mean_wait(&self) -> f64 {
        // E[W] = (1/mu) sum_i (n - i) ((-mu)^i / i!) phi^(i)(mu)
        (0..self.stages)
            .map(|i| {
                (self.stages - i) as f64 * (-self.mu).powi(i as i32) / factorial(i)
                    * self.phi_derivatives[i]
            })
            .sum::<f64>()
            / self.mu
    }

    pub fn throughput(&self) -> f64 {
        1.0 / (self.mean_wait() + self.pick.mean())
    }

    /// Sup distance to the empirical CDF of a sorted simulation sample.
    pub fn sup_distance_to_sorted_sample(&self, sorted_waits: &[f64]) -> Result<f64> {
        crate::numerics::ks::sup_distance_vs_cdf(
            sorted_waits,
            |x| self.cdf(x),
            |x| if x <= 0.0 { 0.0 } else { self.cdf(x) },
        )
    }
}
