//! Pick and rotation time laws with the capabilities the solvers need:
//! CDF, integrated CDFs, moments, samplers and Laplace-Stieltjes
//! transform derivatives where a closed form exists.

use crate::error::{Error, Result};
use crate::numerics::rng::RandomStream;

/// One branch of a mixed-Erlang law.
#[derive(Debug, Clone, PartialEq)]
pub struct ErlangBranch {
    pub weight: f64,
    pub rate: f64,
    pub stages: usize,
}

/// A pick or rotation time distribution on `[0, infinity)`.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Uniform01,
    Exponential { rate: f64 },
    Erlang { rate: f64, stages: usize },
    MixedErlang { branches: Vec<ErlangBranch> },
    Deterministic { value: f64 },
    /// The empirical law of a fixed sample (kept sorted with prefix sums).
    Empirical { samples: Vec<f64>, prefix: Vec<f64>, prefix_sq: Vec<f64> },
}

/// CDF of an Erlang(rate, stages) law.
pub fn erlang_cdf(rate: f64, stages: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let lx = rate * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..stages {
        term *= lx / i as f64;
        sum += term;
    }
    1.0 - (-lx).exp() * sum
}

impl DistributionSpec {
    pub fn uniform01() -> Self {
        DistributionSpec::Uniform01
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if rate <= 0.0 || !rate.is_finite() {
            return Err(Error::invalid(format!("exponential rate {rate} must be positive")));
        }
        Ok(DistributionSpec::Exponential { rate })
    }

    pub fn erlang(rate: f64, stages: usize) -> Result<Self> {
        if rate <= 0.0 || !rate.is_finite() {
            return Err(Error::invalid(format!("erlang rate {rate} must be positive")));
        }
        if stages == 0 {
            return Err(Error::invalid("erlang needs at least one stage"));
        }
        Ok(DistributionSpec::Erlang { rate, stages })
    }

    pub fn mixed_erlang(branches: Vec<ErlangBranch>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::invalid("mixed erlang needs at least one branch"));
        }
        let mut total = 0.0;
        for b in &branches {
            if b.weight <= 0.0 || b.rate <= 0.0 || b.stages == 0 {
                return Err(Error::invalid(format!(
                    "bad mixed-erlang branch (w = {}, rate = {}, stages = {})",
                    b.weight, b.rate, b.stages
                )));
            }
            total += b.weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("mixture weights sum to {total}, not 1")));
        }
        Ok(DistributionSpec::MixedErlang { branches })
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        if value < 0.0 || !value.is_finite() {
            return Err(Error::invalid(format!("deterministic value {value} must be >= 0")));
        }
        Ok(DistributionSpec::Deterministic { value })
    }

    pub fn empirical(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("empirical law needs at least one sample"));
        }
        if samples.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::invalid("empirical samples must be finite and >= 0"));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut prefix = Vec::with_capacity(samples.len());
        let mut prefix_sq = Vec::with_capacity(samples.len());
        let (mut acc, mut acc2) = (0.0, 0.0);
        for &s in &samples {
            acc += s;
            acc2 += s * s;
            prefix.push(acc);
            prefix_sq.push(acc2);
        }
        Ok(DistributionSpec::Empirical { samples, prefix, prefix_sq })
    }

    /// Two-moment fit: a distribution with the given mean and squared
    /// coefficient of variation. Erlang mixtures cover scv <= 1, a
    /// two-branch hyperexponential (stage-1 mixture) covers scv > 1.
    pub fn with_mean_scv(mean: f64, scv: f64) -> Result<Self> {
        if mean <= 0.0 || scv <= 0.0 {
            return Err(Error::invalid(format!("need mean > 0 and scv > 0 (got {mean}, {scv})")));
        }
        if (scv - 1.0).abs() < 1e-12 {
            return Self::exponential(1.0 / mean);
        }
        if scv < 1.0 {
            let inv = 1.0 / scv;
            if (inv - inv.round()).abs() < 1e-9 {
                let k = inv.round() as usize;
                return Self::erlang(k as f64 / mean, k);
            }
            // Erlang(k-1)/Erlang(k) mixture with a common rate
            let k = inv.ceil() as usize;
            let kf = k as f64;
            let disc = kf * (1.0 + scv) - kf * kf * scv;
            if disc < 0.0 {
                return Err(Error::invalid(format!("scv {scv} not reachable by an Erlang mixture")));
            }
            let p = (kf * scv - disc.sqrt()) / (1.0 + scv);
            let rate = (kf - p) / mean;
            return Self::mixed_erlang(vec![
                ErlangBranch { weight: p, rate, stages: k - 1 },
                ErlangBranch { weight: 1.0 - p, rate, stages: k },
            ]);
        }
        // balanced-means hyperexponential
        let p1 = 0.5 * (1.0 + ((scv - 1.0) / (scv + 1.0)).sqrt());
        let p2 = 1.0 - p1;
        Self::mixed_erlang(vec![
            ErlangBranch { weight: p1, rate: 2.0 * p1 / mean, stages: 1 },
            ErlangBranch { weight: p2, rate: 2.0 * p2 / mean, stages: 1 },
        ])
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::Uniform01 => x.clamp(0.0, 1.0),
            DistributionSpec::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - (-rate * x).exp()
                }
            }
            DistributionSpec::Erlang { rate, stages } => erlang_cdf(*rate, *stages, x),
            DistributionSpec::MixedErlang { branches } => branches
                .iter()
                .map(|b| b.weight * erlang_cdf(b.rate, b.stages, x))
                .sum(),
            DistributionSpec::Deterministic { value } => {
                if x >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionSpec::Empirical { samples, .. } => {
                samples.partition_point(|s| *s <= x) as f64 / samples.len() as f64
            }
        }
    }

    /// `P(X < x)`, the left limit of the CDF.
    pub fn cdf_strict(&self, x: f64) -> f64 {
        match self {
            DistributionSpec::Deterministic { value } => {
                if x > *value {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionSpec::Empirical { samples, .. } => {
                samples.partition_point(|s| *s < x) as f64 / samples.len() as f64
            }
            _ => self.cdf(x),
        }
    }

    /// `P(X >= x)`.
    pub fn survival_geq(&self, x: f64) -> f64 {
        1.0 - self.cdf_strict(x)
    }

    pub fn mean(&self) -> f64 {
        match self {
            DistributionSpec::Uniform01 => 0.5,
            DistributionSpec::Exponential { rate } => 1.0 / rate,
            DistributionSpec::Erlang { rate, stages } => *stages as f64 / rate,
            DistributionSpec::MixedErlang { branches } => {
                branches.iter().map(|b| b.weight * b.stages as f64 / b.rate).sum()
            }
            DistributionSpec::Deterministic { value } => *value,
            DistributionSpec::Empirical { samples, prefix, .. } => {
                prefix.last().unwrap() / samples.len() as f64
            }
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            DistributionSpec::Uniform01 => 1.0 / 12.0,
            DistributionSpec::Exponential { rate } => 1.0 / (rate * rate),
            DistributionSpec::Erlang { rate, stages } => *stages as f64 / (rate * rate),
            DistributionSpec::MixedErlang { branches } => {
                let mean = self.mean();
                let second: f64 = branches
                    .iter()
                    .map(|b| {
                        let k = b.stages as f64;
                        b.weight * k * (k + 1.0) / (b.rate * b.rate)
                    })
                    .sum();
                second - mean * mean
            }
            DistributionSpec::Deterministic { .. } => 0.0,
            DistributionSpec::Empirical { samples, prefix, prefix_sq } => {
                let n = samples.len() as f64;
                let m = prefix.last().unwrap() / n;
                prefix_sq.last().unwrap() / n - m * m
            }
        }
    }

    /// Squared coefficient of variation.
    pub fn scv(&self) -> f64 {
        let m = self.mean();
        if m == 0.0 {
            0.0
        } else {
            self.variance() / (m * m)
        }
    }

    /// Integrated CDF `G(c) = integral of F over [0, c]` (zero for c <= 0).
    pub fn integrated_cdf(&self, c: f64) -> f64 {
        if c <= 0.0 {
            return 0.0;
        }
        match self {
            DistributionSpec::Uniform01 => {
                if c <= 1.0 {
                    0.5 * c * c
                } else {
                    c - 0.5
                }
            }
            DistributionSpec::Exponential { rate } => c - (1.0 - (-rate * c).exp()) / rate,
            DistributionSpec::Erlang { rate, stages } => {
                let mut acc = c;
                for i in 1..=*stages {
                    acc -= erlang_cdf(*rate, i, c) / rate;
                }
                acc
            }
            DistributionSpec::MixedErlang { branches } => branches
                .iter()
                .map(|b| {
                    b.weight * DistributionSpec::Erlang { rate: b.rate, stages: b.stages }.integrated_cdf(c)
                })
                .sum(),
            DistributionSpec::Deterministic { value } => (c - value).max(0.0),
            DistributionSpec::Empirical { samples, prefix, .. } => {
                let m = samples.partition_point(|s| *s <= c);
                if m == 0 {
                    0.0
                } else {
                    (m as f64 * c - prefix[m - 1]) / samples.len() as f64
                }
            }
        }
    }

    /// Twice-integrated CDF `H(c) = integral of G over [0, c]`.
    pub fn twice_integrated_cdf(&self, c: f64) -> f64 {
        if c <= 0.0 {
            return 0.0;
        }
        match self {
            DistributionSpec::Uniform01 => {
                if c <= 1.0 {
                    c * c * c / 6.0
                } else {
                    1.0 / 6.0 + 0.5 * (c * c - 1.0) - 0.5 * (c - 1.0)
                }
            }
            DistributionSpec::Exponential { rate } => {
                0.5 * c * c - c / rate + (1.0 - (-rate * c).exp()) / (rate * rate)
            }
            DistributionSpec::Erlang { rate, stages } => {
                let k = *stages as f64;
                let mut acc = 0.5 * c * c - k * c / rate;
                for j in 1..=*stages {
                    acc += (*stages - j + 1) as f64 * erlang_cdf(*rate, j, c) / (rate * rate);
                }
                acc
            }
            DistributionSpec::MixedErlang { branches } => branches
                .iter()
                .map(|b| {
                    b.weight
                        * DistributionSpec::Erlang { rate: b.rate, stages: b.stages }
                            .twice_integrated_cdf(c)
                })
                .sum(),
            DistributionSpec::Deterministic { value } => {
                let d = (c - value).max(0.0);
                0.5 * d * d
            }
            DistributionSpec::Empirical { samples, prefix, prefix_sq } => {
                let m = samples.partition_point(|s| *s <= c);
                if m == 0 {
                    0.0
                } else {
                    let n = samples.len() as f64;
                    0.5 * (m as f64 * c * c - 2.0 * c * prefix[m - 1] + prefix_sq[m - 1]) / n
                }
            }
        }
    }

    /// Derivatives `alpha^(j)(s)` of the Laplace-Stieltjes transform
    /// `E[exp(-sX)]` for `j = 0..count`, where a closed form exists.
    pub fn lst_derivatives(&self, s: f64, count: usize) -> Result<Vec<f64>> {
        match self {
            DistributionSpec::Exponential { rate } => {
                Ok(erlang_lst_derivatives(*rate, 1, s, count))
            }
            DistributionSpec::Erlang { rate, stages } => {
                Ok(erlang_lst_derivatives(*rate, *stages, s, count))
            }
            DistributionSpec::MixedErlang { branches } => {
                let mut out = vec![0.0; count];
                for b in branches {
                    for (acc, d) in
                        out.iter_mut().zip(erlang_lst_derivatives(b.rate, b.stages, s, count))
                    {
                        *acc += b.weight * d;
                    }
                }
                Ok(out)
            }
            DistributionSpec::Deterministic { value } => {
                let e = (-s * value).exp();
                Ok((0..count).map(|j| (-value).powi(j as i32) * e).collect())
            }
            _ => Err(Error::Unsupported(format!(
                "no closed-form Laplace transform derivatives for {self:?}"
            ))),
        }
    }

    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        match self {
            DistributionSpec::Uniform01 => rng.uniform(),
            DistributionSpec::Exponential { rate } => rng.exponential::<f64>() / rate,
            DistributionSpec::Erlang { rate, stages } => {
                (0..*stages).map(|_| rng.exponential::<f64>()).sum::<f64>() / rate
            }
            DistributionSpec::MixedErlang { branches } => {
                let u: f64 = rng.uniform();
                let mut acc = 0.0;
                for b in branches {
                    acc += b.weight;
                    if u < acc {
                        return (0..b.stages).map(|_| rng.exponential::<f64>()).sum::<f64>()
                            / b.rate;
                    }
                }
                let b = branches.last().unwrap();
                (0..b.stages).map(|_| rng.exponential::<f64>()).sum::<f64>() / b.rate
            }
            DistributionSpec::Deterministic { value } => *value,
            DistributionSpec::Empirical { samples, .. } => {
                let u: f64 = rng.uniform();
                samples[(u * samples.len() as f64) as usize % samples.len()]
            }
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, DistributionSpec::Deterministic { .. })
    }

    /// Points where the CDF jumps (empty for continuous laws).
    pub fn jump_points(&self) -> Vec<f64> {
        match self {
            DistributionSpec::Deterministic { value } => vec![*value],
            DistributionSpec::Empirical { samples, .. } => {
                let mut v = samples.clone();
                v.dedup();
                v
            }
            _ => Vec::new(),
        }
    }

    /// True when the support is contained in `[0, 1)`, as the uniform
    /// rotation model requires.
    pub fn supported_on_unit_interval(&self) -> bool {
        match self {
            DistributionSpec::Uniform01 => true,
            DistributionSpec::Deterministic { value } => *value < 1.0,
            DistributionSpec::Empirical { samples, .. } => {
                samples.last().map(|s| *s < 1.0).unwrap_or(false)
            }
            _ => false,
        }
    }

    /// Short human-readable tag used in reports.
    pub fn label(&self) -> String {
        match self {
            DistributionSpec::Uniform01 => "uniform01".into(),
            DistributionSpec::Exponential { rate } => format!("exp:{rate}"),
            DistributionSpec::Erlang { rate, stages } => format!("erlang:{rate}:{stages}"),
            DistributionSpec::MixedErlang { branches } => {
                let parts: Vec<String> = branches
                    .iter()
                    .map(|b| format!("{}:{}:{}", b.weight, b.rate, b.stages))
                    .collect();
                format!("mixerlang:{}", parts.join(":"))
            }
            DistributionSpec::Deterministic { value } => format!("det:{value}"),
            DistributionSpec::Empirical { samples, .. } => {
                format!("empirical[{}]", samples.len())
            }
        }
    }
}

fn erlang_lst_derivatives(rate: f64, stages: usize, s: f64, count: usize) -> Vec<f64> {
    // alpha(s) = (rate / (rate + s))^k;
    // alpha^(j)(s) = (-1)^j rate^k (k + j - 1)! / (k - 1)! (rate + s)^-(k + j)
    let k = stages as f64;
    let base = rate + s;
    let mut out = Vec::with_capacity(count);
    let mut rising = 1.0; // (k)(k+1)...(k+j-1)
    for j in 0..count {
        if j > 0 {
            rising *= k + j as f64 - 1.0;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign * rising * rate.powi(stages as i32) / base.powi((stages + j) as i32));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_g_by_quadrature(d: &DistributionSpec, c: f64) {
        let steps = 20_000;
        let h = c / steps as f64;
        let mut acc = 0.0;
        for i in 0..steps {
            let x0 = i as f64 * h;
            acc += 0.5 * (d.cdf(x0) + d.cdf(x0 + h)) * h;
        }
        let got = d.integrated_cdf(c);
        // trapezoid across a CDF jump costs ~h/2, hence the loose bound
        assert!((acc - got).abs() < 1e-4, "{}: G({c}) = {got}, quadrature {acc}", d.label());
    }

    fn check_h_by_quadrature(d: &DistributionSpec, c: f64) {
        let steps = 20_000;
        let h = c / steps as f64;
        let mut acc = 0.0;
        for i in 0..steps {
            let x0 = i as f64 * h;
            acc += 0.5 * (d.integrated_cdf(x0) + d.integrated_cdf(x0 + h)) * h;
        }
        let got = d.twice_integrated_cdf(c);
        assert!((acc - got).abs() < 1e-4, "{}: H({c}) = {got}, quadrature {acc}", d.label());
    }

    fn all_families() -> Vec<DistributionSpec> {
        vec![
            DistributionSpec::Uniform01,
            DistributionSpec::exponential(1.7).unwrap(),
            DistributionSpec::erlang(2.0, 3).unwrap(),
            DistributionSpec::mixed_erlang(vec![
                ErlangBranch { weight: 0.3, rate: 1.0, stages: 1 },
                ErlangBranch { weight: 0.7, rate: 3.0, stages: 2 },
            ])
            .unwrap(),
            DistributionSpec::deterministic(0.4).unwrap(),
            DistributionSpec::empirical(vec![0.1, 0.25, 0.25, 0.8]).unwrap(),
        ]
    }

    #[test]
    fn integrated_cdfs_match_quadrature() {
        for d in all_families() {
            for c in [0.3, 0.9, 1.0, 1.7] {
                check_g_by_quadrature(&d, c);
                check_h_by_quadrature(&d, c);
            }
        }
    }

    #[test]
    fn means_and_variances_match_sampling() {
        let mut rng = RandomStream::new(8);
        for d in all_families() {
            let n = 200_000;
            let xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
            assert!(
                (mean - d.mean()).abs() < 0.01 * (1.0 + d.mean()),
                "{}: mean {mean} vs {}",
                d.label(),
                d.mean()
            );
            assert!(
                (var - d.variance()).abs() < 0.03 * (1.0 + d.variance()),
                "{}: var {var} vs {}",
                d.label(),
                d.variance()
            );
        }
    }

    #[test]
    fn lst_derivatives_match_finite_differences() {
        let ds = [
            DistributionSpec::exponential(1.3).unwrap(),
            DistributionSpec::erlang(2.0, 3).unwrap(),
            DistributionSpec::deterministic(0.7).unwrap(),
            DistributionSpec::mixed_erlang(vec![
                ErlangBranch { weight: 0.4, rate: 1.5, stages: 2 },
                ErlangBranch { weight: 0.6, rate: 2.5, stages: 1 },
            ])
            .unwrap(),
        ];
        let s = 0.9;
        let eps = 1e-4;
        for d in &ds {
            let derivs = d.lst_derivatives(s, 3).unwrap();
            // derivative j at s by central difference of derivative j-1
            for j in 1..3 {
                let up = d.lst_derivatives(s + eps, j).unwrap()[j - 1];
                let down = d.lst_derivatives(s - eps, j).unwrap()[j - 1];
                let fd = (up - down) / (2.0 * eps);
                assert!(
                    (fd - derivs[j]).abs() < 1e-5 * (1.0 + derivs[j].abs()),
                    "{}: d^{j} = {} vs fd {fd}",
                    d.label(),
                    derivs[j]
                );
            }
        }
        assert!(DistributionSpec::Uniform01.lst_derivatives(1.0, 1).is_err());
    }

    #[test]
    fn two_moment_fit_hits_mean_and_scv() {
        for &(mean, scv) in
            &[(1.0, 0.5), (1.0, 1.0), (1.0, 2.0), (0.4, 0.37), (2.5, 3.3), (1.0, 0.25)]
        {
            let d = DistributionSpec::with_mean_scv(mean, scv).unwrap();
            assert!((d.mean() - mean).abs() < 1e-10, "{}: mean", d.label());
            assert!((d.scv() - scv).abs() < 1e-9, "{}: scv {} vs {scv}", d.label(), d.scv());
        }
        assert!(DistributionSpec::with_mean_scv(0.0, 1.0).is_err());
    }

    #[test]
    fn empirical_cdf_is_the_step_function_of_the_sample() {
        let d = DistributionSpec::empirical(vec![0.5, 0.2, 0.2]).unwrap();
        assert_eq!(d.cdf(0.1), 0.0);
        assert!((d.cdf(0.2) - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.cdf_strict(0.2) - 0.0).abs() < 1e-15);
        assert_eq!(d.cdf(0.5), 1.0);
        assert_eq!(d.jump_points(), vec![0.2, 0.5]);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(DistributionSpec::exponential(0.0).is_err());
        assert!(DistributionSpec::erlang(1.0, 0).is_err());
        assert!(DistributionSpec::deterministic(-1.0).is_err());
        assert!(DistributionSpec::empirical(vec![]).is_err());
        assert!(DistributionSpec::mixed_erlang(vec![ErlangBranch {
            weight: 0.5,
            rate: 1.0,
            stages: 1
        }])
        .is_err());
    }
}
