//! Closed-form travel-time laws and their samplers.
//!
//! The nearest-item CDF is an alternating sum whose coefficient products
//! grow geometrically in opposite signs; double precision survives only
//! for small orders, so evaluation is generic over [`ExactScalar`] and
//! switches to exact rationals past a safe limit.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numerics::rng::RandomStream;
use crate::real::{ExactScalar, Real};
use crate::spacings::spacings_via_exponentials;
use crate::strategies::StrategySpec;

/// Largest order evaluated directly in `f64`; cross-checked against the
/// rational path in the test suite with two orders of margin.
pub const NI_F64_SAFE_LIMIT: usize = 20;

/// Largest order the `f64`-facing entry point will evaluate at all (via
/// rationals); beyond it the caller must use [`ni_cdf_rational`].
pub const NI_RATIONAL_LIMIT: usize = 64;

/// CDF of the clockwise-sweep travel time: `t^n` on `[0, 1]`.
pub fn cw_cdf(n: usize, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("cw_cdf requires n >= 1"));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::invalid(format!("t = {t} outside [0, 1]")));
    }
    Ok(t.powi(n as i32))
}

/// Mean clockwise travel time, `n / (n + 1)`.
pub fn cw_mean(n: usize) -> f64 {
    n as f64 / (n + 1) as f64
}

/// Mean nearest-item travel time, `(n - 1 + 2^-n) / (n + 1)`.
pub fn ni_mean(n: usize) -> f64 {
    (n as f64 - 1.0 + 0.5f64.powi(n as i32)) / (n + 1) as f64
}

/// Mixture coefficients `prod_{j != i} 2^j / (2^j - 2^i)` of the
/// nearest-item CDF, in any exact-capable scalar.
pub fn ni_coefficients<S: ExactScalar>(n: usize) -> Vec<S> {
    (0..=n)
        .map(|i| {
            let p2i = S::two_pow(i as u32);
            let mut c = S::one();
            for j in 0..=n {
                if j != i {
                    let p2j = S::two_pow(j as u32);
                    c = c * p2j.clone() / (p2j - p2i.clone());
                }
            }
            c
        })
        .collect()
}

fn ni_cdf_eval<S: ExactScalar>(n: usize, t: &S, coefs: &[S]) -> S {
    let mut acc = S::zero();
    for (i, coef) in coefs.iter().enumerate() {
        let p2i = S::two_pow(i as u32);
        let base = p2i.clone() * t.clone() - p2i + S::one();
        if base > S::zero() {
            let mut pow = S::one();
            for _ in 0..n {
                pow = pow * base.clone();
            }
            acc = acc + pow * coef.clone();
        }
    }
    acc
}

/// The nearest-item travel-time law for a fixed order size.
#[derive(Debug, Clone)]
pub struct NiLaw {
    n: usize,
    coef_f64: Option<Vec<f64>>,
}

impl NiLaw {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("nearest-item law requires n >= 1"));
        }
        let coef_f64 = (n <= NI_F64_SAFE_LIMIT).then(|| ni_coefficients::<f64>(n));
        Ok(Self { n, coef_f64 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// CDF at `t`: fast `f64` up to [`NI_F64_SAFE_LIMIT`], exact rational
    /// (with a final conversion) up to [`NI_RATIONAL_LIMIT`], and a
    /// precision error beyond.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("t = {t} outside [0, 1]")));
        }
        // the law is constant 1 from the support endpoint 1 - 2^-n on
        if self.n < 54 && t >= 1.0 - 0.5f64.powi(self.n as i32) {
            return Ok(1.0);
        }
        if let Some(coefs) = &self.coef_f64 {
            // clamp rounding noise near the endpoints
            return Ok(ni_cdf_eval(self.n, &t, coefs).clamp(0.0, 1.0));
        }
        if self.n > NI_RATIONAL_LIMIT {
            return Err(Error::Precision(format!(
                "nearest-item CDF at n = {} exceeds the configured limit {}; \
                 use the rational evaluation directly",
                self.n, NI_RATIONAL_LIMIT
            )));
        }
        let tr = BigRational::from_f64_value(t);
        Ok(self.cdf_rational(&tr).to_f64_value().clamp(0.0, 1.0))
    }

    /// Exact rational CDF at a rational `t` in `[0, 1]`.
    pub fn cdf_rational(&self, t: &BigRational) -> BigRational {
        let coefs = ni_coefficients::<BigRational>(self.n);
        ni_cdf_eval(self.n, t, &coefs)
    }

    pub fn mean(&self) -> f64 {
        ni_mean(self.n)
    }

    /// Exact mean obtained by integrating the CDF termwise:
    /// `1 - sum_i coef_i / (2^i (n + 1))`.
    pub fn mean_rational(&self) -> BigRational {
        let n = self.n;
        let coefs = ni_coefficients::<BigRational>(n);
        let np1 = BigRational::from_integer((n as i64 + 1).into());
        let mut integral = BigRational::zero_();
        for (i, c) in coefs.iter().enumerate() {
            integral = integral + c / (BigRational::two_pow(i as u32) * np1.clone());
        }
        BigRational::one_() - integral
    }
}

// small constructors kept off the public trait
trait RationalExt {
    fn zero_() -> Self;
    fn one_() -> Self;
}

impl RationalExt for BigRational {
    fn zero_() -> Self {
        num_traits::Zero::zero()
    }
    fn one_() -> Self {
        num_traits::One::one()
    }
}

/// Convenience: nearest-item CDF without keeping a law value around.
pub fn ni_cdf(n: usize, t: f64) -> Result<f64> {
    NiLaw::new(n)?.cdf(t)
}

/// Exact nearest-item CDF in rational arithmetic.
pub fn ni_cdf_rational(n: usize, t: &BigRational) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::invalid("nearest-item law requires n >= 1"));
    }
    Ok(NiLaw::new(n)?.cdf_rational(t))
}

/// A travel-time law with an evaluable CDF and a closed-form mean.
#[derive(Debug, Clone)]
pub enum TravelTimeLaw {
    Clockwise { n: usize },
    NearestItem(NiLaw),
}

impl TravelTimeLaw {
    pub fn clockwise(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("law requires n >= 1"));
        }
        Ok(TravelTimeLaw::Clockwise { n })
    }

    pub fn nearest_item(n: usize) -> Result<Self> {
        Ok(TravelTimeLaw::NearestItem(NiLaw::new(n)?))
    }

    pub fn strategy(&self) -> StrategySpec {
        match self {
            TravelTimeLaw::Clockwise { .. } => StrategySpec::ClockwiseOnly,
            TravelTimeLaw::NearestItem(_) => StrategySpec::NearestItem,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            TravelTimeLaw::Clockwise { n } => *n,
            TravelTimeLaw::NearestItem(law) => law.n(),
        }
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        match self {
            TravelTimeLaw::Clockwise { n } => cw_cdf(*n, t),
            TravelTimeLaw::NearestItem(law) => law.cdf(t),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            TravelTimeLaw::Clockwise { n } => cw_mean(*n),
            TravelTimeLaw::NearestItem(law) => law.mean(),
        }
    }
}

/// One draw of the nearest-item spacing representation
/// `sum_{i=1..n} (1 - 2^-i) D_{i,n}`.
pub fn sample_ni_representation<T: Real>(n: usize, rng: &mut RandomStream) -> Result<T> {
    if n == 0 {
        return Err(Error::invalid("representation requires n >= 1"));
    }
    let (d, _) = spacings_via_exponentials::<T>(n, rng);
    let half = T::from_f64_lossy(0.5);
    let mut coef = T::one();
    let mut acc = T::zero();
    for i in 0..n {
        coef *= half; // 2^-(i+1)
        acc += (T::one() - coef) * d.values()[i];
    }
    Ok(acc)
}

/// One draw of the m-step exponential representation
/// `1 - max(sum_j X_j / (2^j - 1), sum_j X_{n+2-j} / (2^j - 1)) / S_{n+1}`,
/// valid for `2m < n`.
pub fn sample_mstep_representation<T: Real>(
    n: usize,
    m: usize,
    rng: &mut RandomStream,
) -> Result<T> {
    if 2 * m >= n {
        return Err(Error::invalid(format!(
            "m-step representation requires 2m < n (got m = {m}, n = {n}); \
             use direct route enumeration instead"
        )));
    }
    let draws: Vec<T> = (0..n + 1).map(|_| rng.exponential()).collect();
    let total: T = draws.iter().cloned().sum();
    let mut head = T::zero();
    let mut tail = T::zero();
    let mut denom_pow = T::one();
    let two = T::one() + T::one();
    for j in 1..=m + 1 {
        denom_pow *= two; // 2^j
        let w = T::one() / (denom_pow - T::one());
        head += w * draws[j - 1];
        tail += w * draws[n + 1 - j];
    }
    Ok(T::one() - head.max(tail) / total)
}

/// Large-order limit functionals of the scaled shortfall
/// `(n + 1)(1 - T_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitKind {
    /// `sum q^{j-1} X_j` for `q` in `(0, 1)`.
    IQ(f64),
    /// Nearest-item limit: the `q = 1/2` functional.
    NiLimit,
    /// Optimal-route limit: max of two independent `sum X_j / (2^j - 1)`.
    OptLimit,
}

/// A truncated limit-functional sampler; the truncation keeps the
/// discarded tail mean below `1e-12`.
#[derive(Debug, Clone, Copy)]
pub struct LimitFunctional {
    kind: LimitKind,
    truncation_terms: usize,
}

const LIMIT_TAIL_BOUND: f64 = 1e-12;

impl LimitFunctional {
    pub fn new(kind: LimitKind) -> Result<Self> {
        let truncation_terms = match kind {
            LimitKind::IQ(q) => {
                if !(0.0 < q && q < 1.0) {
                    return Err(Error::invalid(format!("q = {q} outside (0, 1)")));
                }
                // q^K / (1 - q) < bound
                let mut k = 1usize;
                let tail = 1.0 / (1.0 - q);
                while tail * q.powi(k as i32) >= LIMIT_TAIL_BOUND {
                    k += 1;
                }
                k
            }
            LimitKind::NiLimit => Self::new(LimitKind::IQ(0.5))?.truncation_terms,
            LimitKind::OptLimit => {
                let mut k = 1usize;
                loop {
                    let tail: f64 = (k + 1..k + 200).map(|j| 1.0 / (2f64.powi(j as i32) - 1.0)).sum();
                    if tail < LIMIT_TAIL_BOUND {
                        break k;
                    }
                    k += 1;
                }
            }
        };
        Ok(Self { kind, truncation_terms })
    }

    pub fn kind(&self) -> LimitKind {
        self.kind
    }

    pub fn truncation_terms(&self) -> usize {
        self.truncation_terms
    }

    /// Mean of the truncated functional where it is a plain geometric
    /// series; `None` for the max-of-two optimal limit.
    pub fn mean(&self) -> Option<f64> {
        match self.kind {
            LimitKind::IQ(q) => Some((1.0 - q.powi(self.truncation_terms as i32)) / (1.0 - q)),
            LimitKind::NiLimit => Some(2.0 * (1.0 - 0.5f64.powi(self.truncation_terms as i32))),
            LimitKind::OptLimit => None,
        }
    }

    pub fn sample<T: Real>(&self, rng: &mut RandomStream) -> T {
        match self.kind {
            LimitKind::IQ(q) => self.geometric_sum(T::from_f64_lossy(q), rng),
            LimitKind::NiLimit => self.geometric_sum(T::from_f64_lossy(0.5), rng),
            LimitKind::OptLimit => {
                let a: T = self.mstep_tail_sum(rng);
                let b: T = self.mstep_tail_sum(rng);
                a.max(b)
            }
        }
    }

    fn geometric_sum<T: Real>(&self, q: T, rng: &mut RandomStream) -> T {
        let mut acc = T::zero();
        let mut coef = T::one();
        for _ in 0..self.truncation_terms {
            acc += coef * rng.exponential();
            coef *= q;
        }
        acc
    }

    fn mstep_tail_sum<T: Real>(&self, rng: &mut RandomStream) -> T {
        let two = T::one() + T::one();
        let mut pow = T::one();
        let mut acc = T::zero();
        for _ in 0..self.truncation_terms {
            pow *= two;
            acc += rng.exponential::<T>() / (pow - T::one());
        }
        acc
    }
}

/// Contingency table of binned travel time (equiprobable bins from the
/// sample itself) against turn count, for the independence check.
pub fn turn_independence_table(
    samples: &[crate::strategies::RouteSample<f64>],
    time_bins: usize,
) -> Result<Vec<Vec<u64>>> {
    if samples.is_empty() || time_bins < 2 {
        return Err(Error::invalid("need samples and at least two bins"));
    }
    let mut times: Vec<f64> = samples.iter().map(|s| s.travel_time).collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = times.len();
    let edges: Vec<f64> = (1..time_bins).map(|k| times[k * n / time_bins]).collect();
    let max_turns = samples.iter().map(|s| s.turns).max().unwrap_or(0);

    let mut table = vec![vec![0u64; max_turns + 1]; time_bins];
    for s in samples {
        let bin = edges.partition_point(|e| *e <= s.travel_time);
        table[bin][s.turns] += 1;
    }
    Ok(table)
}
