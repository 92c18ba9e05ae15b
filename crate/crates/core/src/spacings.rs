//! Order instances on the unit-circumference carousel and their uniform
//! spacings, including the exponential-ratio construction.

use crate::error::{Error, Result};
use crate::numerics::rng::RandomStream;
use crate::real::Real;

/// An order of `n` items placed on the unit circle; the picker starts at
/// the origin. Duplicate positions are legal.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderInstance<T> {
    positions: Vec<T>,
}

impl<T: Real> OrderInstance<T> {
    /// Validates that every position lies in `[0, 1)`.
    pub fn new(positions: Vec<T>) -> Result<Self> {
        for (i, &u) in positions.iter().enumerate() {
            if !(u >= T::zero() && u < T::one()) {
                return Err(Error::invalid(format!(
                    "position {i} = {u} lies outside [0, 1)"
                )));
            }
        }
        Ok(Self { positions })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    /// Positions sorted ascending, paired with their original item index.
    pub fn sorted_with_indices(&self) -> Vec<(T, usize)> {
        let mut v: Vec<(T, usize)> =
            self.positions.iter().cloned().zip(0..self.positions.len()).collect();
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("positions are finite").then(a.1.cmp(&b.1)));
        v
    }

    pub fn sorted_positions(&self) -> Vec<T> {
        self.sorted_with_indices().into_iter().map(|(u, _)| u).collect()
    }
}

/// The `n + 1` gaps cut by an order instance, origin and full circle as
/// sentinels. Entries are non-negative and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingVector<T> {
    spacings: Vec<T>,
}

impl<T: Real> SpacingVector<T> {
    pub fn values(&self) -> &[T] {
        &self.spacings
    }

    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }

    pub fn sum(&self) -> T {
        self.spacings.iter().cloned().sum()
    }
}

/// Unit exponentials and their partial sums backing a spacing draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialRepresentation<T> {
    raw: Vec<T>,
    partial_sums: Vec<T>,
}

impl<T: Real> ExponentialRepresentation<T> {
    pub fn raw(&self) -> &[T] {
        &self.raw
    }

    pub fn partial_sums(&self) -> &[T] {
        &self.partial_sums
    }

    pub fn total(&self) -> T {
        *self.partial_sums.last().expect("at least one draw")
    }
}

/// Draws `n` iid uniform positions.
pub fn sample_order<T: Real>(n: usize, rng: &mut RandomStream) -> OrderInstance<T> {
    let positions = (0..n).map(|_| rng.uniform()).collect();
    OrderInstance { positions }
}

/// Gaps between consecutive sorted positions, with `0` and `1` as
/// sentinels: `D_i = u_(i) - u_(i-1)`.
pub fn spacings<T: Real>(instance: &OrderInstance<T>) -> SpacingVector<T> {
    let sorted = instance.sorted_positions();
    let mut out = Vec::with_capacity(sorted.len() + 1);
    let mut prev = T::zero();
    for &u in &sorted {
        out.push(u - prev);
        prev = u;
    }
    out.push(T::one() - prev);
    SpacingVector { spacings: out }
}

/// Draws a spacing vector through the exponential construction:
/// `n + 1` unit exponentials, each divided by their total.
pub fn spacings_via_exponentials<T: Real>(
    n: usize,
    rng: &mut RandomStream,
) -> (SpacingVector<T>, ExponentialRepresentation<T>) {
    let raw: Vec<T> = (0..n + 1).map(|_| rng.exponential()).collect();
    let mut partial_sums = Vec::with_capacity(raw.len());
    let mut acc = T::zero();
    for &x in &raw {
        acc += x;
        partial_sums.push(acc);
    }
    let total = acc;
    let spacings = raw.iter().map(|&x| x / total).collect();
    (SpacingVector { spacings }, ExponentialRepresentation { raw, partial_sums })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ks::{ks_against_cdf, sorted};

    #[test]
    fn spacing_arithmetic_matches_hand_values() {
        let inst = OrderInstance::new(vec![0.3, 0.7]).unwrap();
        let d = spacings(&inst);
        let expect = [0.3f64, 0.4, 0.3];
        for (got, want) in d.values().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_order_has_the_full_circle_as_one_spacing() {
        let inst = OrderInstance::<f64>::new(vec![]).unwrap();
        assert_eq!(spacings(&inst).values(), &[1.0]);
    }

    #[test]
    fn duplicate_positions_keep_zero_spacings() {
        let inst = OrderInstance::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(spacings(&inst).values(), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn positions_outside_unit_interval_are_rejected() {
        assert!(OrderInstance::new(vec![1.0]).is_err());
        assert!(OrderInstance::new(vec![-0.1]).is_err());
        assert!(OrderInstance::new(vec![0.2, 1.5]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let mut a = RandomStream::new(77);
        let mut b = RandomStream::new(77);
        assert_eq!(sample_order::<f64>(10, &mut a), sample_order::<f64>(10, &mut b));
    }

    #[test]
    fn sampled_positions_look_uniform() {
        let mut rng = RandomStream::new(123);
        let inst = sample_order::<f64>(100_000, &mut rng);
        let xs = sorted(inst.positions().to_vec());
        let report = ks_against_cdf_threshold(&xs);
        assert!(report < 0.01, "KS statistic {report}");
    }

    fn ks_against_cdf_threshold(xs: &[f64]) -> f64 {
        ks_against_cdf(xs, |x| x).unwrap().statistic
    }

    #[test]
    fn exponential_construction_sums_to_one() {
        let mut rng = RandomStream::new(9);
        for n in [0usize, 1, 5, 40] {
            let (d, rep) = spacings_via_exponentials::<f64>(n, &mut rng);
            assert_eq!(d.len(), n + 1);
            assert_eq!(rep.raw().len(), n + 1);
            assert!((d.sum() - 1.0).abs() < 1e-12);
            assert!(rep.partial_sums().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn works_in_single_precision_too() {
        let mut rng = RandomStream::new(4);
        let inst = sample_order::<f32>(50, &mut rng);
        let d = spacings(&inst);
        assert!((d.sum() - 1.0f32).abs() < 1e-5);
    }
}
