//! Distributional checks of the spacing construction: the normalized
//! exponential vector has the law of the uniform spacings, coordinate by
//! coordinate, and the spacing vector is exchangeable.

use carousel_core::numerics::ks::{ks_two_sample, sorted};
use carousel_core::numerics::rng::RandomStream;
use carousel_core::spacings::{sample_order, spacings, spacings_via_exponentials};

const SAMPLES: usize = 100_000;
const N: usize = 5;

fn spacing_marginals_from_orders(coord: usize, seed: u64) -> Vec<f64> {
    let mut rng = RandomStream::new(seed);
    sorted(
        (0..SAMPLES)
            .map(|_| {
                let inst = sample_order::<f64>(N, &mut rng);
                spacings(&inst).values()[coord]
            })
            .collect(),
    )
}

fn spacing_marginals_from_exponentials(coord: usize, seed: u64) -> Vec<f64> {
    let mut rng = RandomStream::new(seed);
    sorted(
        (0..SAMPLES)
            .map(|_| spacings_via_exponentials::<f64>(N, &mut rng).0.values()[coord])
            .collect(),
    )
}

#[test]
fn exponential_ratio_construction_matches_sorted_gaps_marginally() {
    for coord in [0usize, N / 2, N] {
        let a = spacing_marginals_from_orders(coord, 101);
        let b = spacing_marginals_from_exponentials(coord, 202);
        let report = ks_two_sample(&a, &b).unwrap();
        assert!(
            report.passed,
            "coordinate {coord}: KS {} >= {}",
            report.statistic, report.threshold
        );
    }
}

#[test]
fn first_and_last_spacings_are_exchangeable() {
    let first = spacing_marginals_from_orders(0, 303);
    let last = spacing_marginals_from_orders(N, 404);
    let report = ks_two_sample(&first, &last).unwrap();
    assert!(report.passed, "KS {} >= {}", report.statistic, report.threshold);
}

#[test]
fn sorted_positions_have_the_uniform_order_statistics_law() {
    // the k-th order statistic of n uniforms is Beta(k, n - k + 1);
    // check the minimum: P(U_(1) <= t) = 1 - (1 - t)^n
    let mut rng = RandomStream::new(505);
    let xs = sorted(
        (0..SAMPLES)
            .map(|_| sample_order::<f64>(N, &mut rng).sorted_positions()[0])
            .collect(),
    );
    let report =
        carousel_core::numerics::ks::ks_against_cdf(&xs, |t| 1.0 - (1.0 - t).powi(N as i32))
            .unwrap();
    assert!(report.passed, "KS {} >= {}", report.statistic, report.threshold);
}
