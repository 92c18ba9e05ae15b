//! Distributional identities between planned routes, closed-form laws
//! and representation samplers.

use carousel_core::laws::{
    ni_mean, sample_mstep_representation, sample_ni_representation, turn_independence_table,
    LimitFunctional, LimitKind, NiLaw,
};
use carousel_core::numerics::ks::{ks_against_cdf_with, ks_two_sample_with, sorted};
use carousel_core::numerics::rng::RandomStream;
use carousel_core::numerics::stats::{chi_square_independence, mean_and_se};
use carousel_core::parallel::batch_map;
use carousel_core::strategies::{sample_routes, sample_travel_times, StrategySpec};

#[test]
fn clockwise_travel_time_follows_the_power_law() {
    let base = RandomStream::new(11);
    let times = sample_travel_times::<f64>(2, StrategySpec::ClockwiseOnly, 100_000, &base, 2);
    let report = ks_against_cdf_with(&times, |t| t * t, 0.01).unwrap();
    assert!(report.passed, "KS {}", report.statistic);
}

#[test]
fn nearest_item_times_follow_the_closed_form_law() {
    let n = 3;
    let law = NiLaw::new(n).unwrap();
    let base = RandomStream::new(12);
    let times = sample_travel_times::<f64>(n, StrategySpec::NearestItem, 100_000, &base, 2);
    let report = ks_against_cdf_with(&times, |t| law.cdf(t).unwrap(), 0.01).unwrap();
    assert!(report.passed, "KS {}", report.statistic);
}

#[test]
fn spacing_representation_reproduces_the_nearest_item_law() {
    let n = 4;
    let base = RandomStream::new(13);
    let direct = sample_travel_times::<f64>(n, StrategySpec::NearestItem, 100_000, &base, 2);
    let rep_base = RandomStream::new(14);
    let rep = sorted(batch_map(&rep_base, 100_000, 2, |_, rng| {
        sample_ni_representation::<f64>(n, rng).unwrap()
    }));
    let report = ks_two_sample_with(&direct, &rep, 0.01).unwrap();
    assert!(report.passed, "KS {}", report.statistic);
}

#[test]
fn exponential_representation_reproduces_the_mstep_law() {
    let (n, m) = (5, 2);
    let base = RandomStream::new(15);
    let direct = sample_travel_times::<f64>(n, StrategySpec::MStep(m), 100_000, &base, 2);
    let rep_base = RandomStream::new(16);
    let rep = sorted(batch_map(&rep_base, 100_000, 2, |_, rng| {
        sample_mstep_representation::<f64>(n, m, rng).unwrap()
    }));
    let report = ks_two_sample_with(&direct, &rep, 0.01).unwrap();
    assert!(report.passed, "KS {}", report.statistic);
}

#[test]
fn two_step_beats_nearest_item_on_average_for_five_items() {
    let samples = 200_000;
    let base_m = RandomStream::new(17);
    let mstep: Vec<f64> =
        sample_travel_times::<f64>(5, StrategySpec::MStep(2), samples, &base_m, 2);
    let base_n = RandomStream::new(18);
    let ni: Vec<f64> = sample_travel_times::<f64>(5, StrategySpec::NearestItem, samples, &base_n, 2);
    let (m_mean, m_se) = mean_and_se(&mstep);
    let (n_mean, n_se) = mean_and_se(&ni);
    let se = (m_se * m_se + n_se * n_se).sqrt();
    assert!(
        n_mean - m_mean > 3.0 * se,
        "mstep {m_mean} vs nearest-item {n_mean} (se {se})"
    );
    assert!((n_mean - ni_mean(5)).abs() < 3.0 * n_se);
}

#[test]
fn travel_time_and_turn_count_are_independent_under_nearest_item() {
    let base = RandomStream::new(19);
    let samples = sample_routes::<f64>(5, StrategySpec::NearestItem, 100_000, &base, 2);
    let table = turn_independence_table(&samples, 10).unwrap();
    let report = chi_square_independence(&table, 0.01, 5.0).unwrap();
    assert!(
        !report.rejected,
        "chi2 {} > {} at df {}",
        report.statistic, report.critical_value, report.degrees_of_freedom
    );
}

#[test]
fn steps_before_turn_approach_the_shifted_geometric_law() {
    let n = 100;
    let samples = 50_000;
    let base = RandomStream::new(20);
    let routes = sample_routes::<f64>(n, StrategySpec::Optimal, samples, &base, 2);
    let no_turn = routes.iter().filter(|r| r.steps_before_turn.is_none()).count() as f64
        / samples as f64;
    let one_step = routes.iter().filter(|r| r.steps_before_turn == Some(1)).count() as f64
        / samples as f64;
    assert!((no_turn - 0.5).abs() < 0.015, "P(no turn) = {no_turn}");
    assert!((one_step - 0.25).abs() < 0.015, "P(one step) = {one_step}");
}

#[test]
fn scaled_shortfall_converges_to_the_limit_functionals() {
    let n = 200;
    let samples = 50_000;
    let scale = (n + 1) as f64;

    let base = RandomStream::new(21);
    let ni_short = sorted(
        sample_travel_times::<f64>(n, StrategySpec::NearestItem, samples, &base, 2)
            .into_iter()
            .map(|t| scale * (1.0 - t))
            .collect(),
    );
    let ni_limit = LimitFunctional::new(LimitKind::NiLimit).unwrap();
    let lim_base = RandomStream::new(22);
    let ni_lim_draws = sorted(batch_map(&lim_base, samples, 2, |_, rng| ni_limit.sample(rng)));
    let report = ks_two_sample_with(&ni_short, &ni_lim_draws, 0.02).unwrap();
    assert!(report.passed, "nearest-item limit KS {}", report.statistic);

    let base = RandomStream::new(23);
    let opt_short = sorted(
        sample_travel_times::<f64>(n, StrategySpec::Optimal, samples, &base, 2)
            .into_iter()
            .map(|t| scale * (1.0 - t))
            .collect(),
    );
    let opt_limit = LimitFunctional::new(LimitKind::OptLimit).unwrap();
    let lim_base = RandomStream::new(24);
    let opt_lim_draws = sorted(batch_map(&lim_base, samples, 2, |_, rng| opt_limit.sample(rng)));
    let report = ks_two_sample_with(&opt_short, &opt_lim_draws, 0.02).unwrap();
    assert!(report.passed, "optimal limit KS {}", report.statistic);
}
