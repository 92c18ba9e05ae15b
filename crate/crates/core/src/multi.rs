//! A single picker serving `r >= 2` carousels cyclically, and the
//! non-alternating (machine-repair) variant where the picker serves
//! whichever carousel becomes ready first.
//!
//! Cyclic service generalizes the two-carousel recursion: the wait at a
//! carousel is its rotation time minus the picks and waits spent at the
//! other `r - 1` carousels since its last visit, clamped at zero.

use crate::error::{Error, Result};
use crate::numerics::rng::RandomStream;
use crate::numerics::stats::batch_means;
use crate::queue::dist::DistributionSpec;

/// Cyclic-service model configuration.
#[derive(Debug, Clone)]
pub struct MultiCarouselConfig {
    pub carousels: usize,
    pub pick: DistributionSpec,
    pub rotation: DistributionSpec,
    pub steps: usize,
    pub burn_in: usize,
}

/// Post-burn-in summary of a cyclic run.
#[derive(Debug, Clone)]
pub struct CyclicSummary {
    pub carousels: usize,
    pub steps: usize,
    pub burn_in: usize,
    pub mean_wait: f64,
    pub se_mean_wait: f64,
    pub pi0: f64,
    /// Picks per unit time, `1 / (mean wait + mean pick)`.
    pub throughput: f64,
    pub per_carousel_throughput: f64,
    /// Fraction of time the picker spends picking.
    pub picker_utilization: f64,
}

fn window_check(steps: usize, burn_in: usize) -> Result<()> {
    if steps <= burn_in {
        return Err(Error::invalid(format!("steps ({steps}) must exceed burn-in ({burn_in})")));
    }
    Ok(())
}

/// Simulates the cyclic model, returning post-burn-in waits and a
/// summary. For `r = 2` the path is bit-identical to
/// `queue::simulate_waits` under the same stream (same recursion, same
/// sampling order: rotation before pick at every step).
pub fn simulate_cyclic(
    config: &MultiCarouselConfig,
    rng: &mut RandomStream,
) -> Result<(Vec<f64>, CyclicSummary)> {
    let r = config.carousels;
    if r < 2 {
        return Err(Error::invalid(format!("cyclic model needs r >= 2 carousels, got {r}")));
    }
    window_check(config.steps, config.burn_in)?;

    // ring buffer of W_j + A_j for the last r - 1 services
    let mut history = vec![0.0f64; r - 1];
    let mut slot = 0usize;
    let mut window = Vec::with_capacity(config.steps - config.burn_in);
    let (mut sum_w, mut sum_a, mut zeros) = (0.0f64, 0.0f64, 0usize);
    for n in 1..=config.steps {
        let b = config.rotation.sample(rng);
        let behind: f64 = history.iter().sum();
        let w = (b - behind).max(0.0);
        let a = config.pick.sample(rng);
        history[slot] = w + a;
        slot = (slot + 1) % (r - 1);
        if n > config.burn_in {
            window.push(w);
            sum_w += w;
            sum_a += a;
            if w == 0.0 {
                zeros += 1;
            }
        }
    }
    let n = window.len() as f64;
    let mean_wait = sum_w / n;
    let mean_pick = sum_a / n;
    let throughput = 1.0 / (mean_wait + mean_pick);
    let (_, se_mean_wait) = batch_means(&window, 100);
    let summary = CyclicSummary {
        carousels: r,
        steps: config.steps,
        burn_in: config.burn_in,
        mean_wait,
        se_mean_wait,
        pi0: zeros as f64 / n,
        throughput,
        per_carousel_throughput: throughput / r as f64,
        picker_utilization: mean_pick / (mean_pick + mean_wait),
    };
    Ok((window, summary))
}

/// Post-burn-in summary of a machine-repair (non-alternating) run.
#[derive(Debug, Clone)]
pub struct RepairSummary {
    pub steps: usize,
    pub burn_in: usize,
    pub mean_wait: f64,
    pub se_mean_wait: f64,
    pub pi0: f64,
    pub throughput: f64,
    /// Event-clock identity: end time minus total picks and waits over
    /// the whole run (zero up to rounding).
    pub clock_defect: f64,
}

/// Two carousels rotate independently; the picker serves ready items in
/// first-come-first-served order (ties to the lower index) and may pick
/// twice in a row at the same carousel. Both carousels start rotating at
/// time zero; a carousel starts its next rotation the moment its pick
/// completes.
pub fn simulate_machine_repair(
    pick: &DistributionSpec,
    rotation: &DistributionSpec,
    steps: usize,
    burn_in: usize,
    rng: &mut RandomStream,
) -> Result<(Vec<f64>, RepairSummary)> {
    window_check(steps, burn_in)?;
    let mut ready = [rotation.sample(rng), rotation.sample(rng)];
    let mut now = 0.0f64;
    let mut window = Vec::with_capacity(steps - burn_in);
    let (mut sum_w, mut sum_a, mut zeros) = (0.0f64, 0.0f64, 0usize);
    let (mut total_w, mut total_a) = (0.0f64, 0.0f64);
    for n in 1..=steps {
        let c = if ready[0] <= ready[1] { 0 } else { 1 };
        let w = (ready[c] - now).max(0.0);
        let a = pick.sample(rng);
        now = now + w + a;
        ready[c] = now + rotation.sample(rng);
        total_w += w;
        total_a += a;
        if n > burn_in {
            window.push(w);
            sum_w += w;
            sum_a += a;
            if w == 0.0 {
                zeros += 1;
            }
        }
    }
    let n = window.len() as f64;
    let (_, se_mean_wait) = batch_means(&window, 100);
    let summary = RepairSummary {
        steps,
        burn_in,
        mean_wait: sum_w / n,
        se_mean_wait,
        pi0: zeros as f64 / n,
        throughput: 1.0 / (sum_w / n + sum_a / n),
        clock_defect: (now - total_w - total_a).abs(),
    };
    Ok((window, summary))
}

/// Side-by-side summary of the alternating and non-alternating models.
#[derive(Debug, Clone)]
pub struct DisciplineSummary {
    pub mean_wait: f64,
    pub se_mean_wait: f64,
    pub pi0: f64,
    pub se_pi0: f64,
    pub throughput: f64,
    pub per_carousel_throughput: f64,
}

/// Mean cumulative waits up to a checkpoint, across replications.
#[derive(Debug, Clone, Copy)]
pub struct PartialSumComparison {
    pub checkpoint: usize,
    pub alternating_mean: f64,
    pub non_alternating_mean: f64,
    /// alternating minus non-alternating.
    pub diff: f64,
    pub diff_std_error: f64,
}

#[derive(Debug, Clone)]
pub struct DisciplineComparison {
    pub alternating: DisciplineSummary,
    pub non_alternating: DisciplineSummary,
    pub partial_sums: Vec<PartialSumComparison>,
    /// Confidence level the `se` fields are meant to gate at.
    pub confidence: f64,
}

fn discipline_summary(window: &[f64], mean_pick: f64) -> DisciplineSummary {
    let (mean_wait, se_mean_wait) = batch_means(window, 100);
    let zeros: Vec<f64> = window.iter().map(|w| if *w == 0.0 { 1.0 } else { 0.0 }).collect();
    let (pi0, se_pi0) = batch_means(&zeros, 100);
    let throughput = 1.0 / (mean_wait + mean_pick);
    DisciplineSummary {
        mean_wait,
        se_mean_wait,
        pi0,
        se_pi0,
        throughput,
        per_carousel_throughput: throughput / 2.0,
    }
}

/// Runs both two-carousel disciplines on long windows (batch-means
/// standard errors) and compares mean partial waiting-time sums at the
/// given checkpoints across `replications` fresh substream pairs, using
/// common random numbers between the two models within a replication.
pub fn compare_disciplines(
    pick: &DistributionSpec,
    rotation: &DistributionSpec,
    steps: usize,
    burn_in: usize,
    replications: usize,
    checkpoints: &[usize],
    rng: &RandomStream,
    threads: usize,
) -> Result<DisciplineComparison> {
    window_check(steps, burn_in)?;
    if replications < 2 {
        return Err(Error::invalid("need at least two replications"));
    }

    let config = MultiCarouselConfig {
        carousels: 2,
        pick: pick.clone(),
        rotation: rotation.clone(),
        steps,
        burn_in,
    };
    let mut alt_rng = rng.substream(0);
    let (alt_window, _) = simulate_cyclic(&config, &mut alt_rng)?;
    let mut rep_rng = rng.substream(1);
    let (rep_window, _) = simulate_machine_repair(pick, rotation, steps, burn_in, &mut rep_rng)?;
    let alternating = discipline_summary(&alt_window, pick.mean());
    let non_alternating = discipline_summary(&rep_window, pick.mean());

    let mut checkpoints = checkpoints.to_vec();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let horizon = *checkpoints.last().ok_or_else(|| Error::invalid("no checkpoints"))?;

    // per replication: cumulative waits of both models at each
    // checkpoint, from a shared substream (common random numbers)
    let sums: Vec<(Vec<f64>, Vec<f64>)> =
        crate::parallel::batch_map(rng, replications, threads, |_, sub| {
            let mut a_rng = sub.substream(0);
            let mut n_rng = sub.substream(0);
            let cfg = MultiCarouselConfig {
                carousels: 2,
                pick: pick.clone(),
                rotation: rotation.clone(),
                steps: horizon,
                burn_in: 0,
            };
            let (a_waits, _) = simulate_cyclic(&cfg, &mut a_rng).expect("horizon > 0");
            let (n_waits, _) = simulate_machine_repair(pick, rotation, horizon, 0, &mut n_rng)
                .expect("horizon > 0");
            let mut ca = 0.0;
            let mut cn = 0.0;
            let mut k = 0;
            let mut a_out = Vec::with_capacity(checkpoints.len());
            let mut n_out = Vec::with_capacity(checkpoints.len());
            for i in 0..horizon {
                ca += a_waits[i];
                cn += n_waits[i];
                if k < checkpoints.len() && i + 1 == checkpoints[k] {
                    a_out.push(ca);
                    n_out.push(cn);
                    k += 1;
                }
            }
            (a_out, n_out)
        });

    let mut partial_sums = Vec::with_capacity(checkpoints.len());
    for (k, &checkpoint) in checkpoints.iter().enumerate() {
        let diffs: Vec<f64> = sums.iter().map(|(a, n)| a[k] - n[k]).collect();
        let (diff, diff_std_error) = crate::numerics::stats::mean_and_se(&diffs);
        partial_sums.push(PartialSumComparison {
            checkpoint,
            alternating_mean: sums.iter().map(|(a, _)| a[k]).sum::<f64>() / replications as f64,
            non_alternating_mean: sums.iter().map(|(_, n)| n[k]).sum::<f64>()
                / replications as f64,
            diff,
            diff_std_error,
        });
    }

    Ok(DisciplineComparison {
        alternating,
        non_alternating,
        partial_sums,
        confidence: 0.99,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::queue::sim::simulate_waits;

    fn exp_uniform() -> (DistributionSpec, DistributionSpec) {
        (DistributionSpec::exponential(1.0).unwrap(), DistributionSpec::Uniform01)
    }

    #[test]
    fn two_carousel_cyclic_path_is_bit_identical_to_the_queue_simulator() {
        let (pick, rotation) = exp_uniform();
        let config = MultiCarouselConfig {
            carousels: 2,
            pick: pick.clone(),
            rotation: rotation.clone(),
            steps: 50_000,
            burn_in: 1000,
        };
        let mut r1 = RandomStream::with_stream(9, 4);
        let mut r2 = RandomStream::with_stream(9, 4);
        let (cyclic, _) = simulate_cyclic(&config, &mut r1).unwrap();
        let (direct, _) = simulate_waits(&pick, &rotation, 50_000, 1000, &mut r2).unwrap();
        assert_eq!(cyclic.len(), direct.len());
        for (a, b) in cyclic.iter().zip(&direct) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn instant_rotation_never_makes_the_picker_wait() {
        let pick = DistributionSpec::exponential(1.0).unwrap();
        let rotation = DistributionSpec::deterministic(0.0).unwrap();
        let config = MultiCarouselConfig {
            carousels: 3,
            pick: pick.clone(),
            rotation: rotation.clone(),
            steps: 10_000,
            burn_in: 100,
        };
        let mut rng = RandomStream::new(10);
        let (_, summary) = simulate_cyclic(&config, &mut rng).unwrap();
        assert_eq!(summary.mean_wait, 0.0);
        assert_eq!(summary.picker_utilization, 1.0);

        let mut rng = RandomStream::new(11);
        let (_, repair) =
            simulate_machine_repair(&pick, &rotation, 10_000, 100, &mut rng).unwrap();
        assert_eq!(repair.mean_wait, 0.0);
    }

    #[test]
    fn more_carousels_cut_the_waiting() {
        let (pick, rotation) = exp_uniform();
        let mut means = Vec::new();
        for r in [2usize, 4, 6] {
            let config = MultiCarouselConfig {
                carousels: r,
                pick: pick.clone(),
                rotation: rotation.clone(),
                steps: 200_000,
                burn_in: 5_000,
            };
            let mut rng = RandomStream::new(12);
            let (_, summary) = simulate_cyclic(&config, &mut rng).unwrap();
            means.push(summary.mean_wait);
        }
        assert!(means[0] > means[1] && means[1] > means[2], "{means:?}");
    }

    #[test]
    fn cyclic_rejects_a_single_carousel() {
        let (pick, rotation) = exp_uniform();
        let config =
            MultiCarouselConfig { carousels: 1, pick, rotation, steps: 10, burn_in: 0 };
        let mut rng = RandomStream::new(13);
        assert!(simulate_cyclic(&config, &mut rng).is_err());
    }

    #[test]
    fn machine_repair_conserves_the_event_clock() {
        let (pick, rotation) = exp_uniform();
        let mut rng = RandomStream::new(14);
        let (_, summary) =
            simulate_machine_repair(&pick, &rotation, 100_000, 1000, &mut rng).unwrap();
        assert!(summary.clock_defect < 1e-9, "defect {}", summary.clock_defect);
    }

    #[test]
    fn alternating_waits_longer_on_average_but_idles_more_often() {
        let (pick, rotation) = exp_uniform();
        let rng = RandomStream::new(15);
        let cmp = compare_disciplines(
            &pick,
            &rotation,
            400_000,
            10_000,
            200,
            &[1, 10, 100],
            &rng,
            2,
        )
        .unwrap();
        let a = &cmp.alternating;
        let n = &cmp.non_alternating;
        assert!(
            a.mean_wait - n.mean_wait > 3.0 * (a.se_mean_wait + n.se_mean_wait),
            "A {} vs NA {}",
            a.mean_wait,
            n.mean_wait
        );
        assert!(a.pi0 - n.pi0 > 3.0 * (a.se_pi0 + n.se_pi0), "A {} vs NA {}", a.pi0, n.pi0);
        assert!(n.throughput > a.throughput);
        for ps in &cmp.partial_sums {
            assert!(
                ps.diff > -3.0 * ps.diff_std_error,
                "checkpoint {}: {ps:?}",
                ps.checkpoint
            );
        }
    }
}
