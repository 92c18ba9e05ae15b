//! Exact rollout of the alternating-service waiting-time recursion
//! `W_{n+1} = max(0, B_{n+1} - A_n - W_n)` with `W_0 = A_0 = 0`.

use crate::error::{Error, Result};
use crate::numerics::rng::RandomStream;
use crate::queue::dist::DistributionSpec;

/// A simulated trajectory: `waits` holds `W_0..W_N`, `picks` holds
/// `A_0..A_N` (with `A_0 = 0`) and `rotations` holds `B_1..B_N`.
#[derive(Debug, Clone)]
pub struct WaitingPath {
    pub waits: Vec<f64>,
    pub picks: Vec<f64>,
    pub rotations: Vec<f64>,
}

/// Post-burn-in summary of a waiting-time run.
#[derive(Debug, Clone)]
pub struct QueueSummary {
    pub steps: usize,
    pub burn_in: usize,
    pub mean_wait: f64,
    /// Fraction of exact zero waits (the max clamps exactly).
    pub pi0: f64,
    /// `1 / (mean wait + mean pick)` over the window.
    pub throughput: f64,
    pub mean_pick: f64,
    /// Both inputs degenerate; the chain can 2-cycle instead of mixing.
    pub deterministic_inputs: bool,
}

fn check_window(steps: usize, burn_in: usize) -> Result<()> {
    if steps <= burn_in {
        return Err(Error::invalid(format!("steps ({steps}) must exceed burn-in ({burn_in})")));
    }
    Ok(())
}

fn summarize(
    waits: &[f64],
    picks: &[f64],
    steps: usize,
    burn_in: usize,
    deterministic_inputs: bool,
) -> QueueSummary {
    // window: steps burn_in+1 ..= steps (waits[0] is W_0 = 0)
    let window = &waits[burn_in + 1..=steps];
    let picks_window = &picks[burn_in + 1..=steps];
    let n = window.len() as f64;
    let mean_wait = window.iter().sum::<f64>() / n;
    let pi0 = window.iter().filter(|w| **w == 0.0).count() as f64 / n;
    let mean_pick = picks_window.iter().sum::<f64>() / n;
    QueueSummary {
        steps,
        burn_in,
        mean_wait,
        pi0,
        throughput: 1.0 / (mean_wait + mean_pick),
        mean_pick,
        deterministic_inputs,
    }
}

/// Simulates the recursion for `steps` picks, returning the full path and
/// a summary over the post-burn-in window. Per step the rotation is drawn
/// before the pick.
pub fn simulate_recursion(
    pick: &DistributionSpec,
    rotation: &DistributionSpec,
    steps: usize,
    burn_in: usize,
    rng: &mut RandomStream,
) -> Result<(WaitingPath, QueueSummary)> {
    check_window(steps, burn_in)?;
    let mut waits = Vec::with_capacity(steps + 1);
    let mut picks = Vec::with_capacity(steps + 1);
    let mut rotations = Vec::with_capacity(steps);
    waits.push(0.0);
    picks.push(0.0);
    for n in 1..=steps {
        let b = rotation.sample(rng);
        let w = (b - (picks[n - 1] + waits[n - 1])).max(0.0);
        rotations.push(b);
        waits.push(w);
        picks.push(pick.sample(rng));
    }
    let summary = summarize(
        &waits,
        &picks,
        steps,
        burn_in,
        pick.is_deterministic() && rotation.is_deterministic(),
    );
    Ok((WaitingPath { waits, picks, rotations }, summary))
}

/// Memory-light variant: returns only the post-burn-in waits (in order)
/// plus the summary. Sampling order is identical to `simulate_recursion`.
pub fn simulate_waits(
    pick: &DistributionSpec,
    rotation: &DistributionSpec,
    steps: usize,
    burn_in: usize,
    rng: &mut RandomStream,
) -> Result<(Vec<f64>, QueueSummary)> {
    check_window(steps, burn_in)?;
    let window_len = steps - burn_in;
    let mut window = Vec::with_capacity(window_len);
    let (mut prev_w, mut prev_a) = (0.0f64, 0.0f64);
    let (mut sum_w, mut sum_a, mut zeros) = (0.0f64, 0.0f64, 0usize);
    for n in 1..=steps {
        let b = rotation.sample(rng);
        let w = (b - (prev_a + prev_w)).max(0.0);
        let a = pick.sample(rng);
        if n > burn_in {
            window.push(w);
            sum_w += w;
            sum_a += a;
            if w == 0.0 {
                zeros += 1;
            }
        }
        prev_w = w;
        prev_a = a;
    }
    let n = window_len as f64;
    let summary = QueueSummary {
        steps,
        burn_in,
        mean_wait: sum_w / n,
        pi0: zeros as f64 / n,
        throughput: 1.0 / (sum_w / n + sum_a / n),
        mean_pick: sum_a / n,
        deterministic_inputs: pick.is_deterministic() && rotation.is_deterministic(),
    };
    Ok((window, summary))
}
