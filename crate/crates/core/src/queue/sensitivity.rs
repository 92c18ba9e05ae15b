//! Throughput as a function of the pick-time variability at fixed mean.

use crate::error::Result;
use crate::queue::dist::DistributionSpec;
use crate::queue::fixed_point::{solve_stationary_fixed_point, SolverOptions};

#[derive(Debug, Clone, Copy)]
pub struct SensitivityPoint {
    pub scv: f64,
    pub throughput: f64,
    pub pi0: f64,
    pub mean_wait: f64,
}

#[derive(Debug, Clone)]
pub struct SensitivityReport {
    pub mean_pick: f64,
    pub points: Vec<SensitivityPoint>,
    /// Throughput never rises along the (ascending-scv) list.
    pub nonincreasing: bool,
    /// `(max tau - min tau) / max tau` across the list.
    pub max_relative_spread: f64,
}

/// Solves the stationary model for each squared coefficient of variation
/// (two-moment-fitted pick laws, uniform rotation) and reports how little
/// the throughput moves.
pub fn throughput_sensitivity(
    mean_pick: f64,
    scv_list: &[f64],
    opts: SolverOptions,
) -> Result<SensitivityReport> {
    let mut points = Vec::with_capacity(scv_list.len());
    for &scv in scv_list {
        let pick = DistributionSpec::with_mean_scv(mean_pick, scv)?;
        let sol = solve_stationary_fixed_point(&pick, &DistributionSpec::Uniform01, opts)?;
        points.push(SensitivityPoint {
            scv,
            throughput: sol.throughput,
            pi0: sol.atom_pi0,
            mean_wait: sol.mean_wait,
        });
    }
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| a.scv.partial_cmp(&b.scv).unwrap());
    let nonincreasing = sorted.windows(2).all(|w| w[1].throughput <= w[0].throughput + 1e-12);
    let max_tau = points.iter().map(|p| p.throughput).fold(f64::MIN, f64::max);
    let min_tau = points.iter().map(|p| p.throughput).fold(f64::MAX, f64::min);
    let max_relative_spread = if max_tau > 0.0 { (max_tau - min_tau) / max_tau } else { 0.0 };
    Ok(SensitivityReport { mean_pick, points, nonincreasing, max_relative_spread })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_matches_a_direct_solve() {
        let report = throughput_sensitivity(1.0, &[1.0], SolverOptions::default()).unwrap();
        let direct = solve_stationary_fixed_point(
            &DistributionSpec::exponential(1.0).unwrap(),
            &DistributionSpec::Uniform01,
            SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(report.points.len(), 1);
        assert!((report.points[0].throughput - direct.throughput).abs() < 1e-12);
    }

    #[test]
    fn throughput_moves_slowly_in_scv() {
        let report =
            throughput_sensitivity(1.0, &[0.5, 1.0, 2.0], SolverOptions::default()).unwrap();
        assert!(report.nonincreasing, "{:?}", report.points);
        assert!(report.max_relative_spread < 0.05, "spread {}", report.max_relative_spread);
    }

    #[test]
    fn unreachable_scv_is_an_argument_error() {
        assert!(throughput_sensitivity(1.0, &[-0.5], SolverOptions::default()).is_err());
    }
}
