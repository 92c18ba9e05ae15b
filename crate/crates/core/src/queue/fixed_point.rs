//! Stationary waiting-time solver for the alternating-service recursion.
//!
//! In equilibrium `W = max(0, B - A - W)` in distribution, which turns
//! into the CDF map `F(x) = E_{A,W}[F_B(x + A + W)]`. With the pick time
//! integrated out this is `F(x) = E_W[phi(x + W)]` where
//! `phi(y) = E_A[F_B(y + A)]`; for a uniform rotation
//! `phi(y) = 1 - G_A(1 - y)` with `G_A` the integrated pick CDF. The map
//! contracts at rate `P(B > A)` in the sup norm (and its square contracts
//! even when that probability is one), so plain iteration on a grid
//! converges geometrically.
//!
//! The integral against the current iterate uses exact cell averages of
//! `phi` (differences of its antiderivative), so the only discretization
//! is the piecewise-linear representation of `F` itself.

use crate::error::{Error, Result};
use crate::queue::dist::DistributionSpec;

/// Grid resolution and stopping rule for the fixed-point iteration.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Number of grid cells on `[0, 1]`.
    pub grid_size: usize,
    /// Sup-norm change threshold between sweeps.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { grid_size: 2048, tol: 1e-10, max_iterations: 10_000 }
    }
}

/// Converged stationary distribution of the picker waiting time.
#[derive(Debug, Clone)]
pub struct StationarySolution {
    pub pick: DistributionSpec,
    pub rotation: DistributionSpec,
    /// Grid nodes `0 = x_0 < ... < x_M = 1`.
    pub grid: Vec<f64>,
    /// CDF values at the nodes; `cdf[0]` is the atom at zero.
    pub cdf: Vec<f64>,
    pub atom_pi0: f64,
    /// Density at the nodes (uniform rotation only; empty otherwise).
    pub density: Vec<f64>,
    pub mean_wait: f64,
    pub throughput: f64,
    pub iterations: usize,
}

fn rotation_supported(rotation: &DistributionSpec) -> Result<()> {
    match rotation {
        DistributionSpec::Uniform01 => Ok(()),
        DistributionSpec::Empirical { .. } if rotation.supported_on_unit_interval() => Ok(()),
        _ => Err(Error::Unsupported(format!(
            "stationary solver expects a uniform rotation (or an empirical one on [0, 1)), got {}",
            rotation.label()
        ))),
    }
}

/// `phi(y) = E_A[F_B(y + A)]` and its antiderivative on `[0, 2]`.
struct RotationKernel {
    phi: Vec<f64>,
    /// Exact cell averages `(Phi((k+1)h) - Phi(kh)) / h`.
    phi_cell_avg: Vec<f64>,
}

fn build_kernel(
    pick: &DistributionSpec,
    rotation: &DistributionSpec,
    m: usize,
    h: f64,
) -> RotationKernel {
    let nodes = 2 * m + 1;
    let mut phi = vec![0.0; nodes];
    let mut big_phi = vec![0.0; nodes];
    match rotation {
        DistributionSpec::Uniform01 => {
            let h_a_one = pick.twice_integrated_cdf(1.0);
            for k in 0..nodes {
                let y = k as f64 * h;
                phi[k] = 1.0 - pick.integrated_cdf(1.0 - y);
                big_phi[k] = y - h_a_one + pick.twice_integrated_cdf(1.0 - y);
            }
        }
        DistributionSpec::Empirical { samples, .. } => {
            let n = samples.len() as f64;
            let g_at_atoms: Vec<f64> = samples.iter().map(|b| pick.integrated_cdf(*b)).collect();
            for k in 0..nodes {
                let y = k as f64 * h;
                let mut p = 0.0;
                let mut q = 0.0;
                for (b, g_b) in samples.iter().zip(&g_at_atoms) {
                    p += pick.survival_geq(b - y);
                    q += y - g_b + pick.integrated_cdf(b - y);
                }
                phi[k] = p / n;
                big_phi[k] = q / n;
            }
        }
        _ => unreachable!("rotation_supported"),
    }
    let phi_cell_avg = (0..nodes - 1).map(|k| (big_phi[k + 1] - big_phi[k]) / h).collect();
    RotationKernel { phi, phi_cell_avg }
}

/// Solves the equilibrium equation by iterating the CDF map on a uniform
/// grid until the sup-norm change drops below `opts.tol`.
pub fn solve_stationary_fixed_point(
    pick: &DistributionSpec,
    rotation: &DistributionSpec,
    opts: SolverOptions,
) -> Result<StationarySolution> {
    rotation_supported(rotation)?;
    let m = opts.grid_size.max(8);
    let h = 1.0 / m as f64;
    let kernel = build_kernel(pick, rotation, m, h);

    // start from W = 0 (CDF identically one); the first sweep gives the
    // law of B itself
    let mut f = vec![1.0f64; m + 1];
    let mut next = vec![0.0f64; m + 1];
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > opts.max_iterations {
            return Err(Error::Convergence(format!(
                "fixed point not reached in {} sweeps (pick {}, rotation {})",
                opts.max_iterations,
                pick.label(),
                rotation.label()
            )));
        }
        let atom = f[0];
        for i in 0..=m {
            let mut acc = atom * kernel.phi[i];
            for j in 0..m {
                let df = f[j + 1] - f[j];
                if df != 0.0 {
                    acc += df * kernel.phi_cell_avg[i + j];
                }
            }
            next[i] = acc.clamp(0.0, 1.0);
        }
        // the exact map preserves monotonicity; guard the rounding
        for i in 1..=m {
            if next[i] < next[i - 1] {
                next[i] = next[i - 1];
            }
        }
        let delta = f.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut f, &mut next);
        if delta < opts.tol {
            break;
        }
    }

    let grid: Vec<f64> = (0..=m).map(|j| j as f64 * h).collect();
    let atom_pi0 = f[0];
    // E[W] = int (1 - F); exact for the piecewise-linear representation
    let mean_wait = {
        let mut acc = 0.0;
        for j in 0..m {
            acc += 0.5 * ((1.0 - f[j]) + (1.0 - f[j + 1])) * h;
        }
        acc
    };
    let throughput = 1.0 / (mean_wait + pick.mean());

    let density = if matches!(rotation, DistributionSpec::Uniform01) {
        // f_W(x) = E_W[F_A(1 - x - W)], cell-exact via G_A differences
        let g: Vec<f64> = (0..=2 * m).map(|k| pick.integrated_cdf(1.0 - k as f64 * h)).collect();
        let mut density = vec![0.0; m + 1];
        for i in 0..=m {
            let mut acc = atom_pi0 * pick.cdf(1.0 - grid[i]);
            for j in 0..m {
                let df = f[j + 1] - f[j];
                if df != 0.0 {
                    acc += df / h * (g[i + j] - g[i + j + 1]);
                }
            }
            density[i] = acc;
        }
        density
    } else {
        Vec::new()
    };

    Ok(StationarySolution {
        pick: pick.clone(),
        rotation: rotation.clone(),
        grid,
        cdf: f,
        atom_pi0,
        density,
        mean_wait,
        throughput,
        iterations,
    })
}

impl StationarySolution {
    fn cells(&self) -> usize {
        self.grid.len() - 1
    }

    /// CDF by linear interpolation on the grid.
    pub fn cdf_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let m = self.cells() as f64;
        let pos = x * m;
        let j = (pos.floor() as usize).min(self.cells() - 1);
        let frac = pos - j as f64;
        self.cdf[j] + frac * (self.cdf[j + 1] - self.cdf[j])
    }

    /// Pointwise density at any `x` (uniform rotation only), evaluated
    /// from the converged measure rather than interpolated.
    pub fn density_at(&self, x: f64) -> f64 {
        let m = self.cells();
        let h = 1.0 / m as f64;
        let mut acc = self.atom_pi0 * self.pick.cdf(1.0 - x);
        for j in 0..m {
            let df = self.cdf[j + 1] - self.cdf[j];
            if df != 0.0 {
                let upper = self.pick.integrated_cdf(1.0 - x - j as f64 * h);
                let lower = self.pick.integrated_cdf(1.0 - x - (j + 1) as f64 * h);
                acc += df / h * (upper - lower);
            }
        }
        acc
    }

    /// Integral of the reported density over `[0, 1]`, split at the jump
    /// locations the pick law induces (`x = 1 - d` for every atom `d`).
    pub fn density_quadrature(&self) -> f64 {
        let mut cuts = vec![0.0, 1.0];
        for d in self.pick.jump_points() {
            let x = 1.0 - d;
            if x > 0.0 && x < 1.0 {
                cuts.push(x);
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            total += adaptive_simpson(&|x| self.density_at(x), w[0], w[1], 1e-11, 24);
        }
        total
    }

    /// Sup distance between two solutions on their (piecewise-linear)
    /// CDFs; extremes of the difference sit on the union of the grids.
    pub fn sup_cdf_distance(&self, other: &StationarySolution) -> f64 {
        let mut sup = 0.0f64;
        for &x in self.grid.iter().chain(other.grid.iter()) {
            sup = sup.max((self.cdf_at(x) - other.cdf_at(x)).abs());
        }
        sup
    }

    /// Sup distance between the solved CDF (atom at zero included) and
    /// the empirical CDF of a sorted simulation sample.
    pub fn sup_distance_to_sorted_sample(&self, sorted_waits: &[f64]) -> Result<f64> {
        crate::numerics::ks::sup_distance_vs_cdf(
            sorted_waits,
            |x| self.cdf_at(x),
            |x| if x <= 0.0 { 0.0 } else { self.cdf_at(x) },
        )
    }
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let whole = simpson(f, a, b);
    let mid = 0.5 * (a + b);
    let left = simpson(f, a, mid);
    let right = simpson(f, mid, b);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() < 15.0 * tol {
        refined + (refined - whole) / 15.0
    } else {
        adaptive_simpson(f, a, mid, 0.5 * tol, depth - 1)
            + adaptive_simpson(f, mid, b, 0.5 * tol, depth - 1)
    }
}
