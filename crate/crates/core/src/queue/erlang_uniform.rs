//! Structural form of the stationary waiting time for Erlang picks and a
//! uniform rotation: the density on `[0, 1]` is a mixture of exponentials
//! `sum c_i exp(r_i x)` whose exponents are the `2n + 2` zeros of
//! `R(s) = s^2 (lambda^2 - s^2)^n + lambda^(2n)`. The mixture
//! coefficients are recovered numerically by least squares against the
//! fixed-point density; the zero-wait mass and throughput identities
//!
//! `pi0 = 1 - sum (c_i / r_i)(exp(r_i) - 1)`
//! `1/tau = n/lambda + sum (c_i / r_i^2)(1 + (r_i - 1) exp(r_i))`
//!
//! are then checked against the base solution.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::poly::{poly_roots, Polynomial};
use crate::queue::dist::DistributionSpec;
use crate::queue::fixed_point::StationarySolution;

/// Validation metrics of the structural solution.
#[derive(Debug, Clone)]
pub struct StructureChecks {
    /// Max raw residual `|R(r_i)|` over the roots.
    pub max_root_residual: f64,
    /// Relative L2 residual of the least-squares density fit.
    pub fit_residual_rel: f64,
    /// Max imaginary part of the reconstructed density on the grid.
    pub density_imag_max: f64,
    /// `|pi0_structure - pi0_base| / pi0_base`.
    pub pi0_rel_diff: f64,
    /// `|tau_structure - tau_base| / tau_base`.
    pub throughput_rel_diff: f64,
}

/// Roots, mixture coefficients and derived quantities.
#[derive(Debug, Clone)]
pub struct ErlangUniformStructure {
    pub lambda: f64,
    pub stages: usize,
    pub roots: Vec<Complex64>,
    pub coefficients: Vec<Complex64>,
    pub pi0: f64,
    pub throughput: f64,
    pub checks: StructureChecks,
}

/// Coefficients of `R(s) = s^2 (lambda^2 - s^2)^n + lambda^(2n)`,
/// ascending degree (2n + 2 of them plus the constant).
pub fn characteristic_polynomial(lambda: f64, stages: usize) -> Polynomial {
    let n = stages;
    let mut coef = vec![0.0f64; 2 * n + 3];
    coef[0] = lambda.powi(2 * n as i32);
    // (lambda^2 - s^2)^n = sum_k C(n, k) lambda^(2(n-k)) (-1)^k s^(2k)
    let mut binom = 1.0f64;
    for k in 0..=n {
        if k > 0 {
            binom = binom * (n - k + 1) as f64 / k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coef[2 * k + 2] += binom * sign * lambda.powi(2 * (n - k) as i32);
    }
    Polynomial::from_real(&coef)
}

fn pair_roots(roots: &[Complex64]) -> Result<Vec<RootGroup>> {
    let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max).max(1.0);
    // reject near-coincident roots: the exponential basis would be defective
    for (i, a) in roots.iter().enumerate() {
        for b in roots.iter().skip(i + 1) {
            if (a - b).norm() < 1e-6 * scale {
                return Err(Error::numeric(format!(
                    "roots {a} and {b} nearly coincide; exponential basis is defective"
                )));
            }
        }
    }
    let mut groups = Vec::new();
    let mut used = vec![false; roots.len()];
    for (i, r) in roots.iter().enumerate() {
        if used[i] {
            continue;
        }
        if r.im.abs() <= 1e-8 * scale {
            used[i] = true;
            groups.push(RootGroup::Real(Complex64::new(r.re, 0.0)));
            continue;
        }
        // find the conjugate partner
        let mut best: Option<(usize, f64)> = None;
        for (j, s) in roots.iter().enumerate() {
            if j != i && !used[j] {
                let d = (s - r.conj()).norm();
                if best.map(|(_, bd)| d < bd).unwrap_or(true) {
                    best = Some((j, d));
                }
            }
        }
        match best {
            Some((j, d)) if d <= 1e-6 * scale => {
                used[i] = true;
                used[j] = true;
                let plus = if r.im > 0.0 { *r } else { roots[j] };
                groups.push(RootGroup::Pair(plus));
            }
            _ => {
                return Err(Error::numeric(format!(
                    "root {r} has no conjugate partner; real-coefficient structure violated"
                )));
            }
        }
    }
    Ok(groups)
}

enum RootGroup {
    Real(Complex64),
    /// The member with positive imaginary part.
    Pair(Complex64),
}

/// Fits the exponential mixture to a solved Erlang/uniform base case and
/// evaluates the structural identities. The base must have been solved
/// with `pick = Erlang(lambda, stages)` and a uniform rotation. A fit
/// residual above 1e-6 is an error (it signals a solver or root bug);
/// the identity deviations are reported in `checks` for the caller to
/// judge against its tolerance.
pub fn erlang_uniform_structure(
    lambda: f64,
    stages: usize,
    base: &StationarySolution,
) -> Result<ErlangUniformStructure> {
    match &base.pick {
        DistributionSpec::Erlang { rate, stages: k } if *k == stages => {
            if (rate - lambda).abs() > 1e-12 * lambda.abs() {
                return Err(Error::invalid(format!(
                    "base was solved with rate {rate}, not {lambda}"
                )));
            }
        }
        other => {
            return Err(Error::invalid(format!(
                "base must be solved with pick erlang:{lambda}:{stages}, got {}",
                other.label()
            )));
        }
    }
    if !matches!(base.rotation, DistributionSpec::Uniform01) {
        return Err(Error::invalid("base must be solved with a uniform rotation"));
    }
    if base.density.is_empty() {
        return Err(Error::invalid("base solution carries no density"));
    }

    let poly = characteristic_polynomial(lambda, stages);
    let roots = poly_roots(&poly)?;
    debug_assert_eq!(roots.len(), 2 * stages + 2);
    let max_root_residual =
        roots.iter().map(|r| poly.eval(*r).norm()).fold(0.0, f64::max);
    let groups = pair_roots(&roots)?;

    // real basis: e^{ax} for real roots, e^{ax}cos(bx) and e^{ax}sin(bx)
    // per conjugate pair
    let rows = base.grid.len();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for g in &groups {
        match g {
            RootGroup::Real(r) => {
                columns.push(base.grid.iter().map(|x| (r.re * x).exp()).collect());
            }
            RootGroup::Pair(r) => {
                columns.push(
                    base.grid.iter().map(|x| (r.re * x).exp() * (r.im * x).cos()).collect(),
                );
                columns.push(
                    base.grid.iter().map(|x| (r.re * x).exp() * (r.im * x).sin()).collect(),
                );
            }
        }
    }
    let ncols = columns.len();
    let basis = DMatrix::<f64>::from_fn(rows, ncols, |i, j| columns[j][i]);
    let target = DVector::<f64>::from_iterator(rows, base.density.iter().cloned());
    let qr = basis.clone().qr();
    let qtf = qr.q().transpose() * &target;
    let alpha = qr
        .r()
        .solve_upper_triangular(&qtf)
        .ok_or_else(|| Error::numeric("least-squares fit failed: rank-deficient basis"))?;

    let residual = (&basis * &alpha - &target).norm();
    let fit_residual_rel = residual / target.norm();
    if fit_residual_rel >= 1e-6 {
        return Err(Error::numeric(format!(
            "density projection residual {fit_residual_rel:.3e} >= 1e-6; \
             structure does not match the solved density"
        )));
    }

    // reconstruct the complex coefficients: a real basis pair
    // (alpha cos + beta sin) e^{ax} equals c e^{rx} + conj(c) e^{conj(r)x}
    // with c = (alpha - i beta) / 2
    let mut roots_out = Vec::with_capacity(2 * stages + 2);
    let mut coefs_out = Vec::with_capacity(2 * stages + 2);
    let mut idx = 0;
    for g in &groups {
        match g {
            RootGroup::Real(r) => {
                roots_out.push(*r);
                coefs_out.push(Complex64::new(alpha[idx], 0.0));
                idx += 1;
            }
            RootGroup::Pair(r) => {
                let c = Complex64::new(alpha[idx] / 2.0, -alpha[idx + 1] / 2.0);
                roots_out.push(*r);
                coefs_out.push(c);
                roots_out.push(r.conj());
                coefs_out.push(c.conj());
                idx += 2;
            }
        }
    }

    let density_imag_max = base
        .grid
        .iter()
        .map(|x| {
            let v: Complex64 = roots_out
                .iter()
                .zip(&coefs_out)
                .map(|(r, c)| c * (r * *x).exp())
                .sum();
            v.im.abs()
        })
        .fold(0.0, f64::max);

    // pi0 = 1 - sum (c_i / r_i)(e^{r_i} - 1)
    let one = Complex64::new(1.0, 0.0);
    let mass: Complex64 =
        roots_out.iter().zip(&coefs_out).map(|(r, c)| c / r * (r.exp() - one)).sum();
    let pi0 = 1.0 - mass.re;

    // 1/tau = n/lambda + sum (c_i / r_i^2)(1 + (r_i - 1) e^{r_i})
    let inv_tau: Complex64 = roots_out
        .iter()
        .zip(&coefs_out)
        .map(|(r, c)| c / (r * r) * (one + (r - one) * r.exp()))
        .sum::<Complex64>()
        + Complex64::new(stages as f64 / lambda, 0.0);
    let throughput = 1.0 / inv_tau.re;

    let checks = StructureChecks {
        max_root_residual,
        fit_residual_rel,
        density_imag_max,
        pi0_rel_diff: (pi0 - base.atom_pi0).abs() / base.atom_pi0.abs().max(1e-300),
        throughput_rel_diff: (throughput - base.throughput).abs() / base.throughput.abs(),
    };

    Ok(ErlangUniformStructure {
        lambda,
        stages,
        roots: roots_out,
        coefficients: coefs_out,
        pi0,
        throughput,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::queue::fixed_point::{solve_stationary_fixed_point, SolverOptions};

    #[test]
    fn quartic_case_has_conjugate_root_pairs() {
        // lambda = 1, one stage: R(s) = s^2 (1 - s^2) + 1, degree 4
        let poly = characteristic_polynomial(1.0, 1);
        assert_eq!(poly.degree(), 4);
        let roots = poly_roots(&poly).unwrap();
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert!(poly.eval(*r).norm() < 1e-10);
            assert!(roots.iter().any(|s| (s - r.conj()).norm() < 1e-8));
        }
    }

    #[test]
    fn structure_reproduces_the_base_solution() {
        let lambda = 1.0;
        let stages = 1;
        let pick = DistributionSpec::erlang(lambda, stages).unwrap();
        let base = solve_stationary_fixed_point(
            &pick,
            &DistributionSpec::Uniform01,
            SolverOptions::default(),
        )
        .unwrap();
        let s = erlang_uniform_structure(lambda, stages, &base).unwrap();
        assert_eq!(s.roots.len(), 4);
        assert!(s.checks.max_root_residual < 1e-8, "{:?}", s.checks);
        assert!(s.checks.fit_residual_rel < 1e-6, "{:?}", s.checks);
        assert!(s.checks.density_imag_max < 1e-8, "{:?}", s.checks);
        assert!(s.checks.pi0_rel_diff < 1e-4, "{:?}", s.checks);
        assert!(s.checks.throughput_rel_diff < 1e-4, "{:?}", s.checks);
        // mass identity: sum (c_i/r_i)(e^{r_i} - 1) = 1 - pi0
        assert!((s.pi0 + (1.0 - s.pi0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_base_is_rejected() {
        let pick = DistributionSpec::exponential(2.0).unwrap();
        let base = solve_stationary_fixed_point(
            &pick,
            &DistributionSpec::Uniform01,
            SolverOptions::default(),
        )
        .unwrap();
        assert!(erlang_uniform_structure(1.0, 2, &base).is_err());
    }
}
