//! Polynomial roots via Durand-Kerner simultaneous iteration with a
//! Newton polish and an enforced residual contract.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense polynomial with complex coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing (near-)zero leading terms.
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        let mut c = coefficients;
        let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        while c.len() > 1 && c.last().map(|z| z.norm() <= scale * 1e-300).unwrap_or(false) {
            c.pop();
        }
        if c.is_empty() {
            c.push(Complex64::new(0.0, 0.0));
        }
        Self { coefficients: c }
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        Self::new(coefficients.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_real(&self) -> bool {
        let scale = self.coefficient_scale();
        self.coefficients.iter().all(|z| z.im.abs() <= scale * 1e-14)
    }

    fn coefficient_scale(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
        }
        let d = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Polynomial::new(d)
    }

    /// Magnitude scale of the monomial terms near `z`, used to turn raw
    /// residuals into relative ones.
    pub fn residual_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut pow = 1.0;
        let mut scale = 0.0;
        for c in &self.coefficients {
            scale += c.norm() * pow;
            pow *= r;
        }
        scale.max(f64::MIN_POSITIVE)
    }

    /// Relative residual `|p(z)| / scale(z)`.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        self.eval(z).norm() / self.residual_scale(z)
    }
}

/// All complex roots of `p`. Durand-Kerner iterates every root at once
/// from an asymmetric starting circle (a symmetric start can stall on
/// polynomials with symmetric spectra), each root then takes Newton
/// polish steps, and real-coefficient inputs are re-symmetrized into
/// exact conjugate pairs. Every returned root satisfies
/// `|p(r)| / scale(r) < 1e-8`.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::invalid("poly_roots requires degree >= 1"));
    }
    let lead = p.coefficients[n];
    if lead.norm() == 0.0 {
        return Err(Error::invalid("leading coefficient is zero"));
    }
    let monic: Vec<Complex64> = p.coefficients.iter().map(|c| c / lead).collect();

    // Cauchy bound: all roots lie inside 1 + max |a_i|
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let spread = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = Vec::with_capacity(n);
    let mut w = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        w *= spread;
        roots.push(w / w.norm() * bound * 0.7 + Complex64::new(0.11, 0.07));
    }

    let eval_monic = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };

    let mut converged = false;
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                // coincident iterates: nudge apart
                roots[i] += Complex64::new(1e-6 * bound, 1e-6 * bound);
                max_step = f64::MAX;
                continue;
            }
            let step = eval_monic(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * bound {
            converged = true;
            break;
        }
    }
    if !converged {
        // Newton polish below may still rescue near-converged iterates;
        // the residual contract decides
    }

    let deriv = p.derivative();
    let polish = |mut r: Complex64| {
        for _ in 0..3 {
            let dp = deriv.eval(r);
            if dp.norm() == 0.0 {
                break;
            }
            let candidate = r - p.eval(r) / dp;
            if p.relative_residual(candidate) < p.relative_residual(r) {
                r = candidate;
            } else {
                break;
            }
        }
        r
    };
    for r in roots.iter_mut() {
        *r = polish(*r);
    }

    if p.is_real() {
        roots = symmetrize_conjugates(roots, bound);
        for r in roots.iter_mut() {
            *r = polish(*r);
        }
    }

    for r in roots.iter() {
        let res = p.relative_residual(*r);
        if res >= 1e-8 {
            return Err(Error::numeric(format!(
                "root {r} has relative residual {res:.3e} (>= 1e-8)"
            )));
        }
    }

    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(roots)
}

/// Snaps near-real roots onto the axis and averages conjugate partners so
/// real-coefficient inputs return an exactly conjugate-closed set.
fn symmetrize_conjugates(roots: Vec<Complex64>, scale: f64) -> Vec<Complex64> {
    let tol = 1e-8 * scale;
    let mut out = Vec::with_capacity(roots.len());
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let r = roots[i];
        if r.im.abs() <= tol {
            used[i] = true;
            out.push(Complex64::new(r.re, 0.0));
            continue;
        }
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
            Some((j, d)) if d <= 2.0 * tol.max(1e-10 * scale) => {
                used[i] = true;
                used[j] = true;
                let m = (r + roots[j].conj()) * 0.5;
                let m = if m.im > 0.0 { m } else { m.conj() };
                out.push(m);
                out.push(m.conj());
            }
            _ => {
                // no partner found within tolerance; keep as computed
                used[i] = true;
                out.push(r);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn quadratic_with_real_roots() {
        // s^2 - 1
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let roots = poly_roots(&p).unwrap();
        assert!(close(roots[0], Complex64::new(-1.0, 0.0)));
        assert!(close(roots[1], Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn quadratic_with_imaginary_roots() {
        // s^2 + 1
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let roots = poly_roots(&p).unwrap();
        assert!(close(roots[0], Complex64::new(0.0, -1.0)));
        assert!(close(roots[1], Complex64::new(0.0, 1.0)));
    }

    #[test]
    fn degree_zero_is_an_argument_error() {
        let p = Polynomial::from_real(&[3.0]);
        assert!(poly_roots(&p).is_err());
    }

    #[test]
    fn erlang_uniform_characteristic_quartic() {
        // s^2 (1 - s^2) + 1 with lambda = 1, one stage
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0, 0.0, -1.0]);
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert!(p.relative_residual(*r) < 1e-10);
        }
    }

    #[test]
    fn real_inputs_give_conjugate_closed_roots() {
        let p = Polynomial::from_real(&[2.0, -3.0, 0.5, 1.0, 4.0, 1.0]);
        let roots = poly_roots(&p).unwrap();
        for r in &roots {
            let has_conjugate = roots.iter().any(|s| (s - r.conj()).norm() < 1e-8);
            assert!(has_conjugate, "no conjugate partner for {r}");
        }
    }

    #[test]
    fn complex_coefficients_are_supported() {
        // (s - i)(s - 2) = s^2 - (2 + i)s + 2i
        let p = Polynomial::new(vec![
            Complex64::new(0.0, 2.0),
            Complex64::new(-2.0, -1.0),
            Complex64::new(1.0, 0.0),
        ]);
        let roots = poly_roots(&p).unwrap();
        assert!(roots.iter().any(|r| close(*r, Complex64::new(0.0, 1.0))));
        assert!(roots.iter().any(|r| close(*r, Complex64::new(2.0, 0.0))));
    }
}
