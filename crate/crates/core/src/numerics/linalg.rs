//! Dense linear solves with a residual guarantee.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};

/// Solves `A x = b` by partial-pivot LU with one round of iterative
/// refinement, then enforces the relative-residual contract
/// `||Ax - b|| / ||b|| < 1e-10` (or `||Ax|| < 1e-10 * ||A||` for `b = 0`).
pub fn solve_linear<T>(a: &DMatrix<T>, b: &DVector<T>) -> Result<DVector<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    if a.nrows() != a.ncols() {
        return Err(Error::invalid(format!("matrix is {}x{}, not square", a.nrows(), a.ncols())));
    }
    if a.nrows() != b.len() {
        return Err(Error::invalid(format!(
            "dimension mismatch: matrix {}x{} vs vector {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }

    let lu = a.clone().lu();
    let mut x = lu
        .solve(b)
        .ok_or_else(|| Error::SingularSystem("LU factorization found a zero pivot".into()))?;

    // one refinement pass cleans up most of the pivot-growth error
    let r = b - a * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }

    let b_norm = b.norm();
    let residual = (b - a * &x).norm();
    let bound = if b_norm > 0.0 { b_norm } else { a.norm() };
    if residual > 1e-10 * bound {
        return Err(Error::SingularSystem(format!(
            "relative residual {:.3e} exceeds 1e-10; system is numerically singular",
            residual / bound
        )));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::RandomStream;
    use num_complex::Complex64;

    #[test]
    fn identity_returns_rhs() {
        let a = DMatrix::<f64>::identity(3, 3);
        let b = DVector::from_vec(vec![1.0, -2.0, 3.5]);
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_two_by_two() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 4.0]);
        let b = DVector::from_vec(vec![2.0, 4.0]);
        let x = solve_linear(&a, &b).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn recovers_constructed_solution_to_1e10() {
        let mut rng = RandomStream::new(99);
        for trial in 0..20 {
            let n = 8;
            let mut a = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = rng.uniform::<f64>() - 0.5;
                }
                a[(i, i)] += n as f64; // diagonally dominant, well conditioned
            }
            let x_true = DVector::from_fn(n, |i, _| (i as f64 + 1.0) / n as f64);
            let b = &a * &x_true;
            let x = solve_linear(&a, &b).unwrap();
            assert!((&x - &x_true).norm() / x_true.norm() < 1e-10, "trial {trial}");
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let b = DVector::from_vec(vec![1.0, 1.0]);
        assert!(matches!(solve_linear(&a, &b), Err(Error::SingularSystem(_))));
    }

    #[test]
    fn complex_systems_solve() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 2.0),
            ],
        );
        let b = DVector::from_vec(vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 4.0)]);
        let x = solve_linear(&a, &b).unwrap();
        assert!((x[0] - Complex64::new(1.0, -1.0)).norm() < 1e-12);
        assert!((x[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }
}
