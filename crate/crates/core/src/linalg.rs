//! Dense direct and iterative solvers used by the collocation schemes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Direct LU solve of `A x = b`.
pub fn lu_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() {
        return Err(Error::shape(format!(
            "lu_solve: {}x{} matrix with rhs of length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::numeric("LU factorisation found a singular matrix"))
}

/// Outcome of a BiCGSTAB run.
#[derive(Debug, Clone)]
pub struct IterativeSolve {
    pub x: DVector<f64>,
    pub iterations: usize,
    /// Final relative residual `||b - A x|| / ||b||`.
    pub residual: f64,
}

/// Unpreconditioned BiCGSTAB with a deterministic start (`x0 = 0`) and one
/// restart on breakdown. `tol` is relative to `||b||`; `max_iter` defaults
/// to `5 n` when `None`.
pub fn bicgstab(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    tol: Option<f64>,
    max_iter: Option<usize>,
) -> Result<IterativeSolve> {
    let n = b.len();
    if a.nrows() != a.ncols() || a.nrows() != n {
        return Err(Error::shape(format!(
            "bicgstab: {}x{} matrix with rhs of length {n}",
            a.nrows(),
            a.ncols()
        )));
    }
    let tol = tol.unwrap_or(1e-12);
    let max_iter = max_iter.unwrap_or(5 * n.max(1));
    let bnorm = b.norm();
    if bnorm == 0.0 {
        return Ok(IterativeSolve { x: DVector::zeros(n), iterations: 0, residual: 0.0 });
    }

    let mut x = DVector::<f64>::zeros(n);
    let mut restarted = false;
    let mut iterations = 0usize;

    'outer: loop {
        let mut r = b - a * &x;
        let r0 = r.clone();
        let mut rho = 1.0f64;
        let mut alpha = 1.0f64;
        let mut omega = 1.0f64;
        let mut v = DVector::<f64>::zeros(n);
        let mut p = DVector::<f64>::zeros(n);

        while iterations < max_iter {
            let rho_new = r0.dot(&r);
            if rho_new.abs() < f64::MIN_POSITIVE * 1e10 || omega == 0.0 {
                // breakdown: restart once from the current iterate
                if restarted {
                    break 'outer;
                }
                restarted = true;
                continue 'outer;
            }
            let beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            p = &r + beta * (&p - omega * &v);
            v = a * &p;
            alpha = rho / r0.dot(&v);
            let s = &r - alpha * &v;
            let x_half = &x + alpha * &p;
            if s.norm() <= tol * bnorm {
                x = x_half;
                iterations += 1;
                let residual = (b - a * &x).norm() / bnorm;
                return Ok(IterativeSolve { x, iterations, residual });
            }
            let t = a * &s;
            let tt = t.dot(&t);
            if tt == 0.0 {
                if restarted {
                    break 'outer;
                }
                restarted = true;
                x = x_half;
                continue 'outer;
            }
            omega = t.dot(&s) / tt;
            x = x_half + omega * &s;
            r = s - omega * &t;
            iterations += 1;
            if r.norm() <= tol * bnorm {
                let residual = (b - a * &x).norm() / bnorm;
                return Ok(IterativeSolve { x, iterations, residual });
            }
        }
        break;
    }

    let residual = (b - a * &x).norm() / bnorm;
    if residual <= tol {
        Ok(IterativeSolve { x, iterations, residual })
    } else {
        Err(Error::numeric(format!(
            "BiCGSTAB did not converge: {iterations} iterations, relative residual {residual:.3e}"
        )))
    }
}
