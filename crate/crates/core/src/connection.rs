//! Connection problem: change of basis between Jacobi families.
//!
//! The connection matrix `C` maps coefficients in `P_n^{(alpha,beta)}` to
//! coefficients in `P_l^{(a,b)}` and is upper triangular. Entries are
//! computed by exact Jacobi-Gauss quadrature under the target weight; an
//! explicit hypergeometric-type sum serves as a low-degree cross check.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::orthopoly::{jacobi_eval, jacobi_gamma, JacobiParam};
use crate::quadrature::jacobi_gauss;
use crate::special::{gamma_fn, recip_gamma, KahanSum};

/// Upper-triangular change-of-basis matrix from the `source` family to the
/// `target` family, for degrees `0..=N`.
#[derive(Debug, Clone)]
pub struct ConnectionMatrix {
    pub source: JacobiParam,
    pub target: JacobiParam,
    pub c: DMatrix<f64>,
    pub identity: bool,
}

impl ConnectionMatrix {
    pub fn top(&self) -> usize {
        self.c.nrows() - 1
    }

    /// Applies the transform to a coefficient vector (length `N + 1`).
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.c.nrows() {
            return Err(Error::shape(format!(
                "connection apply: expected {} coefficients, got {}",
                self.c.nrows(),
                u.len()
            )));
        }
        if self.identity {
            return Ok(u.to_vec());
        }
        let v = &self.c * DVector::from_column_slice(u);
        Ok(v.data.into())
    }
}

/// Builds the connection matrix through `(N+1)`-point Jacobi-Gauss
/// quadrature under the target weight, which is exact for every entry.
/// Equal parameter pairs short-circuit to the identity.
pub fn connection_matrix(
    n_top: usize,
    source: JacobiParam,
    target: JacobiParam,
) -> Result<ConnectionMatrix> {
    let m = n_top + 1;
    if source == target {
        return Ok(ConnectionMatrix {
            source,
            target,
            c: DMatrix::identity(m, m),
            identity: true,
        });
    }
    let rule = jacobi_gauss(n_top, target)?;
    // tabulate both families at the Gauss nodes once
    let mut pt = DMatrix::<f64>::zeros(m, m); // target family, row = degree
    let mut ps = DMatrix::<f64>::zeros(m, m); // source family
    for (q, &x) in rule.nodes.iter().enumerate() {
        for n in 0..m {
            pt[(n, q)] = jacobi_eval(n, target, x);
            ps[(n, q)] = jacobi_eval(n, source, x);
        }
    }
    let mut c = DMatrix::<f64>::zeros(m, m);
    for l in 0..m {
        let inv_gamma = 1.0 / jacobi_gamma(l, target);
        for n in l..m {
            let mut s = KahanSum::new();
            for q in 0..m {
                s.add(rule.weights[q] * pt[(l, q)] * ps[(n, q)]);
            }
            c[(l, n)] = inv_gamma * s.value();
        }
    }
    Ok(ConnectionMatrix { source, target, c, identity: false })
}

/// Explicit connection coefficient (alternating Gamma-ratio sum). Intended
/// as an oracle for small degrees; cancellation grows with `n - l`.
pub fn connection_explicit(l: usize, n: usize, source: JacobiParam, target: JacobiParam) -> f64 {
    connection_explicit_parts(l, n, source, target).0
}

/// The explicit sum together with its cancellation scale
/// `prefactor * sum |term|`, which bounds the rounding noise of the value.
pub fn connection_explicit_parts(
    l: usize,
    n: usize,
    source: JacobiParam,
    target: JacobiParam,
) -> (f64, f64) {
    if l > n {
        return (0.0, 0.0);
    }
    let (alpha, beta) = (source.alpha, source.beta);
    let (a, b) = (target.alpha, target.beta);
    let (lf, nf) = (l as f64, n as f64);
    let pre = (2.0 * lf + a + b + 1.0)
        * gamma_fn(nf + alpha + 1.0)
        * recip_gamma(nf + alpha + beta + 1.0)
        * gamma_fn(lf + a + b + 1.0)
        * recip_gamma(lf + a + 1.0);
    let mut s = KahanSum::new();
    let mut abs = KahanSum::new();
    for m in 0..=(n - l) {
        let mf = m as f64;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign
            * gamma_fn(nf + lf + mf + alpha + beta + 1.0)
            * gamma_fn(mf + lf + a + 1.0)
            * recip_gamma(mf + 1.0)
            * recip_gamma(nf - lf - mf + 1.0)
            * recip_gamma(lf + mf + alpha + 1.0)
            * recip_gamma(mf + 2.0 * lf + a + b + 2.0);
        s.add(term);
        abs.add(term.abs());
    }
    (pre * s.value(), pre.abs() * abs.value())
}
