//! Legendre-series representation of polynomials.
//!
//! Birkhoff basis members are stored as Legendre expansion coefficients so
//! that off-grid evaluation and analytic fractional differentiation stay
//! exact up to rounding.

use crate::orthopoly::{jacobi_series_eval, JacobiParam};
use crate::special::{gamma_ratio, KahanSum};

/// Coefficients `c` of `u(x) = sum_l c[l] P_l(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries(pub Vec<f64>);

impl LegendreSeries {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self(vec![1.0])
    }

    /// `c0 + c1 * x`.
    pub fn linear(c0: f64, c1: f64) -> Self {
        Self(vec![c0, c1])
    }

    pub fn degree_bound(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let c = &self.0;
        let n = c.len();
        if n == 0 {
            return 0.0;
        }
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for k in (1..n).rev() {
            let kf = k as f64;
            let b0 = c[k] + (2.0 * kf + 1.0) / (kf + 1.0) * x * b1 - (kf + 1.0) / (kf + 2.0) * b2;
            b2 = b1;
            b1 = b0;
        }
        c[0] + x * b1 - 0.5 * b2
    }

    /// Value at x = -1: alternating sum.
    pub fn eval_at_minus_one(&self) -> f64 {
        let mut s = KahanSum::new();
        for (l, &c) in self.0.iter().enumerate() {
            s.add(if l % 2 == 0 { c } else { -c });
        }
        s.value()
    }

    /// Value at x = 1: plain sum.
    pub fn eval_at_one(&self) -> f64 {
        let mut s = KahanSum::new();
        for &c in &self.0 {
            s.add(c);
        }
        s.value()
    }

    /// Coefficients of the derivative, via the backward recurrence
    /// `b_m = (2m+1) (a_{m+1} + b_{m+2} / (2m+5))`.
    pub fn derivative(&self) -> LegendreSeries {
        let a = &self.0;
        let n = a.len();
        if n <= 1 {
            return LegendreSeries(vec![0.0]);
        }
        let mut b = vec![0.0; n - 1];
        for m in (0..n - 1).rev() {
            let mf = m as f64;
            let carry = if m + 2 < n - 1 { b[m + 2] / (2.0 * mf + 5.0) } else { 0.0 };
            b[m] = (2.0 * mf + 1.0) * (a[m + 1] + carry);
        }
        LegendreSeries(b)
    }

    /// Coefficients of `int_{-1}^x u`, one degree higher.
    pub fn antiderivative(&self) -> LegendreSeries {
        let a = &self.0;
        let mut b = vec![0.0; a.len() + 1];
        for (l, &c) in a.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if l == 0 {
                // int P_0 = 1 + x = P_0 + P_1
                b[0] += c;
                b[1] += c;
            } else {
                let lf = l as f64;
                b[l + 1] += c / (2.0 * lf + 1.0);
                b[l - 1] -= c / (2.0 * lf + 1.0);
            }
        }
        LegendreSeries(b)
    }

    /// Coefficients of `(1 + x) u(x)`, via
    /// `x P_n = ((n+1) P_{n+1} + n P_{n-1}) / (2n+1)`.
    pub fn mul_one_plus_x(&self) -> LegendreSeries {
        let a = &self.0;
        let mut b = vec![0.0; a.len() + 1];
        for (l, &c) in a.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let lf = l as f64;
            b[l] += c;
            b[l + 1] += c * (lf + 1.0) / (2.0 * lf + 1.0);
            if l >= 1 {
                b[l - 1] += c * lf / (2.0 * lf + 1.0);
            }
        }
        LegendreSeries(b)
    }

    pub fn scale(&self, s: f64) -> LegendreSeries {
        LegendreSeries(self.0.iter().map(|c| c * s).collect())
    }

    pub fn axpy(&mut self, s: f64, other: &LegendreSeries) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0.0);
        }
        for (dst, &src) in self.0.iter_mut().zip(&other.0) {
            *dst += s * src;
        }
    }

    /// Caputo fractional derivative of order `mu = k-1+s`, `s in (0,1)`,
    /// `k in {1,2}`, evaluated at `x`, exploiting
    /// `I^{1-s} P_l = l!/Gamma(l+2-s) (1+x)^{1-s} P_l^{(s-1,1-s)}`.
    pub fn caputo_deriv_eval(&self, mu: f64, x: f64) -> f64 {
        let (coeffs, fam, rho) = self.caputo_deriv_series(mu);
        let w = if 1.0 + x <= 0.0 { 0.0 } else { (1.0 + x).powf(rho) };
        w * jacobi_series_eval(&coeffs, fam, x)
    }

    /// Jacobi-series form of the Caputo derivative: `(coeffs, fam, rho)`
    /// such that `D^mu u (x) = (1+x)^rho sum_l coeffs[l] P_l^{fam}(x)`.
    /// Splitting this out lets callers that evaluate one polynomial at
    /// many points pay the gamma-function cost once.
    pub fn caputo_deriv_series(&self, mu: f64) -> (Vec<f64>, JacobiParam, f64) {
        let k = mu.ceil() as usize;
        let s = mu - (k as f64 - 1.0);
        let mut d = self.derivative();
        if k == 2 {
            d = d.derivative();
        }
        let rho = 1.0 - s;
        let fam = JacobiParam { alpha: -rho, beta: rho };
        let coeffs = d
            .0
            .iter()
            .enumerate()
            .map(|(l, &c)| {
                if c == 0.0 {
                    0.0
                } else {
                    let lf = l as f64;
                    c * gamma_ratio(lf + 1.0, lf + rho + 1.0)
                }
            })
            .collect();
        (coeffs, fam, rho)
    }

    /// Modified Riemann-Liouville derivative `(1+x)^mu D_RL^mu` of order
    /// `mu in (0,1)` at `x`, using
    /// `RLmod^mu P_l = l!/Gamma(l-mu+1) P_l^{(mu,-mu)}`.
    pub fn rl_mod_deriv_eval(&self, mu: f64, x: f64) -> f64 {
        let (coeffs, fam) = self.rl_mod_deriv_series(mu);
        jacobi_series_eval(&coeffs, fam, x)
    }

    /// Jacobi-series form of the modified Riemann-Liouville derivative:
    /// `(coeffs, fam)` such that `RLmod^mu u = sum_l coeffs[l] P_l^{fam}`.
    pub fn rl_mod_deriv_series(&self, mu: f64) -> (Vec<f64>, JacobiParam) {
        let fam = JacobiParam { alpha: mu, beta: -mu };
        let coeffs = self
            .0
            .iter()
            .enumerate()
            .map(|(l, &c)| {
                if c == 0.0 {
                    0.0
                } else {
                    let lf = l as f64;
                    c * gamma_ratio(lf + 1.0, lf - mu + 1.0)
                }
            })
            .collect();
        (coeffs, fam)
    }
}
