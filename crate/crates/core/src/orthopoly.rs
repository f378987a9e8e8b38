//! Jacobi polynomials: evaluation, derivatives, norms and the Legendre
//! antiderivative machinery used by the Birkhoff basis construction.
//!
//! Normalisation follows Szego: `P_n^{(a,b)}(1) = Gamma(n+a+1)/(n! Gamma(a+1))`.

use crate::error::{Error, Result};
use crate::special::{gamma_ratio, ln_gamma_pos, KahanSum};

/// A Jacobi parameter pair `(alpha, beta)` with `alpha, beta > -1`,
/// identifying a classical Jacobi family and its weight
/// `(1-x)^alpha (1+x)^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParam {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParam {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::domain(format!(
                "Jacobi parameters must satisfy alpha, beta > -1, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// The Legendre pair (0, 0).
    pub fn legendre() -> Self {
        Self { alpha: 0.0, beta: 0.0 }
    }

    pub fn is_legendre(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }
}

/// Squared norm `gamma_n` of `P_n^{(a,b)}` and the boundary-modified norm
/// `gamma_tilde` used by Gauss-Lobatto interpolation (they differ only at
/// the top degree `n = N`).
#[derive(Debug, Clone, Copy)]
pub struct JacobiNorm {
    pub gamma_n: f64,
    pub gamma_tilde: f64,
}

/// Evaluates `P_n^{(alpha,beta)}(x)` by the ascending three-term recurrence.
pub fn jacobi_eval(n: usize, p: JacobiParam, x: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if n == 0 {
        return 1.0;
    }
    let mut pm1 = 1.0;
    let mut pcur = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
    for k in 1..n {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        // 2(k+1)(k+ab+1)c * P_{k+1} = (c+1)[c(c+2) x + a^2-b^2] P_k
        //                             - 2(k+a)(k+b)(c+2) P_{k-1}
        let denom = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * c;
        let c1 = (c + 1.0) * (c * (c + 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (kf + a) * (kf + b) * (c + 2.0);
        let pnext = (c1 * pcur - c2 * pm1) / denom;
        pm1 = pcur;
        pcur = pnext;
    }
    pcur
}

/// Evaluates the series `sum_l coeffs[l] P_l^{(alpha,beta)}(x)` in a
/// single ascending pass of the three-term recurrence (instead of one
/// recurrence per term, which would cost O(len^2)).
pub fn jacobi_series_eval(coeffs: &[f64], p: JacobiParam, x: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let mut sum = KahanSum::new();
    if coeffs.is_empty() {
        return 0.0;
    }
    let mut pm1 = 1.0;
    sum.add(coeffs[0]);
    if coeffs.len() == 1 {
        return sum.value();
    }
    let mut pcur = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
    sum.add(coeffs[1] * pcur);
    for k in 1..coeffs.len() - 1 {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        let denom = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * c;
        let c1 = (c + 1.0) * (c * (c + 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (kf + a) * (kf + b) * (c + 2.0);
        let pnext = (c1 * pcur - c2 * pm1) / denom;
        pm1 = pcur;
        pcur = pnext;
        sum.add(coeffs[k + 1] * pcur);
    }
    sum.value()
}

/// First derivative of `P_n^{(alpha,beta)}` at `x`, via
/// `D P_n^{(a,b)} = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}`.
pub fn jacobi_deriv_eval(n: usize, p: JacobiParam, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let shifted = JacobiParam { alpha: p.alpha + 1.0, beta: p.beta + 1.0 };
    0.5 * (n as f64 + p.alpha + p.beta + 1.0) * jacobi_eval(n - 1, shifted, x)
}

/// `P_n^{(a,b)}(1) = Gamma(n+a+1) / (n! Gamma(a+1))`.
pub fn jacobi_at_one(n: usize, p: JacobiParam) -> f64 {
    let nf = n as f64;
    (ln_gamma_pos(nf + p.alpha + 1.0) - ln_gamma_pos(nf + 1.0) - ln_gamma_pos(p.alpha + 1.0)).exp()
}

/// `P_n^{(a,b)}(-1) = (-1)^n Gamma(n+b+1) / (n! Gamma(b+1))` (parity).
pub fn jacobi_at_minus_one(n: usize, p: JacobiParam) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let nf = n as f64;
    sign * (ln_gamma_pos(nf + p.beta + 1.0) - ln_gamma_pos(nf + 1.0) - ln_gamma_pos(p.beta + 1.0))
        .exp()
}

/// Weighted L2 norm data for degree `n` within a rule of top degree `top`.
///
/// `gamma_tilde` carries the Lobatto modification `(2 + (a+b+1)/N) gamma_N`
/// at `n == top` and equals `gamma_n` below it. All Gamma ratios go through
/// log-Gamma so degrees up to a few thousand are safe.
pub fn jacobi_norm(n: usize, top: usize, p: JacobiParam) -> JacobiNorm {
    let gamma_n = jacobi_gamma(n, p);
    let gamma_tilde = if n == top && top > 0 {
        (2.0 + (p.alpha + p.beta + 1.0) / top as f64) * gamma_n
    } else {
        gamma_n
    };
    JacobiNorm { gamma_n, gamma_tilde }
}

/// `gamma_n = 2^{a+b+1} Gamma(n+a+1) Gamma(n+b+1)
///            / ((2n+a+b+1) n! Gamma(n+a+b+1))`.
pub fn jacobi_gamma(n: usize, p: JacobiParam) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    let ln = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma_pos(nf + a + 1.0)
        + ln_gamma_pos(nf + b + 1.0)
        - ln_gamma_pos(nf + 1.0)
        - ln_gamma_pos(nf + a + b + 1.0);
    ln.exp() / (2.0 * nf + a + b + 1.0)
}

/// Ratio of leading coefficients k_n^{(a,b)} between two Jacobi families:
/// `k_n = Gamma(2n+a+b+1) / (2^n n! Gamma(n+a+b+1))`.
pub fn leading_coeff_ratio(n: usize, num: JacobiParam, den: JacobiParam) -> f64 {
    let nf = n as f64;
    gamma_ratio(2.0 * nf + num.alpha + num.beta + 1.0, nf + num.alpha + num.beta + 1.0)
        / gamma_ratio(2.0 * nf + den.alpha + den.beta + 1.0, nf + den.alpha + den.beta + 1.0)
}

/// `int_{-1}^x P_l(t) dt`: `(P_{l+1}(x) - P_{l-1}(x)) / (2l+1)` for `l >= 1`,
/// and `1 + x` for `l = 0`.
pub fn legendre_antideriv(l: usize, x: f64) -> f64 {
    let leg = JacobiParam::legendre();
    if l == 0 {
        1.0 + x
    } else {
        (jacobi_eval(l + 1, leg, x) - jacobi_eval(l - 1, leg, x)) / (2.0 * l as f64 + 1.0)
    }
}

/// Second antiderivative `int_{-1}^x (x - t) P_l(t) dt`, in closed form.
pub fn legendre_antideriv2(l: usize, x: f64) -> f64 {
    let leg = JacobiParam::legendre();
    match l {
        0 => 0.5 * (1.0 + x) * (1.0 + x),
        1 => {
            ((jacobi_eval(3, leg, x) - jacobi_eval(1, leg, x)) / 5.0 - (1.0 + x)) / 3.0
        }
        _ => {
            let lf = l as f64;
            let up = (jacobi_eval(l + 2, leg, x) - jacobi_eval(l, leg, x)) / (2.0 * lf + 3.0);
            let dn = (jacobi_eval(l, leg, x) - jacobi_eval(l - 2, leg, x)) / (2.0 * lf - 1.0);
            (up - dn) / (2.0 * lf + 1.0)
        }
    }
}

/// `Phi_l(x) = (1+x)/2 * int_{-1}^1 (t-1) P_l dt + int_{-1}^x (x-t) P_l dt`,
/// the basis used for the order-(1,2) Caputo Birkhoff members. Vanishes at
/// both endpoints.
pub fn phi_l(l: usize, x: f64) -> f64 {
    // int_{-1}^1 (t-1) P_l dt = -2, 2/3, 0 for l = 0, 1, >= 2
    let moment = match l {
        0 => -2.0,
        1 => 2.0 / 3.0,
        _ => 0.0,
    };
    0.5 * (1.0 + x) * moment + legendre_antideriv2(l, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    #[test]
    fn degree_zero_is_one() {
        let p = JacobiParam::new(0.7, -0.3).unwrap();
        assert_eq!(jacobi_eval(0, p, 0.3), 1.0);
    }

    #[test]
    fn value_at_one_matches_gamma_formula() {
        let p = JacobiParam::new(0.7, -0.3).unwrap();
        // P_5^{(0.7,-0.3)}(1) = Gamma(6.7)/(5! Gamma(1.7))
        let expected =
            (ln_gamma_pos(6.7) - ln_gamma_pos(6.0) - ln_gamma_pos(1.7)).exp();
        assert_relative_eq!(jacobi_eval(5, p, 1.0), expected, max_relative = 1e-13);
        assert_relative_eq!(jacobi_at_one(5, p), expected, max_relative = 1e-13);
    }

    #[test]
    fn legendre_p3() {
        // P_3(x) = (5x^3 - 3x)/2, so P_3(0.5) = -0.4375
        assert_relative_eq!(
            jacobi_eval(3, JacobiParam::legendre(), 0.5),
            -0.4375,
            max_relative = 1e-14
        );
    }

    #[test]
    fn deriv_base_cases() {
        let p = JacobiParam::legendre();
        assert_eq!(jacobi_deriv_eval(0, p, 0.2), 0.0);
        assert_relative_eq!(jacobi_deriv_eval(1, p, 0.9), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn deriv_matches_finite_difference() {
        let p = JacobiParam::legendre();
        let h = 1e-5;
        let x = 0.2;
        let fd = (jacobi_eval(4, p, x + h) - jacobi_eval(4, p, x - h)) / (2.0 * h);
        assert_abs_diff_eq!(jacobi_deriv_eval(4, p, x), fd, epsilon = 1e-6);
    }

    #[test]
    fn norms_legendre() {
        let p = JacobiParam::legendre();
        assert_relative_eq!(jacobi_norm(0, 8, p).gamma_n, 2.0, max_relative = 1e-14);
        assert_relative_eq!(jacobi_norm(2, 8, p).gamma_n, 0.4, max_relative = 1e-14);
        let top = jacobi_norm(8, 8, p);
        assert_relative_eq!(top.gamma_tilde, (2.0 + 1.0 / 8.0) * (2.0 / 17.0), max_relative = 1e-13);
        assert_relative_eq!(top.gamma_n, 2.0 / 17.0, max_relative = 1e-13);
    }

    #[test]
    fn parity_symmetry() {
        let p = JacobiParam::new(0.4, -0.6).unwrap();
        let q = JacobiParam::new(-0.6, 0.4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let n = rng.gen_range(0..40usize);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(
                jacobi_eval(n, p, x),
                sign * jacobi_eval(n, q, -x),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn recurrence_residual_high_degree() {
        // consistency of consecutive degrees against the recurrence itself,
        // evaluated independently at n-1, n, n+1
        let p = JacobiParam::new(0.3, 0.9).unwrap();
        let (a, b) = (p.alpha, p.beta);
        for &x in &[-1.0, -0.7321, 0.0, 0.5, 0.99, 1.0] {
            for n in (2..=256).step_by(17) {
                let kf = (n - 1) as f64;
                let c = 2.0 * kf + a + b;
                let denom = 2.0 * (kf + 1.0) * (kf + a + b + 1.0) * c;
                let c1 = (c + 1.0) * (c * (c + 2.0) * x + a * a - b * b);
                let c2 = 2.0 * (kf + a) * (kf + b) * (c + 2.0);
                let lhs = denom * jacobi_eval(n, p, x);
                let rhs = c1 * jacobi_eval(n - 1, p, x) - c2 * jacobi_eval(n - 2, p, x);
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9 * denom.abs().max(1.0));
            }
        }
    }

    #[test]
    fn antideriv_basics() {
        assert_relative_eq!(legendre_antideriv(0, 1.0), 2.0, max_relative = 1e-14);
        // l = 1: (x^2-1)/2
        assert_relative_eq!(legendre_antideriv(1, 0.3), (0.09 - 1.0) / 2.0, max_relative = 1e-12);
        for l in 1..20 {
            assert_abs_diff_eq!(legendre_antideriv(l, 1.0), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn phi_vanishes_at_endpoints() {
        for l in 0..16 {
            assert_abs_diff_eq!(phi_l(l, -1.0), 0.0, epsilon = 1e-13);
            assert_abs_diff_eq!(phi_l(l, 1.0), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn phi_second_derivative_is_legendre() {
        let h = 1e-4;
        for l in 0..8 {
            for &x in &[-0.6, -0.1, 0.4, 0.8] {
                let fd = (phi_l(l, x + h) - 2.0 * phi_l(l, x) + phi_l(l, x - h)) / (h * h);
                assert_abs_diff_eq!(fd, jacobi_eval(l, JacobiParam::legendre(), x), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn phi_matches_quadrature_oracle() {
        // adaptive-ish oracle: high-order composite Simpson of the defining
        // integral of Phi_l
        let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| -> f64 {
            let n = 2000;
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(a + i as f64 * h);
            }
            s * h / 3.0
        };
        let l = 3;
        let x = 0.4;
        let leg = JacobiParam::legendre();
        let moment = simpson(&|t| (t - 1.0) * jacobi_eval(l, leg, t), -1.0, 1.0);
        let tail = simpson(&|t| (x - t) * jacobi_eval(l, leg, t), -1.0, x);
        let oracle = 0.5 * (1.0 + x) * moment + tail;
        assert_abs_diff_eq!(phi_l(l, x), oracle, epsilon = 1e-10);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(JacobiParam::new(-1.0, 0.0).is_err());
        assert!(JacobiParam::new(0.0, -1.5).is_err());
    }
}
