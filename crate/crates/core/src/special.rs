//! Gamma-function helpers shared by every module.
//!
//! All Gamma ratios are computed through log-Gamma differences so that
//! degrees up to a few thousand do not overflow. Arguments on the negative
//! real axis are handled by the reflection formula, and the reciprocal
//! Gamma convention `1/Gamma(-m) = 0` (m a non-negative integer) is applied
//! wherever a pole can occur.

use statrs::function::gamma::ln_gamma;

/// Log of Gamma for positive arguments.
pub fn ln_gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma_pos called with x = {x}");
    ln_gamma(x)
}

/// True if `x` is (numerically) a non-positive integer, i.e. a Gamma pole.
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.5 && (x - x.round()).abs() < 1e-12
}

/// Gamma on the whole real line (excluding poles, where it returns
/// +/- infinity).
pub fn gamma_fn(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else if is_gamma_pole(x) {
        f64::INFINITY
    } else {
        // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * ln_gamma(1.0 - x).exp())
    }
}

/// Reciprocal Gamma, entire: exactly 0 at non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if x > 0.5 {
        (-ln_gamma(x)).exp()
    } else if is_gamma_pole(x) {
        0.0
    } else {
        (std::f64::consts::PI * x).sin() * ln_gamma(1.0 - x).exp() / std::f64::consts::PI
    }
}

/// Gamma(num) / Gamma(den), with the reciprocal-Gamma convention when the
/// denominator sits on a pole.
pub fn gamma_ratio(num: f64, den: f64) -> f64 {
    if num > 0.0 && den > 0.0 {
        (ln_gamma(num) - ln_gamma(den)).exp()
    } else {
        gamma_fn(num) * recip_gamma(den)
    }
}

/// Compensated (Kahan) summation accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: f64) {
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}
