//! Built-in benchmark problems with closed-form exact solutions and
//! right-hand sides, used by the regression suite and the command-line
//! runner.

use crate::error::{Error, Result};
use crate::mittag::{caputo_exp_rhs, ml_eval};
use crate::orthopoly::JacobiParam;
use crate::solver::{
    l2_error, real_fn, solve, CollocationProblem, ProblemKind, RealFn, Scheme, SolveOptions,
    SolveReport, Solution,
};
use crate::special::{gamma_ratio, recip_gamma};

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 5] =
    ["sec61", "sec62", "caputo-smooth", "rl-smooth", "rl-table1"];

/// A named problem with known exact solution.
#[derive(Clone)]
pub struct Preset {
    pub name: &'static str,
    pub kind: ProblemKind,
    pub mu: f64,
    pub nu: Option<f64>,
    pub params: JacobiParam,
    pub lambda1: RealFn,
    pub lambda2: RealFn,
    pub rhs: RealFn,
    pub exact: RealFn,
    pub u_minus: f64,
    pub u_plus: f64,
}

impl Preset {
    /// Instantiates the preset at resolution `n` under `scheme`.
    pub fn problem(&self, n: usize, scheme: Scheme) -> CollocationProblem {
        CollocationProblem {
            kind: self.kind,
            mu: self.mu,
            nu: self.nu,
            lambda1: self.lambda1.clone(),
            lambda2: self.lambda2.clone(),
            rhs: self.rhs.clone(),
            u_minus: self.u_minus,
            u_plus: self.u_plus,
            n,
            params: self.params,
            scheme,
        }
    }

    /// Solves at resolution `n` and fills `error_l2` against the exact
    /// solution.
    pub fn run(
        &self,
        n: usize,
        scheme: Scheme,
        opts: &SolveOptions,
    ) -> Result<(SolveReport, Solution)> {
        let problem = self.problem(n, scheme);
        let (mut report, solution) = solve(&problem, opts)?;
        let exact = self.exact.clone();
        report.error_l2 = Some(l2_error(|x| solution.eval(x), |x| exact(x)));
        Ok((report, solution))
    }
}

fn ml(a: f64, b: f64, z: f64) -> f64 {
    ml_eval(a, b, z).expect("preset argument stays inside the Mittag-Leffler fence")
}

/// Caputo derivative of `(1+x)^eta` for real `eta > k - 1`.
fn caputo_power(mu: f64, eta: f64, x: f64) -> f64 {
    gamma_ratio(eta + 1.0, eta + 1.0 - mu) * (1.0 + x).powf(eta - mu)
}

const LAM12_1: fn(f64) -> f64 = |x| 2.0 + (4.0 * std::f64::consts::PI * x).sin();
const LAM12_2: fn(f64) -> f64 = |x| 2.0 + x.cos();
const LAM34_1: fn(f64) -> f64 = |x| 1.0 + (-1000.0 * x * x).exp();
const LAM34_2: fn(f64) -> f64 = |x| 1.0 + (-1000.0 * (x + 0.2) * (x + 0.2)).exp();

/// Smooth BVP exact solution `e^{-(1+x)} - (1-x)/2 - e^{-2}(1+x)/2`, which
/// vanishes at both endpoints; equals `e^{-t} - 1 + c t` with
/// `t = 1 + x`, `c = (1 - e^{-2})/2`.
fn smooth_exact(x: f64) -> f64 {
    let c = 0.5 * (1.0 - (-2.0f64).exp());
    (-(1.0 + x)).exp() - 1.0 + c * (1.0 + x)
}

fn check_low(mu: f64) -> Result<f64> {
    if mu > 0.0 && mu < 1.0 {
        Ok(mu)
    } else {
        Err(Error::domain(format!("this preset needs mu in (0,1), got {mu}")))
    }
}

fn check_high(mu: f64, nu: f64) -> Result<(f64, f64)> {
    if !(mu > 1.0 && mu < 2.0) {
        return Err(Error::domain(format!("this preset needs mu in (1,2), got {mu}")));
    }
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::domain(format!("this preset needs nu in (0,1), got {nu}")));
    }
    Ok((mu, nu))
}

/// Looks up a preset by name, optionally overriding the default fractional
/// orders.
pub fn preset(name: &str, mu: Option<f64>, nu: Option<f64>) -> Result<Preset> {
    match name {
        "sec61" => {
            // D^mu u + (2 + sin 25x) u = f, u = E_{mu,1}(-2(1+x)^mu);
            // D^mu u = -2u, so f = (lambda - 2) u = sin(25x) u
            let mu = check_low(mu.unwrap_or(0.8))?;
            let u = move |x: f64| ml(mu, 1.0, -2.0 * (1.0 + x).powf(mu));
            Ok(Preset {
                name: "sec61",
                kind: ProblemKind::IvpCaputo,
                mu,
                nu: None,
                params: JacobiParam::new(mu - 1.0, 1.0 - mu)?,
                lambda1: real_fn(|x: f64| 2.0 + (25.0 * x).sin()),
                lambda2: real_fn(|_| 0.0),
                rhs: real_fn(move |x: f64| (25.0 * x).sin() * u(x)),
                exact: real_fn(u),
                u_minus: 1.0,
                u_plus: 0.0,
            })
        }
        "sec62" => {
            // Caputo BVP with u = e^{1+x} + (1+x)^{46/7} - 2(1+x)^{39/7}
            let (mu, nu) = check_high(mu.unwrap_or(1.9), nu.unwrap_or(0.7))?;
            let (e1, e2) = (46.0 / 7.0, 39.0 / 7.0);
            let u = move |x: f64| {
                (1.0 + x).exp() + (1.0 + x).powf(e1) - 2.0 * (1.0 + x).powf(e2)
            };
            let rhs = move |x: f64| {
                let dmu = caputo_exp_rhs(mu, x).expect("mu in (1,2)")
                    + caputo_power(mu, e1, x)
                    - 2.0 * caputo_power(mu, e2, x);
                let dnu = caputo_exp_rhs(nu, x).expect("nu in (0,1)")
                    + caputo_power(nu, e1, x)
                    - 2.0 * caputo_power(nu, e2, x);
                dmu + LAM12_1(x) * dnu + LAM12_2(x) * u(x)
            };
            Ok(Preset {
                name: "sec62",
                kind: ProblemKind::BvpCaputo,
                mu,
                nu: Some(nu),
                params: JacobiParam::new(mu - 2.0, 2.0 - mu)?,
                lambda1: real_fn(LAM12_1),
                lambda2: real_fn(LAM12_2),
                rhs: real_fn(rhs),
                exact: real_fn(u),
                u_minus: 1.0,
                u_plus: 2.0f64.exp(),
            })
        }
        "caputo-smooth" => {
            // Caputo BVP, smooth exact solution, exponential convergence.
            // With u = e^{-t} - 1 + c t (t = 1+x): the Caputo D^mu
            // (k = 2) annihilates the linear part, and
            // D^mu e^{-t} = t^{2-mu} E_{1,3-mu}(-t);
            // D^nu u = -t^{1-nu} E_{1,2-nu}(-t) + c t^{1-nu}/Gamma(2-nu)
            let (mu, nu) = check_high(mu.unwrap_or(1.5), nu.unwrap_or(0.6))?;
            let c = 0.5 * (1.0 - (-2.0f64).exp());
            let rhs = move |x: f64| {
                let t = 1.0 + x;
                let dmu = t.powf(2.0 - mu) * ml(1.0, 3.0 - mu, -t);
                let dnu = -t.powf(1.0 - nu) * ml(1.0, 2.0 - nu, -t)
                    + c * t.powf(1.0 - nu) * recip_gamma(2.0 - nu);
                dmu + LAM12_1(x) * dnu + LAM12_2(x) * smooth_exact(x)
            };
            Ok(Preset {
                name: "caputo-smooth",
                kind: ProblemKind::BvpCaputo,
                mu,
                nu: Some(nu),
                params: JacobiParam::new(mu - 2.0, 2.0 - mu)?,
                lambda1: real_fn(LAM12_1),
                lambda2: real_fn(LAM12_2),
                rhs: real_fn(rhs),
                exact: real_fn(smooth_exact),
                u_minus: 0.0,
                u_plus: 0.0,
            })
        }
        "rl-smooth" => {
            // Riemann-Liouville BVP with the same smooth exact solution;
            // for u = e^{-t} - 1 + c t the RL derivative of any order
            // sigma gives
            // D^sigma u = -t^{1-sigma} E_{1,2-sigma}(-t)
            //           + c t^{1-sigma}/Gamma(2-sigma)
            let (mu, nu) = check_high(mu.unwrap_or(1.5), nu.unwrap_or(0.6))?;
            let c = 0.5 * (1.0 - (-2.0f64).exp());
            let rl = move |sigma: f64, t: f64| {
                -t.powf(1.0 - sigma) * ml(1.0, 2.0 - sigma, -t)
                    + c * t.powf(1.0 - sigma) * recip_gamma(2.0 - sigma)
            };
            let rhs = move |x: f64| {
                let t = 1.0 + x;
                rl(mu, t) + LAM12_1(x) * rl(nu, t) + LAM12_2(x) * smooth_exact(x)
            };
            Ok(Preset {
                name: "rl-smooth",
                kind: ProblemKind::BvpModRl,
                mu,
                nu: Some(nu),
                params: JacobiParam::new(mu, 1.0 - mu)?,
                lambda1: real_fn(LAM12_1),
                lambda2: real_fn(LAM12_2),
                rhs: real_fn(rhs),
                exact: real_fn(smooth_exact),
                u_minus: 0.0,
                u_plus: 0.0,
            })
        }
        "rl-table1" => {
            // RL BVP with finite-regularity exact solution
            // u = E_{mu,1}(-(1+x)^mu/2) + C(1+x) - 1,
            // C = (1 - E_{mu,1}(-2^{mu-1}))/2, u(+-1) = 0;
            // D^mu u = -E_{mu,1}(-t^mu/2)/2 + C t^{1-mu}/Gamma(2-mu),
            // D^nu u = -(t^{mu-nu}/2) E_{mu,mu+1-nu}(-t^mu/2)
            //        + C t^{1-nu}/Gamma(2-nu).
            // The (mu, 1-mu) node family matches the natural weight
            // (1+x)^mu of the modified operator.
            let (mu, nu) = check_high(mu.unwrap_or(1.5), nu.unwrap_or(0.6))?;
            let cc = 0.5 * (1.0 - ml(mu, 1.0, -(2.0f64.powf(mu - 1.0))));
            let u = move |x: f64| {
                let t = 1.0 + x;
                ml(mu, 1.0, -0.5 * t.powf(mu)) + cc * t - 1.0
            };
            let rhs = move |x: f64| {
                let t = 1.0 + x;
                let z = -0.5 * t.powf(mu);
                let dmu = -0.5 * ml(mu, 1.0, z) + cc * t.powf(1.0 - mu) * recip_gamma(2.0 - mu);
                let dnu = -0.5 * t.powf(mu - nu) * ml(mu, mu + 1.0 - nu, z)
                    + cc * t.powf(1.0 - nu) * recip_gamma(2.0 - nu);
                dmu + LAM34_1(x) * dnu + LAM34_2(x) * u(x)
            };
            Ok(Preset {
                name: "rl-table1",
                kind: ProblemKind::BvpModRl,
                mu,
                nu: Some(nu),
                params: JacobiParam::new(mu, 1.0 - mu)?,
                lambda1: real_fn(LAM34_1),
                lambda2: real_fn(LAM34_2),
                rhs: real_fn(rhs),
                exact: real_fn(u),
                u_minus: 0.0,
                u_plus: 0.0,
            })
        }
        other => Err(Error::domain(format!(
            "unknown preset '{other}'; available: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}
