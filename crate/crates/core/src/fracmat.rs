//! Fractional pseudospectral differentiation matrices (F-PSDMs) at JGL
//! points: Caputo and modified Riemann-Liouville flavours, plus the
//! modified fractional integral matrix and the first-order PSDM.

use nalgebra::DMatrix;

use crate::connection::connection_matrix;
use crate::error::{Error, Result};
use crate::orthopoly::{jacobi_deriv_eval, jacobi_eval, JacobiParam};
use crate::quadrature::{barycentric_weights, lagrange_coeffs, QuadratureRule};
use crate::special::gamma_ratio;

/// Which fractional derivative a matrix discretises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivKind {
    Caputo,
    /// `(1+x)^mu` times the left Riemann-Liouville derivative.
    ModifiedRL,
}

impl DerivKind {
    pub fn label(&self) -> &'static str {
        match self {
            DerivKind::Caputo => "caputo",
            DerivKind::ModifiedRL => "modified-rl",
        }
    }
}

/// A fractional differentiation matrix together with its metadata. The
/// `full` matrix acts on nodal values at all `N + 1` JGL points; the
/// interior block (which is invertible) drops the rows and columns of the
/// `ceil(mu)` boundary condition(s) at `x = -1` (and `x = 1` when
/// `mu in (1,2)`).
#[derive(Debug, Clone)]
pub struct Fpsdm {
    pub kind: DerivKind,
    pub mu: f64,
    pub params: JacobiParam,
    pub full: DMatrix<f64>,
}

impl Fpsdm {
    pub fn top(&self) -> usize {
        self.full.nrows() - 1
    }

    /// Index range of the interior block: `1..=N` for `mu in (0,1)`,
    /// `1..=N-1` for `mu in (1,2)`.
    pub fn interior_range(&self) -> std::ops::RangeInclusive<usize> {
        let n = self.top();
        if self.mu < 1.0 {
            1..=n
        } else {
            1..=n - 1
        }
    }

    pub fn interior(&self) -> DMatrix<f64> {
        let r = self.interior_range();
        let (lo, hi) = (*r.start(), *r.end());
        let m = hi - lo + 1;
        self.full.view((lo, lo), (m, m)).into_owned()
    }

    /// CSV dump: metadata header line, then one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# N={},mu={},alpha={},beta={},flavor={}\n",
            self.top(),
            self.mu,
            self.params.alpha,
            self.params.beta,
            self.kind.label()
        );
        for i in 0..self.full.nrows() {
            let row: Vec<String> =
                (0..self.full.ncols()).map(|j| format!("{:.16e}", self.full[(i, j)])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// First-order PSDM at the nodes of `rule`, by barycentric differentiation
/// with negative-sum diagonal entries.
pub fn psdm_first_order(rule: &QuadratureRule) -> DMatrix<f64> {
    let x = &rule.nodes;
    let m = x.len();
    let bw = barycentric_weights(x);
    let mut d = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        let mut diag = 0.0;
        for j in 0..m {
            if i != j {
                let v = (bw[j] / bw[i]) / (x[i] - x[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    d
}

fn check_order(mu: f64) -> Result<usize> {
    if !(mu > 0.0 && mu < 2.0) || mu == 1.0 {
        return Err(Error::domain(format!(
            "fractional order must lie in (0,1) or (1,2), got {mu}"
        )));
    }
    Ok(if mu < 1.0 { 1 } else { 2 })
}

/// Expansion coefficients `s_lj` (`1 <= l <= N`) of the Legendre series of
/// `h_j'`, i.e. `h_j' = sum_l s_lj P_{l-1}`.
fn deriv_legendre_coeffs(rule: &QuadratureRule) -> Result<DMatrix<f64>> {
    let n = rule.top();
    let p = rule.params;
    let mut s = DMatrix::<f64>::zeros(n, n + 1);
    if p.is_legendre() {
        // bypass the connection problem:
        // s_lj = (2l-1)/2 {delta_jN + (-1)^l delta_j0 - w_j P'_{l-1}(x_j)}
        for l in 1..=n {
            let half = (2.0 * l as f64 - 1.0) / 2.0;
            for j in 0..=n {
                let mut v = -rule.weights[j] * jacobi_deriv_eval(l - 1, p, rule.nodes[j]);
                if j == n {
                    v += 1.0;
                }
                if j == 0 {
                    v += if l % 2 == 0 { 1.0 } else { -1.0 };
                }
                s[(l - 1, j)] = half * v;
            }
        }
        return Ok(s);
    }
    let t = lagrange_coeffs(rule)?;
    let shifted = JacobiParam { alpha: p.alpha + 1.0, beta: p.beta + 1.0 };
    let conn = connection_matrix(n - 1, shifted, JacobiParam::legendre())?;
    // s_lj = 1/2 sum_{n'=l}^N (n'+alpha+beta+1) C_{l-1,n'-1} t_{n'j}
    for l in 1..=n {
        for j in 0..=n {
            let mut acc = 0.0;
            for np in l..=n {
                acc += (np as f64 + p.alpha + p.beta + 1.0)
                    * conn.c[(l - 1, np - 1)]
                    * t.t[(np, j)];
            }
            s[(l - 1, j)] = 0.5 * acc;
        }
    }
    Ok(s)
}

/// Caputo F-PSDM of order `mu in (0,1) U (1,2)` at the JGL points of
/// `rule`. For `mu in (1,2)` the recursion
/// `D^(mu) = D^(mu-1 fractional part) * D` is used.
pub fn caputo_psdm(rule: &QuadratureRule, mu: f64) -> Result<Fpsdm> {
    let k = check_order(mu)?;
    let s_frac = if k == 1 { mu } else { mu - 1.0 };
    let n = rule.top();
    let s = deriv_legendre_coeffs(rule)?;

    // D_ij = (1+x_i)^{1-s} sum_{l=1}^N (l-1)!/Gamma(l+1-s) s_lj P_{l-1}^{(s-1,1-s)}(x_i)
    let fam = JacobiParam { alpha: s_frac - 1.0, beta: 1.0 - s_frac };
    let mut left = DMatrix::<f64>::zeros(n + 1, n);
    for (i, &x) in rule.nodes.iter().enumerate() {
        let w = if 1.0 + x <= 0.0 { 0.0 } else { (1.0 + x).powf(1.0 - s_frac) };
        for l in 1..=n {
            let lf = l as f64;
            left[(i, l - 1)] = w * gamma_ratio(lf, lf + 1.0 - s_frac) * jacobi_eval(l - 1, fam, x);
        }
    }
    let mut full = left * s;
    if k == 2 {
        full *= psdm_first_order(rule);
    }
    Ok(Fpsdm { kind: DerivKind::Caputo, mu, params: rule.params, full })
}

/// Modified fractional integral matrix `hat I^(mu)`, `mu in (0,1)`:
/// `I_ij = sum_l l!/Gamma(l+mu+1) shat_lj P_l^{(-mu,mu)}(x_i)` where
/// `shat_lj` are the Legendre coefficients of `h_j`.
pub fn rl_int_matrix(rule: &QuadratureRule, mu: f64) -> Result<DMatrix<f64>> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::domain(format!(
            "integral order must lie in (0,1), got {mu}"
        )));
    }
    let n = rule.top();
    let t = lagrange_coeffs(rule)?;
    let shat = if rule.params.is_legendre() {
        t.t.clone()
    } else {
        let conn = connection_matrix(n, rule.params, JacobiParam::legendre())?;
        &conn.c * &t.t
    };
    let fam = JacobiParam { alpha: -mu, beta: mu };
    let mut left = DMatrix::<f64>::zeros(n + 1, n + 1);
    for (i, &x) in rule.nodes.iter().enumerate() {
        for l in 0..=n {
            let lf = l as f64;
            left[(i, l)] = gamma_ratio(lf + 1.0, lf + mu + 1.0) * jacobi_eval(l, fam, x);
        }
    }
    Ok(left * shat)
}

/// Modified Riemann-Liouville F-PSDM of order `mu in (0,1) U (1,2)`:
/// `Dhat^(mu) = Dbreve^(k) * hat I^(k-mu)` where `Dbreve^(k)` expands the
/// weighted integer derivative `(1+x)^mu D^k (1+x)^{k-mu}` by the product
/// rule.
pub fn rl_mod_psdm(rule: &QuadratureRule, mu: f64) -> Result<Fpsdm> {
    let k = check_order(mu)?;
    let n = rule.top();
    let integral = rl_int_matrix(rule, k as f64 - mu)?;
    let d = psdm_first_order(rule);
    let lam = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_iterator(
        n + 1,
        rule.nodes.iter().map(|&x| 1.0 + x),
    ));
    let breve = if k == 1 {
        // (1-mu) I + Lambda D
        let mut m = &lam * &d;
        for i in 0..=n {
            m[(i, i)] += 1.0 - mu;
        }
        m
    } else {
        // (2-mu)(1-mu) I + 2(2-mu) Lambda D + Lambda^2 D^2
        let mut m = &lam * &lam * &d * &d;
        m += &lam * &d * (2.0 * (2.0 - mu));
        for i in 0..=n {
            m[(i, i)] += (2.0 - mu) * (1.0 - mu);
        }
        m
    };
    Ok(Fpsdm { kind: DerivKind::ModifiedRL, mu, params: rule.params, full: breve * integral })
}

/// Closed-form fractional derivative of the shifted monomial `(1+x)^eta`
/// (`eta` a non-negative integer), used as an oracle in tests and the
/// verification command. The Caputo derivative annihilates
/// `eta < ceil(mu)`; the modified RL flavour returns
/// `Gamma(eta+1)/Gamma(eta-mu+1) (1+x)^eta`.
pub fn frac_monomial_oracle(kind: DerivKind, mu: f64, eta: u32, x: f64) -> f64 {
    let etaf = eta as f64;
    match kind {
        DerivKind::Caputo => {
            if etaf < mu.ceil() {
                0.0
            } else {
                let c = gamma_ratio(etaf + 1.0, etaf - mu + 1.0);
                if 1.0 + x <= 0.0 && etaf - mu != 0.0 {
                    0.0
                } else {
                    c * (1.0 + x).powf(etaf - mu)
                }
            }
        }
        DerivKind::ModifiedRL => {
            gamma_ratio(etaf + 1.0, etaf - mu + 1.0) * (1.0 + x).powi(eta as i32)
        }
    }
}

/// `hat I^mu (1+x)^eta = Gamma(eta+1)/Gamma(eta+mu+1) (1+x)^eta`.
pub fn int_monomial_oracle(mu: f64, eta: u32, x: f64) -> f64 {
    let etaf = eta as f64;
    gamma_ratio(etaf + 1.0, etaf + mu + 1.0) * (1.0 + x).powi(eta as i32)
}
