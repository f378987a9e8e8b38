//! Fractional Birkhoff interpolation bases.
//!
//! Each basis member is a polynomial stored as a Legendre series, so that
//! off-grid evaluation and analytic fractional differentiation are
//! available. The nodal matrix of the interior members is the exact
//! inverse of the corresponding interior F-PSDM, which is what makes these
//! bases useful both as preconditioners and as trial functions of
//! well-conditioned collocation schemes.

use nalgebra::DMatrix;

use crate::connection::connection_matrix;
use crate::error::{Error, Result};
use crate::fracmat::DerivKind;
use crate::orthopoly::{
    jacobi_at_minus_one, jacobi_at_one, jacobi_eval, jacobi_gamma, jacobi_series_eval, JacobiParam,
};
use crate::quadrature::{lagrange_coeffs, Flavor, QuadratureRule};
use crate::series::LegendreSeries;
use crate::special::{gamma_fn, gamma_ratio, recip_gamma, KahanSum};

/// A full set of Birkhoff basis members `Q_j`, `0 <= j <= N`, including the
/// boundary members.
#[derive(Debug, Clone)]
pub struct BirkhoffBasis {
    pub kind: DerivKind,
    pub mu: f64,
    pub params: JacobiParam,
    pub nodes: Vec<f64>,
    pub members: Vec<LegendreSeries>,
}

impl BirkhoffBasis {
    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Index range of the interior members: `1..=N` for `mu in (0,1)`,
    /// `1..=N-1` for `mu in (1,2)`.
    pub fn interior_range(&self) -> std::ops::RangeInclusive<usize> {
        let n = self.top();
        if self.mu < 1.0 {
            1..=n
        } else {
            1..=n - 1
        }
    }

    /// Nodal matrix `Q_ij = Q_j(x_i)` over the interior indices; the exact
    /// inverse of the interior F-PSDM of the same kind and order.
    pub fn matrix(&self) -> DMatrix<f64> {
        let r = self.interior_range();
        let (lo, hi) = (*r.start(), *r.end());
        let m = hi - lo + 1;
        DMatrix::from_fn(m, m, |i, j| self.members[lo + j].eval(self.nodes[lo + i]))
    }

    /// Interior matrix of the order-`nu` fractional derivative of the
    /// members (`nu in (0,1)`), evaluated analytically from the series:
    /// Caputo for a Caputo basis, modified Riemann-Liouville otherwise.
    pub fn lower_order_matrix(&self, nu: f64) -> Result<DMatrix<f64>> {
        if !(nu > 0.0 && nu < 1.0) {
            return Err(Error::domain(format!(
                "lower derivative order must lie in (0,1), got {nu}"
            )));
        }
        let r = self.interior_range();
        let (lo, hi) = (*r.start(), *r.end());
        let m = hi - lo + 1;
        // scale the series coefficients once per member, then run a single
        // recurrence pass per node; the naive per-entry evaluator would
        // cost O(N^2) gamma calls and O(N^4) recurrence work overall
        let mut out = DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            let member = &self.members[lo + j];
            match self.kind {
                DerivKind::Caputo => {
                    let (coeffs, fam, rho) = member.caputo_deriv_series(nu);
                    for i in 0..m {
                        let x = self.nodes[lo + i];
                        let w = if 1.0 + x <= 0.0 { 0.0 } else { (1.0 + x).powf(rho) };
                        out[(i, j)] = w * jacobi_series_eval(&coeffs, fam, x);
                    }
                }
                DerivKind::ModifiedRL => {
                    let (coeffs, fam) = member.rl_mod_deriv_series(nu);
                    for i in 0..m {
                        out[(i, j)] = jacobi_series_eval(&coeffs, fam, self.nodes[lo + i]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Column of boundary-member derivative values used for lifting
    /// boundary data, `member(j)` evaluated like `lower_order_matrix`.
    pub fn member(&self, j: usize) -> &LegendreSeries {
        &self.members[j]
    }
}

fn check_rule(rule: &QuadratureRule) -> Result<()> {
    if rule.flavor != Flavor::GaussLobatto {
        return Err(Error::domain("Birkhoff bases require a Gauss-Lobatto rule"));
    }
    if rule.top() < 3 {
        return Err(Error::domain("Birkhoff bases require N >= 3"));
    }
    Ok(())
}

/// Caputo Birkhoff basis of order `mu in (0,1) U (1,2)` at the JGL points
/// of `rule`.
pub fn caputo_birkhoff(rule: &QuadratureRule, mu: f64) -> Result<BirkhoffBasis> {
    check_rule(rule)?;
    if mu > 0.0 && mu < 1.0 {
        caputo_birkhoff_01(rule, mu)
    } else if mu > 1.0 && mu < 2.0 {
        caputo_birkhoff_12(rule, mu)
    } else {
        Err(Error::domain(format!(
            "Birkhoff order must lie in (0,1) or (1,2), got {mu}"
        )))
    }
}

/// Modified Riemann-Liouville Birkhoff basis of order `mu` at the JGL
/// points of `rule`.
pub fn rl_birkhoff(rule: &QuadratureRule, mu: f64) -> Result<BirkhoffBasis> {
    check_rule(rule)?;
    if mu > 0.0 && mu < 1.0 {
        rl_birkhoff_01(rule, mu)
    } else if mu > 1.0 && mu < 2.0 {
        rl_birkhoff_12(rule, mu)
    } else {
        Err(Error::domain(format!(
            "Birkhoff order must lie in (0,1) or (1,2), got {mu}"
        )))
    }
}

fn caputo_birkhoff_01(rule: &QuadratureRule, mu: f64) -> Result<BirkhoffBasis> {
    let n = rule.top();
    let p = rule.params;
    // xi_nj, 0 <= n <= N-1, 1 <= j <= N
    let pn_m1 = jacobi_eval(n, p, -1.0);
    let mut xi = DMatrix::<f64>::zeros(n, n + 1);
    for j in 1..=n {
        let cj = if j == n { p.alpha + 1.0 } else { 1.0 };
        let front = -cj / (p.beta + 1.0) * pn_m1 / jacobi_eval(n, p, rule.nodes[j]) * rule.weights[0];
        for nn in 0..n {
            let v = front * jacobi_at_minus_one(nn, p)
                + jacobi_eval(nn, p, rule.nodes[j]) * rule.weights[j];
            xi[(nn, j)] = v / jacobi_gamma(nn, p);
        }
    }
    let target = JacobiParam { alpha: mu - 1.0, beta: 1.0 - mu };
    let conn = connection_matrix(n - 1, p, target)?;
    let xib = if conn.identity { xi } else { &conn.c * xi };

    let mut members = Vec::with_capacity(n + 1);
    members.push(LegendreSeries::one());
    // precompute int_{-1}^x P_l as series
    let antider: Vec<LegendreSeries> = (0..n)
        .map(|l| {
            let mut unit = LegendreSeries::zeros(l + 1);
            unit.0[l] = 1.0;
            unit.antiderivative()
        })
        .collect();
    for j in 1..=n {
        let front = (1.0 + rule.nodes[j]).powf(mu - 1.0);
        let mut q = LegendreSeries::zeros(n + 1);
        for l in 0..n {
            let lf = l as f64;
            let c = front * gamma_ratio(lf - mu + 2.0, lf + 1.0) * xib[(l, j)];
            q.axpy(c, &antider[l]);
        }
        members.push(q);
    }
    Ok(BirkhoffBasis { kind: DerivKind::Caputo, mu, params: p, nodes: rule.nodes.clone(), members })
}

fn caputo_birkhoff_12(rule: &QuadratureRule, mu: f64) -> Result<BirkhoffBasis> {
    let n = rule.top();
    let p = rule.params;
    let pn_m1 = jacobi_eval(n, p, -1.0);
    let pn_p1 = jacobi_eval(n, p, 1.0);
    // xi_nj, 0 <= n <= N-2, 1 <= j <= N-1
    let mut xi = DMatrix::<f64>::zeros(n - 1, n + 1);
    for j in 1..n {
        let xj = rule.nodes[j];
        let pnxj = jacobi_eval(n, p, xj);
        let left = (xj - 1.0) * pn_m1 / (2.0 * (p.beta + 1.0) * pnxj) * rule.weights[0];
        let right = -(1.0 + xj) * pn_p1 / (2.0 * (p.alpha + 1.0) * pnxj) * rule.weights[n];
        for nn in 0..n - 1 {
            let v = left * jacobi_at_minus_one(nn, p)
                + right * jacobi_at_one(nn, p)
                + jacobi_eval(nn, p, xj) * rule.weights[j];
            xi[(nn, j)] = v / jacobi_gamma(nn, p);
        }
    }
    let target = JacobiParam { alpha: mu - 2.0, beta: 2.0 - mu };
    let conn = connection_matrix(n - 2, p, target)?;
    let xib = if conn.identity { xi } else { &conn.c * xi };

    // Phi_l = (1+x)/2 * m_l + double antiderivative of P_l
    let phi: Vec<LegendreSeries> = (0..n - 1)
        .map(|l| {
            let mut unit = LegendreSeries::zeros(l + 1);
            unit.0[l] = 1.0;
            let mut s = unit.antiderivative().antiderivative();
            let m_l = match l {
                0 => -2.0,
                1 => 2.0 / 3.0,
                _ => 0.0,
            };
            s.axpy(0.5 * m_l, &LegendreSeries::linear(1.0, 1.0));
            s
        })
        .collect();

    let mut members = Vec::with_capacity(n + 1);
    members.push(LegendreSeries::linear(0.5, -0.5));
    for j in 1..n {
        let front = (1.0 + rule.nodes[j]).powf(mu - 2.0);
        let mut q = LegendreSeries::zeros(n + 1);
        for l in 0..n - 1 {
            let lf = l as f64;
            let c = front * gamma_ratio(lf - mu + 3.0, lf + 1.0) * xib[(l, j)];
            q.axpy(c, &phi[l]);
        }
        members.push(q);
    }
    members.push(LegendreSeries::linear(0.5, 0.5));
    Ok(BirkhoffBasis { kind: DerivKind::Caputo, mu, params: p, nodes: rule.nodes.clone(), members })
}

fn rl_birkhoff_01(rule: &QuadratureRule, mu: f64) -> Result<BirkhoffBasis> {
    let n = rule.top();
    let p = rule.params;
    let t = lagrange_coeffs(rule)?;
    let target = JacobiParam { alpha: mu, beta: -mu };
    let conn = connection_matrix(n, p, target)?;
    let that = if conn.identity { t.t } else { &conn.c * &t.t };

    let mut members = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let zeta = if j == 0 { recip_gamma(1.0 - mu) } else { 1.0 };
        let mut q = LegendreSeries::zeros(n + 1);
        for l in 0..=n {
            let lf = l as f64;
            q.0[l] = zeta * gamma_ratio(lf - mu + 1.0, lf + 1.0) * that[(l, j)];
        }
        members.push(q);
    }
    Ok(BirkhoffBasis {
        kind: DerivKind::ModifiedRL,
        mu,
        params: p,
        nodes: rule.nodes.clone(),
        members,
    })
}

/// `phi_l = (1+x) P_l^{(0,1)} = P_l + P_{l+1}` as a Legendre series.
fn phi_series(l: usize) -> LegendreSeries {
    let mut s = LegendreSeries::zeros(l + 2);
    s.0[l] = 1.0;
    s.0[l + 1] = 1.0;
    s
}

fn guarded_ratio(num: f64, terms: &[f64], what: &str) -> Result<f64> {
    let den: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if den.abs() < 1e-13 * scale.max(1e-300) {
        return Err(Error::numeric(format!("vanishing denominator in {what}")));
    }
    Ok(num / den)
}

fn rl_birkhoff_12(rule: &QuadratureRule, mu: f64) -> Result<BirkhoffBasis> {
    let n = rule.top();
    let p = rule.params;
    let pn_m1 = jacobi_eval(n, p, -1.0);
    let pn_p1 = jacobi_eval(n, p, 1.0);

    // three-term coefficients of x P_m^{(mu,1-mu)}, indexed by their own
    // subscript: x P_l = a(l+1) P_{l+1} + b(l) P_l + c(l-1) P_{l-1}
    let a = |m: usize| (m as f64 + 1.0) / (2.0 * m as f64 + 1.0);
    let b = |m: usize| (1.0 - 2.0 * mu) / ((2.0 * m as f64 + 1.0) * (2.0 * m as f64 + 3.0));
    let c = |m: i64| {
        if m < 0 {
            0.0
        } else {
            let mf = m as f64;
            (mf + 1.0 + mu) * (mf + 2.0 - mu) / ((mf + 2.0) * (2.0 * mf + 3.0))
        }
    };
    let d = |l: usize| gamma_ratio(l as f64 + 2.0 - mu, l as f64 + 2.0);

    // rho_nj: expansion of the reduced Lagrange basis hat h_j (on nodes
    // x_0..x_{N-1}) in P_n^{(alpha,beta)}, 0 <= n, j <= N-1
    let mut rho = DMatrix::<f64>::zeros(n, n);
    for nn in 0..n {
        let g = jacobi_gamma(nn, p);
        rho[(nn, 0)] = (jacobi_at_minus_one(nn, p) * rule.weights[0]
            - (p.beta + 1.0) / (p.alpha + 1.0) * pn_p1 / pn_m1
                * jacobi_at_one(nn, p)
                * rule.weights[n])
            / g;
        for j in 1..n {
            let xj = rule.nodes[j];
            rho[(nn, j)] = (jacobi_eval(nn, p, xj) * rule.weights[j]
                - pn_p1 / ((p.alpha + 1.0) * jacobi_eval(n, p, xj))
                    * jacobi_at_one(nn, p)
                    * rule.weights[n])
                / g;
        }
    }
    let target = JacobiParam { alpha: mu, beta: 1.0 - mu };
    let conn = connection_matrix(n - 1, p, target)?;
    let rho_tilde = if conn.identity { rho } else { &conn.c * rho };

    // backward recurrence for rho_hat (rows 1..=N-1 computed, row 0 fixed)
    let mut rho_hat = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        rho_hat[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
        rho_hat[(n - 1, j)] = rho_tilde[(n - 1, j)] / a(n - 1);
        if n >= 3 {
            rho_hat[(n - 2, j)] =
                (rho_tilde[(n - 2, j)] - (b(n - 2) + 1.0) * rho_hat[(n - 1, j)]) / a(n - 2);
        }
        for i in (1..=n.saturating_sub(3)).rev() {
            rho_hat[(i, j)] = (rho_tilde[(i, j)]
                - (b(i) + 1.0) * rho_hat[(i + 1, j)]
                - c(i as i64) * rho_hat[(i + 2, j)])
                / a(i);
        }
    }

    let inv_g1mmu = recip_gamma(1.0 - mu);
    let mut members = vec![LegendreSeries::one(); n + 1];

    // shared sums over column 0
    let tilde_terms: Vec<f64> = (0..n).map(|l| d(l) * rho_tilde[(l, 0)]).collect();
    let hat0_terms: Vec<f64> = (0..n - 1).map(|l| d(l) * rho_hat[(l + 1, 0)]).collect();
    let hat0_sum: f64 = {
        let mut s = KahanSum::new();
        for &t in &hat0_terms {
            s.add(t);
        }
        s.value()
    };

    // Q_0
    {
        let tau0_shift =
            -guarded_ratio(0.5 + inv_g1mmu * hat0_sum, &tilde_terms, "RL Birkhoff Q_0")?;
        let mut q = LegendreSeries::one();
        for l in 0..n {
            let mut coeff = tau0_shift * tilde_terms[l];
            if l < n - 1 {
                coeff += inv_g1mmu * hat0_terms[l];
            }
            q.axpy(coeff, &phi_series(l));
        }
        members[0] = q;
    }

    // Q_N
    {
        let inv = guarded_ratio(0.5, &tilde_terms, "RL Birkhoff Q_N")?;
        let mut q = LegendreSeries::zeros(n + 1);
        for l in 0..n {
            q.axpy(inv * tilde_terms[l], &phi_series(l));
        }
        members[n] = q;
    }

    // interior members
    for j in 1..n {
        let hat_terms: Vec<f64> = (0..n - 1).map(|l| d(l) * rho_hat[(l + 1, j)]).collect();
        let tau_j = -1.0
            + mu * gamma_fn(2.0 - mu)
                * guarded_ratio(rho_hat[(1, j)], &hat_terms, "RL Birkhoff tau_j")?;
        let den = rule.nodes[j] + tau_j;
        if den.abs() < 1e-13 * (rule.nodes[j].abs() + tau_j.abs()).max(1.0) {
            return Err(Error::numeric(format!(
                "vanishing denominator x_j + tau_j at j = {j}"
            )));
        }
        let mut q = LegendreSeries::zeros(n + 1);
        for l in 0..n - 1 {
            let lf = l as f64;
            let h = hat_terms[l];
            q.axpy(tau_j / den * h, &phi_series(l));
            q.axpy(h / den * (lf + 2.0 - mu) / (lf + 2.0) * a(l + 1), &phi_series(l + 1));
            q.axpy(h / den * b(l), &phi_series(l));
            if l >= 1 {
                q.axpy(h / den * (lf + 1.0) / (lf + 1.0 - mu) * c(l as i64 - 1), &phi_series(l - 1));
            }
        }
        members[j] = q;
    }

    Ok(BirkhoffBasis {
        kind: DerivKind::ModifiedRL,
        mu,
        params: p,
        nodes: rule.nodes.clone(),
        members,
    })
}
