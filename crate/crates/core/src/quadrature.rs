//! Jacobi-Gauss and Jacobi-Gauss-Lobatto quadrature rules and the
//! Lagrange-basis expansion coefficients `t_nj`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::orthopoly::{
    jacobi_deriv_eval, jacobi_eval, jacobi_norm, JacobiParam,
};
use crate::special::ln_gamma_pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Gauss,
    GaussLobatto,
}

/// Nodes (strictly increasing, in `[-1,1]`) and positive weights of a
/// Jacobi quadrature rule. Lobatto rules carry the exact endpoints.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub params: JacobiParam,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub flavor: Flavor,
}

impl QuadratureRule {
    /// `N` such that the rule has `N + 1` points.
    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// CSV dump: `j,x_j,w_j` at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,x,w\n");
        for (j, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            out.push_str(&format!("{j},{x:.16e},{w:.16e}\n"));
        }
        out
    }
}

/// Zeroth moment `int w^{(a,b)} = 2^{a+b+1} B(a+1, b+1)`.
fn zeroth_moment(p: JacobiParam) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma_pos(a + 1.0) + ln_gamma_pos(b + 1.0)
        - ln_gamma_pos(a + b + 2.0))
        .exp()
}

/// Newton polish of a root of `f`, at most 10 steps, absolute tolerance
/// 1e-15, falling back to the midpoint when a step leaves `[-1, 1]`.
fn newton_refine<F, G>(mut x: f64, f: F, df: G) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    for _ in 0..10 {
        let fx = f(x);
        let dfx = df(x);
        if dfx == 0.0 {
            break;
        }
        let step = fx / dfx;
        let mut next = x - step;
        if !(-1.0..=1.0).contains(&next) {
            next = 0.5 * (x + next.clamp(-1.0, 1.0));
        }
        let done = (next - x).abs() < 1e-15;
        x = next;
        if done {
            break;
        }
    }
    x
}

/// Jacobi-Gauss rule with `N + 1` nodes, by the Golub-Welsch algorithm:
/// eigen-decomposition of the symmetric tridiagonal Jacobi matrix of the
/// three-term recurrence, weights from the first eigenvector components,
/// nodes polished by Newton on `P_{N+1}^{(a,b)}`.
pub fn jacobi_gauss(n_top: usize, p: JacobiParam) -> Result<QuadratureRule> {
    let (a, b) = (p.alpha, p.beta);
    let m = n_top + 1;
    if m == 1 {
        // single node at the mean of the weight
        let x = (b - a) / (a + b + 2.0);
        return Ok(QuadratureRule {
            params: p,
            nodes: vec![x],
            weights: vec![zeroth_moment(p)],
            flavor: Flavor::Gauss,
        });
    }

    let mut jm = DMatrix::<f64>::zeros(m, m);
    jm[(0, 0)] = (b - a) / (a + b + 2.0);
    for k in 1..m {
        let kf = k as f64;
        let den = (2.0 * kf + a + b) * (2.0 * kf + a + b + 2.0);
        jm[(k, k)] = (b * b - a * a) / den;
        let bk = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
        } else {
            let c = 2.0 * kf + a + b;
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (c * c * (c + 1.0) * (c - 1.0))
        };
        let e = bk.sqrt();
        jm[(k - 1, k)] = e;
        jm[(k, k - 1)] = e;
    }

    let eig = jm
        .symmetric_eigen();
    let mu0 = zeroth_moment(p);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|j| {
            let v0 = eig.eigenvectors[(0, j)];
            (eig.eigenvalues[j], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|l, r| l.0.partial_cmp(&r.0).unwrap());

    let mut nodes: Vec<f64> = pairs
        .iter()
        .map(|&(x, _)| {
            newton_refine(
                x,
                |t| jacobi_eval(m, p, t),
                |t| jacobi_deriv_eval(m, p, t),
            )
        })
        .collect();
    let mut weights: Vec<f64> = pairs.iter().map(|&(_, w)| w).collect();

    if a == b {
        symmetrize(&mut nodes, &mut weights);
    }

    for w in &weights {
        if !(*w > 0.0) {
            return Err(Error::numeric(format!(
                "non-positive Gauss weight {w} at N = {n_top}"
            )));
        }
    }
    Ok(QuadratureRule { params: p, nodes, weights, flavor: Flavor::Gauss })
}

fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let m = nodes.len();
    for j in 0..m / 2 {
        let x = 0.5 * (nodes[j] - nodes[m - 1 - j]);
        nodes[j] = x;
        nodes[m - 1 - j] = -x;
        let w = 0.5 * (weights[j] + weights[m - 1 - j]);
        weights[j] = w;
        weights[m - 1 - j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
}

/// Normalised barycentric weights of a node set (log-scaled products).
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    let mut logs = vec![0.0f64; m];
    let mut signs = vec![1.0f64; m];
    for j in 0..m {
        for i in 0..m {
            if i != j {
                let d = nodes[j] - nodes[i];
                logs[j] -= d.abs().ln();
                if d < 0.0 {
                    signs[j] = -signs[j];
                }
            }
        }
    }
    let max_log = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    logs.iter().zip(&signs).map(|(&l, &s)| s * (l - max_log).exp()).collect()
}

/// Evaluates the Lagrange cardinal `h_j` of `nodes` at `x` by the
/// barycentric formula.
pub fn barycentric_eval(nodes: &[f64], bw: &[f64], j: usize, x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, (&xk, &wk)) in nodes.iter().zip(bw).enumerate() {
        let d = x - xk;
        if d.abs() < 1e-300 {
            return if k == j { 1.0 } else { 0.0 };
        }
        let t = wk / d;
        den += t;
        if k == j {
            num = t;
        }
    }
    num / den
}

/// Jacobi-Gauss-Lobatto rule with `N + 1` nodes: the endpoints plus the
/// zeros of `D P_N^{(a,b)}` (equivalently of `P_{N-1}^{(a+1,b+1)}`).
/// Weights are computed interpolatorily with an exact `(N+1)`-point Gauss
/// rule, which is self-verifying through the quadrature exactness.
pub fn jacobi_gauss_lobatto(n_top: usize, p: JacobiParam) -> Result<QuadratureRule> {
    if n_top == 0 {
        return Err(Error::domain("Gauss-Lobatto needs N >= 1"));
    }
    let mut nodes = Vec::with_capacity(n_top + 1);
    nodes.push(-1.0);
    if n_top >= 2 {
        let shifted = JacobiParam { alpha: p.alpha + 1.0, beta: p.beta + 1.0 };
        let interior = jacobi_gauss(n_top - 2, shifted)?;
        let nf = n_top as f64;
        for &x in &interior.nodes {
            nodes.push(newton_refine(
                x,
                |t| jacobi_deriv_eval(n_top, p, t),
                |t| 0.5 * (nf + p.alpha + p.beta + 1.0) * jacobi_deriv_eval(n_top - 1, shifted, t),
            ));
        }
    }
    nodes.push(1.0);

    if p.alpha == p.beta {
        let m = nodes.len();
        for j in 0..m / 2 {
            let x = 0.5 * (nodes[j] - nodes[m - 1 - j]);
            nodes[j] = x;
            nodes[m - 1 - j] = -x;
        }
        if m % 2 == 1 {
            nodes[m / 2] = 0.0;
        }
    }

    // interpolatory weights: w_j = int h_j w^{(a,b)}, exact via Gauss
    let gauss = jacobi_gauss(n_top, p)?;
    let bw = barycentric_weights(&nodes);
    let mut weights = vec![0.0f64; n_top + 1];
    for (&gx, &gw) in gauss.nodes.iter().zip(&gauss.weights) {
        // a Gauss node can coincide with a Lobatto node (e.g. x = 0 for
        // symmetric rules of suitable parity); then h_j(gx) = delta_j
        if let Some(hit) = nodes.iter().position(|&x| (gx - x).abs() < 1e-14) {
            weights[hit] += gw;
            continue;
        }
        // one barycentric denominator per Gauss point
        let mut den = 0.0;
        let mut terms = Vec::with_capacity(n_top + 1);
        for (&x, &w) in nodes.iter().zip(&bw) {
            let t = w / (gx - x);
            den += t;
            terms.push(t);
        }
        for (wj, t) in weights.iter_mut().zip(&terms) {
            *wj += gw * t / den;
        }
    }

    for w in &weights {
        if !(*w > 0.0) {
            return Err(Error::numeric(format!(
                "non-positive Lobatto weight {w} at N = {n_top}"
            )));
        }
    }
    Ok(QuadratureRule { params: p, nodes, weights, flavor: Flavor::GaussLobatto })
}

/// Expansion coefficients `t_nj` of the JGL Lagrange basis in its own
/// Jacobi family: `h_j = sum_n t_nj P_n^{(a,b)}` with
/// `t_nj = w_j P_n^{(a,b)}(x_j) / gamma_tilde_n`.
#[derive(Debug, Clone)]
pub struct LagrangeCoeffs {
    pub params: JacobiParam,
    /// `(N+1) x (N+1)`, row `n`, column `j`.
    pub t: DMatrix<f64>,
}

pub fn lagrange_coeffs(rule: &QuadratureRule) -> Result<LagrangeCoeffs> {
    if rule.flavor != Flavor::GaussLobatto {
        return Err(Error::domain("lagrange_coeffs expects a Gauss-Lobatto rule"));
    }
    let n_top = rule.top();
    let mut t = DMatrix::<f64>::zeros(n_top + 1, n_top + 1);
    for n in 0..=n_top {
        let norm = jacobi_norm(n, n_top, rule.params);
        for j in 0..=n_top {
            t[(n, j)] = rule.weights[j] * jacobi_eval(n, rule.params, rule.nodes[j]) / norm.gamma_tilde;
        }
    }
    Ok(LagrangeCoeffs { params: rule.params, t })
}

/// Off-grid evaluation of `h_j` through its Jacobi expansion.
pub fn lagrange_eval(coeffs: &LagrangeCoeffs, j: usize, x: f64) -> f64 {
    let n_top = coeffs.t.nrows() - 1;
    (0..=n_top).map(|n| coeffs.t[(n, j)] * jacobi_eval(n, coeffs.params, x)).sum()
}
