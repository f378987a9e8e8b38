//! Collocation schemes for fractional initial- and boundary-value
//! problems: the Lagrange-basis scheme (L-COL), the Birkhoff-basis scheme
//! (B-COL) and the Birkhoff-preconditioned Lagrange scheme (PL-COL).

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::birkhoff::{caputo_birkhoff, rl_birkhoff, BirkhoffBasis};
use crate::error::{Error, Result};
use crate::fracmat::{caputo_psdm, frac_monomial_oracle, rl_mod_psdm, DerivKind};
use crate::linalg::{bicgstab, lu_solve};
use crate::orthopoly::JacobiParam;
use crate::quadrature::{barycentric_weights, jacobi_gauss_lobatto, QuadratureRule};
use crate::spectra::cond2_estimate;

/// A real coefficient or data function on `[-1, 1]`.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Wraps a plain closure into a [`RealFn`].
pub fn real_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> RealFn {
    Arc::new(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// `D^mu u + lambda u = f` on `(-1, 1]`, `u(-1) = u_minus`, Caputo,
    /// `mu in (0,1)`.
    IvpCaputo,
    /// `D^mu u + lambda1 D^nu u + lambda2 u = f`, `u(+-1)` given, Caputo,
    /// `mu in (1,2)`, `nu in (0,1)`.
    BvpCaputo,
    /// Riemann-Liouville version of the BVP, collocated in modified form:
    /// the solved equation is multiplied through by `(1+x)^mu`.
    BvpModRl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    LCol,
    BCol,
    PlCol,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::LCol => "L-COL",
            Scheme::BCol => "B-COL",
            Scheme::PlCol => "PL-COL",
        }
    }
}

/// A fully specified collocation problem. `lambda1` is the single
/// coefficient of the IVP or the lower-order coefficient of the BVPs;
/// `lambda2` is the zeroth-order BVP coefficient (unused for the IVP).
#[derive(Clone)]
pub struct CollocationProblem {
    pub kind: ProblemKind,
    pub mu: f64,
    pub nu: Option<f64>,
    pub lambda1: RealFn,
    pub lambda2: RealFn,
    pub rhs: RealFn,
    pub u_minus: f64,
    pub u_plus: f64,
    pub n: usize,
    pub params: JacobiParam,
    pub scheme: Scheme,
}

impl CollocationProblem {
    fn validate(&self) -> Result<()> {
        match self.kind {
            ProblemKind::IvpCaputo => {
                if !(self.mu > 0.0 && self.mu < 1.0) {
                    return Err(Error::domain(format!(
                        "IVP order must lie in (0,1), got {}",
                        self.mu
                    )));
                }
            }
            ProblemKind::BvpCaputo | ProblemKind::BvpModRl => {
                if !(self.mu > 1.0 && self.mu < 2.0) {
                    return Err(Error::domain(format!(
                        "BVP order must lie in (1,2), got {}",
                        self.mu
                    )));
                }
                let nu = self.nu.ok_or_else(|| {
                    Error::domain("BVP problems need a lower order nu")
                })?;
                if !(nu > 0.0 && nu < 1.0 && nu < self.mu) {
                    return Err(Error::domain(format!(
                        "lower order must satisfy 0 < nu < min(mu, 1), got {nu}"
                    )));
                }
            }
        }
        if self.n < 3 {
            return Err(Error::domain("collocation needs N >= 3"));
        }
        Ok(())
    }

    fn deriv_kind(&self) -> DerivKind {
        match self.kind {
            ProblemKind::BvpModRl => DerivKind::ModifiedRL,
            _ => DerivKind::Caputo,
        }
    }

    fn is_bvp(&self) -> bool {
        !matches!(self.kind, ProblemKind::IvpCaputo)
    }

    /// Effective coefficients and right-hand side of the solved equation:
    /// the problem's own for the Caputo kinds, the hatted versions
    /// (multiplied by powers of `1+x`) for the modified RL kind.
    fn effective(&self, x: f64) -> (f64, f64, f64) {
        match self.kind {
            ProblemKind::BvpModRl => {
                let nu = self.nu.unwrap();
                let t = 1.0 + x;
                (
                    t.powf(self.mu - nu) * (self.lambda1)(x),
                    t.powf(self.mu) * (self.lambda2)(x),
                    t.powf(self.mu) * (self.rhs)(x),
                )
            }
            _ => ((self.lambda1)(x), (self.lambda2)(x), (self.rhs)(x)),
        }
    }

    /// Linear boundary lift `(1-x)/2 u_- + (1+x)/2 u_+` of the BVPs.
    fn lift(&self, x: f64) -> f64 {
        0.5 * (1.0 - x) * self.u_minus + 0.5 * (1.0 + x) * self.u_plus
    }
}

/// Solver knobs. `direct` forces a dense LU solve; otherwise BiCGSTAB runs
/// with relative tolerance `tol` (default 1e-12) and `max_iter` (default
/// `5 n`). `condition` adds a 2-norm condition estimate to the report, and
/// `product_fallback` assembles the lower-order Birkhoff block of the BVP
/// B-COL systems as an F-PSDM/basis matrix product instead of analytically.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: Option<usize>,
    pub direct: bool,
    pub condition: bool,
    pub product_fallback: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-12,
            max_iter: None,
            direct: false,
            condition: false,
            product_fallback: false,
        }
    }
}

/// Outcome of a collocation solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Solution values at all `N + 1` JGL nodes (boundary data included).
    pub nodal_values: Vec<f64>,
    /// Derivative-valued unknowns of a B-COL solve.
    pub birkhoff_unknowns: Option<Vec<f64>>,
    pub iterations: usize,
    pub residual: f64,
    pub condition_estimate: Option<f64>,
    pub error_l2: Option<f64>,
}

enum SolutionRepr {
    /// Barycentric interpolation through the nodal values.
    Lagrange { bw: Vec<f64>, nodal: Vec<f64> },
    /// Boundary lift plus a combination of Birkhoff members.
    Birkhoff { basis: BirkhoffBasis, v: Vec<f64> },
}

/// Off-grid evaluator for a solved problem.
pub struct Solution {
    kind: ProblemKind,
    nodes: Vec<f64>,
    u_minus: f64,
    u_plus: f64,
    repr: SolutionRepr,
}

impl Solution {
    pub fn eval(&self, x: f64) -> f64 {
        // boundary data is imposed, not approximated
        if x == -1.0 {
            return self.u_minus;
        }
        if x == 1.0 && !matches!(self.kind, ProblemKind::IvpCaputo) {
            return self.u_plus;
        }
        match &self.repr {
            SolutionRepr::Lagrange { bw, nodal } => {
                let mut num = 0.0;
                let mut den = 0.0;
                for ((&xj, &wj), &uj) in self.nodes.iter().zip(bw).zip(nodal) {
                    let d = x - xj;
                    if d.abs() < 1e-300 {
                        return uj;
                    }
                    let r = wj / d;
                    num += r * uj;
                    den += r;
                }
                num / den
            }
            SolutionRepr::Birkhoff { basis, v } => match self.kind {
                ProblemKind::IvpCaputo => {
                    let mut acc = self.u_minus;
                    for (j, vj) in v.iter().enumerate() {
                        acc += vj * basis.member(j + 1).eval(x);
                    }
                    acc
                }
                ProblemKind::BvpCaputo => {
                    let mut acc = 0.5 * (1.0 - x) * self.u_minus + 0.5 * (1.0 + x) * self.u_plus;
                    for (j, vj) in v.iter().enumerate() {
                        acc += vj * basis.member(j + 1).eval(x);
                    }
                    acc
                }
                ProblemKind::BvpModRl => {
                    let n = basis.top();
                    let mut acc = self.u_minus * basis.member(0).eval(x)
                        + self.u_plus * basis.member(n).eval(x);
                    for (j, vj) in v.iter().enumerate() {
                        acc += vj * basis.member(j + 1).eval(x);
                    }
                    acc
                }
            },
        }
    }
}

/// An assembled linear system together with everything reconstruction
/// needs.
pub struct Assembled {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub rule: QuadratureRule,
    /// Basis used by B-COL (and by PL-COL as the preconditioner).
    pub basis: Option<BirkhoffBasis>,
}

fn build_fpsdm(kind: DerivKind, rule: &QuadratureRule, order: f64) -> Result<crate::fracmat::Fpsdm> {
    match kind {
        DerivKind::Caputo => caputo_psdm(rule, order),
        DerivKind::ModifiedRL => rl_mod_psdm(rule, order),
    }
}

fn build_basis(kind: DerivKind, rule: &QuadratureRule, mu: f64) -> Result<BirkhoffBasis> {
    match kind {
        DerivKind::Caputo => caputo_birkhoff(rule, mu),
        DerivKind::ModifiedRL => rl_birkhoff(rule, mu),
    }
}

/// L-COL system: interior F-PSDM(s) plus the diagonal coefficient(s), with
/// the boundary data lifted into the right-hand side through the boundary
/// columns of the full matrices.
pub fn assemble_lcol(problem: &CollocationProblem) -> Result<Assembled> {
    problem.validate()?;
    let rule = jacobi_gauss_lobatto(problem.n, problem.params)?;
    let kind = problem.deriv_kind();
    let dmu = build_fpsdm(kind, &rule, problem.mu)?;
    let mut full = dmu.full.clone();
    if problem.is_bvp() {
        let dnu = build_fpsdm(kind, &rule, problem.nu.unwrap())?;
        for i in 0..=problem.n {
            let (l1, l2, _) = problem.effective(rule.nodes[i]);
            for j in 0..=problem.n {
                full[(i, j)] += l1 * dnu.full[(i, j)];
            }
            full[(i, i)] += l2;
        }
    } else {
        for i in 0..=problem.n {
            full[(i, i)] += (problem.lambda1)(rule.nodes[i]);
        }
    }
    let r = dmu.interior_range();
    let (lo, hi) = (*r.start(), *r.end());
    let m = hi - lo + 1;
    let matrix = full.view((lo, lo), (m, m)).into_owned();
    let mut rhs = DVector::<f64>::zeros(m);
    for i in lo..=hi {
        let (_, _, f) = problem.effective(rule.nodes[i]);
        let mut b = f - problem.u_minus * full[(i, 0)];
        if problem.is_bvp() {
            b -= problem.u_plus * full[(i, problem.n)];
        }
        rhs[i - lo] = b;
    }
    Ok(Assembled { matrix, rhs, rule, basis: None })
}

/// Lower-order Birkhoff block of the BVP B-COL systems: order-`nu`
/// fractional derivative of the interior basis members at interior nodes.
/// Analytic route by default; `product` cross-validates via the full
/// order-`nu` F-PSDM applied to the member nodal values.
fn bcol_nu_matrix(
    basis: &BirkhoffBasis,
    rule: &QuadratureRule,
    nu: f64,
    product: bool,
) -> Result<DMatrix<f64>> {
    if !product {
        return basis.lower_order_matrix(nu);
    }
    let n = basis.top();
    let dnu = build_fpsdm(basis.kind, rule, nu)?;
    let mut vals = DMatrix::<f64>::zeros(n + 1, n - 1);
    for j in 1..n {
        for i in 0..=n {
            vals[(i, j - 1)] = basis.member(j).eval(rule.nodes[i]);
        }
    }
    let prod = &dnu.full * vals;
    Ok(prod.view((1, 0), (n - 1, n - 1)).into_owned())
}

/// B-COL system: identity plus coefficient-weighted Birkhoff matrices,
/// unknowns being the order-`mu` derivative values at the interior nodes.
pub fn assemble_bcol(problem: &CollocationProblem, product_fallback: bool) -> Result<Assembled> {
    problem.validate()?;
    let rule = jacobi_gauss_lobatto(problem.n, problem.params)?;
    let kind = problem.deriv_kind();
    let basis = build_basis(kind, &rule, problem.mu)?;
    let qmat = basis.matrix();
    let m = qmat.nrows();
    let mut matrix = DMatrix::<f64>::identity(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    match problem.kind {
        ProblemKind::IvpCaputo => {
            for i in 0..m {
                let x = rule.nodes[i + 1];
                let lam = (problem.lambda1)(x);
                for j in 0..m {
                    matrix[(i, j)] += lam * qmat[(i, j)];
                }
                rhs[i] = (problem.rhs)(x) - problem.u_minus * lam;
            }
        }
        ProblemKind::BvpCaputo => {
            let nu = problem.nu.unwrap();
            let bbar = bcol_nu_matrix(&basis, &rule, nu, product_fallback)?;
            let slope = 0.5 * (problem.u_plus - problem.u_minus);
            for i in 0..m {
                let x = rule.nodes[i + 1];
                let (l1, l2, f) = problem.effective(x);
                for j in 0..m {
                    matrix[(i, j)] += l1 * bbar[(i, j)] + l2 * qmat[(i, j)];
                }
                // q_* = lambda1 D^nu u* + lambda2 u* with the linear lift
                let dnu_lift = slope * frac_monomial_oracle(DerivKind::Caputo, nu, 1, x);
                rhs[i] = f - l1 * dnu_lift - l2 * problem.lift(x);
            }
        }
        ProblemKind::BvpModRl => {
            let nu = problem.nu.unwrap();
            let qtilde = bcol_nu_matrix(&basis, &rule, nu, product_fallback)?;
            let n = basis.top();
            let q0 = basis.member(0);
            let qn = basis.member(n);
            for i in 0..m {
                let x = rule.nodes[i + 1];
                let (l1, l2, f) = problem.effective(x);
                for j in 0..m {
                    matrix[(i, j)] += l1 * qtilde[(i, j)] + l2 * qmat[(i, j)];
                }
                let lift_row = |q: &crate::series::LegendreSeries| {
                    q.rl_mod_deriv_eval(problem.mu, x)
                        + l1 * q.rl_mod_deriv_eval(nu, x)
                        + l2 * q.eval(x)
                };
                rhs[i] = f - problem.u_minus * lift_row(q0) - problem.u_plus * lift_row(qn);
            }
        }
    }
    Ok(Assembled { matrix, rhs, rule, basis: Some(basis) })
}

/// PL-COL system: the L-COL system left-multiplied by the Birkhoff nodal
/// matrix, which is the exact inverse of the interior F-PSDM.
pub fn precondition_lcol(problem: &CollocationProblem) -> Result<Assembled> {
    let lcol = assemble_lcol(problem)?;
    let basis = build_basis(problem.deriv_kind(), &lcol.rule, problem.mu)?;
    let q = basis.matrix();
    let matrix = &q * &lcol.matrix;
    let rhs = &q * &lcol.rhs;
    Ok(Assembled { matrix, rhs, rule: lcol.rule, basis: Some(basis) })
}

/// Assembles the system a problem's scheme calls for.
pub fn assemble(problem: &CollocationProblem, opts: &SolveOptions) -> Result<Assembled> {
    match problem.scheme {
        Scheme::LCol => assemble_lcol(problem),
        Scheme::BCol => assemble_bcol(problem, opts.product_fallback),
        Scheme::PlCol => precondition_lcol(problem),
    }
}

/// Assembles, solves and reconstructs. Returns the report and an off-grid
/// evaluator; `error_l2` is left unset (see [`l2_error`]).
pub fn solve(problem: &CollocationProblem, opts: &SolveOptions) -> Result<(SolveReport, Solution)> {
    let asm = assemble(problem, opts)?;
    let (x, iterations, residual) = if opts.direct {
        let x = lu_solve(&asm.matrix, &asm.rhs)?;
        let bnorm = asm.rhs.norm();
        let res = if bnorm == 0.0 { 0.0 } else { (&asm.rhs - &asm.matrix * &x).norm() / bnorm };
        (x, 0, res)
    } else {
        let it = bicgstab(&asm.matrix, &asm.rhs, Some(opts.tol), opts.max_iter)?;
        (it.x, it.iterations, it.residual)
    };
    let condition_estimate =
        if opts.condition { Some(cond2_estimate(&asm.matrix)?) } else { None };

    let n = problem.n;
    let mut nodal = vec![0.0; n + 1];
    nodal[0] = problem.u_minus;
    if problem.is_bvp() {
        nodal[n] = problem.u_plus;
    }
    let (repr, birkhoff_unknowns) = match problem.scheme {
        Scheme::LCol | Scheme::PlCol => {
            for (k, &v) in x.iter().enumerate() {
                nodal[k + 1] = v;
            }
            let bw = barycentric_weights(&asm.rule.nodes);
            (SolutionRepr::Lagrange { bw, nodal: nodal.clone() }, None)
        }
        Scheme::BCol => {
            let basis = asm.basis.expect("B-COL assembly retains its basis");
            let v: Vec<f64> = x.iter().copied().collect();
            let nodal_incr = basis.matrix() * &x;
            for (k, &dv) in nodal_incr.iter().enumerate() {
                let xi = asm.rule.nodes[k + 1];
                nodal[k + 1] = dv
                    + match problem.kind {
                        ProblemKind::IvpCaputo => problem.u_minus,
                        ProblemKind::BvpCaputo => problem.lift(xi),
                        ProblemKind::BvpModRl => {
                            problem.u_minus * basis.member(0).eval(xi)
                                + problem.u_plus * basis.member(basis.top()).eval(xi)
                        }
                    };
            }
            (SolutionRepr::Birkhoff { basis, v: v.clone() }, Some(v))
        }
    };
    let report = SolveReport {
        nodal_values: nodal,
        birkhoff_unknowns,
        iterations,
        residual,
        condition_estimate,
        error_l2: None,
    };
    let solution = Solution {
        kind: problem.kind,
        nodes: asm.rule.nodes,
        u_minus: problem.u_minus,
        u_plus: problem.u_plus,
        repr,
    };
    Ok((report, solution))
}

/// Discrete L2 distance between two functions on a 2001-point uniform grid
/// over `[-1, 1]`: the root mean square of the pointwise differences.
pub fn l2_error<F, G>(f: F, g: G) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    const POINTS: usize = 2001;
    let mut acc = 0.0;
    for k in 0..POINTS {
        let x = -1.0 + 2.0 * k as f64 / (POINTS - 1) as f64;
        let d = f(x) - g(x);
        acc += d * d;
    }
    (acc / POINTS as f64).sqrt()
}
