//! The `verify` subcommand: the invariant suite. Each check prints one
//! PASS/FAIL line; the exit code is 0 only if every check passes.

use std::process::ExitCode;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};

use fraccol::birkhoff::{caputo_birkhoff, rl_birkhoff};
use fraccol::fracmat::{caputo_psdm, rl_int_matrix, rl_mod_psdm, DerivKind};
use fraccol::mittag::ml_eval;
use fraccol::orthopoly::JacobiParam;
use fraccol::quadrature::jacobi_gauss_lobatto;
use fraccol::special::{gamma_ratio, recip_gamma};

use crate::VerifyArgs;

/// The distinguished parameter pair for which the basis formulas collapse
/// to a single Jacobi family.
pub fn special_pair(kind: DerivKind, mu: f64) -> JacobiParam {
    let (a, b) = match (kind, mu < 1.0) {
        (DerivKind::Caputo, true) => (mu - 1.0, 1.0 - mu),
        (DerivKind::Caputo, false) => (mu - 2.0, 2.0 - mu),
        (DerivKind::ModifiedRL, true) => (mu, -mu),
        (DerivKind::ModifiedRL, false) => (mu, 1.0 - mu),
    };
    JacobiParam::new(a, b).expect("special pair is admissible for mu in (0,1) u (1,2)")
}

/// `max_ij |Q D_in - I|` for one flavor/order/parameter combination.
pub fn inverse_identity_defect(kind: DerivKind, mu: f64, p: JacobiParam, n: usize) -> f64 {
    let rule = jacobi_gauss_lobatto(n, p).expect("rule builds");
    let (basis, dmat) = match kind {
        DerivKind::Caputo => (
            caputo_birkhoff(&rule, mu).expect("basis builds"),
            caputo_psdm(&rule, mu).expect("matrix builds"),
        ),
        DerivKind::ModifiedRL => (
            rl_birkhoff(&rule, mu).expect("basis builds"),
            rl_mod_psdm(&rule, mu).expect("matrix builds"),
        ),
    };
    let prod = basis.matrix() * dmat.interior();
    let m = prod.nrows();
    let mut defect = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let expect = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((prod[(i, j)] - expect).abs());
        }
    }
    defect
}

/// Worst relative defect of an F-PSDM against the closed-form image of
/// `(1+x)^eta`, scaled by the largest exact value on the grid.
pub fn monomial_defect(kind: DerivKind, mu: f64, eta: f64, n: usize) -> f64 {
    let rule = jacobi_gauss_lobatto(n, JacobiParam::legendre()).expect("rule builds");
    let u = DVector::from_iterator(
        rule.nodes.len(),
        rule.nodes.iter().map(|&x| (1.0f64 + x).powf(eta)),
    );
    let (matrix, exact): (DMatrix<f64>, Box<dyn Fn(f64) -> f64>) = match kind {
        DerivKind::Caputo => (
            caputo_psdm(&rule, mu).expect("matrix builds").full.clone(),
            Box::new(move |x| {
                if eta < mu.ceil() && eta.fract() == 0.0 {
                    0.0
                } else {
                    gamma_ratio(eta + 1.0, eta + 1.0 - mu) * (1.0 + x).powf(eta - mu)
                }
            }),
        ),
        DerivKind::ModifiedRL => (
            rl_mod_psdm(&rule, mu).expect("matrix builds").full.clone(),
            Box::new(move |x| gamma_ratio(eta + 1.0, eta + 1.0 - mu) * (1.0 + x).powf(eta)),
        ),
    };
    let du = matrix * u;
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for (i, &x) in rule.nodes.iter().enumerate() {
        let e = exact(x);
        scale = scale.max(e.abs());
        worst = worst.max((du[i] - e).abs());
    }
    worst / scale
}

/// Worst relative defect of the modified RL integral matrix on
/// `(1+x)^eta` (integral orders live in `(0,1)`).
pub fn integral_defect(mu: f64, eta: f64, n: usize) -> f64 {
    let rule = jacobi_gauss_lobatto(n, JacobiParam::legendre()).expect("rule builds");
    let u = DVector::from_iterator(
        rule.nodes.len(),
        rule.nodes.iter().map(|&x| (1.0f64 + x).powf(eta)),
    );
    let du = rl_int_matrix(&rule, mu).expect("matrix builds") * u;
    let mut worst = 0.0f64;
    let mut scale = 1.0f64;
    for (i, &x) in rule.nodes.iter().enumerate() {
        let e = gamma_ratio(eta + 1.0, eta + 1.0 + mu) * (1.0 + x).powf(eta);
        scale = scale.max(e.abs());
        worst = worst.max((du[i] - e).abs());
    }
    worst / scale
}

/// Worst quadrature defect over seeded random polynomials of full degree.
pub fn quadrature_defect(n: usize, seed: u64) -> f64 {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for &(a, b) in &[(0.0, 0.0), (-0.2, 0.2), (0.5, -0.5)] {
        let p = JacobiParam::new(a, b).expect("admissible");
        let rule = jacobi_gauss_lobatto(n, p).expect("rule builds");
        // Gauss-Lobatto is exact through degree 2N-1; integrate random
        // polynomials of that degree against a finer rule as reference
        let fine = jacobi_gauss_lobatto(2 * n + 4, p).expect("rule builds");
        for _ in 0..5 {
            let coeffs: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let poly = |x: f64| {
                let mut acc = 0.0;
                let mut xk = 1.0;
                for c in &coeffs {
                    acc += c * xk;
                    xk *= x;
                }
                acc
            };
            let coarse = rule.integrate(poly);
            let reference = fine.integrate(poly);
            worst = worst.max((coarse - reference).abs() / reference.abs().max(1.0));
        }
    }
    worst
}

/// Worst defect of the Mittag-Leffler shift recurrence
/// `E_{a,b}(z) = z E_{a,a+b}(z) + 1/Gamma(b)` over seeded samples.
pub fn mittag_defect(seed: u64) -> f64 {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 50 {
        let a = rng.gen_range(0.3..2.0);
        let b = rng.gen_range(0.2..3.0);
        let z = rng.gen_range(-1.5..5.0);
        let (Ok(lhs), Ok(shift)) = (ml_eval(a, b, z), ml_eval(a, a + b, z)) else {
            continue;
        };
        let rhs = z * shift + recip_gamma(b);
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
        checked += 1;
    }
    worst
}

struct Check {
    name: String,
    defect: f64,
    bound: f64,
}

pub fn verify_cmd(args: &VerifyArgs) -> ExitCode {
    let n = args.n.max(4);
    let mut checks = Vec::new();

    for kind in [DerivKind::Caputo, DerivKind::ModifiedRL] {
        for &mu in &[0.3, 0.8, 1.5, 1.9] {
            let params = [
                JacobiParam::legendre(),
                special_pair(kind, mu),
                JacobiParam::new(-0.2, 0.2).expect("admissible"),
            ];
            for p in params {
                checks.push(Check {
                    name: format!(
                        "inverse-identity {} mu={mu} ({:.2},{:.2}) N={n}",
                        kind.label(),
                        p.alpha,
                        p.beta
                    ),
                    defect: inverse_identity_defect(kind, mu, p, n),
                    bound: 1e-8 * n as f64,
                });
            }
        }
    }

    for kind in [DerivKind::Caputo, DerivKind::ModifiedRL] {
        for &mu in &[0.3, 0.8, 1.5, 1.9] {
            for &eta in &[0.0f64, 1.0, 2.0, 3.0, 3.2] {
                // non-polynomial data is differentiated through its
                // interpolant, so it carries an interpolation error
                let bound = if eta.fract() == 0.0 { 1e-8 } else { 1e-4 };
                checks.push(Check {
                    name: format!("monomial-oracle {} mu={mu} eta={eta} N={n}", kind.label()),
                    defect: monomial_defect(kind, mu, eta, n),
                    bound,
                });
            }
        }
    }
    for &mu in &[0.3, 0.8] {
        for &eta in &[0.0f64, 1.0, 2.0, 3.0, 3.2] {
            let bound = if eta.fract() == 0.0 { 1e-8 } else { 1e-4 };
            checks.push(Check {
                name: format!("integral-oracle mu={mu} eta={eta} N={n}"),
                defect: integral_defect(mu, eta, n),
                bound,
            });
        }
    }

    checks.push(Check {
        name: format!("quadrature-exactness N={n} seed={}", args.seed),
        defect: quadrature_defect(n, args.seed),
        bound: 1e-11,
    });
    checks.push(Check {
        name: format!("mittag-leffler-recurrence seed={}", args.seed),
        defect: mittag_defect(args.seed),
        bound: 1e-12,
    });

    let mut failed = 0usize;
    for c in &checks {
        let bound = c.bound * args.tol;
        let ok = c.defect <= bound;
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:<55} defect {:.3e} (bound {:.1e})",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            c.defect,
            bound
        );
    }
    println!(
        "verify: {}/{} checks passed",
        checks.len() - failed,
        checks.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
