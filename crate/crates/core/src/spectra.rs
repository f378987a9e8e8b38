//! Eigenvalue and condition-number diagnostics: extreme eigenvalue moduli,
//! full dense spectra, and 2-norm condition estimates.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const STAG_TOL: f64 = 1e-8;
const MAX_ITERS: usize = 5000;
pub const FULL_SPECTRUM_CAP: usize = 1024;

/// Summary of a dense spectrum: extreme moduli, the second-smallest and
/// second-largest moduli, and a 2-norm condition estimate.
#[derive(Debug, Clone)]
pub struct SpectrumSummary {
    pub min_modulus: f64,
    pub max_modulus: f64,
    pub sorted_moduli: Option<Vec<f64>>,
    pub sigma2: f64,
    pub sigma_nm2: f64,
    pub cond2: Option<f64>,
}

impl SpectrumSummary {
    /// CSV row `(N, mu, flavor, min_mod, max_mod, sigma2, sigmaNm2, cond2)`.
    pub fn to_csv_row(&self, n: usize, mu: f64, flavor: &str) -> String {
        format!(
            "{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{}\n",
            n,
            mu,
            flavor,
            self.min_modulus,
            self.max_modulus,
            self.sigma2,
            self.sigma_nm2,
            self.cond2.map_or_else(|| "nan".to_string(), |c| format!("{c:.6e}"))
        )
    }
}

/// Moduli of the eigenvalues of a 2x2 matrix (complex pairs share one
/// modulus `sqrt(det)`).
fn eig2_moduli(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let l1 = 0.5 * (tr + s);
        let l2 = 0.5 * (tr - s);
        (l1.abs().max(l2.abs()), l1.abs().min(l2.abs()))
    } else {
        let m = det.abs().sqrt();
        (m, m)
    }
}

/// Dominant eigenvalue modulus of the linear map `apply`, by two-vector
/// subspace iteration (which also converges on complex conjugate pairs).
fn dominant_modulus<F>(n: usize, apply: F) -> Result<f64>
where
    F: Fn(&DMatrix<f64>) -> DMatrix<f64>,
{
    if n == 1 {
        let v = DMatrix::from_element(1, 1, 1.0);
        return Ok(apply(&v)[(0, 0)].abs());
    }
    // deterministic start: constant and alternating columns
    let mut v = DMatrix::<f64>::from_fn(n, 2, |i, j| {
        if j == 0 {
            1.0
        } else if i % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    });
    let qr = v.qr();
    v = qr.q();
    let mut prev = f64::INFINITY;
    for _ in 0..MAX_ITERS {
        let w = apply(&v);
        // projected 2x2 matrix T = V^t W (V orthonormal)
        let t = v.transpose() * &w;
        let (mx, _) = eig2_moduli(t[(0, 0)], t[(0, 1)], t[(1, 0)], t[(1, 1)]);
        let qr = w.qr();
        v = qr.q();
        if v.ncols() < 2 {
            return Err(Error::numeric("subspace collapsed during power iteration"));
        }
        if (mx - prev).abs() <= STAG_TOL * mx.abs().max(1.0) {
            return Ok(mx);
        }
        prev = mx;
    }
    Err(Error::numeric(format!(
        "power iteration did not stagnate within {MAX_ITERS} iterations; best estimate {prev:.6e}"
    )))
}

/// Smallest and largest eigenvalue moduli: power iteration for the
/// largest, LU-based inverse iteration for the smallest.
pub fn extreme_eigs(a: &DMatrix<f64>) -> Result<(f64, f64)> {
    if a.nrows() != a.ncols() {
        return Err(Error::shape("extreme_eigs expects a square matrix"));
    }
    let n = a.nrows();
    let max_mod = dominant_modulus(n, |v| a * v)?;
    let lu = a.clone().lu();
    let inv_dominant = dominant_modulus(n, |v| {
        lu.solve(v).unwrap_or_else(|| DMatrix::zeros(n, v.ncols()))
    })?;
    if inv_dominant == 0.0 {
        return Err(Error::numeric("inverse iteration failed: singular matrix"));
    }
    Ok((1.0 / inv_dominant, max_mod))
}

/// Full dense spectrum via the real Schur form; moduli sorted ascending.
pub fn full_spectrum(a: &DMatrix<f64>) -> Result<SpectrumSummary> {
    if a.nrows() != a.ncols() {
        return Err(Error::shape("full_spectrum expects a square matrix"));
    }
    let n = a.nrows();
    if n > FULL_SPECTRUM_CAP {
        return Err(Error::domain(format!(
            "full_spectrum is capped at {FULL_SPECTRUM_CAP}, got {n}"
        )));
    }
    if n < 2 {
        return Err(Error::domain("full_spectrum needs at least a 2x2 matrix"));
    }
    let eigs = a.clone().complex_eigenvalues();
    let mut moduli: Vec<f64> = eigs.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|l, r| l.partial_cmp(r).unwrap());
    let cond2 = cond2_estimate(a).ok();
    Ok(SpectrumSummary {
        min_modulus: moduli[0],
        max_modulus: moduli[n - 1],
        sigma2: moduli[1],
        sigma_nm2: moduli[n - 2],
        sorted_moduli: Some(moduli),
        cond2,
    })
}

/// 2-norm condition number estimate: extremal singular values through
/// power iteration on `A^t A` and inverse iteration via the LU factors of
/// `A` and `A^t`.
pub fn cond2_estimate(a: &DMatrix<f64>) -> Result<f64> {
    if a.nrows() != a.ncols() {
        return Err(Error::shape("cond2_estimate expects a square matrix"));
    }
    let n = a.nrows();
    let at = a.transpose();
    let smax_sq = dominant_modulus(n, |v| &at * (a * v))?;
    let lu_a = a.clone().lu();
    let lu_at = at.clone().lu();
    let inv_sq = dominant_modulus(n, |v| {
        // (A^t A)^{-1} v = A^{-1} (A^{-t} v)
        let y = lu_at.solve(v).unwrap_or_else(|| DMatrix::zeros(n, v.ncols()));
        lu_a.solve(&y).unwrap_or_else(|| DMatrix::zeros(n, v.ncols()))
    })?;
    if inv_sq == 0.0 || smax_sq < 0.0 {
        return Err(Error::numeric("condition estimate failed: singular matrix"));
    }
    Ok((smax_sq * inv_sq).sqrt())
}
