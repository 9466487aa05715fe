//! Criterion computations: misspecification and variability index estimators,
//! the vectorial criterion, its univariate specialisation, and AIC/BIC baselines.
//!
//! The estimators follow the method-of-moments form
//!
//! ```text
//! MI_hat   = N^-1 Σ ε_t ε_t'
//! C_hat(s) = (N-s)^-1 Σ x_t x_{t+s} ε_t ε_{t+s}'
//! VI_hat   = R_hat^-1 [ C_hat(0) + Σ_{s=1}^{h-1} ( C_hat(s) + C_hat(s)' ) ]
//! total    = ||MI_hat|| + (α_n / n) ||VI_hat||
//! ```
//!
//! with `||·||` the matrix norm induced by the Euclidean vector norm
//! (largest singular value; largest absolute eigenvalue for symmetric input).

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::OlsFit;
use crate::SampleSet;

/// Penalty sequence α_n = n^α with exponent α strictly inside (0, 1),
/// so that α_n/√n → ∞ and α_n/n → 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltySpec {
    alpha_exponent: f64,
}

impl PenaltySpec {
    pub fn new(alpha_exponent: f64) -> Result<Self> {
        if !(alpha_exponent > 0.0 && alpha_exponent < 1.0) || !alpha_exponent.is_finite() {
            return Err(Error::ExponentOutOfRange(alpha_exponent));
        }
        Ok(Self { alpha_exponent })
    }

    pub fn alpha_exponent(&self) -> f64 {
        self.alpha_exponent
    }

    /// Penalty weight α_n/n = n^(α-1).
    pub fn weight(&self, n: usize) -> f64 {
        (n as f64).powf(self.alpha_exponent - 1.0)
    }
}

/// Decomposed criterion score. `total = mi_norm + penalty_weight * vi_norm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionValue {
    pub mi_norm: f64,
    pub vi_norm: f64,
    pub penalty_weight: f64,
    pub total: f64,
}

/// Estimated index matrices for one fitted model.
#[derive(Debug, Clone)]
pub struct IndexMatrices {
    /// Misspecification index estimate, symmetric PSD w×w.
    pub mi: Array2<f64>,
    /// Cross-covariance matrices C_hat(s) for s = 0..h-1.
    pub cross_cov: Vec<Array2<f64>>,
    /// Variability index estimate, symmetric w×w.
    pub vi: Array2<f64>,
}

impl IndexMatrices {
    /// Estimate MI, the lag cross-covariances for s = 0..h-1, and VI from a fit.
    pub fn estimate(sample: &SampleSet, fit: &OlsFit) -> Result<Self> {
        let h = sample.horizon();
        let mi = estimate_mi(fit.residuals());
        let cross_cov: Vec<Array2<f64>> = (0..h)
            .map(|s| estimate_cross_cov(sample.predictor(), fit.residuals(), s))
            .collect::<Result<_>>()?;
        let vi = estimate_vi(fit.r_hat(), &cross_cov, h)?;
        Ok(Self { mi, cross_cov, vi })
    }
}

/// Average outer product of the residual rows: N^-1 Σ ε_t ε_t'.
///
/// Symmetric positive semidefinite by construction.
pub fn estimate_mi(residuals: &Array2<f64>) -> Array2<f64> {
    let (n_rows, w) = residuals.dim();
    let mut mi = Array2::<f64>::zeros((w, w));
    for t in 0..n_rows {
        let row = residuals.row(t);
        for i in 0..w {
            for j in i..w {
                mi[(i, j)] += row[i] * row[j];
            }
        }
    }
    let scale = 1.0 / n_rows.max(1) as f64;
    for i in 0..w {
        for j in i..w {
            mi[(i, j)] *= scale;
            mi[(j, i)] = mi[(i, j)];
        }
    }
    mi
}

/// Lag-s cross-covariance (N-s)^-1 Σ_{t=1}^{N-s} x_t x_{t+s} ε_t ε_{t+s}'.
///
/// Symmetric when `s = 0`, generally asymmetric for `s >= 1`.
pub fn estimate_cross_cov(x: &[f64], residuals: &Array2<f64>, s: usize) -> Result<Array2<f64>> {
    let (n_train, w) = residuals.dim();
    if s >= n_train {
        return Err(Error::LagTooLarge { lag: s, n_train });
    }
    let mut c = Array2::<f64>::zeros((w, w));
    for t in 0..n_train - s {
        let weight = x[t] * x[t + s];
        let head = residuals.row(t);
        let tail = residuals.row(t + s);
        for i in 0..w {
            let wi = weight * head[i];
            for j in 0..w {
                c[(i, j)] += wi * tail[j];
            }
        }
    }
    let scale = 1.0 / (n_train - s) as f64;
    c.mapv_inplace(|v| v * scale);
    if s == 0 {
        // same-index products: enforce exact symmetry
        for i in 0..w {
            for j in 0..i {
                let avg = 0.5 * (c[(i, j)] + c[(j, i)]);
                c[(i, j)] = avg;
                c[(j, i)] = avg;
            }
        }
    }
    Ok(c)
}

/// Variability index R_hat^-1 [ C(0) + Σ_{s=1}^{h-1} (C(s) + C(s)') ].
///
/// `cross_cov` must hold exactly `h >= 1` matrices for s = 0..h-1. The
/// output is exactly symmetric.
pub fn estimate_vi(r_hat: f64, cross_cov: &[Array2<f64>], h: usize) -> Result<Array2<f64>> {
    if cross_cov.len() != h || h == 0 {
        return Err(Error::MismatchedLagCount {
            expected: h.max(1),
            got: cross_cov.len(),
        });
    }
    let w = cross_cov[0].nrows();
    let mut vi = Array2::<f64>::zeros((w, w));
    for i in 0..w {
        for j in i..w {
            // s = 0 enters once, each lag enters as C + C'
            let mut sum = 0.5 * (cross_cov[0][(i, j)] + cross_cov[0][(j, i)]);
            for c in &cross_cov[1..] {
                sum += c[(i, j)] + c[(j, i)];
            }
            vi[(i, j)] = sum / r_hat;
            vi[(j, i)] = vi[(i, j)];
        }
    }
    Ok(vi)
}

/// Matrix norm induced by the Euclidean vector norm (largest singular value).
///
/// For symmetric input this is the largest absolute eigenvalue, computed in
/// closed form for 1×1 and 2×2 and by a cyclic Jacobi sweep otherwise.
pub fn spectral_norm(m: &Array2<f64>) -> f64 {
    let (rows, cols) = m.dim();
    if rows == cols && is_symmetric(m) {
        return symmetric_eigenvalues(m)
            .into_iter()
            .fold(0.0_f64, |acc, l| acc.max(l.abs()));
    }
    // general case: ||M|| = sqrt(λ_max(M'M)), M'M symmetric PSD
    let mut gram = Array2::<f64>::zeros((cols, cols));
    for i in 0..cols {
        for j in i..cols {
            let mut sum = 0.0;
            for r in 0..rows {
                sum += m[(r, i)] * m[(r, j)];
            }
            gram[(i, j)] = sum;
            gram[(j, i)] = sum;
        }
    }
    symmetric_eigenvalues(&gram)
        .into_iter()
        .fold(0.0_f64, |acc, l| acc.max(l.max(0.0)))
        .sqrt()
}

fn is_symmetric(m: &Array2<f64>) -> bool {
    let n = m.nrows();
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let tol = 1e-12 * scale.max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Eigenvalues of a symmetric matrix: closed form up to 2×2, cyclic Jacobi above.
pub fn symmetric_eigenvalues(m: &Array2<f64>) -> Vec<f64> {
    let n = m.nrows();
    match n {
        0 => Vec::new(),
        1 => vec![m[(0, 0)]],
        2 => {
            let (a, b, d) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
            let trace = a + d;
            let det = a * d - b * b;
            let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
            vec![0.5 * (trace + disc), 0.5 * (trace - disc)]
        }
        _ => jacobi_eigenvalues(m),
    }
}

fn jacobi_eigenvalues(m: &Array2<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-14 * (1.0 + a.diag().iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    a.diag().to_vec()
}

/// Vectorial criterion value from index matrices:
/// `||MI|| + (α_n/n) ||VI||`, components recorded separately.
pub fn vmric(mi: &Array2<f64>, vi: &Array2<f64>, spec: &PenaltySpec, n: usize) -> CriterionValue {
    let mi_norm = spectral_norm(mi);
    let vi_norm = spectral_norm(vi);
    let penalty_weight = spec.weight(n);
    CriterionValue {
        mi_norm,
        vi_norm,
        penalty_weight,
        total: mi_norm + penalty_weight * vi_norm,
    }
}

/// Univariate criterion via the trace estimators: scalar MI = N^-1 Σ ε_t²
/// and VI = R_hat^-1 [C(0) + 2 Σ_{s} C(s)] with scalar cross terms.
///
/// The scalar VI can be negative; `vi_norm` records its absolute value (the
/// spectral norm of a 1×1 matrix) so the value coincides with the vectorial
/// criterion at w = 1.
pub fn mric_univariate(
    x: &[f64],
    residuals: &Array1<f64>,
    r_hat: f64,
    h: usize,
    spec: &PenaltySpec,
    n: usize,
) -> Result<CriterionValue> {
    let n_train = residuals.len();
    let mi: f64 = residuals.iter().map(|e| e * e).sum::<f64>() / n_train as f64;
    let mut vi = 0.0;
    for s in 0..h {
        if s >= n_train {
            return Err(Error::LagTooLarge { lag: s, n_train });
        }
        let mut c = 0.0;
        for t in 0..n_train - s {
            c += x[t] * x[t + s] * residuals[t] * residuals[t + s];
        }
        c /= (n_train - s) as f64;
        vi += if s == 0 { c } else { 2.0 * c };
    }
    vi /= r_hat;
    let penalty_weight = spec.weight(n);
    let vi_norm = vi.abs();
    Ok(CriterionValue {
        mi_norm: mi,
        vi_norm,
        penalty_weight,
        total: mi + penalty_weight * vi_norm,
    })
}

/// Multivariate AIC and BIC from the residual covariance:
/// `N ln det Σ_hat + 2k` and `N ln det Σ_hat + k ln N`.
pub fn aic_bic(residuals: &Array2<f64>, k: usize) -> Result<(f64, f64)> {
    let n_train = residuals.nrows();
    let sigma = estimate_mi(residuals);
    let det = determinant(&sigma);
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::SingularCovariance { det });
    }
    let base = n_train as f64 * det.ln();
    let aic = base + 2.0 * k as f64;
    let bic = base + k as f64 * (n_train as f64).ln();
    Ok((aic, bic))
}

fn determinant(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if a[(r, col)].abs() > a[(pivot, col)].abs() {
                pivot = r;
            }
        }
        if a[(pivot, col)] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for c in 0..n {
                let tmp = a[(col, c)];
                a[(col, c)] = a[(pivot, c)];
                a[(pivot, c)] = tmp;
            }
            det = -det;
        }
        det *= a[(col, col)];
        for r in col + 1..n {
            let f = a[(r, col)] / a[(col, col)];
            for c in col..n {
                a[(r, c)] -= f * a[(col, c)];
            }
        }
    }
    det
}
