//! The bivariate example system: an AR(2)-driven data generating process
//!
//! ```text
//! y_{t+1} = a w_t + ε_{t+1}          (bivariate response)
//! w_t = φ1 w_{t-1} + φ2 w_{t-2} + δ_t   (unit-variance AR(2) driver)
//! z_t = ψ1 z_{t-1} + υ_t               (independent unit-variance AR(1))
//! ```
//!
//! together with the closed-form misspecification and variability indices of
//! the two 2-step-ahead candidate models: Model 1 regresses `y_{t+2}` on `w_t`
//! (one omitted lagged predictor), Model 2 regresses it on the uninformative
//! `z_t`. All innovations are Gaussian; the fourth-moment terms are evaluated
//! with Isserlis' theorem.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::criteria::{vmric, CriterionValue, PenaltySpec};
use crate::error::{Error, Result};
use crate::rng::{substream, STREAM_DELTA, STREAM_EPSILON, STREAM_UPSILON};

/// Draws discarded at the start of every AR recursion.
pub const AR_WARMUP: usize = 1000;

fn default_alpha() -> f64 {
    0.85
}

fn default_n() -> usize {
    1_000_000
}

fn default_sigma_eps() -> [[f64; 2]; 2] {
    [[1.0, 0.5], [0.5, 1.0]]
}

/// Parameterization of the example DGP (Table 1 rows plus penalty, size, seed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleConfig {
    pub phi1: f64,
    pub phi2: f64,
    pub a1: f64,
    pub a2: f64,
    pub psi1: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_sigma_eps")]
    pub sigma_eps: [[f64; 2]; 2],
}

impl ExampleConfig {
    /// Parameter case 1..3 of the study, with the default covariance,
    /// penalty exponent 0.85 and sample size 10^6.
    pub fn case(case: usize) -> Result<Self> {
        let (phi1, phi2, a1, a2, psi1) = match case {
            1 => (0.4, -0.75, 1.50, -2.00, 0.80),
            2 => (-0.4, -0.45, -0.75, 1.25, -0.65),
            3 => (0.3, -0.80, 1.00, 0.50, -0.75),
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "case must be 1, 2 or 3, got {case}"
                )))
            }
        };
        Ok(Self {
            phi1,
            phi2,
            a1,
            a2,
            psi1,
            alpha: default_alpha(),
            n: default_n(),
            seed: 0,
            sigma_eps: default_sigma_eps(),
        })
    }

    pub fn loading(&self) -> [f64; 2] {
        [self.a1, self.a2]
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi1 * self.phi2 == 0.0 {
            return Err(Error::InvalidConfig("phi1 * phi2 must be nonzero".into()));
        }
        check_ar2_stationary(self.phi1, self.phi2)?;
        let var = delta_variance(self.phi1, self.phi2)?;
        debug_assert!(var > 0.0);
        if self.a1 == 0.0 && self.a2 == 0.0 {
            return Err(Error::InvalidConfig(
                "loading vector a must be nonzero".into(),
            ));
        }
        if !self.psi1.is_finite() || self.psi1.abs() >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "psi1 = {} outside (-1, 1)",
                self.psi1
            )));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 || self.alpha >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha = {} outside (0, 1)",
                self.alpha
            )));
        }
        if self.n < 4 {
            return Err(Error::InvalidConfig("n must be at least 4".into()));
        }
        let s = &self.sigma_eps;
        if (s[0][1] - s[1][0]).abs() > 1e-12 {
            return Err(Error::InvalidConfig("sigma_eps must be symmetric".into()));
        }
        let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        if s[0][0] <= 0.0 || det <= 0.0 || !det.is_finite() {
            return Err(Error::InvalidConfig(
                "sigma_eps must be positive definite".into(),
            ));
        }
        Ok(())
    }

    pub fn penalty_spec(&self) -> Result<PenaltySpec> {
        PenaltySpec::new(self.alpha)
    }

    fn sigma_eps_array(&self) -> Array2<f64> {
        Array2::from_shape_fn((2, 2), |(i, j)| self.sigma_eps[i][j])
    }
}

fn check_ar2_stationary(phi1: f64, phi2: f64) -> Result<()> {
    if phi2 > -1.0 && phi2 < 1.0 && phi1 + phi2 < 1.0 && phi2 - phi1 < 1.0 {
        Ok(())
    } else {
        Err(Error::NonstationaryParameters(format!(
            "AR(2) with phi1 = {phi1}, phi2 = {phi2}"
        )))
    }
}

/// Innovation variance E[δ²] = 1 - φ2² - φ1²(1+φ2)/(1-φ2) that normalises
/// the AR(2) process to unit variance.
pub fn delta_variance(phi1: f64, phi2: f64) -> Result<f64> {
    let var = 1.0 - phi2 * phi2 - phi1 * phi1 * (1.0 + phi2) / (1.0 - phi2);
    if var > 0.0 && var.is_finite() {
        Ok(var)
    } else {
        Err(Error::InvalidParameters(format!(
            "E[delta^2] = {var} not positive for phi1 = {phi1}, phi2 = {phi2}"
        )))
    }
}

/// Lag-j autocovariance of the unit-variance AR(2): γ(0) = 1,
/// γ(1) = φ1/(1-φ2), γ(j) = φ1 γ(j-1) + φ2 γ(j-2).
pub fn ar2_autocovariance(phi1: f64, phi2: f64, j: usize) -> Result<f64> {
    check_ar2_stationary(phi1, phi2)?;
    let gamma1 = phi1 / (1.0 - phi2);
    match j {
        0 => Ok(1.0),
        1 => Ok(gamma1),
        _ => {
            let mut prev2 = 1.0;
            let mut prev1 = gamma1;
            for _ in 2..=j {
                let next = phi1 * prev1 + phi2 * prev2;
                prev2 = prev1;
                prev1 = next;
            }
            Ok(prev1)
        }
    }
}

/// Simulate an AR(p) recursion from zero initial conditions with Gaussian
/// innovations, discarding `warmup` draws. Deterministic given the generator.
pub fn simulate_ar(
    phi: &[f64],
    innovation_variance: f64,
    n: usize,
    warmup: usize,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    if innovation_variance <= 0.0 || !innovation_variance.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "innovation variance {innovation_variance} must be positive"
        )));
    }
    check_ar_stationary(phi)?;
    let p = phi.len();
    let sd = innovation_variance.sqrt();
    let mut history = vec![0.0_f64; p];
    let mut out = Vec::with_capacity(n);
    for t in 0..warmup + n {
        let mut value = sd * rng.sample::<f64, _>(StandardNormal);
        for (k, coef) in phi.iter().enumerate() {
            value += coef * history[k];
        }
        if p > 0 {
            history.rotate_right(1);
            history[0] = value;
        }
        if t >= warmup {
            out.push(value);
        }
    }
    Ok(out)
}

fn check_ar_stationary(phi: &[f64]) -> Result<()> {
    match phi.len() {
        0 => Ok(()),
        1 => {
            if phi[0].abs() < 1.0 {
                Ok(())
            } else {
                Err(Error::NonstationaryParameters(format!(
                    "AR(1) with phi = {}",
                    phi[0]
                )))
            }
        }
        2 => check_ar2_stationary(phi[0], phi[1]),
        p => {
            // companion-matrix spectral radius by power iteration
            let radius = companion_spectral_radius(phi);
            if radius < 1.0 - 1e-9 {
                Ok(())
            } else {
                Err(Error::NonstationaryParameters(format!(
                    "AR({p}) spectral radius {radius:.6}"
                )))
            }
        }
    }
}

fn companion_spectral_radius(phi: &[f64]) -> f64 {
    let p = phi.len();
    let mut v = vec![1.0_f64; p];
    let mut radius = 0.0;
    for _ in 0..200 {
        let mut next = vec![0.0_f64; p];
        next[0] = phi.iter().zip(&v).map(|(c, x)| c * x).sum();
        next[1..p].copy_from_slice(&v[..p - 1]);
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for x in &mut next {
            *x /= norm;
        }
        radius = norm;
        v = next;
    }
    radius
}

/// One simulated path of the example system, aligned so that
/// `y[t] = a w[t-1] + eps[t]` holds for every stored index.
#[derive(Debug, Clone)]
pub struct ExampleData {
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    pub y: Array2<f64>,
}

/// Simulate `config.n` records of (w_t, z_t, y_t) from the master seed's
/// named substreams (δ, υ, ε).
pub fn simulate_example(config: &ExampleConfig) -> Result<ExampleData> {
    simulate_example_sized(config, config.n)
}

/// Same as [`simulate_example`] with an explicit length override.
pub fn simulate_example_sized(config: &ExampleConfig, n: usize) -> Result<ExampleData> {
    config.validate()?;
    let delta_var = delta_variance(config.phi1, config.phi2)?;

    // one pre-sample point of w so y[0] is properly distributed
    let mut delta_rng = substream(config.seed, STREAM_DELTA);
    let w_full = simulate_ar(
        &[config.phi1, config.phi2],
        delta_var,
        n + 1,
        AR_WARMUP,
        &mut delta_rng,
    )?;

    let mut upsilon_rng = substream(config.seed, STREAM_UPSILON);
    let z = simulate_ar(
        &[config.psi1],
        1.0 - config.psi1 * config.psi1,
        n,
        AR_WARMUP,
        &mut upsilon_rng,
    )?;

    // eps via the Cholesky factor of sigma_eps
    let s = &config.sigma_eps;
    let l11 = s[0][0].sqrt();
    let l21 = s[0][1] / l11;
    let l22 = (s[1][1] - l21 * l21).sqrt();
    let mut eps_rng = substream(config.seed, STREAM_EPSILON);
    let a = config.loading();
    let mut y = Array2::<f64>::zeros((n, 2));
    for t in 0..n {
        let u1: f64 = eps_rng.sample(StandardNormal);
        let u2: f64 = eps_rng.sample(StandardNormal);
        let e1 = l11 * u1;
        let e2 = l21 * u1 + l22 * u2;
        let w_prev = w_full[t]; // w_{t-1} relative to the stored series
        y[(t, 0)] = a[0] * w_prev + e1;
        y[(t, 1)] = a[1] * w_prev + e2;
    }
    Ok(ExampleData {
        w: w_full[1..].to_vec(),
        z,
        y,
    })
}

/// Moment pattern of a fourth-order product of two unit-variance components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentPattern {
    /// E[w_t^4]
    FourthPower,
    /// E[w_t^3 w_{t-lag}]
    CubicCross,
    /// E[w_t^2 w_{t-lag}^2]
    SquaredPair,
}

/// Isserlis evaluation of Gaussian product moments for a zero-mean,
/// unit-variance stationary process with autocovariance `gamma`:
/// E[w^4] = 3, E[w_t^3 w_{t-s}] = 3γ(s), E[w_t^2 w_{t-s}^2] = 1 + 2γ(s)².
pub fn gaussian_product_moments(
    gamma: impl Fn(usize) -> f64,
    pattern: MomentPattern,
    lag: usize,
) -> f64 {
    match pattern {
        MomentPattern::FourthPower => 3.0,
        MomentPattern::CubicCross => 3.0 * gamma(lag),
        MomentPattern::SquaredPair => {
            let g = gamma(lag);
            1.0 + 2.0 * g * g
        }
    }
}

/// Closed-form indices and criterion values for the two candidate models.
#[derive(Debug, Clone, Serialize)]
pub struct TheoreticalIndices {
    pub gamma_w1: f64,
    pub sigma_delta2: f64,
    pub mi_m1: [[f64; 2]; 2],
    pub vi_m1: [[f64; 2]; 2],
    pub mi_m2: [[f64; 2]; 2],
    pub vi_m2: [[f64; 2]; 2],
    pub c20_m1: [[f64; 2]; 2],
    pub c21_m1: [[f64; 2]; 2],
    pub vmric_m1: CriterionValue,
    pub vmric_m2: CriterionValue,
}

fn to_nested(m: &Array2<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn rank_one_update(sigma: &Array2<f64>, a: &[f64; 2], scale: f64) -> Array2<f64> {
    Array2::from_shape_fn((2, 2), |(i, j)| sigma[(i, j)] + scale * a[i] * a[j])
}

/// Evaluate the closed forms: Model 1's MI, C_{2,0}, C_{2,1} and VI with
/// Gaussian product moments, Model 2's MI and VI, and both criterion values
/// at the config's sample size and penalty exponent.
pub fn theoretical_indices(config: &ExampleConfig) -> Result<TheoreticalIndices> {
    config.validate()?;
    let (phi1, phi2) = (config.phi1, config.phi2);
    let gamma1 = ar2_autocovariance(phi1, phi2, 1)?;
    if gamma1 == 0.0 {
        return Err(Error::ZeroGamma);
    }
    let sigma_delta2 = delta_variance(phi1, phi2)?;
    let sigma = config.sigma_eps_array();
    let a = config.loading();
    let gamma = |j: usize| ar2_autocovariance(phi1, phi2, j).expect("validated parameters");

    let e4 = gaussian_product_moments(gamma, MomentPattern::FourthPower, 0);
    let e31 = gaussian_product_moments(gamma, MomentPattern::CubicCross, 1);
    let e22 = gaussian_product_moments(gamma, MomentPattern::SquaredPair, 1);

    // Model 1: MI = Σ + a a' [σδ² + φ2²(1 - γ1²)]
    let mi1_scale = sigma_delta2 + phi2 * phi2 * (1.0 - gamma1 * gamma1);
    let mi_m1 = rank_one_update(&sigma, &a, mi1_scale);

    // C_{2,0} = Σ + a a' {σδ² + φ2²(γ1² E[w⁴] - 2γ1 E[w³w'] + E[w²w'²])}
    let c20_scale = sigma_delta2 + phi2 * phi2 * (gamma1 * gamma1 * e4 - 2.0 * gamma1 * e31 + e22);
    let c20 = rank_one_update(&sigma, &a, c20_scale);

    // C_{2,1} = a a' γ1 (b1 E[w³w'] + b2 E[w w'³] + b3 E[w²w'²])
    let b1 = 2.0 * phi1 * phi2 * gamma1 - phi2;
    let b2 = -phi2 * phi2;
    let b3 = phi2 * (phi2 * gamma1 - 2.0 * phi1 + 1.0 / gamma1);
    let c21_scale = gamma1 * (b1 * e31 + b2 * e31 + b3 * e22);
    let c21 = Array2::from_shape_fn((2, 2), |(i, j)| c21_scale * a[i] * a[j]);

    // VI = R^-1 (C_{2,0} + C_{2,1} + C_{2,1}'), R = γ_w(0) = 1
    let r = 1.0;
    let vi_m1 = Array2::from_shape_fn((2, 2), |(i, j)| {
        (c20[(i, j)] + c21[(i, j)] + c21[(j, i)]) / r
    });

    // Model 2: MI = Σ + a a', VI = Σ + a a'(1 + 2 ψ1 γ1)
    let mi_m2 = rank_one_update(&sigma, &a, 1.0);
    let vi_m2 = rank_one_update(&sigma, &a, 1.0 + 2.0 * config.psi1 * gamma1);

    let spec = config.penalty_spec()?;
    let vmric_m1 = vmric(&mi_m1, &vi_m1, &spec, config.n);
    let vmric_m2 = vmric(&mi_m2, &vi_m2, &spec, config.n);

    Ok(TheoreticalIndices {
        gamma_w1: gamma1,
        sigma_delta2,
        mi_m1: to_nested(&mi_m1),
        vi_m1: to_nested(&vi_m1),
        mi_m2: to_nested(&mi_m2),
        vi_m2: to_nested(&vi_m2),
        c20_m1: to_nested(&c20),
        c21_m1: to_nested(&c21),
        vmric_m1,
        vmric_m2,
    })
}

/// Cross-moment E[ε_t^(2) w_{t-j}] = -a φ2/(1-φ2) {γ(j+1) - γ(j-1)} of the
/// Model 1 forecast error; exactly zero at j = 0.
pub fn model1_forecast_error_theory(config: &ExampleConfig, j: usize) -> Result<[f64; 2]> {
    config.validate()?;
    if j == 0 {
        return Ok([0.0, 0.0]);
    }
    let g_plus = ar2_autocovariance(config.phi1, config.phi2, j + 1)?;
    let g_minus = ar2_autocovariance(config.phi1, config.phi2, j - 1)?;
    let factor = -config.phi2 / (1.0 - config.phi2) * (g_plus - g_minus);
    Ok([config.a1 * factor, config.a2 * factor])
}

/// True Model 1 slope a (φ1 + φ1 φ2/(1-φ2)) = a γ_w(1).
pub fn model1_true_slope(config: &ExampleConfig) -> Result<Array1<f64>> {
    let gamma1 = ar2_autocovariance(config.phi1, config.phi2, 1)?;
    Ok(Array1::from(vec![config.a1 * gamma1, config.a2 * gamma1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::sample_second_moment;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn case1() -> ExampleConfig {
        ExampleConfig::case(1).unwrap()
    }

    #[test]
    fn autocovariance_case1_values() {
        assert_eq!(ar2_autocovariance(0.4, -0.75, 0).unwrap(), 1.0);
        assert_relative_eq!(
            ar2_autocovariance(0.4, -0.75, 1).unwrap(),
            0.4 / 1.75,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            ar2_autocovariance(0.4, -0.75, 2).unwrap(),
            0.4 * (0.4 / 1.75) - 0.75,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            ar2_autocovariance(0.4, -0.75, 2).unwrap(),
            -0.658571,
            epsilon = 1e-6
        );
    }

    #[test]
    fn autocovariance_rejects_nonstationary() {
        assert!(matches!(
            ar2_autocovariance(0.8, 0.4, 1),
            Err(Error::NonstationaryParameters(_))
        ));
    }

    #[test]
    fn delta_variance_values() {
        assert_relative_eq!(delta_variance(0.0, 0.5).unwrap(), 0.75, epsilon = 1e-15);
        assert_relative_eq!(
            delta_variance(0.4, -0.75).unwrap(),
            0.414643,
            epsilon = 1e-6
        );
        assert_relative_eq!(delta_variance(0.3, -0.8).unwrap(), 0.35, epsilon = 1e-12);
    }

    #[test]
    fn isserlis_moment_values() {
        let gamma = |j: usize| ar2_autocovariance(0.4, -0.75, j).unwrap();
        assert_eq!(
            gaussian_product_moments(gamma, MomentPattern::FourthPower, 0),
            3.0
        );
        assert_relative_eq!(
            gaussian_product_moments(gamma, MomentPattern::CubicCross, 1),
            0.685714,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            gaussian_product_moments(gamma, MomentPattern::SquaredPair, 1),
            1.104490,
            epsilon = 1e-6
        );
    }

    // Independent oracle for the closed forms: explicit 2x2 arithmetic with
    // the quadratic eigenvalue formula, no calls into the crate's matrix code.
    fn oracle_vmric(config: &ExampleConfig, model: usize) -> f64 {
        let g1 = config.phi1 / (1.0 - config.phi2);
        let sd2 = 1.0
            - config.phi2 * config.phi2
            - config.phi1 * config.phi1 * (1.0 + config.phi2) / (1.0 - config.phi2);
        let (a1, a2) = (config.a1, config.a2);
        let scale = if model == 1 {
            let mi_c = sd2 + config.phi2 * config.phi2 * (1.0 - g1 * g1);
            let b1 = 2.0 * config.phi1 * config.phi2 * g1 - config.phi2;
            let b2 = -config.phi2 * config.phi2;
            let b3 = config.phi2 * (config.phi2 * g1 - 2.0 * config.phi1 + 1.0 / g1);
            let c21 = g1 * (b1 * 3.0 * g1 + b2 * 3.0 * g1 + b3 * (1.0 + 2.0 * g1 * g1));
            (mi_c, mi_c + 2.0 * c21)
        } else {
            (1.0, 1.0 + 2.0 * config.psi1 * g1)
        };
        let norm = |c: f64| {
            let m11 = config.sigma_eps[0][0] + c * a1 * a1;
            let m12 = config.sigma_eps[0][1] + c * a1 * a2;
            let m22 = config.sigma_eps[1][1] + c * a2 * a2;
            let tr = m11 + m22;
            let det = m11 * m22 - m12 * m12;
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            (0.5 * (tr + disc)).abs().max((0.5 * (tr - disc)).abs())
        };
        norm(scale.0) + (config.n as f64).powf(config.alpha - 1.0) * norm(scale.1)
    }

    #[test]
    fn theoretical_indices_match_independent_oracle() {
        for case in 1..=3 {
            let config = ExampleConfig::case(case).unwrap();
            let th = theoretical_indices(&config).unwrap();
            assert_relative_eq!(
                th.vmric_m1.total,
                oracle_vmric(&config, 1),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                th.vmric_m2.total,
                oracle_vmric(&config, 2),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn theoretical_indices_frozen_values() {
        // closed-form totals at n = 10^6, alpha = 0.85 (model 2 matches the
        // reference table; model 1 is the corrected evaluation)
        let expect = [
            (6.6387535329, 7.9140749961),
            (2.7658693745, 3.1641263739),
            (2.7851926363, 2.9936117229),
        ];
        for case in 1..=3 {
            let th = theoretical_indices(&ExampleConfig::case(case).unwrap()).unwrap();
            let (m1, m2) = expect[case - 1];
            assert_abs_diff_eq!(th.vmric_m1.total, m1, epsilon = 1e-9);
            assert_abs_diff_eq!(th.vmric_m2.total, m2, epsilon = 1e-9);
        }
    }

    #[test]
    fn theoretical_intermediates_case1_model2() {
        let th = theoretical_indices(&case1()).unwrap();
        assert_abs_diff_eq!(th.vmric_m2.mi_norm, 6.7737, epsilon = 5e-5);
        assert_abs_diff_eq!(th.vmric_m2.vi_norm, 9.0583, epsilon = 5e-5);
        assert_abs_diff_eq!(th.vmric_m2.penalty_weight, 0.125893, epsilon = 1e-6);
    }

    #[test]
    fn model1_is_dominated_by_model2_in_all_cases() {
        for case in 1..=3 {
            let th = theoretical_indices(&ExampleConfig::case(case).unwrap()).unwrap();
            assert!(th.vmric_m1.total < th.vmric_m2.total);
        }
    }

    #[test]
    fn forecast_error_theory_zero_at_lag_zero() {
        let e = model1_forecast_error_theory(&case1(), 0).unwrap();
        assert_eq!(e, [0.0, 0.0]);
    }

    #[test]
    fn forecast_error_theory_case1_lag1() {
        let e = model1_forecast_error_theory(&case1(), 1).unwrap();
        assert_abs_diff_eq!(e[0], -1.066, epsilon = 5e-4);
        assert_abs_diff_eq!(e[1], 1.422, epsilon = 5e-4);
    }

    #[test]
    fn config_rejects_zero_loading() {
        let mut config = case1();
        config.a1 = 0.0;
        config.a2 = 0.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn config_rejects_zero_phi_product() {
        let mut config = case1();
        config.phi2 = 0.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn simulate_ar_white_noise_variance() {
        let mut rng = substream(5, 9);
        let x = simulate_ar(&[], 1.0, 100_000, 0, &mut rng).unwrap();
        let var = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert_abs_diff_eq!(var, 1.0, epsilon = 0.02);
    }

    #[test]
    fn simulate_ar_case1_unit_variance_and_lag1() {
        let config = case1();
        let mut rng = substream(11, STREAM_DELTA);
        let n = 1_000_000;
        let x = simulate_ar(
            &[config.phi1, config.phi2],
            delta_variance(config.phi1, config.phi2).unwrap(),
            n,
            AR_WARMUP,
            &mut rng,
        )
        .unwrap();
        let var = sample_second_moment(&x, n).unwrap();
        assert_abs_diff_eq!(var, 1.0, epsilon = 0.01);
        let lag1: f64 = (0..n - 1).map(|t| x[t] * x[t + 1]).sum::<f64>() / (n - 1) as f64;
        assert_abs_diff_eq!(lag1 / var, 0.2286, epsilon = 0.01);
    }

    #[test]
    fn simulate_ar_rejects_nonstationary() {
        let mut rng = substream(1, 1);
        assert!(simulate_ar(&[1.01], 1.0, 10, 0, &mut rng).is_err());
        assert!(simulate_ar(&[0.5, 0.6], 1.0, 10, 0, &mut rng).is_err());
        assert!(simulate_ar(&[0.3, 0.3, 0.5], 1.0, 10, 0, &mut rng).is_err());
        assert!(simulate_ar(&[0.2, 0.1, 0.1], 1.0, 10, 0, &mut rng).is_ok());
    }

    #[test]
    fn example_data_recovers_innovation_covariance() {
        let mut config = case1();
        config.n = 1_000_000;
        config.seed = 21;
        let data = simulate_example(&config).unwrap();
        let a = config.loading();
        // eps_t = y_t - a w_{t-1}; skip t = 0 whose w_{t-1} is not stored
        let n = config.n;
        let (mut s11, mut s12, mut s22) = (0.0, 0.0, 0.0);
        for t in 1..n {
            let e1 = data.y[(t, 0)] - a[0] * data.w[t - 1];
            let e2 = data.y[(t, 1)] - a[1] * data.w[t - 1];
            s11 += e1 * e1;
            s12 += e1 * e2;
            s22 += e2 * e2;
        }
        let m = (n - 1) as f64;
        assert_abs_diff_eq!(s11 / m, 1.0, epsilon = 0.01);
        assert_abs_diff_eq!(s12 / m, 0.5, epsilon = 0.01);
        assert_abs_diff_eq!(s22 / m, 1.0, epsilon = 0.01);
    }

    #[test]
    fn example_data_w_and_z_are_uncorrelated() {
        let mut config = case1();
        config.n = 1_000_000;
        config.seed = 33;
        let data = simulate_example(&config).unwrap();
        let n = config.n as f64;
        let corr: f64 = data.w.iter().zip(&data.z).map(|(w, z)| w * z).sum::<f64>() / n;
        assert_abs_diff_eq!(corr, 0.0, epsilon = 0.005);
    }

    #[test]
    fn simulation_is_seed_deterministic() {
        let mut config = case1();
        config.n = 500;
        config.seed = 77;
        let d1 = simulate_example(&config).unwrap();
        let d2 = simulate_example(&config).unwrap();
        assert_eq!(d1.w, d2.w);
        assert_eq!(d1.z, d2.z);
        assert_eq!(d1.y, d2.y);
        config.seed = 78;
        let d3 = simulate_example(&config).unwrap();
        assert_ne!(d1.w, d3.w);
    }
}
