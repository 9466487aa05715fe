//! Sample representation and the least-squares fit of the scalar-predictor
//! multivariate forecasting model `y_{t+h} = B x_t + ε_t`.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Observed sample: scalar predictor series `x`, w-dimensional response
/// series `y`, forecast horizon `h`. The training window holds the
/// `N = n - h` pairs `(x_t, y_{t+h})`, t = 1..N.
#[derive(Debug, Clone)]
pub struct SampleSet {
    x: Vec<f64>,
    y: Array2<f64>,
    h: usize,
}

impl SampleSet {
    /// Build a sample, validating length, dimension and finiteness, and that
    /// the predictor is not identically zero over the training window.
    pub fn new(x: Vec<f64>, y: Array2<f64>, h: usize) -> Result<Self> {
        let n = x.len();
        if h == 0 {
            return Err(Error::InvalidInput("horizon h must be positive".into()));
        }
        if n < h + 2 {
            return Err(Error::InvalidInput(format!(
                "need n >= h + 2 observations, got n = {n}, h = {h}"
            )));
        }
        if y.nrows() != n {
            return Err(Error::InvalidInput(format!(
                "predictor has {n} rows but responses have {}",
                y.nrows()
            )));
        }
        if y.ncols() == 0 {
            return Err(Error::InvalidInput(
                "response dimension w must be >= 1".into(),
            ));
        }
        if x.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite entry in sample".into()));
        }
        let n_train = n - h;
        if x[..n_train].iter().all(|v| *v == 0.0) {
            return Err(Error::DegeneratePredictor);
        }
        Ok(Self { x, y, h })
    }

    /// Like [`SampleSet::new`] but subtracts the sample means of `x` and each
    /// response column first. Off by default in the reproduction runs.
    pub fn new_centered(mut x: Vec<f64>, mut y: Array2<f64>, h: usize) -> Result<Self> {
        let n = x.len().max(1) as f64;
        let x_mean = x.iter().sum::<f64>() / n;
        for v in &mut x {
            *v -= x_mean;
        }
        for mut col in y.columns_mut() {
            let mean = col.sum() / n;
            col.mapv_inplace(|v| v - mean);
        }
        Self::new(x, y, h)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Training length N = n - h.
    pub fn train_len(&self) -> usize {
        self.x.len() - self.h
    }

    pub fn horizon(&self) -> usize {
        self.h
    }

    /// Response dimension w.
    pub fn width(&self) -> usize {
        self.y.ncols()
    }

    pub fn predictor(&self) -> &[f64] {
        &self.x
    }

    pub fn responses(&self) -> &Array2<f64> {
        &self.y
    }
}

/// Fitted coefficients, predictor second moment and residual matrix.
#[derive(Debug, Clone)]
pub struct OlsFit {
    b_hat: Array1<f64>,
    r_hat: f64,
    residuals: Array2<f64>,
}

impl OlsFit {
    /// Coefficient vector B_hat, one slope per response component.
    pub fn b_hat(&self) -> &Array1<f64> {
        &self.b_hat
    }

    /// Sample second moment R_hat = N^-1 Σ x_t².
    pub fn r_hat(&self) -> f64 {
        self.r_hat
    }

    /// Residual rows ε_t = y_{t+h} - B_hat x_t, t = 1..N.
    pub fn residuals(&self) -> &Array2<f64> {
        &self.residuals
    }
}

/// Sample second moment N^-1 Σ_{t=1..N} x_t² over the training window.
pub fn sample_second_moment(x: &[f64], n_train: usize) -> Result<f64> {
    assert!(n_train <= x.len(), "training window exceeds series length");
    let window = &x[..n_train];
    if window.iter().all(|v| *v == 0.0) {
        return Err(Error::DegeneratePredictor);
    }
    Ok(window.iter().map(|v| v * v).sum::<f64>() / n_train as f64)
}

/// Least-squares fit B_hat = R_hat^-1 (N^-1 Σ x_t y_{t+h}'), with residuals.
pub fn fit_ols(sample: &SampleSet) -> Result<OlsFit> {
    let n_train = sample.train_len();
    let w = sample.width();
    let h = sample.horizon();
    let x = sample.predictor();
    let y = sample.responses();

    let r_hat = sample_second_moment(x, n_train)?;
    let mut cross = Array1::<f64>::zeros(w);
    for (t, &xt) in x[..n_train].iter().enumerate() {
        let row = y.row(t + h);
        for j in 0..w {
            cross[j] += xt * row[j];
        }
    }
    let b_hat = cross.mapv(|v| v / (n_train as f64 * r_hat));

    let mut residuals = Array2::<f64>::zeros((n_train, w));
    for t in 0..n_train {
        let xt = x[t];
        let row = y.row(t + h);
        for j in 0..w {
            residuals[(t, j)] = row[j] - b_hat[j] * xt;
        }
    }
    Ok(OlsFit {
        b_hat,
        r_hat,
        residuals,
    })
}

/// h-step forecast `y_hat = B_hat x_n`.
pub fn forecast(fit: &OlsFit, xn: f64) -> Array1<f64> {
    fit.b_hat().mapv(|b| b * xn)
}
