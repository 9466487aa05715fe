//! Finite-family model selection: evaluate each candidate under the
//! vectorial criterion plus AIC/BIC baselines, pick the argmin, and report
//! the minimum-MI / minimum-VI diagnostic sets.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::criteria::{aic_bic, vmric, CriterionValue, IndexMatrices, PenaltySpec};
use crate::dgp::ExampleData;
use crate::error::{Error, Result};
use crate::estimation::{fit_ols, SampleSet};

/// Raw record sequence: named candidate predictor series plus the
/// w-dimensional response matrix, all over the same time index.
#[derive(Debug, Clone)]
pub struct DataSet {
    predictors: Vec<(String, Vec<f64>)>,
    responses: Array2<f64>,
}

impl DataSet {
    pub fn new(predictors: Vec<(String, Vec<f64>)>, responses: Array2<f64>) -> Result<Self> {
        let n = responses.nrows();
        if n == 0 {
            return Err(Error::InvalidInput("empty data set".into()));
        }
        if predictors.is_empty() {
            return Err(Error::InvalidInput("no predictor series".into()));
        }
        for (name, series) in &predictors {
            if series.len() != n {
                return Err(Error::InvalidInput(format!(
                    "predictor '{name}' has {} rows, responses have {n}",
                    series.len()
                )));
            }
        }
        Ok(Self {
            predictors,
            responses,
        })
    }

    pub fn from_example(data: &ExampleData) -> Self {
        Self {
            predictors: vec![
                ("w".to_string(), data.w.clone()),
                ("z".to_string(), data.z.clone()),
            ],
            responses: data.y.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.responses.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self) -> usize {
        self.responses.ncols()
    }

    pub fn predictor(&self, name: &str) -> Option<&[f64]> {
        self.predictors
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.as_slice())
    }

    pub fn predictor_names(&self) -> impl Iterator<Item = &str> {
        self.predictors.iter().map(|(n, _)| n.as_str())
    }

    pub fn responses(&self) -> &Array2<f64> {
        &self.responses
    }
}

/// One candidate forecasting model: which predictor series to use, at which
/// lag. Records before the lag are discarded as warm-up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateModel {
    pub id: usize,
    pub predictor: String,
    #[serde(default)]
    pub lag: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateEvaluation {
    pub id: usize,
    pub predictor: String,
    pub criterion: CriterionValue,
    pub aic: f64,
    pub bic: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateFailure {
    pub id: usize,
    pub message: String,
}

/// Per-candidate values, the selected ids per criterion, and the estimated
/// minimum-MI set (m1) and minimum-VI-within-m1 set (m2).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionReport {
    pub per_model: Vec<CandidateEvaluation>,
    pub chosen_vmric: usize,
    pub chosen_aic: usize,
    pub chosen_bic: usize,
    pub m1_hat: Vec<usize>,
    pub m2_hat: Vec<usize>,
    pub failures: Vec<CandidateFailure>,
}

/// Selection fractions per criterion, each in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionRates {
    pub vmric: f64,
    pub aic: f64,
    pub bic: f64,
}

/// Evaluate every candidate on the shared data, select the argmin of the
/// criterion total per criterion (ties to the lowest id), and assemble the
/// diagnostic sets with relative tolerance 1e-6·(1 + min).
///
/// A failing candidate is excluded and recorded; it is an error only if all
/// candidates fail.
pub fn evaluate_candidates(
    data: &DataSet,
    candidates: &[CandidateModel],
    h: usize,
    spec: &PenaltySpec,
) -> Result<SelectionReport> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput("no candidate models".into()));
    }
    let mut per_model = Vec::with_capacity(candidates.len());
    let mut failures = Vec::new();
    for candidate in candidates {
        match evaluate_one(data, candidate, h, spec) {
            Ok(eval) => per_model.push(eval),
            Err(err) => failures.push(CandidateFailure {
                id: candidate.id,
                message: err.to_string(),
            }),
        }
    }
    if per_model.is_empty() {
        return Err(Error::AllCandidatesFailed(candidates.len()));
    }
    per_model.sort_by_key(|e| e.id);

    let chosen_vmric = argmin_id(&per_model, |e| e.criterion.total);
    let chosen_aic = argmin_id(&per_model, |e| e.aic);
    let chosen_bic = argmin_id(&per_model, |e| e.bic);

    let min_mi = per_model
        .iter()
        .map(|e| e.criterion.mi_norm)
        .fold(f64::INFINITY, f64::min);
    let tol_mi = 1e-6 * (1.0 + min_mi);
    let m1_hat: Vec<usize> = per_model
        .iter()
        .filter(|e| e.criterion.mi_norm <= min_mi + tol_mi)
        .map(|e| e.id)
        .collect();
    let min_vi = per_model
        .iter()
        .filter(|e| m1_hat.contains(&e.id))
        .map(|e| e.criterion.vi_norm)
        .fold(f64::INFINITY, f64::min);
    let tol_vi = 1e-6 * (1.0 + min_vi);
    let m2_hat: Vec<usize> = per_model
        .iter()
        .filter(|e| m1_hat.contains(&e.id) && e.criterion.vi_norm <= min_vi + tol_vi)
        .map(|e| e.id)
        .collect();

    Ok(SelectionReport {
        per_model,
        chosen_vmric,
        chosen_aic,
        chosen_bic,
        m1_hat,
        m2_hat,
        failures,
    })
}

fn argmin_id(evals: &[CandidateEvaluation], key: impl Fn(&CandidateEvaluation) -> f64) -> usize {
    let mut best = &evals[0];
    for e in &evals[1..] {
        // strict less-than: exact ties keep the lower id
        if key(e) < key(best) {
            best = e;
        }
    }
    best.id
}

fn evaluate_one(
    data: &DataSet,
    candidate: &CandidateModel,
    h: usize,
    spec: &PenaltySpec,
) -> Result<CandidateEvaluation> {
    let series = data.predictor(&candidate.predictor).ok_or_else(|| {
        Error::InvalidInput(format!("unknown predictor '{}'", candidate.predictor))
    })?;
    let n = data.len();
    let lag = candidate.lag;
    if n <= lag + h + 1 {
        return Err(Error::InvalidInput(format!(
            "candidate {} needs more than {} records",
            candidate.id,
            lag + h + 1
        )));
    }
    // predictor at record t is series[t - lag]; drop the first `lag` records
    let x: Vec<f64> = series[..n - lag].to_vec();
    let y = data.responses().slice(ndarray::s![lag.., ..]).to_owned();
    let sample = SampleSet::new(x, y, h)?;
    let fit = fit_ols(&sample)?;
    let indices = IndexMatrices::estimate(&sample, &fit)?;
    let criterion = vmric(&indices.mi, &indices.vi, spec, sample.len());
    let (aic, bic) = aic_bic(fit.residuals(), sample.width())?;
    Ok(CandidateEvaluation {
        id: candidate.id,
        predictor: candidate.predictor.clone(),
        criterion,
        aic,
        bic,
    })
}

/// Fraction of reports whose chosen id equals `truth`, per criterion.
pub fn selection_frequencies(reports: &[SelectionReport], truth: usize) -> Result<SelectionRates> {
    if reports.is_empty() {
        return Err(Error::InvalidInput("no selection reports".into()));
    }
    let total = reports.len() as f64;
    let count = |pick: fn(&SelectionReport) -> usize| {
        reports.iter().filter(|r| pick(r) == truth).count() as f64 / total
    };
    Ok(SelectionRates {
        vmric: count(|r| r.chosen_vmric),
        aic: count(|r| r.chosen_aic),
        bic: count(|r| r.chosen_bic),
    })
}
