//! Replication engine for the three study tables: theoretical-vs-estimated
//! criterion values (single long run), bias/MSE of the estimator over
//! replications, and correct-selection percentages per criterion.
//!
//! Replications run in parallel; every replication derives its own seed from
//! the master seed and its (table, n, replication, candidate) labels, so the
//! aggregate output is identical for any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{aic_bic, vmric, CriterionValue, IndexMatrices, PenaltySpec};
use crate::dgp::{simulate_example_sized, theoretical_indices, ExampleConfig, ExampleData};
use crate::error::{Error, Result};
use crate::estimation::{fit_ols, SampleSet};

/// Forecast horizon of the example study.
pub const EXAMPLE_HORIZON: usize = 2;

const TAG_TABLE3: u64 = 3;
const TAG_TABLE4: u64 = 4;

/// Which candidate model of the example a statistic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExampleModel {
    /// Informative predictor w_t with one omitted lag.
    Model1,
    /// Uninformative independent predictor z_t.
    Model2,
}

/// How selection replications draw data for the candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSampling {
    /// One dataset per candidate, independently simulated. Matches the
    /// reference selection percentages.
    Independent,
    /// One shared dataset for all candidates.
    Shared,
}

/// Experiment definition for the replication tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub config: ExampleConfig,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    #[serde(default = "default_bias_model")]
    pub bias_model: ExampleModel,
    #[serde(default = "default_sampling")]
    pub sampling: CandidateSampling,
}

fn default_bias_model() -> ExampleModel {
    ExampleModel::Model1
}

fn default_sampling() -> CandidateSampling {
    CandidateSampling::Independent
}

impl ExperimentPlan {
    pub fn new(config: ExampleConfig, sample_sizes: Vec<usize>, replications: usize) -> Self {
        Self {
            config,
            sample_sizes,
            replications,
            bias_model: default_bias_model(),
            sampling: default_sampling(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be >= 1".into()));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::InvalidConfig("sample_sizes must be nonempty".into()));
        }
        if self.sample_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "sample_sizes must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Estimated criterion for one candidate of the example on one dataset.
pub fn estimate_example_criterion(
    data: &ExampleData,
    model: ExampleModel,
    spec: &PenaltySpec,
) -> Result<(CriterionValue, f64, f64)> {
    let x = match model {
        ExampleModel::Model1 => data.w.clone(),
        ExampleModel::Model2 => data.z.clone(),
    };
    let n = x.len();
    let sample = SampleSet::new(x, data.y.clone(), EXAMPLE_HORIZON)?;
    let fit = fit_ols(&sample)?;
    let indices = IndexMatrices::estimate(&sample, &fit)?;
    let criterion = vmric(&indices.mi, &indices.vi, spec, n);
    let (aic, bic) = aic_bic(fit.residuals(), sample.width())?;
    Ok((criterion, aic, bic))
}

/// One row of the theoretical-vs-estimated table: both models on a single
/// simulated dataset of the configured length.
#[derive(Debug, Clone, Serialize)]
pub struct Table2Row {
    pub n: usize,
    pub vmric_m1_theory: f64,
    pub vmric_m1_estimated: f64,
    pub vmric_m2_theory: f64,
    pub vmric_m2_estimated: f64,
}

pub fn run_table2(config: &ExampleConfig) -> Result<Table2Row> {
    config.validate()?;
    let theory = theoretical_indices(config)?;
    let spec = config.penalty_spec()?;
    let data = simulate_example_sized(config, config.n)?;
    let (est1, _, _) = estimate_example_criterion(&data, ExampleModel::Model1, &spec)?;
    let (est2, _, _) = estimate_example_criterion(&data, ExampleModel::Model2, &spec)?;
    Ok(Table2Row {
        n: config.n,
        vmric_m1_theory: theory.vmric_m1.total,
        vmric_m1_estimated: est1.total,
        vmric_m2_theory: theory.vmric_m2.total,
        vmric_m2_estimated: est2.total,
    })
}

/// Bias/MSE aggregate for one sample size.
#[derive(Debug, Clone, Serialize)]
pub struct Table3Cell {
    pub n: usize,
    pub bias: f64,
    pub mse: f64,
    pub bias_se: f64,
    pub mse_se: f64,
    pub replications_used: usize,
    pub failures: usize,
}

/// Per-replication record (optional sidecar output).
#[derive(Debug, Clone, Serialize)]
pub struct Table3Record {
    pub n: usize,
    pub replication: usize,
    pub estimate: f64,
    pub error: f64,
}

pub fn run_table3(plan: &ExperimentPlan) -> Result<Vec<Table3Cell>> {
    Ok(run_table3_with_records(plan)?.0)
}

pub fn run_table3_with_records(
    plan: &ExperimentPlan,
) -> Result<(Vec<Table3Cell>, Vec<Table3Record>)> {
    plan.validate()?;
    let spec = plan.config.penalty_spec()?;
    let mut cells = Vec::with_capacity(plan.sample_sizes.len());
    let mut records = Vec::new();
    for &n in &plan.sample_sizes {
        let mut config_n = plan.config;
        config_n.n = n;
        let theory = theoretical_indices(&config_n)?;
        let target = match plan.bias_model {
            ExampleModel::Model1 => theory.vmric_m1.total,
            ExampleModel::Model2 => theory.vmric_m2.total,
        };
        let results: Vec<(usize, Result<f64>)> = (0..plan.replications)
            .into_par_iter()
            .map(|rep| {
                let estimate = replicate_estimate(&plan.config, n, rep, plan.bias_model, &spec);
                (rep, estimate)
            })
            .collect();
        let mut errors = Vec::with_capacity(plan.replications);
        let mut failures = 0usize;
        for (rep, outcome) in results {
            match outcome {
                Ok(estimate) => {
                    errors.push(estimate - target);
                    records.push(Table3Record {
                        n,
                        replication: rep,
                        estimate,
                        error: estimate - target,
                    });
                }
                Err(_) => failures += 1,
            }
        }
        if errors.is_empty() {
            return Err(Error::AllCandidatesFailed(plan.replications));
        }
        let r = errors.len() as f64;
        let bias = errors.iter().sum::<f64>() / r;
        let mse = errors.iter().map(|e| e * e).sum::<f64>() / r;
        let bias_var = errors.iter().map(|e| (e - bias) * (e - bias)).sum::<f64>() / r;
        let mse_var = errors
            .iter()
            .map(|e| {
                let sq = e * e;
                (sq - mse) * (sq - mse)
            })
            .sum::<f64>()
            / r;
        cells.push(Table3Cell {
            n,
            bias,
            mse,
            bias_se: (bias_var / r).sqrt(),
            mse_se: (mse_var / r).sqrt(),
            replications_used: errors.len(),
            failures,
        });
    }
    Ok((cells, records))
}

fn replicate_estimate(
    config: &ExampleConfig,
    n: usize,
    rep: usize,
    model: ExampleModel,
    spec: &PenaltySpec,
) -> Result<f64> {
    let mut rep_config = *config;
    rep_config.n = n;
    rep_config.seed = crate::rng::mix_seed(config.seed, &[TAG_TABLE3, n as u64, rep as u64]);
    let data = simulate_example_sized(&rep_config, n)?;
    let (criterion, _, _) = estimate_example_criterion(&data, model, spec)?;
    Ok(criterion.total)
}

/// Correct-selection aggregate for one sample size, in percent.
#[derive(Debug, Clone, Serialize)]
pub struct Table4Cell {
    pub n: usize,
    pub vmric_pct: f64,
    pub aic_pct: f64,
    pub bic_pct: f64,
    pub vmric_se: f64,
    pub aic_se: f64,
    pub bic_se: f64,
    pub replications_used: usize,
    pub failures: usize,
}

/// Per-replication selection record (optional sidecar output).
#[derive(Debug, Clone, Serialize)]
pub struct Table4Record {
    pub n: usize,
    pub replication: usize,
    pub chosen_vmric: usize,
    pub chosen_aic: usize,
    pub chosen_bic: usize,
}

type ChosenIds = (usize, usize, usize);

pub fn run_table4(plan: &ExperimentPlan) -> Result<Vec<Table4Cell>> {
    Ok(run_table4_with_records(plan)?.0)
}

pub fn run_table4_with_records(
    plan: &ExperimentPlan,
) -> Result<(Vec<Table4Cell>, Vec<Table4Record>)> {
    plan.validate()?;
    let spec = plan.config.penalty_spec()?;
    let mut cells = Vec::with_capacity(plan.sample_sizes.len());
    let mut records = Vec::new();
    for &n in &plan.sample_sizes {
        let results: Vec<(usize, Result<ChosenIds>)> = (0..plan.replications)
            .into_par_iter()
            .map(|rep| (rep, replicate_selection(plan, n, rep, &spec)))
            .collect();
        let mut hits_vmric = 0usize;
        let mut hits_aic = 0usize;
        let mut hits_bic = 0usize;
        let mut used = 0usize;
        let mut failures = 0usize;
        for (rep, outcome) in results {
            match outcome {
                Ok((chosen_vmric, chosen_aic, chosen_bic)) => {
                    used += 1;
                    hits_vmric += (chosen_vmric == 1) as usize;
                    hits_aic += (chosen_aic == 1) as usize;
                    hits_bic += (chosen_bic == 1) as usize;
                    records.push(Table4Record {
                        n,
                        replication: rep,
                        chosen_vmric,
                        chosen_aic,
                        chosen_bic,
                    });
                }
                Err(_) => failures += 1,
            }
        }
        if used == 0 {
            return Err(Error::AllCandidatesFailed(plan.replications));
        }
        let pct = |hits: usize| 100.0 * hits as f64 / used as f64;
        let se = |hits: usize| {
            let p = hits as f64 / used as f64;
            100.0 * (p * (1.0 - p) / used as f64).sqrt()
        };
        cells.push(Table4Cell {
            n,
            vmric_pct: pct(hits_vmric),
            aic_pct: pct(hits_aic),
            bic_pct: pct(hits_bic),
            vmric_se: se(hits_vmric),
            aic_se: se(hits_aic),
            bic_se: se(hits_bic),
            replications_used: used,
            failures,
        });
    }
    Ok((cells, records))
}

fn replicate_selection(
    plan: &ExperimentPlan,
    n: usize,
    rep: usize,
    spec: &PenaltySpec,
) -> Result<ChosenIds> {
    let master = plan.config.seed;
    let data_for = |candidate: u64| -> Result<ExampleData> {
        let mut config = plan.config;
        config.n = n;
        config.seed = crate::rng::mix_seed(master, &[TAG_TABLE4, n as u64, rep as u64, candidate]);
        simulate_example_sized(&config, n)
    };
    let (eval1, eval2) = match plan.sampling {
        CandidateSampling::Independent => {
            let d1 = data_for(1)?;
            let d2 = data_for(2)?;
            (
                estimate_example_criterion(&d1, ExampleModel::Model1, spec)?,
                estimate_example_criterion(&d2, ExampleModel::Model2, spec)?,
            )
        }
        CandidateSampling::Shared => {
            let d = data_for(0)?;
            (
                estimate_example_criterion(&d, ExampleModel::Model1, spec)?,
                estimate_example_criterion(&d, ExampleModel::Model2, spec)?,
            )
        }
    };
    // ids 1 and 2; strict less-than, ties to the lower id
    let pick = |v1: f64, v2: f64| if v2 < v1 { 2 } else { 1 };
    Ok((
        pick(eval1.0.total, eval2.0.total),
        pick(eval1.1, eval2.1),
        pick(eval1.2, eval2.2),
    ))
}
