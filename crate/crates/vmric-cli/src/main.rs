//! Command-line entry point: simulate the example system, fit the
//! forecasting model, run model selection, evaluate the closed-form theory,
//! and regenerate the three study tables as CSV.
//!
//! Exit codes: 0 success, 2 config-invalid, 3 io-error, 4 numerical-failure.
//! Errors print a single machine-parseable line `error[<category>]: <detail>`.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use vmric::montecarlo::{
    run_table2, run_table3_with_records, run_table4_with_records, CandidateSampling, ExperimentPlan,
};
use vmric::rng::mix_seed;
use vmric::{
    evaluate_candidates, fit_ols, simulate_example, theoretical_indices, CandidateModel, Error,
    ExampleConfig, PenaltySpec, SampleSet,
};

#[derive(Parser)]
#[command(
    name = "vmric",
    about = "Misspecification-resistant model selection for multivariate time series",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Parameter case 1, 2 or 3 of the example study
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
    case: Option<u64>,
    /// JSON configuration file (keys phi1, phi2, a1, a2, psi1, alpha, n, seed, sigma_eps)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sample size override
    #[arg(long)]
    n: Option<usize>,
    /// Penalty exponent override
    #[arg(long)]
    alpha: Option<f64>,
    /// Master seed (falls back to VMRIC_SEED, then the config value)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one dataset of the example system and write it as CSV
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output CSV path (columns w, z, y1, y2)
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the forecasting model to a sample CSV and write the fit as JSON
    Fit {
        /// Input CSV with a header row; responses are columns y1..yw
        #[arg(long)]
        data: PathBuf,
        /// Predictor column name (default: sole non-response column)
        #[arg(long)]
        predictor: Option<String>,
        /// Forecast horizon
        #[arg(long, default_value_t = 2)]
        h: usize,
        /// Subtract sample means before fitting
        #[arg(long, default_value_t = false)]
        center: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate candidate models on a sample CSV and write the report as JSON
    Select {
        #[arg(long)]
        data: PathBuf,
        /// Candidate config JSON {h, alpha, candidates: [{id, predictor, lag}]}
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated predictor column names (default: all non-response columns)
        #[arg(long, value_delimiter = ',')]
        candidates: Option<Vec<String>>,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, default_value_t = 0.85)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the closed-form indices and criterion values, write JSON
    Theory {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Theoretical vs estimated criterion on one long run per case
    Table2 {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores)
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Bias and MSE of the criterion estimator over replications
    Table3 {
        #[command(flatten)]
        config: ConfigArgs,
        /// Experiment plan JSON overriding case presets
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        replications: usize,
        /// Comma-separated sample sizes
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        out: PathBuf,
        /// Per-replication JSON sidecar
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Correct-selection percentages per criterion over replications
    Table4 {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        replications: usize,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Evaluate both candidates on one shared dataset per replication
        #[arg(long, default_value_t = false)]
        shared_data: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => {}
        Err(err) => {
            let (category, code) = categorize(&err);
            eprintln!("error[{category}]: {err}");
            std::process::exit(code);
        }
    }
}

fn categorize(err: &Error) -> (&'static str, i32) {
    match err {
        Error::InvalidConfig(_)
        | Error::ExponentOutOfRange(_)
        | Error::InvalidParameters(_)
        | Error::NonstationaryParameters(_)
        | Error::InvalidInput(_) => ("config-invalid", 2),
        Error::Io(_) | Error::Parse(_) => ("io-error", 3),
        Error::DegeneratePredictor
        | Error::LagTooLarge { .. }
        | Error::MismatchedLagCount { .. }
        | Error::SingularCovariance { .. }
        | Error::ZeroGamma
        | Error::AllCandidatesFailed(_) => ("numerical-failure", 4),
    }
}

fn dispatch(command: Command) -> Result<(), Error> {
    match command {
        Command::Simulate { config, out } => {
            let config = resolve_config(&config)?;
            let data = simulate_example(&config)?;
            let y1: Vec<f64> = data.y.column(0).to_vec();
            let y2: Vec<f64> = data.y.column(1).to_vec();
            vmric::io::write_columns_csv(
                &out,
                &[("w", &data.w), ("z", &data.z), ("y1", &y1), ("y2", &y2)],
            )
        }
        Command::Fit {
            data,
            predictor,
            h,
            center,
            out,
        } => run_fit(&data, predictor.as_deref(), h, center, &out),
        Command::Select {
            data,
            config,
            candidates,
            h,
            alpha,
            out,
        } => run_select(&data, config.as_deref(), candidates, h, alpha, &out),
        Command::Theory { config, out } => {
            let config = resolve_config(&config)?;
            let theory = theoretical_indices(&config)?;
            write_json(&out, &theory)
        }
        Command::Table2 {
            config,
            out,
            workers,
        } => {
            init_workers(workers)?;
            let (cases, master) = resolve_cases(&config)?;
            let mut rows = Vec::new();
            for (label, mut case_config) in cases {
                case_config.seed = mix_seed(master, &[2, label as u64]);
                case_config.validate()?;
                let row = run_table2(&case_config)?;
                rows.push(format!(
                    "{label},{},{:.6},{:.6},{:.6},{:.6}",
                    row.n,
                    row.vmric_m1_theory,
                    row.vmric_m1_estimated,
                    row.vmric_m2_theory,
                    row.vmric_m2_estimated
                ));
            }
            vmric::io::write_table_csv(
                &out,
                "case,n,vmric1_theory,vmric1_hat,vmric2_theory,vmric2_hat",
                &rows,
            )
        }
        Command::Table3 {
            config,
            plan,
            replications,
            sizes,
            out,
            records,
            workers,
        } => {
            init_workers(workers)?;
            let default_sizes = vec![100, 250, 500, 1000, 2500, 5000, 10000, 15000, 30000];
            let plans =
                resolve_plans(&config, plan.as_deref(), replications, sizes, default_sizes)?;
            let mut rows = Vec::new();
            let mut all_records = Vec::new();
            for (label, plan) in plans {
                let (cells, recs) = run_table3_with_records(&plan)?;
                for cell in cells {
                    rows.push(format!(
                        "{label},{},{:.6},{:.6},{:.6},{:.6}",
                        cell.n, cell.bias, cell.mse, cell.bias_se, cell.mse_se
                    ));
                }
                all_records.push((label, recs));
            }
            vmric::io::write_table_csv(&out, "case,n,bias,mse,bias_se,mse_se", &rows)?;
            if let Some(path) = records {
                write_json(&path, &all_records)?;
            }
            Ok(())
        }
        Command::Table4 {
            config,
            plan,
            replications,
            sizes,
            shared_data,
            out,
            records,
            workers,
        } => {
            init_workers(workers)?;
            let default_sizes = vec![100, 1000, 10000];
            let mut plans =
                resolve_plans(&config, plan.as_deref(), replications, sizes, default_sizes)?;
            if shared_data {
                for (_, plan) in &mut plans {
                    plan.sampling = CandidateSampling::Shared;
                }
            }
            let mut rows = Vec::new();
            let mut all_records = Vec::new();
            for (label, plan) in plans {
                let (cells, recs) = run_table4_with_records(&plan)?;
                for cell in cells {
                    rows.push(format!(
                        "{label},{},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2}",
                        cell.n,
                        cell.vmric_pct,
                        cell.aic_pct,
                        cell.bic_pct,
                        cell.vmric_se,
                        cell.aic_se,
                        cell.bic_se
                    ));
                }
                all_records.push((label, recs));
            }
            vmric::io::write_table_csv(&out, "case,n,vmric,aic,bic,vmric_se,aic_se,bic_se", &rows)?;
            if let Some(path) = records {
                write_json(&path, &all_records)?;
            }
            Ok(())
        }
    }
}

fn env_seed() -> Option<u64> {
    std::env::var("VMRIC_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
}

/// Resolve a single-case configuration from flags, file and environment.
fn resolve_config(args: &ConfigArgs) -> Result<ExampleConfig, Error> {
    let mut config = match (&args.config, args.case) {
        (Some(path), _) => read_config_file(path)?,
        (None, Some(case)) => ExampleConfig::case(case as usize)?,
        (None, None) => {
            return Err(Error::InvalidConfig(
                "provide --case 1|2|3 or --config FILE".into(),
            ))
        }
    };
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(alpha) = args.alpha {
        config.alpha = alpha;
    }
    if let Some(seed) = args.seed.or_else(env_seed) {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

/// Resolve the case list for table commands: one case if selected, all three
/// otherwise. Returns (label, config) pairs plus the master seed.
fn resolve_cases(args: &ConfigArgs) -> Result<(Vec<(usize, ExampleConfig)>, u64), Error> {
    if args.config.is_some() || args.case.is_some() {
        let config = resolve_config(args)?;
        let label = args.case.unwrap_or(0) as usize;
        return Ok((vec![(label, config)], config.seed));
    }
    let master = args.seed.or_else(env_seed).unwrap_or(0);
    let mut cases = Vec::new();
    for case in 1..=3 {
        let mut config = ExampleConfig::case(case)?;
        if let Some(n) = args.n {
            config.n = n;
        }
        if let Some(alpha) = args.alpha {
            config.alpha = alpha;
        }
        config.seed = master;
        config.validate()?;
        cases.push((case, config));
    }
    Ok((cases, master))
}

fn resolve_plans(
    args: &ConfigArgs,
    plan_path: Option<&Path>,
    replications: usize,
    sizes: Option<Vec<usize>>,
    default_sizes: Vec<usize>,
) -> Result<Vec<(usize, ExperimentPlan)>, Error> {
    if let Some(path) = plan_path {
        let text = std::fs::read_to_string(path)?;
        let mut plan: ExperimentPlan =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path:?}: {e}")))?;
        if let Some(seed) = args.seed.or_else(env_seed) {
            plan.config.seed = seed;
        }
        if let Some(sizes) = sizes {
            plan.sample_sizes = sizes;
        }
        plan.validate()?;
        return Ok(vec![(0, plan)]);
    }
    let (cases, master) = resolve_cases(args)?;
    let sizes = sizes.unwrap_or(default_sizes);
    let mut plans = Vec::new();
    for (label, mut config) in cases {
        config.seed = mix_seed(master, &[label as u64]);
        let plan = ExperimentPlan::new(config, sizes.clone(), replications);
        plan.validate()?;
        plans.push((label, plan));
    }
    Ok(plans)
}

fn read_config_file(path: &Path) -> Result<ExampleConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path:?}: {e}")))
}

#[derive(Serialize)]
struct FitOutput {
    predictor: String,
    h: usize,
    n: usize,
    n_train: usize,
    b_hat: Vec<f64>,
    r_hat: f64,
    residual_norm: f64,
    residuals: Vec<Vec<f64>>,
}

fn run_fit(
    data: &Path,
    predictor: Option<&str>,
    h: usize,
    center: bool,
    out: &Path,
) -> Result<(), Error> {
    let csv = vmric::io::read_sample_csv(data)?;
    let dataset = csv.into_dataset()?;
    let name = match predictor {
        Some(name) => name.to_string(),
        None => {
            let names: Vec<&str> = dataset.predictor_names().collect();
            match names.as_slice() {
                [single] => single.to_string(),
                _ if names.contains(&"x") => "x".to_string(),
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "ambiguous predictor, pass --predictor (columns: {})",
                        names.join(", ")
                    )))
                }
            }
        }
    };
    let x = dataset
        .predictor(&name)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown predictor '{name}'")))?
        .to_vec();
    let n = x.len();
    let y = dataset.responses().clone();
    let sample = if center {
        SampleSet::new_centered(x, y, h)?
    } else {
        SampleSet::new(x, y, h)?
    };
    let fit = fit_ols(&sample)?;
    let residual_norm = fit.residuals().iter().map(|v| v * v).sum::<f64>().sqrt();
    let residuals: Vec<Vec<f64>> = fit
        .residuals()
        .rows()
        .into_iter()
        .map(|row| row.to_vec())
        .collect();
    write_json(
        out,
        &FitOutput {
            predictor: name,
            h,
            n,
            n_train: sample.train_len(),
            b_hat: fit.b_hat().to_vec(),
            r_hat: fit.r_hat(),
            residual_norm,
            residuals,
        },
    )
}

#[derive(Deserialize)]
struct SelectConfig {
    #[serde(default = "default_h")]
    h: usize,
    #[serde(default = "default_alpha")]
    alpha: f64,
    candidates: Vec<CandidateModel>,
}

fn default_h() -> usize {
    2
}

fn default_alpha() -> f64 {
    0.85
}

fn run_select(
    data: &Path,
    config: Option<&Path>,
    candidates: Option<Vec<String>>,
    h: usize,
    alpha: f64,
    out: &Path,
) -> Result<(), Error> {
    let csv = vmric::io::read_sample_csv(data)?;
    let dataset = csv.into_dataset()?;
    let (h, alpha, candidate_models) = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let sc: SelectConfig =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path:?}: {e}")))?;
            (sc.h, sc.alpha, sc.candidates)
        }
        None => {
            let names: Vec<String> = match candidates {
                Some(names) => names,
                None => dataset.predictor_names().map(str::to_string).collect(),
            };
            let models = names
                .into_iter()
                .enumerate()
                .map(|(i, predictor)| CandidateModel {
                    id: i + 1,
                    predictor,
                    lag: 0,
                })
                .collect();
            (h, alpha, models)
        }
    };
    let spec = PenaltySpec::new(alpha)?;
    let report = evaluate_candidates(&dataset, &candidate_models, h, &spec)?;
    write_json(out, &report)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let file = File::create(path)?;
    serde_json::to_writer_pretty(BufWriter::new(file), value)
        .map_err(|e| Error::Parse(format!("serialising {path:?}: {e}")))?;
    Ok(())
}

fn init_workers(workers: Option<usize>) -> Result<(), Error> {
    if let Some(count) = workers {
        if count == 0 {
            return Err(Error::InvalidConfig("--workers must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    }
    Ok(())
}
