//! Command line front end for the robust gamma regression crate.
//!
//! Three subcommands cover the workflow: `fit` estimates a single model from
//! a CSV file, `bayes` samples its posterior by Hamiltonian Monte Carlo, and
//! `simulate` reruns the premium-versus-protection study. Results go to
//! stdout or `--output` as JSON or CSV; every artifact embeds the crate
//! version, the seed where randomness is involved, and an echo of the
//! settings so it can be reproduced from the file alone.
//!
//! Exit codes: 0 on success, 1 for unusable input (malformed data, bad
//! flags, I/O trouble) with a machine-readable JSON error on stderr, and 2
//! when a fit ran but failed to converge. In the last case the artifact is
//! still written so the partial answer can be inspected.

mod ingest;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde::Serialize;

use robust_gamma::bayes::{
    batch_means_se, hmc_sample, hpd_interval, Chain, GlmPosterior, HmcConfig, PosteriorModel,
    Prior,
};
use robust_gamma::data::Dataset;
use robust_gamma::estimation::{
    fit_cantoni, fit_gamma_mle, fit_robust_mle, CantoniNu, FitResult,
};
use robust_gamma::simstudy::{
    moving_outlier_sweep, run_study, LeverageOrder, ScenarioId, StudyConfig, StudyReport, SweepRow,
};

use output::{to_json, version, write_out, Envelope, KeyValueCsv};

/// Errors surfaced to the shell. Everything the user can fix by changing
/// input maps to exit code 1; a fit that ran out of road maps to 2.
#[derive(Debug)]
pub enum CliError {
    Data(String),
    Config(String),
    Io(String),
    NonConvergence(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Data(_) => "invalid_data",
            CliError::Config(_) => "invalid_config",
            CliError::Io(_) => "io",
            CliError::NonConvergence(_) => "non_convergence",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Data(m) | CliError::Config(m) | CliError::Io(m)
            | CliError::NonConvergence(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NonConvergence(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind(), "message": self.message() }
        })
        .to_string()
    }
}

impl From<robust_gamma::Error> for CliError {
    fn from(e: robust_gamma::Error) -> Self {
        match e {
            robust_gamma::Error::InvalidConfig(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "robust-gamma",
    version,
    about = "Gamma regression with log-Pareto tails: fit, posterior sampling, simulation study"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one model to a CSV file by maximum likelihood or M-estimation.
    Fit(FitArgs),
    /// Sample the posterior of a model by Hamiltonian Monte Carlo.
    Bayes(BayesArgs),
    /// Run the premium-versus-protection simulation study.
    Simulate(SimArgs),
}

#[derive(Args)]
struct DataArgs {
    /// CSV file with a header row; non-numeric columns are one-hot encoded.
    #[arg(long)]
    data: PathBuf,
    /// Name of the response column; values must be positive.
    #[arg(long)]
    response: String,
    /// Do not prepend an intercept column.
    #[arg(long)]
    no_intercept: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Gamma,
    Robust,
    Cantoni,
}

impl ModelArg {
    fn name(self) -> &'static str {
        match self {
            ModelArg::Gamma => "gamma",
            ModelArg::Robust => "robust",
            ModelArg::Cantoni => "cantoni",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl FormatArg {
    fn name(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
        }
    }
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Estimator to use.
    #[arg(long, value_enum, default_value = "robust")]
    model: ModelArg,
    /// Tuning constant; defaults to 1.6 for robust, 1.5 for cantoni, unused
    /// for gamma.
    #[arg(long)]
    c: Option<f64>,
    /// Shape handling for the cantoni model: "estimate" or a fixed number.
    #[arg(long, default_value = "estimate")]
    cantoni_nu: String,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BayesArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Likelihood to sample under.
    #[arg(long, value_enum, default_value = "robust")]
    model: ModelArg,
    /// Tuning constant of the robust likelihood.
    #[arg(long, default_value_t = 1.6)]
    c: f64,
    /// Shape of the gamma prior on nu.
    #[arg(long, default_value_t = 2.0)]
    prior_alpha: f64,
    /// Scale of the gamma prior on nu.
    #[arg(long, default_value_t = 50.0)]
    prior_theta: f64,
    /// Total HMC iterations including burn-in.
    #[arg(long, default_value_t = 100_000)]
    iterations: usize,
    /// Fraction of iterations discarded as burn-in, in [0, 0.95).
    #[arg(long, default_value_t = 0.10)]
    burn_in: f64,
    /// Leapfrog step size.
    #[arg(long, default_value_t = 0.01)]
    step_size: f64,
    /// Leapfrog steps per proposal.
    #[arg(long, default_value_t = 20)]
    leapfrog: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Probability mass of the reported highest-density intervals.
    #[arg(long, default_value_t = 0.95)]
    hpd_prob: f64,
    /// Also write the kept draws to this CSV file.
    #[arg(long)]
    chain_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LeverageOrderArg {
    ShiftThenReplace,
    ReplaceThenShift,
}

#[derive(Args)]
struct SimArgs {
    /// Scenarios to run: "all" or a comma-separated list like "S0,S2".
    #[arg(long, default_value = "all")]
    scenario: String,
    /// Observations per replicate.
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the moving-outlier sweep on one simulated dataset instead of the
    /// scenario study; refits every estimator as the last response moves
    /// across `--y-grid`.
    #[arg(long, conflicts_with_all = ["scenario", "n", "replicates", "leverage_order", "threads"])]
    sweep: bool,
    /// Outlier values for the sweep, comma separated; default 6, 6.5, .., 15.
    #[arg(long, requires = "sweep")]
    y_grid: Option<String>,
    /// Tuning constant of the robust maximum likelihood fit.
    #[arg(long, visible_alias = "c", default_value_t = 1.6)]
    robust_c: f64,
    /// Tuning constant of the Cantoni M-estimator.
    #[arg(long, default_value_t = 1.5)]
    cantoni_c: f64,
    /// Whether leverage scenarios shift the response before or after moving
    /// the covariate.
    #[arg(long, value_enum, default_value = "shift-then-replace")]
    leverage_order: LeverageOrderArg,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests travel the error path too; only real
            // usage mistakes should fail the process.
            let code = i32::from(e.use_stderr());
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Bayes(args) => cmd_bayes(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    if let Err(err) = result {
        eprintln!("{}", err.to_json());
        std::process::exit(err.exit_code());
    }
}

fn column_names(data: &Dataset) -> Vec<String> {
    match data.column_names() {
        Some(names) => names.to_vec(),
        None => (0..data.p()).map(|j| format!("x{j}")).collect(),
    }
}

#[derive(Serialize)]
struct FitConfigEcho {
    data: String,
    response: String,
    no_intercept: bool,
    model: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cantoni_nu: Option<String>,
    format: &'static str,
}

#[derive(Serialize)]
struct CoefficientOut {
    name: String,
    estimate: f64,
}

#[derive(Serialize)]
struct FitOut {
    method: String,
    coefficients: Vec<CoefficientOut>,
    nu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    log_likelihood: f64,
    converged: bool,
    iterations: usize,
    gradient_norm: f64,
    at_nu_bound: bool,
}

fn fit_out(fit: &FitResult, names: &[String]) -> FitOut {
    FitOut {
        method: fit.method.as_str().to_owned(),
        coefficients: names
            .iter()
            .zip(fit.beta.iter())
            .map(|(name, b)| CoefficientOut { name: name.clone(), estimate: *b })
            .collect(),
        nu: fit.nu,
        c: fit.c,
        log_likelihood: fit.log_likelihood,
        converged: fit.converged,
        iterations: fit.iterations,
        gradient_norm: fit.gradient_norm,
        at_nu_bound: fit.at_nu_bound,
    }
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let data = ingest::load_csv(&args.data.data, &args.data.response, !args.data.no_intercept)?;
    let names = column_names(&data);

    let (fit, cantoni_nu_echo) = match args.model {
        ModelArg::Gamma => (fit_gamma_mle(&data)?, None),
        ModelArg::Robust => {
            let c = args.c.unwrap_or(1.6);
            (fit_robust_mle(&data, c)?, None)
        }
        ModelArg::Cantoni => {
            let c = args.c.unwrap_or(1.5);
            let trimmed = args.cantoni_nu.trim();
            let nu_mode = if trimmed.eq_ignore_ascii_case("estimate") {
                CantoniNu::Estimate
            } else {
                let value: f64 = trimmed.parse().map_err(|_| {
                    CliError::Config(format!(
                        "--cantoni-nu must be \"estimate\" or a number, got {trimmed:?}"
                    ))
                })?;
                CantoniNu::Fixed(value)
            };
            (fit_cantoni(&data, c, nu_mode)?, Some(trimmed.to_owned()))
        }
    };

    let config = FitConfigEcho {
        data: args.data.data.display().to_string(),
        response: args.data.response.clone(),
        no_intercept: args.data.no_intercept,
        model: args.model.name(),
        c: fit.c,
        cantoni_nu: cantoni_nu_echo,
        format: args.format.name(),
    };
    let result = fit_out(&fit, &names);
    let text = match args.format {
        FormatArg::Json => to_json(&Envelope {
            artifact: "fit",
            version: version(),
            seed: None,
            config,
            result,
        })?,
        FormatArg::Csv => {
            let mut csv = KeyValueCsv::new();
            csv.raw("version", version());
            csv.raw("data", &config.data);
            csv.raw("response", &config.response);
            csv.raw("no_intercept", config.no_intercept);
            csv.raw("method", &result.method);
            if let Some(c) = result.c {
                csv.float("c", c);
            }
            if let Some(mode) = &config.cantoni_nu {
                csv.raw("cantoni_nu", mode);
            }
            for coef in &result.coefficients {
                csv.float(&format!("beta[{}]", coef.name), coef.estimate);
            }
            csv.float("nu", result.nu);
            csv.float("log_likelihood", result.log_likelihood);
            csv.raw("converged", result.converged);
            csv.raw("iterations", result.iterations);
            csv.float("gradient_norm", result.gradient_norm);
            csv.raw("at_nu_bound", result.at_nu_bound);
            csv.finish()
        }
    };
    write_out(args.output.as_ref(), &text)?;

    if !fit.converged {
        return Err(CliError::NonConvergence(format!(
            "the {} fit stopped after {} iterations with gradient norm {:.3e}; \
             the partial estimate was still written",
            fit.method, fit.iterations, fit.gradient_norm
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct BayesConfigEcho {
    data: String,
    response: String,
    no_intercept: bool,
    model: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    prior_alpha: f64,
    prior_theta: f64,
    iterations: usize,
    burn_in: f64,
    step_size: f64,
    leapfrog: usize,
    hpd_prob: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain_out: Option<String>,
    format: &'static str,
}

#[derive(Serialize)]
struct ParamSummary {
    name: String,
    mean: f64,
    sd: f64,
    /// Batch-means standard error of the mean; absent for short chains.
    #[serde(skip_serializing_if = "Option::is_none")]
    se_mean: Option<f64>,
    hpd_lower: f64,
    hpd_upper: f64,
}

#[derive(Serialize)]
struct BayesOut {
    parameters: Vec<ParamSummary>,
    hpd_prob: f64,
    accept_rate: f64,
    divergences: usize,
    kept_draws: usize,
    mass_diag: Vec<f64>,
}

fn summarize(name: &str, draws: &[f64], prob: f64) -> Result<ParamSummary, CliError> {
    let m = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / m;
    let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let (lo, hi) = hpd_interval(draws, prob)?;
    let se_mean = if draws.len() >= 100 { Some(batch_means_se(draws)?) } else { None };
    Ok(ParamSummary {
        name: name.to_owned(),
        mean,
        sd: var.sqrt(),
        se_mean,
        hpd_lower: lo,
        hpd_upper: hi,
    })
}

fn chain_csv(chain: &Chain, names: &[String]) -> String {
    let rows = chain.draws.nrows();
    let cols = chain.draws.ncols();
    let mut header: Vec<String> = names.to_vec();
    header.push("ln_nu".into());
    header.push("log_posterior".into());
    let mut out = String::with_capacity((rows + 1) * (cols + 1) * 26);
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..rows {
        for j in 0..cols {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{:.16e}", chain.draws[(i, j)]));
        }
        out.push_str(&format!(",{:.16e}\n", chain.log_posterior[i]));
    }
    out
}

fn cmd_bayes(args: BayesArgs) -> Result<(), CliError> {
    let data = ingest::load_csv(&args.data.data, &args.data.response, !args.data.no_intercept)?;
    let names = column_names(&data);
    if !(0.0 < args.hpd_prob && args.hpd_prob < 1.0) {
        return Err(CliError::Config(format!(
            "--hpd-prob must lie strictly between 0 and 1, got {}",
            args.hpd_prob
        )));
    }

    let (model, c_echo) = match args.model {
        ModelArg::Gamma => (PosteriorModel::Gamma, None),
        ModelArg::Robust => (PosteriorModel::Robust { c: args.c }, Some(args.c)),
        ModelArg::Cantoni => {
            return Err(CliError::Config(
                "the cantoni estimator has no likelihood to sample; \
                 use --model gamma or --model robust"
                    .into(),
            ))
        }
    };
    let prior = Prior { alpha: args.prior_alpha, theta: args.prior_theta };
    let posterior = GlmPosterior::new(&data, model, prior)?;

    // Start the chain at the matching point estimate so burn-in is spent on
    // mass adaptation rather than on finding the mode.
    let start_fit = match args.model {
        ModelArg::Gamma => fit_gamma_mle(&data),
        _ => fit_robust_mle(&data, args.c),
    }
    .map_err(|e| CliError::Data(format!("cannot locate a start point: {e}")))?;
    let mut start = DVector::zeros(data.p() + 1);
    start.rows_mut(0, data.p()).copy_from(&start_fit.beta);
    start[data.p()] = start_fit.nu.ln();

    let config = HmcConfig {
        step_size: args.step_size,
        leapfrog_steps: args.leapfrog,
        iterations: args.iterations,
        burn_in_fraction: args.burn_in,
        seed: args.seed,
        mass_diag: None,
    };
    let chain = hmc_sample(&posterior, &start, &config)?;

    if !(0.2..=0.95).contains(&chain.accept_rate) {
        eprintln!(
            "warning: acceptance rate {:.3} is outside [0.20, 0.95]; \
             adjust --step-size or --leapfrog before trusting the summaries",
            chain.accept_rate
        );
    }

    let kept = chain.draws.nrows();
    if kept < 10 {
        return Err(CliError::Config(format!(
            "only {kept} draws remain after burn-in; increase --iterations"
        )));
    }
    let mut parameters = Vec::with_capacity(names.len() + 2);
    for (j, name) in names.iter().enumerate() {
        parameters.push(summarize(name, &chain.parameter(j), args.hpd_prob)?);
    }
    let eta_draws = chain.parameter(data.p());
    parameters.push(summarize("ln_nu", &eta_draws, args.hpd_prob)?);
    let nu_draws: Vec<f64> = eta_draws.iter().map(|e| e.exp()).collect();
    parameters.push(summarize("nu", &nu_draws, args.hpd_prob)?);

    if let Some(path) = &args.chain_out {
        write_out(Some(path), &chain_csv(&chain, &names))?;
    }

    let config_echo = BayesConfigEcho {
        data: args.data.data.display().to_string(),
        response: args.data.response.clone(),
        no_intercept: args.data.no_intercept,
        model: args.model.name(),
        c: c_echo,
        prior_alpha: args.prior_alpha,
        prior_theta: args.prior_theta,
        iterations: args.iterations,
        burn_in: args.burn_in,
        step_size: args.step_size,
        leapfrog: args.leapfrog,
        hpd_prob: args.hpd_prob,
        chain_out: args.chain_out.as_ref().map(|p| p.display().to_string()),
        format: args.format.name(),
    };
    let result = BayesOut {
        parameters,
        hpd_prob: args.hpd_prob,
        accept_rate: chain.accept_rate,
        divergences: chain.divergences,
        kept_draws: kept,
        mass_diag: chain.mass_diag.iter().copied().collect(),
    };
    let text = match args.format {
        FormatArg::Json => to_json(&Envelope {
            artifact: "bayes",
            version: version(),
            seed: Some(args.seed),
            config: config_echo,
            result,
        })?,
        FormatArg::Csv => {
            let mut csv = KeyValueCsv::new();
            csv.raw("version", version());
            csv.raw("seed", args.seed);
            csv.raw("data", &config_echo.data);
            csv.raw("response", &config_echo.response);
            csv.raw("model", config_echo.model);
            if let Some(c) = c_echo {
                csv.float("c", c);
            }
            csv.float("prior_alpha", args.prior_alpha);
            csv.float("prior_theta", args.prior_theta);
            csv.raw("iterations", args.iterations);
            csv.float("burn_in", args.burn_in);
            csv.float("step_size", args.step_size);
            csv.raw("leapfrog", args.leapfrog);
            csv.float("hpd_prob", args.hpd_prob);
            csv.raw("kept_draws", result.kept_draws);
            csv.float("accept_rate", result.accept_rate);
            csv.raw("divergences", result.divergences);
            for p in &result.parameters {
                csv.float(&format!("mean[{}]", p.name), p.mean);
                csv.float(&format!("sd[{}]", p.name), p.sd);
                if let Some(se) = p.se_mean {
                    csv.float(&format!("se_mean[{}]", p.name), se);
                }
                csv.float(&format!("hpd_lower[{}]", p.name), p.hpd_lower);
                csv.float(&format!("hpd_upper[{}]", p.name), p.hpd_upper);
            }
            csv.finish()
        }
    };
    write_out(args.output.as_ref(), &text)
}

#[derive(Serialize)]
struct SimConfigEcho {
    scenario: String,
    n: usize,
    replicates: usize,
    robust_c: f64,
    cantoni_c: f64,
    leverage_order: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    threads: Option<usize>,
    format: &'static str,
}

fn parse_scenarios(spec: &str) -> Result<Vec<ScenarioId>, CliError> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(ScenarioId::all().to_vec());
    }
    let mut ids = Vec::new();
    for part in spec.split(',') {
        let id = ScenarioId::parse(part.trim())?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

/// Study table with the provenance columns the report itself does not carry.
fn study_csv(report: &StudyReport, leverage_order: &str) -> String {
    let mut out = String::from(
        "version,seed,replicates,leverage_order,scenario,n,estimator,c,target,\
         m_gamma,m_r,premium,protection,replicates_used,failures,valid\n",
    );
    for r in &report.rows {
        let c = r.c.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let protection = r.protection.map(|v| format!("{v:.16e}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:.16e},{:.16e},{:.16e},{},{},{},{}\n",
            version(),
            report.seed,
            report.replicates,
            leverage_order,
            r.scenario,
            r.n,
            r.estimator,
            c,
            r.target,
            r.m_gamma,
            r.m_r,
            r.premium,
            protection,
            r.replicates_used,
            r.failures,
            r.valid
        ));
    }
    out
}

#[derive(Serialize)]
struct SweepConfigEcho {
    sweep: bool,
    robust_c: f64,
    cantoni_c: f64,
    y_grid: Vec<f64>,
    format: &'static str,
}

/// Sweep row with coefficients labeled by position, intercept first, the way
/// the sweep table is usually read.
#[derive(Serialize)]
struct SweepRowOut {
    y_n: f64,
    estimator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    beta1: f64,
    beta2: f64,
    nu: f64,
    converged: bool,
}

impl From<SweepRow> for SweepRowOut {
    fn from(r: SweepRow) -> Self {
        SweepRowOut {
            y_n: r.y_n,
            estimator: r.estimator,
            c: r.c,
            beta1: r.beta0,
            beta2: r.beta1,
            nu: r.nu,
            converged: r.converged,
        }
    }
}

fn parse_y_grid(spec: Option<&str>) -> Result<Vec<f64>, CliError> {
    let Some(text) = spec else {
        return Ok((0..=18).map(|k| 6.0 + 0.5 * k as f64).collect());
    };
    let mut grid = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let v: f64 = part
            .parse()
            .map_err(|_| CliError::Config(format!("cannot parse y grid entry '{part}'")))?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(CliError::Config(format!(
                "sweep responses must be positive and finite, got {v}"
            )));
        }
        grid.push(v);
    }
    if grid.is_empty() {
        return Err(CliError::Config("the y grid is empty".into()));
    }
    Ok(grid)
}

fn sweep_csv(rows: &[SweepRowOut], seed: u64) -> String {
    let mut out = String::from("version,seed,y_n,estimator,c,beta1,beta2,nu,converged\n");
    for r in rows {
        let c = r.c.map(|v| format!("{v:.16e}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{}\n",
            version(),
            seed,
            r.y_n,
            r.estimator,
            c,
            r.beta1,
            r.beta2,
            r.nu,
            r.converged
        ));
    }
    out
}

fn cmd_sweep(args: &SimArgs) -> Result<(), CliError> {
    let grid = parse_y_grid(args.y_grid.as_deref())?;
    let rows: Vec<SweepRowOut> = moving_outlier_sweep(args.robust_c, args.cantoni_c, &grid, args.seed)?
        .into_iter()
        .map(SweepRowOut::from)
        .collect();
    let text = match args.format {
        FormatArg::Json => to_json(&Envelope {
            artifact: "sweep",
            version: version(),
            seed: Some(args.seed),
            config: SweepConfigEcho {
                sweep: true,
                robust_c: args.robust_c,
                cantoni_c: args.cantoni_c,
                y_grid: grid,
                format: args.format.name(),
            },
            result: &rows,
        })?,
        FormatArg::Csv => sweep_csv(&rows, args.seed),
    };
    write_out(args.output.as_ref(), &text)
}

fn cmd_simulate(args: SimArgs) -> Result<(), CliError> {
    if args.sweep {
        return cmd_sweep(&args);
    }
    let ids = parse_scenarios(&args.scenario)?;
    if let Some(threads) = args.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size the thread pool: {e}")))?;
    }
    let (leverage_order, order_name) = match args.leverage_order {
        LeverageOrderArg::ShiftThenReplace => {
            (LeverageOrder::ShiftThenReplace, "shift-then-replace")
        }
        LeverageOrderArg::ReplaceThenShift => {
            (LeverageOrder::ReplaceThenShift, "replace-then-shift")
        }
    };
    let config = StudyConfig {
        n: args.n,
        replicates: args.replicates,
        seed: args.seed,
        robust_c: args.robust_c,
        cantoni_c: args.cantoni_c,
        leverage_order,
    };
    let report = run_study(&ids, &config)?;

    let config_echo = SimConfigEcho {
        scenario: ids.iter().map(|id| id.name()).collect::<Vec<_>>().join(","),
        n: args.n,
        replicates: args.replicates,
        robust_c: args.robust_c,
        cantoni_c: args.cantoni_c,
        leverage_order: order_name,
        threads: args.threads,
        format: args.format.name(),
    };
    let text = match args.format {
        FormatArg::Json => to_json(&Envelope {
            artifact: "simulate",
            version: version(),
            seed: Some(args.seed),
            config: config_echo,
            result: &report,
        })?,
        FormatArg::Csv => study_csv(&report, order_name),
    };
    write_out(args.output.as_ref(), &text)
}
