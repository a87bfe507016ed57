//! Premium-versus-protection simulation study.
//!
//! Compares the gamma MLE, the heavy-tailed ML fit, and the Huber-type
//! M-estimator on a fixed two-column design under controlled response
//! contamination. "Premium" is the efficiency a method gives up on clean
//! data relative to the gamma MLE; "protection" is the error it saves under
//! contamination. Replicates are driven by domain-separated random streams,
//! so every scenario reuses the same base datasets (common random numbers)
//! and any single cell is reproducible in isolation.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::Dataset;
use crate::estimation::{fit_cantoni, fit_gamma_mle, fit_robust_mle, CantoniNu, FitMethod};
use crate::rng::StreamRng;
use crate::special::sample_gamma;
use crate::{Error, Result};

const DOMAIN_BASE: u64 = 0x51;
const DOMAIN_CONTAM: u64 = 0x60;
const DOMAIN_SWEEP: u64 = 0x70;

/// True coefficients of the data-generating process.
pub const TRUE_BETA: [f64; 2] = [0.0, 1.0];
/// True shape of the data-generating process.
pub const TRUE_NU: f64 = 40.0;

/// Contamination scenarios. `S0` is clean; the others shift a fraction of
/// responses upward by `vartheta` true standard deviations, the last two at
/// a leverage point as well.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioId {
    S0,
    S1,
    S2,
    S3,
    S4,
}

/// How a contaminated response interacts with a leverage replacement: shift
/// the response before moving the covariate (so the shift is scaled by the
/// original mean), or after.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeverageOrder {
    ShiftThenReplace,
    ReplaceThenShift,
}

/// What a contaminated scenario does to the data.
#[derive(Debug, Clone, Copy)]
pub struct Contamination {
    /// Fraction of observations hit; the count is `ceil(fraction * n)`.
    pub fraction: f64,
    /// Outlier size in units of the true conditional standard deviation.
    pub vartheta: f64,
    /// Move the covariate of each hit row to 1.5 times the design maximum.
    pub leverage: bool,
}

impl ScenarioId {
    pub fn all() -> [ScenarioId; 5] {
        [ScenarioId::S0, ScenarioId::S1, ScenarioId::S2, ScenarioId::S3, ScenarioId::S4]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioId::S0 => "S0",
            ScenarioId::S1 => "S1",
            ScenarioId::S2 => "S2",
            ScenarioId::S3 => "S3",
            ScenarioId::S4 => "S4",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "S0" | "s0" => Ok(ScenarioId::S0),
            "S1" | "s1" => Ok(ScenarioId::S1),
            "S2" | "s2" => Ok(ScenarioId::S2),
            "S3" | "s3" => Ok(ScenarioId::S3),
            "S4" | "s4" => Ok(ScenarioId::S4),
            other => Err(Error::InvalidConfig(format!("unknown scenario {other:?}"))),
        }
    }

    fn ordinal(&self) -> u64 {
        match self {
            ScenarioId::S0 => 0,
            ScenarioId::S1 => 1,
            ScenarioId::S2 => 2,
            ScenarioId::S3 => 3,
            ScenarioId::S4 => 4,
        }
    }

    pub fn contamination(&self) -> Option<Contamination> {
        match self {
            ScenarioId::S0 => None,
            ScenarioId::S1 => Some(Contamination { fraction: 0.05, vartheta: 7.0, leverage: false }),
            ScenarioId::S2 => Some(Contamination { fraction: 0.10, vartheta: 7.0, leverage: false }),
            ScenarioId::S3 => Some(Contamination { fraction: 0.05, vartheta: 3.0, leverage: true }),
            ScenarioId::S4 => Some(Contamination { fraction: 0.10, vartheta: 3.0, leverage: true }),
        }
    }
}

impl std::fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Settings for one study cell.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Tuning constant of the heavy-tailed ML fit.
    pub robust_c: f64,
    /// Tuning constant of the M-estimator.
    pub cantoni_c: f64,
    pub leverage_order: LeverageOrder,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            n: 20,
            replicates: 1000,
            seed: 0,
            robust_c: 1.6,
            cantoni_c: 1.5,
            leverage_order: LeverageOrder::ShiftThenReplace,
        }
    }
}

impl StudyConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 5 {
            return Err(Error::InvalidConfig(format!("study needs n >= 5, got {}", self.n)));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("study needs at least one replicate".into()));
        }
        for (label, c) in [("robust_c", self.robust_c), ("cantoni_c", self.cantoni_c)] {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidConfig(format!("{label} must be positive, got {c}")));
            }
        }
        Ok(())
    }
}

/// Default grid for tuning-constant sensitivity runs.
pub fn default_c_grid() -> Vec<f64> {
    (0..9).map(|k| 1.2 + 0.1 * k as f64).collect()
}

/// Intercept plus one standardized covariate built from the grid `1..=n`.
pub fn standardized_design(n: usize) -> DMatrix<f64> {
    let mean = (n as f64 + 1.0) / 2.0;
    let sd = {
        let mut s = 0.0;
        for i in 1..=n {
            s += (i as f64 - mean).powi(2);
        }
        (s / (n as f64 - 1.0)).sqrt()
    };
    DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { ((i + 1) as f64 - mean) / sd })
}

/// Clean dataset for one replicate, reproducible from `(seed, replicate)`
/// alone. Every scenario shares these draws.
pub fn generate_base(n: usize, seed: u64, replicate: u64) -> Result<Dataset> {
    let x = standardized_design(n);
    let mut rng = StreamRng::substream(seed, DOMAIN_BASE, replicate);
    let mut y = DVector::zeros(n);
    for i in 0..n {
        let mu = (TRUE_BETA[0] + TRUE_BETA[1] * x[(i, 1)]).exp();
        y[i] = sample_gamma(&mut rng, TRUE_NU, mu)?;
    }
    Dataset::new(x, y, None)
}

/// Apply a contamination spec to a base dataset.
///
/// Picks `ceil(fraction n)` rows without replacement, shifts each response
/// by `vartheta` true standard deviations of its own mean, and optionally
/// moves the covariate to 1.5 times the original design maximum. The shift
/// uses the true parameters, not estimates, so the contamination is the same
/// whatever the estimator under study does.
pub fn contaminate(
    base: &Dataset,
    spec: &Contamination,
    order: LeverageOrder,
    rng: &mut StreamRng,
) -> Result<Dataset> {
    if base.p() != 2 {
        return Err(Error::InvalidConfig(
            "contamination assumes the intercept-plus-covariate study design".into(),
        ));
    }
    if !(spec.fraction > 0.0 && spec.fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "contamination fraction must lie in (0, 1], got {}",
            spec.fraction
        )));
    }
    let n = base.n();
    let k = ((spec.fraction * n as f64).ceil() as usize).min(n);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    let mut x = base.x().clone();
    let mut y = base.y().clone();
    let x_max = (0..n).map(|i| x[(i, 1)]).fold(f64::NEG_INFINITY, f64::max);
    let leverage_value = 1.5 * x_max;
    let shift = |x_row: f64| spec.vartheta * (TRUE_BETA[0] + TRUE_BETA[1] * x_row).exp() / TRUE_NU.sqrt();

    for &i in &idx[..k] {
        match order {
            LeverageOrder::ShiftThenReplace => {
                y[i] += shift(x[(i, 1)]);
                if spec.leverage {
                    x[(i, 1)] = leverage_value;
                }
            }
            LeverageOrder::ReplaceThenShift => {
                if spec.leverage {
                    x[(i, 1)] = leverage_value;
                }
                y[i] += shift(x[(i, 1)]);
            }
        }
    }
    Dataset::new(x, y, base.column_names().map(|n| n.to_vec()))
}

/// Which summary a premium or protection number refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Beta,
    Nu,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::Beta => "beta",
            Target::Nu => "nu",
        }
    }
}

/// One estimator-by-target cell of a scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct StudyRow {
    pub scenario: String,
    pub n: usize,
    pub estimator: String,
    /// Tuning constant, absent for the gamma MLE.
    pub c: Option<f64>,
    pub target: String,
    /// Root mean squared error of the gamma MLE in this scenario (clean data
    /// for S0, contaminated data otherwise).
    pub m_gamma: f64,
    /// Root mean squared error of this estimator in this scenario.
    pub m_r: f64,
    /// Relative efficiency cost on clean data versus the gamma MLE.
    pub premium: f64,
    /// Relative error saved under contamination; `None` for S0.
    pub protection: Option<f64>,
    pub replicates_used: usize,
    pub failures: usize,
    /// False when more than 2% of replicates failed to fit.
    pub valid: bool,
}

/// All rows of one or more scenario runs plus the settings that made them.
#[derive(Debug, Clone, Serialize)]
pub struct StudyReport {
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    pub robust_c: f64,
    pub cantoni_c: f64,
    pub rows: Vec<StudyRow>,
}

impl StudyReport {
    /// RFC 4180 CSV with a header row; floats carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "scenario,n,estimator,c,target,m_gamma,m_r,premium,protection,replicates_used,failures,valid\n",
        );
        for r in &self.rows {
            let c = r.c.map(|v| format!("{v:.16e}")).unwrap_or_default();
            let protection = r.protection.map(|v| format!("{v:.16e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{:.16e},{:.16e},{:.16e},{},{},{},{}\n",
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
}

#[derive(Clone)]
struct EstPoint {
    beta: DVector<f64>,
    nu: f64,
}

struct RepOutcome {
    clean: [EstPoint; 3],
    contaminated: Option<[EstPoint; 3]>,
}

const METHODS: [FitMethod; 3] = [FitMethod::GammaMle, FitMethod::RobustMle, FitMethod::Cantoni];

fn fit_three(data: &Dataset, config: &StudyConfig) -> Option<[EstPoint; 3]> {
    let mut out: Vec<EstPoint> = Vec::with_capacity(3);
    for method in METHODS {
        let fit = match method {
            FitMethod::GammaMle => fit_gamma_mle(data),
            FitMethod::RobustMle => fit_robust_mle(data, config.robust_c),
            FitMethod::Cantoni => fit_cantoni(data, config.cantoni_c, CantoniNu::Estimate),
        };
        match fit {
            Ok(f) if f.converged => out.push(EstPoint { beta: f.beta, nu: f.nu }),
            _ => return None,
        }
    }
    out.try_into().ok()
}

#[derive(Default, Clone, Copy)]
struct Acc {
    beta_sq: f64,
    nu_sq: f64,
    count: usize,
}

impl Acc {
    fn add(&mut self, p: &EstPoint) {
        let db0 = p.beta[0] - TRUE_BETA[0];
        let db1 = p.beta[1] - TRUE_BETA[1];
        self.beta_sq += db0 * db0 + db1 * db1;
        self.nu_sq += (p.nu - TRUE_NU).powi(2);
        self.count += 1;
    }

    fn rmse(&self, target: Target) -> f64 {
        let sum = match target {
            Target::Beta => self.beta_sq,
            Target::Nu => self.nu_sq,
        };
        (sum / self.count as f64).sqrt()
    }
}

/// Run one scenario cell and summarize it per estimator and target.
///
/// Every replicate regenerates its base data from `(seed, replicate)`, fits
/// all three estimators to the clean data and, for contaminated scenarios,
/// to the contaminated copy as well. A replicate in which any fit errors or
/// fails to converge is dropped from every accumulator, and the cell is
/// flagged invalid when that happens in more than 2% of replicates.
pub fn run_scenario(id: ScenarioId, config: &StudyConfig) -> Result<Vec<StudyRow>> {
    config.validate()?;
    let contamination = id.contamination();
    let outcomes: Vec<Option<RepOutcome>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let base = generate_base(config.n, config.seed, r as u64).ok()?;
            let clean = fit_three(&base, config)?;
            let contaminated = match &contamination {
                Some(spec) => {
                    let mut rng =
                        StreamRng::substream(config.seed, DOMAIN_CONTAM + id.ordinal(), r as u64);
                    let dirty = contaminate(&base, spec, config.leverage_order, &mut rng).ok()?;
                    Some(fit_three(&dirty, config)?)
                }
                None => None,
            };
            Some(RepOutcome { clean, contaminated })
        })
        .collect();

    let failures = outcomes.iter().filter(|o| o.is_none()).count();
    let used = config.replicates - failures;
    if used == 0 {
        return Err(Error::InvalidData(format!(
            "every replicate of {id} failed to fit"
        )));
    }
    let mut clean_acc = [Acc::default(); 3];
    let mut cont_acc = [Acc::default(); 3];
    for o in outcomes.iter().flatten() {
        for e in 0..3 {
            clean_acc[e].add(&o.clean[e]);
            if let Some(cf) = &o.contaminated {
                cont_acc[e].add(&cf[e]);
            }
        }
    }

    let valid = (failures as f64) <= 0.02 * config.replicates as f64;
    let mut rows = Vec::with_capacity(6);
    for (e, method) in METHODS.iter().enumerate() {
        for target in [Target::Beta, Target::Nu] {
            let m_clean_gamma = clean_acc[0].rmse(target);
            let m_clean_e = clean_acc[e].rmse(target);
            let premium = (m_clean_e - m_clean_gamma) / m_clean_gamma;
            let (m_gamma, m_r, protection) = if contamination.is_some() {
                let mg = cont_acc[0].rmse(target);
                let mr = cont_acc[e].rmse(target);
                (mg, mr, Some((mg - mr) / mg))
            } else {
                (m_clean_gamma, m_clean_e, None)
            };
            rows.push(StudyRow {
                scenario: id.name().to_string(),
                n: config.n,
                estimator: method.as_str().to_string(),
                c: match method {
                    FitMethod::GammaMle => None,
                    FitMethod::RobustMle => Some(config.robust_c),
                    FitMethod::Cantoni => Some(config.cantoni_c),
                },
                target: target.name().to_string(),
                m_gamma,
                m_r,
                premium,
                protection,
                replicates_used: used,
                failures,
                valid,
            });
        }
    }
    Ok(rows)
}

/// Run several scenarios into one report.
pub fn run_study(ids: &[ScenarioId], config: &StudyConfig) -> Result<StudyReport> {
    let mut rows = Vec::new();
    for id in ids {
        rows.extend(run_scenario(*id, config)?);
    }
    Ok(StudyReport {
        n: config.n,
        replicates: config.replicates,
        seed: config.seed,
        robust_c: config.robust_c,
        cantoni_c: config.cantoni_c,
        rows,
    })
}

/// One fit of the moving-outlier experiment.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub y_n: f64,
    pub estimator: String,
    pub c: Option<f64>,
    pub beta0: f64,
    pub beta1: f64,
    pub nu: f64,
    pub converged: bool,
}

/// Moving-outlier experiment on one simulated dataset of size 20.
///
/// The response of the last observation, which also carries the largest
/// covariate value, is replaced by each value of `y_grid` in turn; every
/// estimator is refit each time. The `gamma_loo` rows are the gamma MLE with
/// that observation deleted, the natural oracle for this experiment; they do
/// not depend on the replacement value.
pub fn moving_outlier_sweep(
    robust_c: f64,
    cantoni_c: f64,
    y_grid: &[f64],
    seed: u64,
) -> Result<Vec<SweepRow>> {
    for (label, c) in [("robust_c", robust_c), ("cantoni_c", cantoni_c)] {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidConfig(format!("{label} must be positive, got {c}")));
        }
    }
    if y_grid.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidConfig("grid responses must be positive".into()));
    }
    let n = 20;
    let base = {
        let x = standardized_design(n);
        let mut rng = StreamRng::substream(seed, DOMAIN_SWEEP, 0);
        let mut y = DVector::zeros(n);
        for i in 0..n {
            let mu = (TRUE_BETA[0] + TRUE_BETA[1] * x[(i, 1)]).exp();
            y[i] = sample_gamma(&mut rng, TRUE_NU, mu)?;
        }
        Dataset::new(x, y, None)?
    };
    let oracle = fit_gamma_mle(&base.without_row(n - 1)?)?;

    let mut rows = Vec::with_capacity(y_grid.len() * 4);
    for &y_n in y_grid {
        let data = base.with_response_at(n - 1, y_n)?;
        let gamma = fit_gamma_mle(&data)?;
        let robust = fit_robust_mle(&data, robust_c)?;
        let cantoni = fit_cantoni(&data, cantoni_c, CantoniNu::Estimate)?;
        for fit in [&gamma, &robust, &cantoni] {
            rows.push(SweepRow {
                y_n,
                estimator: fit.method.as_str().to_string(),
                c: fit.c,
                beta0: fit.beta[0],
                beta1: fit.beta[1],
                nu: fit.nu,
                converged: fit.converged,
            });
        }
        rows.push(SweepRow {
            y_n,
            estimator: "gamma_loo".to_string(),
            c: None,
            beta0: oracle.beta[0],
            beta1: oracle.beta[1],
            nu: oracle.nu,
            converged: oracle.converged,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_is_standardized() {
        let x = standardized_design(20);
        let col: Vec<f64> = (0..20).map(|i| x[(i, 1)]).collect();
        let mean: f64 = col.iter().sum::<f64>() / 20.0;
        let var: f64 = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 19.0;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-12);
        assert!((0..20).all(|i| x[(i, 0)] == 1.0));
    }

    #[test]
    fn base_data_reproducible_per_replicate() {
        let a = generate_base(20, 9, 3).unwrap();
        let b = generate_base(20, 9, 3).unwrap();
        let c = generate_base(20, 9, 4).unwrap();
        assert_eq!(a.y(), b.y());
        assert_ne!(a.y(), c.y());
    }

    #[test]
    fn contamination_shifts_k_rows_upward() {
        let base = generate_base(20, 1, 0).unwrap();
        let spec = Contamination { fraction: 0.10, vartheta: 7.0, leverage: false };
        let mut rng = StreamRng::substream(1, 0x99, 0);
        let dirty = contaminate(&base, &spec, LeverageOrder::ShiftThenReplace, &mut rng).unwrap();
        let changed: Vec<usize> = (0..20).filter(|&i| dirty.y()[i] != base.y()[i]).collect();
        assert_eq!(changed.len(), 2, "ceil(0.1 * 20) = 2 rows move");
        for &i in &changed {
            let mu = (TRUE_BETA[1] * base.x()[(i, 1)]).exp();
            let expect = base.y()[i] + 7.0 * mu / TRUE_NU.sqrt();
            assert!((dirty.y()[i] - expect).abs() < 1e-12);
        }
        assert_eq!(dirty.x(), base.x(), "no leverage change requested");
    }

    #[test]
    fn leverage_moves_covariates_to_150_percent_of_max() {
        let base = generate_base(20, 2, 0).unwrap();
        let spec = Contamination { fraction: 0.05, vartheta: 3.0, leverage: true };
        let x_max = (0..20).map(|i| base.x()[(i, 1)]).fold(f64::NEG_INFINITY, f64::max);
        let mut rng = StreamRng::substream(2, 0x99, 0);
        let dirty = contaminate(&base, &spec, LeverageOrder::ShiftThenReplace, &mut rng).unwrap();
        let moved: Vec<usize> = (0..20).filter(|&i| dirty.x()[(i, 1)] != base.x()[(i, 1)]).collect();
        assert_eq!(moved.len(), 1);
        assert!((dirty.x()[(moved[0], 1)] - 1.5 * x_max).abs() < 1e-12);
    }

    #[test]
    fn leverage_order_changes_the_shift_size() {
        let base = generate_base(20, 3, 0).unwrap();
        let spec = Contamination { fraction: 0.05, vartheta: 3.0, leverage: true };
        let mut rng1 = StreamRng::substream(3, 0x99, 0);
        let mut rng2 = StreamRng::substream(3, 0x99, 0);
        let a = contaminate(&base, &spec, LeverageOrder::ShiftThenReplace, &mut rng1).unwrap();
        let b = contaminate(&base, &spec, LeverageOrder::ReplaceThenShift, &mut rng2).unwrap();
        assert_eq!(a.x(), b.x(), "same rows move with the same stream");
        assert_ne!(a.y(), b.y(), "the shift scales with different means");
    }

    #[test]
    fn scenario_parsing_and_specs() {
        assert_eq!(ScenarioId::parse("s2").unwrap(), ScenarioId::S2);
        assert!(ScenarioId::parse("S9").is_err());
        assert!(ScenarioId::S0.contamination().is_none());
        let s4 = ScenarioId::S4.contamination().unwrap();
        assert_eq!(s4.fraction, 0.10);
        assert_eq!(s4.vartheta, 3.0);
        assert!(s4.leverage);
    }

    #[test]
    fn c_grid_has_nine_points() {
        let grid = default_c_grid();
        assert_eq!(grid.len(), 9);
        assert!((grid[0] - 1.2).abs() < 1e-12);
        assert!((grid[8] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tiny_study_produces_wellformed_rows() {
        let config = StudyConfig { replicates: 25, seed: 77, ..StudyConfig::default() };
        let rows = run_scenario(ScenarioId::S2, &config).unwrap();
        assert_eq!(rows.len(), 6);
        for r in &rows {
            assert_eq!(r.scenario, "S2");
            assert!(r.m_gamma.is_finite() && r.m_gamma > 0.0);
            assert!(r.m_r.is_finite() && r.m_r > 0.0);
            assert!(r.protection.is_some());
            assert!(r.replicates_used + r.failures == 25);
        }
        let gamma_rows: Vec<_> = rows.iter().filter(|r| r.estimator == "gamma").collect();
        for r in gamma_rows {
            assert!(r.premium.abs() < 1e-12, "gamma premium is zero by definition");
            assert!(r.protection.unwrap().abs() < 1e-12);
            assert!(r.c.is_none());
        }
    }

    #[test]
    fn clean_scenario_has_no_protection_column() {
        let config = StudyConfig { replicates: 10, seed: 5, ..StudyConfig::default() };
        let rows = run_scenario(ScenarioId::S0, &config).unwrap();
        assert!(rows.iter().all(|r| r.protection.is_none()));
    }

    #[test]
    fn sweep_rows_cover_all_estimators() {
        let rows = moving_outlier_sweep(1.6, 1.5, &[6.0, 15.0], 4).unwrap();
        assert_eq!(rows.len(), 8);
        let loo: Vec<_> = rows.iter().filter(|r| r.estimator == "gamma_loo").collect();
        assert_eq!(loo.len(), 2);
        assert_eq!(loo[0].nu, loo[1].nu, "oracle ignores the replaced point");
        assert!(moving_outlier_sweep(1.6, 1.5, &[-1.0], 4).is_err());
    }

    #[test]
    fn csv_roundtrip_shape() {
        let config = StudyConfig { replicates: 8, seed: 6, ..StudyConfig::default() };
        let report = run_study(&[ScenarioId::S0], &config).unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 7, "header plus six rows");
        assert!(lines[0].starts_with("scenario,n,estimator"));
        assert_eq!(lines[1].split(',').count(), 12);
    }
}
