//! The full characterization pipeline: integration order, stationarity,
//! linearity, ARIMA selection, pre-whitened Gaussianity/ARCH tests and the
//! composite GARCH stage, assembled into one report.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::arima::{determine_d, select_order, ArimaModel, IntegrationOutcome};
use crate::error::{Error, Result};
use crate::garch::{fit_garch, validate_garch, GarchModel, GarchValidation};
use crate::nonlinearity::{linearity_test, EmbeddingConfig};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::stat_tests::{
    arch_lm_test, psr_defaults, psr_test, shapiro_wilk, PsrOutcome, TestOutcome, WhitenessOutcome,
};

/// Pipeline settings. Defaults follow the methodology's published choices:
/// alpha 0.05, 50000-sample analysis window, 20 surrogates, 2000-point
/// Shapiro-Wilk sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig<F: Scalar> {
    pub alpha: F,
    /// Analysis window; the first `n_samples` samples are used.
    pub n_samples: usize,
    pub n_surrogates: usize,
    /// Shapiro-Wilk sample size (the first residuals), capped at 5000.
    pub sw_sample: usize,
    pub d_max: usize,
    pub p_max: usize,
    pub m_max: usize,
    /// Lag order of the ARCH LM test.
    pub arch_lag: usize,
    pub embedding: EmbeddingConfig,
    /// Frequency points of the PSR grid.
    pub psr_freq_points: usize,
    pub seed: u64,
}

impl<F: Scalar> Default for PipelineConfig<F> {
    fn default() -> Self {
        PipelineConfig {
            alpha: F::c(0.05),
            n_samples: 50_000,
            n_surrogates: 20,
            sw_sample: 2000,
            d_max: 3,
            p_max: 6,
            m_max: 4,
            arch_lag: 1,
            embedding: EmbeddingConfig::default(),
            psr_freq_points: 12,
            seed: 0,
        }
    }
}

impl<F: Scalar> PipelineConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if self.alpha <= F::zero() || self.alpha >= F::one() {
            return Err(Error::arg("alpha must lie in (0, 1)"));
        }
        if self.sw_sample > 5000 || self.sw_sample < 3 {
            return Err(Error::arg("sw_sample must lie in [3, 5000]"));
        }
        if self.n_surrogates < 19 {
            return Err(Error::arg("n_surrogates must be >= 19"));
        }
        if self.d_max > 3 || self.p_max > 8 || self.m_max > 8 {
            return Err(Error::arg("order bounds: d_max <= 3, p_max/m_max <= 8"));
        }
        if self.arch_lag == 0 {
            return Err(Error::arg("arch_lag must be >= 1"));
        }
        Ok(())
    }
}

/// Echo of the analyzed input.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSummary {
    pub n_total: usize,
    pub n_analyzed: usize,
    pub sample_rate: f64,
    pub meta: BTreeMap<String, String>,
}

/// Everything the pipeline concluded about one record.
///
/// Stage outputs are `Option`s: a degenerate input aborts the run early and
/// leaves the later stages empty, with `complete = false` and the reason in
/// `failure`. The heteroskedasticity verdict refers to the d-differenced
/// (stationarized) series; `psr_raw` keeps the raw-data outcome alongside.
#[derive(Debug, Clone)]
pub struct CharacterizationReport<F: Scalar> {
    pub input: InputSummary,
    pub config: PipelineConfig<F>,
    pub integration: Option<IntegrationOutcome<F>>,
    pub psr_raw: Option<PsrOutcome<F>>,
    pub psr_stationarized: Option<PsrOutcome<F>>,
    pub heteroskedastic: Option<bool>,
    pub linearity: Option<TestOutcome<F>>,
    pub linear: Option<bool>,
    pub arima: Option<ArimaModel<F>>,
    pub arima_whiteness: Option<WhitenessOutcome<F>>,
    /// Pre-whitened residuals of the selected ARIMA fit.
    pub residuals: Option<Series<F>>,
    pub insignificant_params: Vec<String>,
    pub sw: Option<TestOutcome<F>>,
    pub gaussian: Option<bool>,
    pub psr_residuals: Option<PsrOutcome<F>>,
    pub arch_lm: Option<TestOutcome<F>>,
    /// Fraction of squared-residual ACF lags outside the white band
    /// (qualitative evidence; the LM test decides).
    pub squared_residual_acf_fraction: Option<F>,
    pub arch_effect: Option<bool>,
    pub garch: Option<GarchModel<F>>,
    pub garch_validation: Option<GarchValidation<F>>,
    /// Standardized residuals of the accepted GARCH fit.
    pub garch_standardized: Option<Series<F>>,
    pub stage_log: Vec<String>,
    pub complete: bool,
    pub failure: Option<String>,
}

impl<F: Scalar> CharacterizationReport<F> {
    pub fn integration_order(&self) -> Option<usize> {
        self.integration.as_ref().map(|i| i.d)
    }

    fn new(input: InputSummary, config: PipelineConfig<F>) -> Self {
        CharacterizationReport {
            input,
            config,
            integration: None,
            psr_raw: None,
            psr_stationarized: None,
            heteroskedastic: None,
            linearity: None,
            linear: None,
            arima: None,
            arima_whiteness: None,
            residuals: None,
            insignificant_params: Vec::new(),
            sw: None,
            gaussian: None,
            psr_residuals: None,
            arch_lm: None,
            squared_residual_acf_fraction: None,
            arch_effect: None,
            garch: None,
            garch_validation: None,
            garch_standardized: None,
            stage_log: Vec::new(),
            complete: false,
            failure: None,
        }
    }
}

/// Run the full characterization on one record.
///
/// Hard argument errors (invalid configuration, series far too short) are
/// returned as `Err`; degenerate data aborts mid-run and yields a partial
/// report with `complete = false`.
pub fn characterize<F: Scalar>(
    s: &Series<F>,
    cfg: &PipelineConfig<F>,
) -> Result<CharacterizationReport<F>> {
    cfg.validate()?;
    let n = s.len().min(cfg.n_samples);
    if n < 4096 {
        return Err(Error::arg(format!(
            "characterize needs at least 4096 samples, got {}",
            s.len()
        )));
    }
    let window = Series::with_meta(
        s.values()[..n].to_vec(),
        s.sample_rate(),
        s.meta().clone(),
    )?;
    let input = InputSummary {
        n_total: s.len(),
        n_analyzed: n,
        sample_rate: s.sample_rate().to64(),
        meta: s.meta().clone(),
    };
    let mut report = CharacterizationReport::new(input, cfg.clone());
    if s.len() < cfg.n_samples {
        report.stage_log.push(format!(
            "window: series shorter than n_samples, using all {n} samples"
        ));
    } else {
        report
            .stage_log
            .push(format!("window: first {n} samples"));
    }

    match run_stages(&window, cfg, &mut report) {
        Ok(()) => {
            report.complete = true;
        }
        Err(Error::DegenerateInput(msg)) | Err(Error::Estimation(msg)) => {
            report.failure = Some(msg.clone());
            report.stage_log.push(format!("aborted: {msg}"));
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

fn run_stages<F: Scalar>(
    s: &Series<F>,
    cfg: &PipelineConfig<F>,
    report: &mut CharacterizationReport<F>,
) -> Result<()> {
    let alpha = cfg.alpha;

    // (1) Integration order via repeated differencing.
    let integration = determine_d(s, alpha, cfg.d_max)?;
    let d = integration.d;
    let heuristic_stages: Vec<usize> = integration
        .stages
        .iter()
        .filter(|st| st.used_heuristic)
        .map(|st| st.d)
        .collect();
    report.stage_log.push(format!(
        "determine_d: d={d}{}{}",
        if integration.still_integrating {
            " (still integrating at cap)"
        } else {
            ""
        },
        if heuristic_stages.is_empty() {
            String::new()
        } else {
            format!(" (ar1 heuristic at stages {heuristic_stages:?})")
        }
    ));
    report.integration = Some(integration);

    // (2) Second-order stationarity on raw and stationarized data.
    let (blocks, _) = psr_defaults(s.len());
    let psr_raw = psr_test(s, blocks, cfg.psr_freq_points, alpha)?;
    report.stage_log.push(format!(
        "psr[raw]: {}",
        if psr_raw.reject_any() { "reject" } else { "pass" }
    ));
    report.psr_raw = Some(psr_raw);

    let stationarized = s.difference(d)?;
    let (blocks, _) = psr_defaults(stationarized.len());
    let psr_diff = psr_test(&stationarized, blocks, cfg.psr_freq_points, alpha)?;
    let hetero = psr_diff.reject_any();
    report.stage_log.push(format!(
        "psr[d={d}]: {}",
        if hetero { "reject" } else { "pass" }
    ));
    report.psr_stationarized = Some(psr_diff);
    report.heteroskedastic = Some(hetero);

    // (3) Surrogate linearity test on the stationarized series.
    let lin = linearity_test(
        &stationarized,
        cfg.n_surrogates,
        &cfg.embedding,
        cfg.seed,
        alpha,
    )?;
    let is_linear = !lin.reject_null;
    report.stage_log.push(format!(
        "linearity: d2={:.4} envelope=[{:.4}, {:.4}] -> {}",
        lin.statistic.to64(),
        lin.critical_lower.map(|v| v.to64()).unwrap_or(f64::NAN),
        lin.critical_upper.map(|v| v.to64()).unwrap_or(f64::NAN),
        if is_linear { "linear" } else { "non-linear" }
    ));
    report.linearity = Some(lin);
    report.linear = Some(is_linear);

    // (4) ARIMA order selection at the determined d. A non-linear verdict
    // does not gate the fit; the verdict stays as a caveat in the report.
    let fit = select_order(s, d, cfg.p_max, cfg.m_max, alpha)?;
    report.stage_log.push(format!(
        "arima: ({},{},{}) aic={:.4}{}",
        fit.model.p,
        d,
        fit.model.m,
        fit.model.aic.to64(),
        if fit.model.flags.not_validated {
            " [not validated]"
        } else {
            ""
        }
    ));
    let residuals = fit.diagnostics.residuals.clone();
    report.residuals = Some(residuals.clone());
    report.arima_whiteness = Some(fit.diagnostics.whiteness.clone());
    report.insignificant_params = fit.diagnostics.insignificant_params.clone();
    report.arima = Some(fit.model.clone());

    // (5) Gaussianity on the leading pre-whitened residuals.
    let sw_n = cfg.sw_sample.min(residuals.len());
    if sw_n < 3 {
        return Err(Error::degenerate("too few residuals for the normality test"));
    }
    let sw_series = Series::new(residuals.values()[..sw_n].to_vec(), residuals.sample_rate())?;
    let sw = shapiro_wilk(&sw_series, alpha)?;
    let gaussian = !sw.reject_null;
    report.stage_log.push(format!(
        "shapiro_wilk[{} pts]: W={:.4} -> {}",
        sw_n,
        sw.statistic.to64(),
        if gaussian { "gaussian" } else { "non-gaussian" }
    ));
    report.sw = Some(sw);
    report.gaussian = Some(gaussian);

    // (6) Heteroskedasticity on the pre-whitened residuals.
    if residuals.len() >= 4096 {
        let (blocks, _) = psr_defaults(residuals.len());
        let psr_res = psr_test(&residuals, blocks, cfg.psr_freq_points, alpha)?;
        report.stage_log.push(format!(
            "psr[residuals]: {}",
            if psr_res.reject_any() { "reject" } else { "pass" }
        ));
        report.psr_residuals = Some(psr_res);
    }
    let lm = arch_lm_test(&residuals, cfg.arch_lag, alpha)?;
    let arch_effect = lm.reject_null;
    report.stage_log.push(format!(
        "arch_lm[L={}]: stat={:.4} -> {}",
        cfg.arch_lag,
        lm.statistic.to64(),
        if arch_effect { "arch effect" } else { "no arch effect" }
    ));
    report.arch_lm = Some(lm);
    let squared: Vec<F> = residuals.values().iter().map(|&v| v * v).collect();
    let squared = Series::new(squared, residuals.sample_rate())?;
    let lag = crate::stat_tests::default_whiteness_lag(squared.len());
    report.squared_residual_acf_fraction = Some(squared.acf(lag)?.outside_band_fraction());
    report.arch_effect = Some(arch_effect);

    // (7) GARCH stage, only when an ARCH effect is present.
    if arch_effect {
        let mut candidates: Vec<(GarchModel<F>, GarchValidation<F>, Series<F>)> = Vec::new();
        for p in 1..=2usize {
            for q in 0..=2usize {
                if let Ok(fit) = fit_garch(&residuals, p, q) {
                    if let Ok(v) = validate_garch(&fit.model, &fit.standardized, alpha) {
                        candidates.push((fit.model, v, fit.standardized));
                    }
                }
            }
        }
        if candidates.is_empty() {
            return Err(Error::Estimation("no GARCH candidate could be fitted".into()));
        }
        candidates.sort_by(|a, b| {
            a.0.aic
                .partial_cmp(&b.0.aic)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let chosen = candidates
            .iter()
            .position(|(_, v, _)| v.accepted())
            .unwrap_or(0);
        let (model, validation, standardized) = candidates.swap_remove(chosen);
        report.stage_log.push(format!(
            "garch: ({},{}) aic={:.4} persistence={:.4}{}",
            model.p,
            model.q,
            model.aic.to64(),
            model.persistence().to64(),
            if validation.accepted() {
                ""
            } else {
                " [no candidate validated]"
            }
        ));
        report.garch = Some(model);
        report.garch_validation = Some(validation);
        report.garch_standardized = Some(standardized);
    } else {
        report.stage_log.push("garch: skipped (no arch effect)".into());
    }
    Ok(())
}

/// Per-input reports plus the aggregate views over a batch.
#[derive(Debug, Clone)]
pub struct BatchOutcome<F: Scalar> {
    pub reports: Vec<std::result::Result<CharacterizationReport<F>, String>>,
    pub summary: BatchSummary<F>,
}

/// Aggregates across the successful reports: positive-percentage per
/// property, and per-input model parameters with AIC and MSE.
#[derive(Debug, Clone)]
pub struct BatchSummary<F: Scalar> {
    pub n_inputs: usize,
    pub n_failed: usize,
    pub pct_integrating: f64,
    pub pct_heteroskedastic: f64,
    pub pct_nonlinear: f64,
    pub pct_gaussian: f64,
    pub pct_arch: f64,
    pub models: Vec<BatchModelRow<F>>,
}

#[derive(Debug, Clone)]
pub struct BatchModelRow<F: Scalar> {
    pub index: usize,
    pub d: usize,
    pub p: usize,
    pub m: usize,
    pub ar: Vec<F>,
    pub ma: Vec<F>,
    pub aic: F,
    /// Innovation-variance estimate (mean squared one-step error).
    pub mse: F,
}

/// Characterize a batch; individual failures are recorded and the batch
/// continues. Reports keep the input order.
pub fn batch_characterize<F: Scalar>(
    inputs: &[Series<F>],
    cfg: &PipelineConfig<F>,
) -> Result<BatchOutcome<F>> {
    if inputs.is_empty() {
        return Err(Error::arg("batch needs at least one input"));
    }
    cfg.validate()?;
    let reports: Vec<std::result::Result<CharacterizationReport<F>, String>> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut c = cfg.clone();
            c.seed = crate::nonlinearity::derive_seed(cfg.seed, i as u64);
            characterize(s, &c).map_err(|e| e.to_string())
        })
        .collect();

    let ok: Vec<&CharacterizationReport<F>> = reports
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .filter(|r| r.complete)
        .collect();
    let n_ok = ok.len().max(1);
    let pct = |f: &dyn Fn(&CharacterizationReport<F>) -> bool| -> f64 {
        100.0 * ok.iter().filter(|r| f(r)).count() as f64 / n_ok as f64
    };
    let summary = BatchSummary {
        n_inputs: inputs.len(),
        n_failed: reports.iter().filter(|r| r.is_err()).count()
            + reports
                .iter()
                .filter_map(|r| r.as_ref().ok())
                .filter(|r| !r.complete)
                .count(),
        pct_integrating: pct(&|r| r.integration_order().unwrap_or(0) >= 1),
        pct_heteroskedastic: pct(&|r| r.heteroskedastic == Some(true)),
        pct_nonlinear: pct(&|r| r.linear == Some(false)),
        pct_gaussian: pct(&|r| r.gaussian == Some(true)),
        pct_arch: pct(&|r| r.arch_effect == Some(true)),
        models: reports
            .iter()
            .enumerate()
            .filter_map(|(i, r)| match r {
                Ok(rep) if rep.complete => rep.arima.as_ref().map(|m| BatchModelRow {
                    index: i,
                    d: m.d,
                    p: m.p,
                    m: m.m,
                    ar: m.ar_values(),
                    ma: m.ma_values(),
                    aic: m.aic,
                    mse: m.sigma2,
                }),
                _ => None,
            })
            .collect(),
    };
    Ok(BatchOutcome { reports, summary })
}
