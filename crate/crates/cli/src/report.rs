//! Report serialization (JSON, diff-stable), plot-data CSV emission and
//! batch summaries.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use seisnoise::pipeline::{BatchOutcome, CharacterizationReport};
use seisnoise::stat_tests::{PsrOutcome, Tail, TestOutcome, WhitenessOutcome};
use seisnoise::{Series64, Taper};
use serde_json::{json, Map, Value};

/// Round to six significant digits so serialized reports are stable across
/// platforms and diffs stay readable.
fn sig6(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    if x == 0.0 {
        return json!(0.0);
    }
    // Round through the decimal rendering so the stored f64 is exactly the
    // parse of its own serialization.
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    json!(rounded)
}

fn sig6_str(x: f64) -> String {
    match sig6(x) {
        Value::Null => "nan".into(),
        v => v.to_string(),
    }
}

fn test_json(t: &TestOutcome<f64>) -> Value {
    json!({
        "statistic": sig6(t.statistic),
        "p_value": t.p_value.map(sig6).unwrap_or(Value::Null),
        "critical": {
            "lower": t.critical_lower.map(sig6).unwrap_or(Value::Null),
            "upper": t.critical_upper.map(sig6).unwrap_or(Value::Null),
        },
        "tail": match t.tail { Tail::Left => "left", Tail::Right => "right", Tail::Two => "two" },
        "reject": t.reject_null,
        "alpha": sig6(t.alpha),
    })
}

fn insert_psr(tests: &mut Map<String, Value>, name: &str, p: &PsrOutcome<f64>) {
    tests.insert(format!("{name}_t"), test_json(&p.t_component));
    tests.insert(format!("{name}_ir"), test_json(&p.ir_component));
    tests.insert(format!("{name}_tir"), test_json(&p.tir_component));
}

fn insert_whiteness(tests: &mut Map<String, Value>, name: &str, w: &WhitenessOutcome<f64>) {
    tests.insert(format!("{name}_band"), test_json(&w.band));
    tests.insert(format!("{name}_ljung_box"), test_json(&w.ljung_box));
}

/// Build the report JSON document. Top-level keys: `input`, `config`,
/// `integration_order`, `tests`, `arima`, `garch`, `diagnostics`,
/// `stage_log`.
pub fn report_to_json(r: &CharacterizationReport<f64>) -> Value {
    let mut tests = Map::new();
    if let Some(integ) = &r.integration {
        for st in &integ.stages {
            if let Some(adf) = &st.adf {
                tests.insert(format!("adf_d{}", st.d), test_json(adf));
            }
            if let Some(pp) = &st.pp {
                tests.insert(format!("pp_d{}", st.d), test_json(pp));
            }
        }
    }
    if let Some(p) = &r.psr_raw {
        insert_psr(&mut tests, "psr_raw", p);
    }
    if let Some(p) = &r.psr_stationarized {
        insert_psr(&mut tests, "psr_stationarized", p);
    }
    if let Some(p) = &r.psr_residuals {
        insert_psr(&mut tests, "psr_residuals", p);
    }
    if let Some(t) = &r.linearity {
        tests.insert("linearity".into(), test_json(t));
    }
    if let Some(t) = &r.sw {
        tests.insert("shapiro_wilk".into(), test_json(t));
    }
    if let Some(t) = &r.arch_lm {
        tests.insert("arch_lm".into(), test_json(t));
    }
    if let Some(w) = &r.arima_whiteness {
        insert_whiteness(&mut tests, "residual_whiteness", w);
    }
    if let Some(v) = &r.garch_validation {
        insert_whiteness(&mut tests, "garch_residual_whiteness", &v.residual_whiteness);
        insert_whiteness(&mut tests, "garch_squared_whiteness", &v.squared_whiteness);
    }

    let arima = r.arima.as_ref().map(|m| {
        json!({
            "p": m.p,
            "d": m.d,
            "m": m.m,
            "ar": m.ar.iter().map(|c| sig6(c.value)).collect::<Vec<_>>(),
            "ar_std_errors": m.ar.iter().map(|c| sig6(c.std_err)).collect::<Vec<_>>(),
            "ar_pinned": m.ar.iter().map(|c| c.pinned).collect::<Vec<_>>(),
            "ma": m.ma.iter().map(|c| sig6(c.value)).collect::<Vec<_>>(),
            "ma_std_errors": m.ma.iter().map(|c| sig6(c.std_err)).collect::<Vec<_>>(),
            "ma_pinned": m.ma.iter().map(|c| c.pinned).collect::<Vec<_>>(),
            "sigma2": sig6(m.sigma2),
            "log_likelihood": sig6(m.log_likelihood),
            "aic": sig6(m.aic),
            "bic": sig6(m.bic),
            "n_fit": m.n_fit,
            "boundary": m.flags.boundary,
            "not_validated": m.flags.not_validated,
        })
    });
    let garch = r.garch.as_ref().map(|g| {
        json!({
            "p": g.p,
            "q": g.q,
            "c0": sig6(g.c0.value),
            "c0_std_err": sig6(g.c0.std_err),
            "arch": g.arch_coeffs.iter().map(|c| sig6(c.value)).collect::<Vec<_>>(),
            "arch_std_errors": g.arch_coeffs.iter().map(|c| sig6(c.std_err)).collect::<Vec<_>>(),
            "garch": g.garch_coeffs.iter().map(|c| sig6(c.value)).collect::<Vec<_>>(),
            "garch_std_errors": g.garch_coeffs.iter().map(|c| sig6(c.std_err)).collect::<Vec<_>>(),
            "persistence": sig6(g.persistence()),
            "log_likelihood": sig6(g.log_likelihood),
            "aic": sig6(g.aic),
            "n_fit": g.n_fit,
            "near_integrated_variance": g.flags.near_integrated_variance,
            "nonstationary_variance": g.flags.nonstationary_variance,
        })
    });

    let stages: Vec<Value> = r
        .integration
        .as_ref()
        .map(|i| {
            i.stages
                .iter()
                .map(|st| {
                    json!({
                        "d": st.d,
                        "used_heuristic": st.used_heuristic,
                        "ar1": st.ar1.map(sig6).unwrap_or(Value::Null),
                        "unit_root": st.unit_root,
                    })
                })
                .collect()
        })
        .unwrap_or_default();

    json!({
        "input": {
            "n_total": r.input.n_total,
            "n_analyzed": r.input.n_analyzed,
            "sample_rate": sig6(r.input.sample_rate),
            "meta": r.input.meta,
        },
        "config": {
            "alpha": sig6(r.config.alpha),
            "n_samples": r.config.n_samples,
            "n_surrogates": r.config.n_surrogates,
            "sw_sample": r.config.sw_sample,
            "d_max": r.config.d_max,
            "p_max": r.config.p_max,
            "m_max": r.config.m_max,
            "arch_lag": r.config.arch_lag,
            "psr_freq_points": r.config.psr_freq_points,
            "embed_dimension": r.config.embedding.dimension,
            "embed_delay": r.config.embedding.delay,
            "theiler_window": r.config.embedding.theiler_window,
            "max_reference_points": r.config.embedding.max_reference_points,
            "seed": r.config.seed,
        },
        "integration_order": r.integration.as_ref().map(|i| i.d),
        "tests": Value::Object(tests),
        "arima": arima.unwrap_or(Value::Null),
        "garch": garch.unwrap_or(Value::Null),
        "diagnostics": {
            "complete": r.complete,
            "failure": r.failure,
            "still_integrating": r.integration.as_ref().map(|i| i.still_integrating),
            "integration_stages": stages,
            "heteroskedastic": r.heteroskedastic,
            "linear": r.linear,
            "gaussian": r.gaussian,
            "arch_effect": r.arch_effect,
            "insignificant_params": r.insignificant_params,
            "squared_residual_acf_fraction":
                r.squared_residual_acf_fraction.map(sig6).unwrap_or(Value::Null),
            "garch_accepted": r.garch_validation.as_ref().map(|v| v.accepted()),
            "n_residuals": r.residuals.as_ref().map(|s| s.len()),
        },
        "stage_log": r.stage_log,
    })
}

pub fn write_report(r: &CharacterizationReport<f64>, path: &Path) -> Result<()> {
    let doc = report_to_json(r);
    let text = serde_json::to_string_pretty(&doc)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<Value> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

/// Emit two-column plot-data CSVs mirroring the paper's figures: ACF, PACF
/// and periodograms of the raw/differenced/double-differenced record, plus
/// residual and squared-residual ACFs (and GARCH standardized residuals when
/// present).
pub fn emit_plot_data(
    r: &CharacterizationReport<f64>,
    series: &Series64,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let max_lag = (series.len() / 10).clamp(10, 100);

    for d in 0..=2usize {
        if series.len() <= d + 64 {
            break;
        }
        let w = series.difference(d)?;
        let acf = w.acf(max_lag)?;
        written.push(write_xy(
            dir,
            &format!("acf_diff{d}.csv"),
            "lag,autocorrelation",
            acf.lags.iter().map(|&l| l as f64),
            acf.coefficients.iter().copied(),
        )?);
        let pacf = w.pacf(max_lag)?;
        written.push(write_xy(
            dir,
            &format!("pacf_diff{d}.csv"),
            "lag,partial_autocorrelation",
            pacf.lags.iter().map(|&l| l as f64),
            pacf.coefficients.iter().copied(),
        )?);
        let spec = w.periodogram_with(Taper::None)?;
        written.push(write_xy(
            dir,
            &format!("periodogram_diff{d}.csv"),
            "frequency_hz,power_per_hz",
            spec.frequencies.iter().copied(),
            spec.power.iter().copied(),
        )?);
    }

    if let Some(res) = &r.residuals {
        let lag = (res.len() / 10).clamp(10, 100);
        let acf = res.acf(lag)?;
        written.push(write_xy(
            dir,
            "acf_residuals.csv",
            "lag,autocorrelation",
            acf.lags.iter().map(|&l| l as f64),
            acf.coefficients.iter().copied(),
        )?);
        let sq = Series64::new(res.values().iter().map(|v| v * v).collect(), res.sample_rate())?;
        let acf = sq.acf(lag)?;
        written.push(write_xy(
            dir,
            "acf_squared_residuals.csv",
            "lag,autocorrelation",
            acf.lags.iter().map(|&l| l as f64),
            acf.coefficients.iter().copied(),
        )?);
    }
    if let Some(z) = &r.garch_standardized {
        let lag = (z.len() / 10).clamp(10, 100);
        let acf = z.acf(lag)?;
        written.push(write_xy(
            dir,
            "acf_garch_residuals.csv",
            "lag,autocorrelation",
            acf.lags.iter().map(|&l| l as f64),
            acf.coefficients.iter().copied(),
        )?);
        let sq = Series64::new(z.values().iter().map(|v| v * v).collect(), z.sample_rate())?;
        let acf = sq.acf(lag)?;
        written.push(write_xy(
            dir,
            "acf_garch_squared_residuals.csv",
            "lag,autocorrelation",
            acf.lags.iter().map(|&l| l as f64),
            acf.coefficients.iter().copied(),
        )?);
    }
    Ok(written)
}

fn write_xy(
    dir: &Path,
    name: &str,
    header: &str,
    xs: impl Iterator<Item = f64>,
    ys: impl Iterator<Item = f64>,
) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for (x, y) in xs.zip(ys) {
        out.push_str(&format!("{},{}\n", sig6_str(x), sig6_str(y)));
    }
    fs::write(&path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

/// Write per-input reports plus `summary.csv`, `params.csv` and
/// `aggregate.json` for a batch run.
pub fn write_batch(out: &BatchOutcome<f64>, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut summary = String::from(
        "index,status,integration_order,heteroskedastic,linear,gaussian,arch_effect,p,d,m,aic,mse\n",
    );
    for (i, rep) in out.reports.iter().enumerate() {
        match rep {
            Ok(r) => {
                write_report(r, &dir.join(format!("report_{i:03}.json")))?;
                let status = if r.complete { "ok" } else { "incomplete" };
                let (p, d, m, aic, mse) = r
                    .arima
                    .as_ref()
                    .map(|a| {
                        (
                            a.p.to_string(),
                            a.d.to_string(),
                            a.m.to_string(),
                            sig6_str(a.aic),
                            sig6_str(a.sigma2),
                        )
                    })
                    .unwrap_or_default();
                summary.push_str(&format!(
                    "{i},{status},{},{},{},{},{},{p},{d},{m},{aic},{mse}\n",
                    fmt_opt(r.integration.as_ref().map(|x| x.d)),
                    fmt_opt(r.heteroskedastic),
                    fmt_opt(r.linear),
                    fmt_opt(r.gaussian),
                    fmt_opt(r.arch_effect),
                ));
            }
            Err(msg) => {
                summary.push_str(&format!(
                    "{i},failed:{},,,,,,,,,,\n",
                    msg.replace(',', ";").replace('\n', " ")
                ));
            }
        }
    }
    fs::write(dir.join("summary.csv"), summary)?;

    let mut params = String::from("index,parameter,value\n");
    for row in &out.summary.models {
        for (k, v) in row.ar.iter().enumerate() {
            params.push_str(&format!("{},ar{},{}\n", row.index, k + 1, sig6_str(*v)));
        }
        for (k, v) in row.ma.iter().enumerate() {
            params.push_str(&format!("{},ma{},{}\n", row.index, k + 1, sig6_str(*v)));
        }
        params.push_str(&format!("{},aic,{}\n", row.index, sig6_str(row.aic)));
        params.push_str(&format!("{},mse,{}\n", row.index, sig6_str(row.mse)));
    }
    fs::write(dir.join("params.csv"), params)?;

    let agg = json!({
        "n_inputs": out.summary.n_inputs,
        "n_failed": out.summary.n_failed,
        "pct_integrating": sig6(out.summary.pct_integrating),
        "pct_heteroskedastic": sig6(out.summary.pct_heteroskedastic),
        "pct_nonlinear": sig6(out.summary.pct_nonlinear),
        "pct_gaussian": sig6(out.summary.pct_gaussian),
        "pct_arch": sig6(out.summary.pct_arch),
    });
    fs::write(
        dir.join("aggregate.json"),
        serde_json::to_string_pretty(&agg)? + "\n",
    )?;
    Ok(())
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_rounds_and_handles_special_values() {
        assert_eq!(sig6(1.23456789).to_string(), "1.23457");
        assert_eq!(sig6(-0.000123456789).to_string(), "-0.000123457");
        assert_eq!(sig6(123456789.0).to_string(), "123457000.0");
        assert_eq!(sig6(f64::NAN), Value::Null);
        assert_eq!(sig6(0.0).to_string(), "0.0");
    }
}
