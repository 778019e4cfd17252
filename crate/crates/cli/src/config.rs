//! Configuration file formats: a flat key/value file for the pipeline and a
//! TOML process specification for the simulator.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use seisnoise::arima::ArimaModel;
use seisnoise::garch::GarchModel;
use seisnoise::pipeline::PipelineConfig;
use seisnoise::synth::{ProcessKind, ProcessSpec};

use crate::usage;

/// Parse the flat `key = value` pipeline configuration. Unknown keys are
/// errors so typos fail fast.
pub fn parse_pipeline_config(path: &Path) -> Result<PipelineConfig<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = PipelineConfig::<f64>::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key = value", path.display(), lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| {
            usage(format!(
                "{}:{}: bad {what} value {value:?}",
                path.display(),
                lineno + 1
            ))
        };
        match key {
            "alpha" => cfg.alpha = value.parse().map_err(|_| bad("alpha"))?,
            "n_samples" => cfg.n_samples = value.parse().map_err(|_| bad("n_samples"))?,
            "n_surrogates" => cfg.n_surrogates = value.parse().map_err(|_| bad("n_surrogates"))?,
            "sw_sample" => cfg.sw_sample = value.parse().map_err(|_| bad("sw_sample"))?,
            "d_max" => cfg.d_max = value.parse().map_err(|_| bad("d_max"))?,
            "p_max" => cfg.p_max = value.parse().map_err(|_| bad("p_max"))?,
            "m_max" => cfg.m_max = value.parse().map_err(|_| bad("m_max"))?,
            "arch_lag" => cfg.arch_lag = value.parse().map_err(|_| bad("arch_lag"))?,
            "psr_freq_points" => {
                cfg.psr_freq_points = value.parse().map_err(|_| bad("psr_freq_points"))?
            }
            "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
            "embed_dimension" => {
                cfg.embedding.dimension = value.parse().map_err(|_| bad("embed_dimension"))?
            }
            "embed_delay" => {
                cfg.embedding.delay = parse_auto(value).map_err(|_| bad("embed_delay"))?
            }
            "theiler_window" => {
                cfg.embedding.theiler_window =
                    parse_auto(value).map_err(|_| bad("theiler_window"))?
            }
            "max_reference_points" => {
                cfg.embedding.max_reference_points =
                    value.parse().map_err(|_| bad("max_reference_points"))?
            }
            other => {
                return Err(usage(format!(
                    "{}:{}: unknown configuration key {other:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_auto(value: &str) -> std::result::Result<Option<usize>, ()> {
    if value == "auto" {
        Ok(None)
    } else {
        value.parse().map(Some).map_err(|_| ())
    }
}

/// Parse a TOML process specification for `simulate --spec`.
pub fn parse_process_spec(path: &Path) -> Result<ProcessSpec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read spec {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .with_context(|| format!("{}: invalid TOML", path.display()))?;

    const KNOWN: &[&str] = &[
        "kind", "n", "seed", "sigma2", "d", "ar", "ma", "garch_c0", "garch_arch", "garch_garch",
        "step_sigma1", "step_sigma2",
    ];
    for key in table.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(usage(format!("{}: unknown spec key {key:?}", path.display())));
        }
    }

    let kind_name = get_str(&table, "kind")?;
    let n = get_int(&table, "n")? as usize;
    let seed = table
        .get("seed")
        .map(|v| v.as_integer().ok_or_else(|| usage("seed must be an integer")))
        .transpose()?
        .unwrap_or(0) as u64;

    let kind = match kind_name.as_str() {
        "gwn" => ProcessKind::Gwn {
            sigma2: get_float(&table, "sigma2")?,
        },
        "arima" => ProcessKind::Arima {
            model: arima_from(&table)?,
        },
        "garch" => ProcessKind::Garch {
            model: garch_from(&table)?,
        },
        "arima_garch" => ProcessKind::ArimaGarch {
            arima: arima_from(&table)?,
            garch: garch_from(&table)?,
        },
        "variance_step" => ProcessKind::VarianceStep {
            sigma1: get_float(&table, "step_sigma1")?,
            sigma2: get_float(&table, "step_sigma2")?,
        },
        "bilinear" => ProcessKind::Bilinear,
        "henon" => ProcessKind::Henon,
        other => return Err(usage(format!("unknown process kind {other:?}"))),
    };
    Ok(ProcessSpec { kind, n, seed })
}

fn arima_from(table: &toml::Table) -> Result<ArimaModel<f64>> {
    let ar = get_float_array(table, "ar").unwrap_or_default();
    let ma = get_float_array(table, "ma").unwrap_or_default();
    let d = table
        .get("d")
        .map(|v| v.as_integer().ok_or_else(|| usage("d must be an integer")))
        .transpose()?
        .unwrap_or(0) as usize;
    let sigma2 = table
        .get("sigma2")
        .map(|v| v.as_float().or(v.as_integer().map(|i| i as f64)))
        .flatten()
        .unwrap_or(1.0);
    Ok(ArimaModel::from_coefficients(
        ar.len(),
        d,
        ma.len(),
        &ar,
        &ma,
        sigma2,
    )?)
}

fn garch_from(table: &toml::Table) -> Result<GarchModel<f64>> {
    let c0 = get_float(table, "garch_c0")?;
    let arch = get_float_array(table, "garch_arch")?;
    let garch = get_float_array(table, "garch_garch").unwrap_or_default();
    Ok(GarchModel::from_coefficients(c0, &arch, &garch)?)
}

fn get_str(table: &toml::Table, key: &str) -> Result<String> {
    table
        .get(key)
        .and_then(|v| v.as_str())
        .map(str::to_string)
        .ok_or_else(|| usage(format!("spec needs string key {key:?}")))
}

fn get_int(table: &toml::Table, key: &str) -> Result<i64> {
    table
        .get(key)
        .and_then(|v| v.as_integer())
        .ok_or_else(|| usage(format!("spec needs integer key {key:?}")))
}

fn get_float(table: &toml::Table, key: &str) -> Result<f64> {
    table
        .get(key)
        .and_then(|v| v.as_float().or(v.as_integer().map(|i| i as f64)))
        .ok_or_else(|| usage(format!("spec needs numeric key {key:?}")))
}

fn get_float_array(table: &toml::Table, key: &str) -> Result<Vec<f64>> {
    let arr = table
        .get(key)
        .and_then(|v| v.as_array())
        .ok_or_else(|| usage(format!("spec needs array key {key:?}")))?;
    arr.iter()
        .map(|v| {
            v.as_float()
                .or(v.as_integer().map(|i| i as f64))
                .ok_or_else(|| usage(format!("{key:?} entries must be numeric")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f");
        let mut f = fs::File::create(&p).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        (dir, p)
    }

    #[test]
    fn pipeline_config_round_trip() {
        let (_d, p) = write_tmp(
            "# comment\nalpha = 0.01\nn_samples = 20000\nembed_delay = auto\nmax_reference_points = 500\nseed = 9\n",
        );
        let cfg = parse_pipeline_config(&p).unwrap();
        assert_eq!(cfg.alpha, 0.01);
        assert_eq!(cfg.n_samples, 20_000);
        assert_eq!(cfg.embedding.max_reference_points, 500);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn unknown_key_fails_fast() {
        let (_d, p) = write_tmp("alhpa = 0.05\n");
        let err = parse_pipeline_config(&p).unwrap_err();
        assert!(crate::is_usage_error(&err), "{err}");
        assert!(err.to_string().contains("alhpa"));
    }

    #[test]
    fn process_spec_arima_garch() {
        let (_d, p) = write_tmp(
            r#"
kind = "arima_garch"
n = 1000
seed = 42
d = 2
ar = [1.29, -0.39, -0.17, 0.29, -0.24]
ma = [-0.54, -0.62, 0.63]
sigma2 = 44.91
garch_c0 = 0.31
garch_arch = [0.019]
garch_garch = [0.98]
"#,
        );
        let spec = parse_process_spec(&p).unwrap();
        assert_eq!(spec.n, 1000);
        assert_eq!(spec.seed, 42);
        match spec.kind {
            ProcessKind::ArimaGarch { arima, garch } => {
                assert_eq!(arima.p, 5);
                assert_eq!(arima.d, 2);
                assert_eq!(arima.m, 3);
                assert!((garch.persistence() - 0.999).abs() < 1e-12);
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    #[test]
    fn process_spec_rejects_unknown_keys_and_bad_models() {
        let (_d, p) = write_tmp("kind = \"gwn\"\nn = 10\nbogus = 1\n");
        assert!(parse_process_spec(&p).is_err());
        let (_d2, p2) = write_tmp("kind = \"arima\"\nn = 10\nar = [1.5]\n");
        assert!(parse_process_spec(&p2).is_err(), "non-stationary AR must fail");
    }
}
