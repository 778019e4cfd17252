use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use chrono::{DateTime, NaiveDateTime, Utc};
use clap::{Parser, Subcommand};

use seisnoise::pipeline::{batch_characterize, characterize};
use seisnoise::synth::generate;
use seisnoise_cli::{config, csv_io, fdsn, is_usage_error, report, UsageError};

/// Statistical characterization and ARIMA-GARCH modeling of seismic noise
/// records.
#[derive(Parser)]
#[command(name = "seisnoise", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full characterization pipeline on one record.
    Characterize {
        /// Input file: one sample per line, optional `# sample_rate=` header.
        input: PathBuf,
        /// Pipeline configuration file (flat key = value).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default: current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sampling rate override in samples per second.
        #[arg(long)]
        rate: Option<f64>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Significance-level override.
        #[arg(long)]
        alpha: Option<f64>,
        /// Also write plot-data CSVs next to the report.
        #[arg(long)]
        plot_data: bool,
    },
    /// Fetch a record from an FDSN timeseries service into a CSV file.
    Fetch {
        network: String,
        station: String,
        channel: String,
        /// FDSN location code (for example "00").
        location: String,
        /// Start time, UTC, e.g. 2010-02-27T17:30:00.
        start: String,
        /// End time, UTC.
        end: String,
        #[arg(long, default_value = fdsn::DEFAULT_ENDPOINT)]
        endpoint: String,
        /// Expected sampling rate in sps.
        #[arg(long, default_value_t = 20.0)]
        expected_rate: f64,
        /// Response cache directory.
        #[arg(long, default_value = ".seisnoise-cache")]
        cache_dir: PathBuf,
        /// Output CSV path (default: <net>_<sta>_<cha>_<start>.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic series from a TOML process specification.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        /// Output CSV path (default: simulated.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Characterize every input listed in a manifest (one path per line).
    Batch {
        manifest: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are successes; anything else is usage.
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage_error(&e) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Characterize {
            input,
            config,
            out,
            rate,
            seed,
            alpha,
            plot_data,
        } => {
            let series = csv_io::read_csv(&input, rate)?;
            let cfg = load_config(config.as_deref(), seed, alpha)?;
            let rep = characterize(&series, &cfg)?;
            let out_dir = out.unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&out_dir)?;
            let path = out_dir.join("report.json");
            report::write_report(&rep, &path)?;
            if plot_data {
                report::emit_plot_data(&rep, &series, &out_dir)?;
            }
            for line in &rep.stage_log {
                println!("{line}");
            }
            println!("report written to {}", path.display());
            if !rep.complete {
                println!("note: characterization incomplete: {:?}", rep.failure);
            }
            Ok(())
        }
        Command::Fetch {
            network,
            station,
            channel,
            location,
            start,
            end,
            endpoint,
            expected_rate,
            cache_dir,
            out,
        } => {
            let req = fdsn::DatasetRequest {
                network,
                station,
                channel,
                location,
                start: parse_utc(&start)?,
                end: parse_utc(&end)?,
                expected_sample_rate: expected_rate,
            };
            let series = fdsn::fetch_fdsn(&req, &endpoint, &cache_dir)?;
            let path = out.unwrap_or_else(|| {
                PathBuf::from(format!(
                    "{}_{}_{}_{}.csv",
                    req.network,
                    req.station,
                    req.channel,
                    req.start.format("%Y%m%dT%H%M%S")
                ))
            });
            csv_io::write_csv(&series, &path)?;
            println!(
                "fetched {} samples at {} sps into {}",
                series.len(),
                series.sample_rate(),
                path.display()
            );
            Ok(())
        }
        Command::Simulate { spec, out } => {
            let spec = config::parse_process_spec(&spec)?;
            let series = generate(&spec)?;
            let path = out.unwrap_or_else(|| PathBuf::from("simulated.csv"));
            csv_io::write_csv(&series, &path)?;
            println!("wrote {} samples to {}", series.len(), path.display());
            Ok(())
        }
        Command::Batch {
            manifest,
            config,
            out,
            rate,
            seed,
            alpha,
        } => {
            let cfg = load_config(config.as_deref(), seed, alpha)?;
            let text = std::fs::read_to_string(&manifest).map_err(|e| {
                anyhow::Error::new(UsageError(format!(
                    "cannot read manifest {}: {e}",
                    manifest.display()
                )))
            })?;
            let mut inputs = Vec::new();
            let mut failures: Vec<(usize, String)> = Vec::new();
            let mut index = 0usize;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                match csv_io::read_csv(&PathBuf::from(line), rate) {
                    Ok(s) => inputs.push((index, s)),
                    Err(e) => failures.push((index, format!("{line}: {e}"))),
                }
                index += 1;
            }
            if inputs.is_empty() && failures.is_empty() {
                return Err(anyhow::Error::new(UsageError(
                    "manifest lists no inputs".into(),
                )));
            }
            let series: Vec<_> = inputs.iter().map(|(_, s)| s.clone()).collect();
            let outcome = if series.is_empty() {
                None
            } else {
                Some(batch_characterize(&series, &cfg)?)
            };
            let out_dir = out.unwrap_or_else(|| PathBuf::from("batch-out"));
            std::fs::create_dir_all(&out_dir)?;
            if let Some(outcome) = &outcome {
                report::write_batch(outcome, &out_dir)?;
                println!(
                    "batch: {} inputs characterized, {} failed in pipeline, {} unreadable",
                    outcome.reports.len(),
                    outcome.summary.n_failed,
                    failures.len()
                );
            } else {
                println!("batch: 0 inputs characterized, {} unreadable", failures.len());
            }
            if !failures.is_empty() {
                let mut log = String::new();
                for (i, msg) in &failures {
                    log.push_str(&format!("{i},{}\n", msg.replace(',', ";")));
                }
                std::fs::write(out_dir.join("failures.csv"), log)?;
                for (i, msg) in &failures {
                    println!("  input {i} failed to load: {msg}");
                }
            }
            Ok(())
        }
    }
}

fn load_config(
    path: Option<&std::path::Path>,
    seed: Option<u64>,
    alpha: Option<f64>,
) -> Result<seisnoise::PipelineConfig64> {
    let mut cfg = match path {
        Some(p) => config::parse_pipeline_config(p)?,
        None => seisnoise::PipelineConfig64::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(a) = alpha {
        cfg.alpha = a;
    }
    cfg.validate().context("invalid configuration")?;
    Ok(cfg)
}

fn parse_utc(s: &str) -> Result<DateTime<Utc>> {
    let naive = NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S")
        .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S"))
        .map_err(|_| {
            anyhow::Error::new(UsageError(format!(
                "cannot parse timestamp {s:?} (expected YYYY-MM-DDTHH:MM:SS)"
            )))
        })?;
    Ok(DateTime::from_naive_utc_and_offset(naive, Utc))
}
