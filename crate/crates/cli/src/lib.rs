//! I/O layer for the characterization toolkit: CSV ingestion, the FDSN
//! timeseries client with on-disk caching, report/plot-data writers and the
//! pipeline/process configuration file formats.

pub mod config;
pub mod csv_io;
pub mod fdsn;
pub mod report;

/// Errors that should exit with status 1 (bad arguments/usage) rather than
/// 2 (computation failure).
pub fn is_usage_error(err: &anyhow::Error) -> bool {
    if let Some(core) = err.downcast_ref::<seisnoise::Error>() {
        return matches!(core, seisnoise::Error::Argument(_));
    }
    err.downcast_ref::<UsageError>().is_some()
}

/// Marker for argument-level failures raised by the CLI itself.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub(crate) fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}
