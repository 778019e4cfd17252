//! FDSN timeseries web-service client (plain-ASCII output) with an on-disk
//! response cache so repeated requests are offline-reproducible.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use chrono::{DateTime, Utc};
use seisnoise::Series64;

use crate::usage;

/// One Table-1 style dataset request.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRequest {
    pub network: String,
    pub station: String,
    pub channel: String,
    /// FDSN location code; the service accepts "00", "10", "--", ...
    pub location: String,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
    /// Expected sampling rate in samples per second.
    pub expected_sample_rate: f64,
}

impl DatasetRequest {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("network", &self.network),
            ("station", &self.station),
            ("channel", &self.channel),
            ("location", &self.location),
        ] {
            if v.is_empty() {
                return Err(usage(format!("{name} identifier must be nonempty")));
            }
        }
        if self.start >= self.end {
            return Err(usage("start must precede end"));
        }
        if !(self.expected_sample_rate > 0.0) {
            return Err(usage("expected sample rate must be > 0"));
        }
        Ok(())
    }

    /// Deterministic cache key: a sanitized rendering of every field.
    pub fn cache_key(&self) -> String {
        let render = format!(
            "{}_{}_{}_{}_{}_{}_{}",
            self.network,
            self.station,
            self.channel,
            self.location,
            self.start.format("%Y%m%dT%H%M%S"),
            self.end.format("%Y%m%dT%H%M%S"),
            self.expected_sample_rate,
        );
        render
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '-' })
            .collect()
    }

    fn query_url(&self, endpoint: &str) -> String {
        format!(
            "{}/query?net={}&sta={}&cha={}&loc={}&starttime={}&endtime={}&output=ascii",
            endpoint.trim_end_matches('/'),
            self.network,
            self.station,
            self.channel,
            self.location,
            self.start.format("%Y-%m-%dT%H:%M:%S"),
            self.end.format("%Y-%m-%dT%H:%M:%S"),
        )
    }
}

/// Default IRIS endpoint for the timeseries service.
pub const DEFAULT_ENDPOINT: &str = "https://service.iris.edu/irisws/timeseries/1";

/// Fetch a dataset, serving from `cache_dir` when the identical request was
/// seen before. The raw ASCII body is cached, then parsed into a series and
/// cross-checked against the expected duration and rate.
pub fn fetch_fdsn(req: &DatasetRequest, endpoint: &str, cache_dir: &Path) -> Result<Series64> {
    req.validate()?;
    fs::create_dir_all(cache_dir)
        .with_context(|| format!("cannot create cache dir {}", cache_dir.display()))?;
    let cache_path = cache_dir.join(format!("{}.ascii", req.cache_key()));

    let body = if cache_path.exists() {
        fs::read_to_string(&cache_path)
            .with_context(|| format!("cannot read cache {}", cache_path.display()))?
    } else {
        let url = req.query_url(endpoint);
        let body = http_get_text(&url)?;
        write_atomic(&cache_path, &body)?;
        body
    };

    parse_ascii_body(&body, req)
}

fn http_get_text(url: &str) -> Result<String> {
    let mut response = ureq::get(url)
        .call()
        .map_err(|e| anyhow!("fetch failed for {url}: {e}"))?;
    let mut body = String::new();
    response
        .body_mut()
        .as_reader()
        .read_to_string(&mut body)
        .with_context(|| format!("truncated payload from {url}"))?;
    Ok(body)
}

/// Write-to-temp plus atomic rename, safe under concurrent writers.
fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let tmp: PathBuf = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, body).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot move into {}", path.display()))?;
    Ok(())
}

/// Header line, then whitespace-separated samples.
fn parse_ascii_body(body: &str, req: &DatasetRequest) -> Result<Series64> {
    let mut lines = body.lines();
    let header = loop {
        match lines.next() {
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => break l,
            None => return Err(anyhow!("empty FDSN response")),
        }
    };
    let (declared_count, rate) = parse_header(header)
        .ok_or_else(|| anyhow!("cannot parse FDSN header line: {header:?}"))?;

    let mut values = Vec::with_capacity(declared_count.unwrap_or(0));
    for (lineno, line) in lines.enumerate() {
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| anyhow!("sample line {}: bad value {tok:?}", lineno + 2))?;
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(anyhow!("FDSN response carried no samples"));
    }
    if let Some(n) = declared_count {
        if values.len() != n {
            return Err(anyhow!(
                "truncated payload: header declares {n} samples, body has {}",
                values.len()
            ));
        }
    }
    if (rate - req.expected_sample_rate).abs() > 1e-6 * req.expected_sample_rate {
        return Err(anyhow!(
            "sample-rate mismatch: service reports {rate} sps, expected {}",
            req.expected_sample_rate
        ));
    }
    let duration = (req.end - req.start).num_milliseconds() as f64 / 1000.0;
    let expected = duration * rate;
    if (values.len() as f64 - expected).abs() > 0.01 * expected {
        return Err(anyhow!(
            "sample count {} deviates more than 1% from duration x rate = {expected}",
            values.len()
        ));
    }

    let mut s = Series64::new(values, rate)?;
    let meta = s.meta_mut();
    meta.insert("network".into(), req.network.clone());
    meta.insert("station".into(), req.station.clone());
    meta.insert("channel".into(), req.channel.clone());
    meta.insert("location".into(), req.location.clone());
    meta.insert("start".into(), req.start.to_rfc3339());
    meta.insert("end".into(), req.end.to_rfc3339());
    Ok(s)
}

/// Pull "<n> samples" and "<r> sps" out of a comma-separated header line,
/// e.g. "TIMESERIES IU_ANMO_00_BHZ_R, 72000 samples, 20 sps, ...".
fn parse_header(header: &str) -> Option<(Option<usize>, f64)> {
    let mut count = None;
    let mut rate = None;
    for part in header.split(',') {
        let part = part.trim();
        if let Some(v) = part.strip_suffix(" samples") {
            count = v.trim().parse::<usize>().ok();
        } else if let Some(v) = part.strip_suffix(" sps") {
            rate = v.trim().parse::<f64>().ok();
        }
    }
    rate.map(|r| (count, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn req() -> DatasetRequest {
        DatasetRequest {
            network: "IU".into(),
            station: "ANMO".into(),
            channel: "BHZ".into(),
            location: "00".into(),
            start: Utc.with_ymd_and_hms(2010, 2, 27, 17, 30, 0).unwrap(),
            end: Utc.with_ymd_and_hms(2010, 2, 27, 17, 31, 0).unwrap(),
            expected_sample_rate: 20.0,
        }
    }

    #[test]
    fn header_parsing() {
        let h = "TIMESERIES IU_ANMO_00_BHZ_R, 1200 samples, 20 sps, 2010-02-27T17:30:00.000000, SLIST, INTEGER, COUNTS";
        assert_eq!(parse_header(h), Some((Some(1200), 20.0)));
        assert_eq!(parse_header("garbage"), None);
    }

    #[test]
    fn body_parsing_checks_counts_and_rate() {
        let r = req();
        let mut body = String::from("TIMESERIES IU_ANMO_00_BHZ_R, 1200 samples, 20 sps, x, SLIST\n");
        for i in 0..1200 {
            body.push_str(&format!("{}\n", i % 7));
        }
        let s = parse_ascii_body(&body, &r).unwrap();
        assert_eq!(s.len(), 1200);
        assert_eq!(s.sample_rate(), 20.0);
        assert_eq!(s.meta()["station"], "ANMO");

        let truncated = body.lines().take(800).collect::<Vec<_>>().join("\n");
        assert!(parse_ascii_body(&truncated, &r).is_err());

        let wrong_rate = body.replace("20 sps", "40 sps");
        assert!(parse_ascii_body(&wrong_rate, &r).is_err());
    }

    #[test]
    fn zero_length_window_is_a_usage_error() {
        let mut r = req();
        r.end = r.start;
        let err = r.validate().unwrap_err();
        assert!(crate::is_usage_error(&err));
    }

    #[test]
    fn cache_key_is_filename_safe_and_deterministic() {
        let r = req();
        let k1 = r.cache_key();
        let k2 = req().cache_key();
        assert_eq!(k1, k2);
        assert!(k1.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.'));
    }
}
