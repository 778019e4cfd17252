//! Series representation and second-order statistics: ACF, PACF,
//! periodogram, differencing and polynomial detrending.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// A uniformly sampled real-valued record with provenance metadata.
///
/// Values are validated at construction: every sample must be finite and the
/// sample rate strictly positive. The record is immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<F: Scalar> {
    values: Vec<F>,
    sample_rate: F,
    meta: BTreeMap<String, String>,
}

impl<F: Scalar> Series<F> {
    pub fn new(values: Vec<F>, sample_rate: F) -> Result<Self> {
        Self::with_meta(values, sample_rate, BTreeMap::new())
    }

    pub fn with_meta(
        values: Vec<F>,
        sample_rate: F,
        meta: BTreeMap<String, String>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::arg("series must contain at least one sample"));
        }
        if !(sample_rate > F::zero()) || !sample_rate.is_finite() {
            return Err(Error::arg("sample rate must be finite and > 0"));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(Series {
            values,
            sample_rate,
            meta,
        })
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sample_rate(&self) -> F {
        self.sample_rate
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut BTreeMap<String, String> {
        &mut self.meta
    }

    /// Rebuild a series with the same rate and metadata but new values.
    pub(crate) fn like(&self, values: Vec<F>) -> Result<Self> {
        Self::with_meta(values, self.sample_rate, self.meta.clone())
    }

    pub fn mean(&self) -> F {
        self.values.iter().copied().sum::<F>() / F::of(self.len())
    }

    /// Biased sample variance (divide by N).
    pub fn variance(&self) -> F {
        let m = self.mean();
        self.values
            .iter()
            .map(|&v| (v - m) * (v - m))
            .sum::<F>()
            / F::of(self.len())
    }

    /// Biased sample autocorrelation out to `max_lag`, with lag 0 pinned to 1.
    ///
    /// The divide-by-N estimator keeps the sequence positive semidefinite,
    /// which the Durbin-Levinson recursion in [`Series::pacf`] relies on.
    pub fn acf(&self, max_lag: usize) -> Result<CorrelationSequence<F>> {
        let n = self.len();
        if n < 30 {
            return Err(Error::arg(format!("acf needs at least 30 samples, got {n}")));
        }
        if max_lag >= n {
            return Err(Error::arg(format!(
                "max_lag {max_lag} out of range for series of length {n}"
            )));
        }
        let m = self.mean();
        let centered: Vec<F> = self.values.iter().map(|&v| v - m).collect();
        let c0: F = centered.iter().map(|&v| v * v).sum();
        if c0 <= F::zero() {
            return Err(Error::degenerate("zero-variance series has no acf"));
        }

        // Direct sums for short requests, FFT convolution for long ones.
        let coefficients = if (n as u64) * (max_lag as u64) <= 1 << 22 {
            let mut r = Vec::with_capacity(max_lag + 1);
            r.push(F::one());
            for k in 1..=max_lag {
                let mut s = F::zero();
                for t in k..n {
                    s = s + centered[t] * centered[t - k];
                }
                r.push(s / c0);
            }
            r
        } else {
            acf_via_fft(&centered, max_lag, c0)
        };

        Ok(CorrelationSequence {
            lags: (0..=max_lag).collect(),
            coefficients,
            n_effective: n,
            confidence_band: F::c(1.96) / F::of(n).sqrt(),
        })
    }

    /// Partial autocorrelation via the Durbin-Levinson recursion on the
    /// sample ACF. The lag-0 entry is defined as 1.
    pub fn pacf(&self, max_lag: usize) -> Result<CorrelationSequence<F>> {
        let acf = self.acf(max_lag)?;
        let r = &acf.coefficients;
        let mut pacf = Vec::with_capacity(max_lag + 1);
        pacf.push(F::one());
        if max_lag >= 1 {
            pacf.push(r[1]);
        }

        // phi[j] holds the order-k AR coefficients, updated in place.
        let mut phi = vec![F::zero(); max_lag + 1];
        let mut prev = vec![F::zero(); max_lag + 1];
        if max_lag >= 1 {
            phi[1] = r[1];
        }
        let mut err = (F::one() - r.get(1).map_or(F::zero(), |&v| v * v)).max(F::c(1e-30));
        for k in 2..=max_lag {
            prev[..k].copy_from_slice(&phi[..k]);
            let mut num = r[k];
            for j in 1..k {
                num = num - prev[j] * r[k - j];
            }
            let rk = num / err;
            phi[k] = rk;
            for j in 1..k {
                phi[j] = prev[j] - rk * prev[k - j];
            }
            err = (err * (F::one() - rk * rk)).max(F::c(1e-30));
            pacf.push(rk);
        }

        Ok(CorrelationSequence {
            lags: acf.lags,
            coefficients: pacf,
            n_effective: acf.n_effective,
            confidence_band: acf.confidence_band,
        })
    }

    /// Raw one-sided periodogram of the mean-removed series, scaled as a
    /// power spectral density over [0, Nyquist]: summing power times the
    /// frequency spacing recovers the biased sample variance (Parseval).
    pub fn periodogram(&self) -> Result<Spectrum<F>> {
        self.periodogram_with(Taper::None)
    }

    /// Periodogram with an optional Hann taper (off by default).
    pub fn periodogram_with(&self, taper: Taper) -> Result<Spectrum<F>> {
        let n = self.len();
        if n < 64 {
            return Err(Error::arg(format!(
                "periodogram needs at least 64 samples, got {n}"
            )));
        }
        let m = self.mean();
        let mut buf: Vec<Complex<F>> = self
            .values
            .iter()
            .map(|&v| Complex::new(v - m, F::zero()))
            .collect();
        let mut window_ssq = F::of(n);
        if let Taper::Hann = taper {
            window_ssq = F::zero();
            for (t, c) in buf.iter_mut().enumerate() {
                let w = F::c(0.5)
                    * (F::one()
                        - (F::c(2.0 * std::f64::consts::PI) * F::of(t) / F::of(n)).cos());
                c.re = c.re * w;
                window_ssq = window_ssq + w * w;
            }
        }
        fft_in_place(&mut buf);

        let fs = self.sample_rate;
        let half = n / 2;
        let norm = F::one() / (fs * window_ssq);
        let mut frequencies = Vec::with_capacity(half + 1);
        let mut power = Vec::with_capacity(half + 1);
        for j in 0..=half {
            let mag2 = buf[j].norm_sqr();
            let mut p = mag2 * norm;
            let interior = j != 0 && !(n % 2 == 0 && j == half);
            if interior {
                p = p + p;
            }
            frequencies.push(F::of(j) * fs / F::of(n));
            power.push(p);
        }
        Ok(Spectrum { frequencies, power })
    }

    /// Difference the series `d` times. `d = 0` returns the input unchanged.
    pub fn difference(&self, d: usize) -> Result<Series<F>> {
        let n = self.len();
        if d >= n {
            return Err(Error::arg(format!(
                "differencing order {d} out of range for length {n}"
            )));
        }
        if d == 0 {
            return Ok(self.clone());
        }
        let mut v = self.values.clone();
        for _ in 0..d {
            for i in 0..v.len() - 1 {
                v[i] = v[i + 1] - v[i];
            }
            v.pop();
        }
        self.like(v)
    }

    /// Subtract a least-squares polynomial of the given degree (0, 1 or 2).
    pub fn detrend(&self, degree: usize) -> Result<Series<F>> {
        let n = self.len();
        if degree > 2 {
            return Err(Error::arg("detrend degree must be 0, 1 or 2"));
        }
        if n <= degree + 1 {
            return Err(Error::arg(format!(
                "detrend degree {degree} needs more than {} samples",
                degree + 1
            )));
        }
        // Time axis scaled to [-1, 1] to keep the normal equations conditioned.
        let scale = F::of(n - 1) / F::c(2.0);
        let mut columns: Vec<Vec<F>> = vec![vec![F::one(); n]];
        if degree >= 1 {
            columns.push((0..n).map(|t| (F::of(t) - scale) / scale).collect());
        }
        if degree >= 2 {
            let lin = columns[1].clone();
            columns.push(lin.iter().map(|&v| v * v).collect());
        }
        let fit = linalg::ols(&columns, &self.values)?;
        self.like(fit.residuals)
    }
}

/// Optional tapering for [`Series::periodogram_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Taper {
    #[default]
    None,
    Hann,
}

/// Sample auto- or partial-autocorrelation over lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSequence<F: Scalar> {
    pub lags: Vec<usize>,
    pub coefficients: Vec<F>,
    pub n_effective: usize,
    /// Two-sided 95% band for a white null: 1.96 / sqrt(n_effective).
    pub confidence_band: F,
}

impl<F: Scalar> CorrelationSequence<F> {
    pub fn max_lag(&self) -> usize {
        *self.lags.last().unwrap_or(&0)
    }

    /// Fraction of the lags `1..=max_lag` falling outside the confidence band.
    pub fn outside_band_fraction(&self) -> F {
        if self.coefficients.len() <= 1 {
            return F::zero();
        }
        let out = self.coefficients[1..]
            .iter()
            .filter(|&&c| c.abs() > self.confidence_band)
            .count();
        F::of(out) / F::of(self.coefficients.len() - 1)
    }
}

/// One-sided power spectral density over [0, Nyquist].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<F: Scalar> {
    pub frequencies: Vec<F>,
    pub power: Vec<F>,
}

impl<F: Scalar> Spectrum<F> {
    /// Integrated power: sum of power times frequency spacing.
    pub fn total_power(&self) -> F {
        if self.frequencies.len() < 2 {
            return F::zero();
        }
        let df = self.frequencies[1] - self.frequencies[0];
        self.power.iter().copied().sum::<F>() * df
    }

    /// Fraction of total power below the given frequency.
    pub fn low_frequency_fraction(&self, cutoff: F) -> F {
        let total: F = self.power.iter().copied().sum();
        if total <= F::zero() {
            return F::zero();
        }
        let low: F = self
            .frequencies
            .iter()
            .zip(&self.power)
            .filter(|(f, _)| **f < cutoff)
            .map(|(_, p)| *p)
            .sum();
        low / total
    }
}

pub(crate) fn fft_in_place<F: Scalar>(buf: &mut [Complex<F>]) {
    let fft = planner_forward::<F>(buf.len());
    fft.process(buf);
}

pub(crate) fn ifft_in_place<F: Scalar>(buf: &mut [Complex<F>]) {
    let fft = planner_inverse::<F>(buf.len());
    fft.process(buf);
    let scale = F::one() / F::of(buf.len());
    for c in buf.iter_mut() {
        c.re = c.re * scale;
        c.im = c.im * scale;
    }
}

fn planner_forward<F: Scalar>(n: usize) -> Arc<dyn rustfft::Fft<F>> {
    FftPlanner::<F>::new().plan_fft_forward(n)
}

fn planner_inverse<F: Scalar>(n: usize) -> Arc<dyn rustfft::Fft<F>> {
    FftPlanner::<F>::new().plan_fft_inverse(n)
}

fn acf_via_fft<F: Scalar>(centered: &[F], max_lag: usize, c0: F) -> Vec<F> {
    let n = centered.len();
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<F>> = centered
        .iter()
        .map(|&v| Complex::new(v, F::zero()))
        .chain(std::iter::repeat(Complex::new(F::zero(), F::zero())))
        .take(size)
        .collect();
    fft_in_place(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), F::zero());
    }
    ifft_in_place(&mut buf);
    let mut r = Vec::with_capacity(max_lag + 1);
    r.push(F::one());
    for k in 1..=max_lag {
        r.push(buf[k].re / c0);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gwn(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn series(v: Vec<f64>) -> Series<f64> {
        Series::new(v, 1.0).unwrap()
    }

    #[test]
    fn construction_rejects_non_finite_and_bad_rate() {
        assert!(matches!(
            Series::new(vec![1.0, f64::NAN, 2.0], 1.0),
            Err(Error::NonFinite(1))
        ));
        assert!(Series::new(vec![1.0, 2.0], 0.0).is_err());
        assert!(Series::new(Vec::<f64>::new(), 1.0).is_err());
    }

    #[test]
    fn acf_lag_zero_is_one_and_bounded() {
        let s = series(gwn(500, 1));
        let a = s.acf(40).unwrap();
        assert_eq!(a.coefficients[0], 1.0);
        for &c in &a.coefficients {
            assert!(c.abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn acf_rejects_out_of_range_lag_and_short_series() {
        let s = series(gwn(100, 2));
        assert!(s.acf(100).is_err());
        assert!(series(gwn(20, 3)).acf(5).is_err());
    }

    #[test]
    fn acf_of_ma1_matches_closed_form() {
        // MA(1) with theta = 0.5: rho(1) = theta / (1 + theta^2) = 0.4.
        let e = gwn(100_001, 42);
        let y: Vec<f64> = (1..e.len()).map(|k| e[k] + 0.5 * e[k - 1]).collect();
        let a = series(y).acf(5).unwrap();
        assert!((a.coefficients[1] - 0.4).abs() < 0.01, "{}", a.coefficients[1]);
    }

    #[test]
    fn acf_fft_path_matches_direct_path() {
        let v = gwn(3000, 7);
        let s = series(v.clone());
        let direct = s.acf(60).unwrap();
        let m = s.mean();
        let centered: Vec<f64> = v.iter().map(|x| x - m).collect();
        let c0: f64 = centered.iter().map(|x| x * x).sum();
        let fft = acf_via_fft(&centered, 60, c0);
        for (a, b) in direct.coefficients.iter().zip(&fft) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn gwn_acf_stays_inside_band_in_most_seeds() {
        let mut ok = 0;
        for seed in 0..100 {
            let a = series(gwn(10_000, 1000 + seed)).acf(50).unwrap();
            let outside = a.coefficients[1..]
                .iter()
                .filter(|c| c.abs() > a.confidence_band)
                .count();
            if (outside as f64) <= 0.10 * 50.0 {
                ok += 1;
            }
        }
        assert!(ok >= 90, "only {ok}/100 seeds kept >=90% of lags inside the band");
    }

    #[test]
    fn pacf_of_ar1_matches_coefficient() {
        let e = gwn(100_500, 5);
        let mut y = vec![0.0; e.len()];
        for k in 1..e.len() {
            y[k] = 0.8 * y[k - 1] + e[k];
        }
        let p = series(y[500..].to_vec()).pacf(10).unwrap();
        assert!((p.coefficients[1] - 0.8).abs() < 0.01);
        for k in 2..=10 {
            assert!(
                p.coefficients[k].abs() <= p.confidence_band * 1.5,
                "pacf({k}) = {} vs band {}",
                p.coefficients[k],
                p.confidence_band
            );
        }
    }

    #[test]
    fn pacf_of_white_noise_is_inside_band() {
        let p = series(gwn(20_000, 11)).pacf(20).unwrap();
        let outside = p.coefficients[1..]
            .iter()
            .filter(|c| c.abs() > p.confidence_band)
            .count();
        assert!(outside <= 3, "{outside} of 20 lags outside");
    }

    #[test]
    fn pacf_of_random_walk_is_near_one_at_lag_one() {
        let e = gwn(50_000, 13);
        let mut y = vec![0.0; e.len()];
        for k in 1..e.len() {
            y[k] = y[k - 1] + e[k];
        }
        let p = series(y).pacf(5).unwrap();
        assert!(p.coefficients[1] >= 0.99, "{}", p.coefficients[1]);
    }

    #[test]
    fn pacf_lag_one_equals_acf_lag_one_exactly() {
        let s = series(gwn(2000, 17));
        let a = s.acf(10).unwrap();
        let p = s.pacf(10).unwrap();
        assert_eq!(a.coefficients[1], p.coefficients[1]);
    }

    #[test]
    fn periodogram_peaks_at_the_tone() {
        let fs = 20.0;
        let n = 2048;
        let v: Vec<f64> = (0..n)
            .map(|t| (2.0 * std::f64::consts::PI * 1.0 * t as f64 / fs).sin())
            .collect();
        let spec = Series::new(v, fs).unwrap().periodogram().unwrap();
        let (imax, _) = spec
            .power
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        let df = spec.frequencies[1] - spec.frequencies[0];
        assert!((spec.frequencies[imax] - 1.0).abs() <= df);
    }

    #[test]
    fn periodogram_parseval_within_one_percent() {
        for seed in [3, 4, 5] {
            let s = series(gwn(4096, seed));
            let spec = s.periodogram().unwrap();
            let var = s.variance();
            let total = spec.total_power();
            assert!(
                (total - var).abs() / var < 0.01,
                "total {total} vs variance {var}"
            );
        }
    }

    #[test]
    fn gwn_spectrum_is_flat_on_average() {
        // Average PSD over seeds should approach sigma^2 / (fs/2).
        let fs = 4.0;
        let mut mean_power = 0.0;
        let n_seeds = 100;
        for seed in 0..n_seeds {
            let v = gwn(1024, 300 + seed);
            let spec = Series::new(v, fs).unwrap().periodogram().unwrap();
            mean_power += spec.power.iter().sum::<f64>() / spec.power.len() as f64;
        }
        mean_power /= n_seeds as f64;
        let expect = 1.0 / (fs / 2.0);
        assert!(
            (mean_power - expect).abs() / expect < 0.10,
            "mean {mean_power} vs {expect}"
        );
    }

    #[test]
    fn differencing_shrinks_low_frequency_share() {
        let e = gwn(8192, 23);
        let mut y = vec![0.0; e.len()];
        for k in 1..e.len() {
            y[k] = y[k - 1] + e[k];
        }
        let raw = series(y);
        let diff = raw.difference(1).unwrap();
        let cutoff = 0.1 * 0.5; // 0.1 x Nyquist at fs = 1
        let f_raw = raw.periodogram().unwrap().low_frequency_fraction(cutoff);
        let f_diff = diff.periodogram().unwrap().low_frequency_fraction(cutoff);
        assert!(f_diff < f_raw, "diff {f_diff} raw {f_raw}");
    }

    #[test]
    fn difference_arithmetic() {
        let s = series(vec![1.0, 3.0, 6.0, 10.0]);
        assert_eq!(s.difference(1).unwrap().values(), &[2.0, 3.0, 4.0]);
        assert_eq!(s.difference(2).unwrap().values(), &[1.0, 1.0]);
        let c = series(vec![5.0; 10]);
        assert!(c.difference(1).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(s.difference(4).is_err());
        assert_eq!(s.difference(0).unwrap().values(), s.values());
    }

    #[test]
    fn repeated_single_differences_equal_double_difference() {
        let s = series(gwn(200, 31));
        let once_twice = s.difference(1).unwrap().difference(1).unwrap();
        let twice = s.difference(2).unwrap();
        assert_eq!(once_twice.values(), twice.values());
    }

    #[test]
    fn detrend_removes_exact_polynomials() {
        let c = series(vec![2.0; 50]);
        assert!(c.detrend(0).unwrap().values().iter().all(|&v| v.abs() < 1e-12));
        let lin: Vec<f64> = (0..100).map(|k| 1.0 + 0.5 * k as f64).collect();
        let r = series(lin).detrend(1).unwrap();
        assert!(r.values().iter().all(|&v| v.abs() < 1e-9));
        assert!(series(vec![1.0, 2.0]).detrend(2).is_err());
        assert!(series(gwn(50, 1)).detrend(3).is_err());
    }

    #[test]
    fn detrend_recovers_noise_variance_under_linear_trend() {
        let e = gwn(20_000, 37);
        let y: Vec<f64> = e.iter().enumerate().map(|(k, &v)| v + 0.01 * k as f64).collect();
        let r = series(y).detrend(1).unwrap();
        let var = r.variance();
        assert!((var - 1.0).abs() < 0.05, "residual variance {var}");
        assert!(r.mean().abs() < 1e-9);
    }
}
