//! Residual whiteness: ACF confidence-band check (decisive) plus the
//! Ljung-Box portmanteau statistic as auxiliary evidence.

use crate::dist;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Series;

use super::{check_alpha, Tail, TestOutcome};

/// Outcome of [`whiteness_test`]. The band check decides; Ljung-Box over the
/// same lags is reported alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct WhitenessOutcome<F: Scalar> {
    /// Decisive check: fraction of ACF lags outside +-1.96/sqrt(N), rejected
    /// when the fraction exceeds alpha + 0.02.
    pub band: TestOutcome<F>,
    pub ljung_box: TestOutcome<F>,
}

impl<F: Scalar> WhitenessOutcome<F> {
    /// True when the series passes, i.e. whiteness is not rejected.
    pub fn is_white(&self) -> bool {
        !self.band.reject_null
    }
}

/// Default lag horizon for residual diagnostics: one tenth of the series,
/// clamped to [10, 5000].
pub fn default_whiteness_lag(n: usize) -> usize {
    (n / 10).clamp(10, 5000)
}

/// ACF-band whiteness test over lags `1..=max_lag`.
pub fn whiteness_test<F: Scalar>(
    x: &Series<F>,
    max_lag: usize,
    alpha: F,
) -> Result<WhitenessOutcome<F>> {
    check_alpha(alpha)?;
    if max_lag < 10 {
        return Err(Error::arg("whiteness_test needs max_lag >= 10"));
    }
    if x.len() < 10 * max_lag {
        return Err(Error::arg(format!(
            "whiteness_test needs length >= 10 * max_lag ({} < {})",
            x.len(),
            10 * max_lag
        )));
    }
    let acf = x.acf(max_lag)?;
    let fraction = acf.outside_band_fraction();
    let threshold = alpha + F::c(0.02);
    let band = TestOutcome {
        statistic: fraction,
        p_value: None,
        critical_lower: None,
        critical_upper: Some(threshold),
        tail: Tail::Right,
        reject_null: fraction > threshold,
        alpha,
    };

    let lb = ljung_box_from_acf(&acf.coefficients[1..], x.len(), alpha);
    Ok(WhitenessOutcome {
        band,
        ljung_box: lb,
    })
}

/// Ljung-Box portmanteau test over lags `1..=max_lag` against chi-square
/// with `max_lag` degrees of freedom.
pub fn ljung_box<F: Scalar>(x: &Series<F>, max_lag: usize, alpha: F) -> Result<TestOutcome<F>> {
    check_alpha(alpha)?;
    if max_lag == 0 || max_lag >= x.len() {
        return Err(Error::arg("ljung_box lag out of range"));
    }
    let acf = x.acf(max_lag)?;
    Ok(ljung_box_from_acf(&acf.coefficients[1..], x.len(), alpha))
}

fn ljung_box_from_acf<F: Scalar>(r: &[F], n: usize, alpha: F) -> TestOutcome<F> {
    let nf = n as f64;
    let mut q = 0.0;
    for (k, &rk) in r.iter().enumerate() {
        let lag = (k + 1) as f64;
        let rk = rk.to64();
        q += rk * rk / (nf - lag);
    }
    q *= nf * (nf + 2.0);
    let df = r.len() as f64;
    let p = 1.0 - dist::chi2_cdf(q, df);
    let crit = dist::chi2_ppf(1.0 - alpha.to64(), df);
    TestOutcome {
        statistic: F::c(q),
        p_value: Some(F::c(p)),
        critical_lower: None,
        critical_upper: Some(F::c(crit)),
        tail: Tail::Right,
        reject_null: p < alpha.to64(),
        alpha,
    }
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
    fn white_noise_passes_at_the_default_horizon() {
        let s = series(gwn(50_000, 1));
        let out = whiteness_test(&s, default_whiteness_lag(50_000), 0.05).unwrap();
        assert!(out.is_white(), "fraction {}", out.band.statistic);
        assert!(!out.ljung_box.reject_null);
        assert!(out.band.decision_consistent() && out.ljung_box.decision_consistent());
    }

    #[test]
    fn ar1_correlation_fails_whiteness() {
        let e = gwn(50_200, 2);
        let mut y = vec![0.0; e.len()];
        for k in 1..e.len() {
            y[k] = 0.3 * y[k - 1] + e[k];
        }
        let s = series(y[200..].to_vec());
        let out = whiteness_test(&s, 20, 0.05).unwrap();
        assert!(!out.is_white());
        assert!(out.ljung_box.reject_null);
    }

    #[test]
    fn ljung_box_matches_frozen_oracle() {
        // Statistic and p-value for a fixed 30-point sample, lags = 5.
        let y30 = vec![
            -0.630906, 0.709501, 0.059695, -0.772476, -0.906239, 1.165479, 0.631047, 1.975519,
            -0.526655, -0.743541, 0.403891, 1.379407, 0.596752, 0.433153, 1.886988, -0.743391,
            -1.247949, -0.744618, -0.316857, 0.373351, 1.02196, 0.40561, 1.523314, -0.827508,
            1.905495, -0.812022, 1.170736, -0.937843, 0.343267, 0.050898,
        ];
        let out = ljung_box(&series(y30), 5, 0.05).unwrap();
        assert!((out.statistic - 7.783396).abs() < 1e-4, "{}", out.statistic);
        assert!((out.p_value.unwrap() - 0.168584).abs() < 1e-4);
        assert!(!out.reject_null);
    }

    #[test]
    fn argument_checks() {
        let s = series(gwn(100, 3));
        assert!(whiteness_test(&s, 9, 0.05).is_err());
        assert!(whiteness_test(&s, 11, 0.05).is_err());
        assert!(whiteness_test(&s, 10, 0.0).is_err());
    }
}
