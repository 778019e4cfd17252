//! Unit-root tests: augmented Dickey-Fuller, Phillips-Perron and the
//! AR(1)-coefficient heuristic for heteroskedastic records.

use crate::dist;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::series::Series;

use super::{check_alpha, Tail, TestOutcome};

/// Deterministic terms included in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Deterministic {
    /// No constant, no trend (suitable for differenced data).
    None,
    /// Constant only.
    Drift,
    /// Constant and linear trend (suitable for raw records).
    #[default]
    Trend,
}

/// Number of lagged differences in the ADF regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LagOrder {
    /// Schwert rule: floor(12 * (N/100)^0.25).
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UnitRootConfig {
    pub deterministic: Deterministic,
    pub lag_order: LagOrder,
}

impl UnitRootConfig {
    pub fn new(deterministic: Deterministic, lag_order: LagOrder) -> Self {
        UnitRootConfig {
            deterministic,
            lag_order,
        }
    }

    pub(crate) fn resolve_lags(&self, n: usize) -> usize {
        match self.lag_order {
            LagOrder::Fixed(l) => l,
            LagOrder::Auto => (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize,
        }
    }
}

/// MacKinnon (1994) response-surface coefficients for the asymptotic
/// p-value of the Dickey-Fuller t distribution, one row per deterministic
/// variant. The same surface drives the PP test decision.
struct PSurface {
    tau_star: f64,
    tau_min: f64,
    tau_max: f64,
    small: [f64; 3],
    large: [f64; 4],
}

const P_NONE: PSurface = PSurface {
    tau_star: -1.04,
    tau_min: -19.04,
    tau_max: f64::INFINITY,
    small: [0.6344, 1.2378, 3.2496e-2],
    large: [0.4797, 9.3557e-1, -6.999e-2, 3.3066e-2],
};

const P_DRIFT: PSurface = PSurface {
    tau_star: -1.61,
    tau_min: -18.83,
    tau_max: 2.74,
    small: [2.1659, 1.4412, 3.8269e-2],
    large: [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2],
};

const P_TREND: PSurface = PSurface {
    tau_star: -2.89,
    tau_min: -16.18,
    tau_max: 0.70,
    small: [3.2512, 1.6047, 4.9588e-2],
    large: [2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2],
};

fn surface(det: Deterministic) -> &'static PSurface {
    match det {
        Deterministic::None => &P_NONE,
        Deterministic::Drift => &P_DRIFT,
        Deterministic::Trend => &P_TREND,
    }
}

/// Asymptotic p-value of a Dickey-Fuller t statistic.
pub fn dickey_fuller_p_value(stat: f64, det: Deterministic) -> f64 {
    let s = surface(det);
    if stat > s.tau_max {
        return 1.0;
    }
    if stat < s.tau_min {
        return 0.0;
    }
    let z = if stat <= s.tau_star {
        s.small[0] + s.small[1] * stat + s.small[2] * stat * stat
    } else {
        s.large[0] + stat * (s.large[1] + stat * (s.large[2] + stat * s.large[3]))
    };
    dist::norm_cdf(z)
}

/// Critical value at significance `alpha`, obtained by inverting the
/// p-value surface so that decisions by p-value and by critical value
/// can never disagree.
pub fn dickey_fuller_critical_value(alpha: f64, det: Deterministic) -> f64 {
    let (mut lo, mut hi) = (-25.0, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dickey_fuller_p_value(mid, det) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Augmented Dickey-Fuller test. H0: the series has a unit root
/// (left-tailed; rejection means no integrating effect).
pub fn adf_test<F: Scalar>(
    s: &Series<F>,
    cfg: &UnitRootConfig,
    alpha: F,
) -> Result<TestOutcome<F>> {
    check_alpha(alpha)?;
    let n = s.len();
    if n < 50 {
        return Err(Error::arg(format!(
            "adf_test needs at least 50 samples, got {n}"
        )));
    }
    let lags = cfg.resolve_lags(n);
    if n < lags + 20 {
        return Err(Error::arg("adf_test lag order too large for series"));
    }
    let y = s.values();
    let rows = n - 1 - lags;

    // Regress dy[t] on y[t-1], dy[t-1..t-L] and deterministic terms.
    let mut target = Vec::with_capacity(rows);
    let mut level = Vec::with_capacity(rows);
    let mut lagged: Vec<Vec<F>> = vec![Vec::with_capacity(rows); lags];
    for t in (lags + 1)..n {
        target.push(y[t] - y[t - 1]);
        level.push(y[t - 1]);
        for (j, col) in lagged.iter_mut().enumerate() {
            col.push(y[t - j - 1] - y[t - j - 2]);
        }
    }
    let mut columns = vec![level];
    columns.extend(lagged);
    append_deterministic(&mut columns, rows, cfg.deterministic);

    let fit = linalg::ols(&columns, &target)?;
    let stat = fit.coeffs[0] / fit.std_errors[0];
    Ok(df_outcome(stat, cfg.deterministic, alpha))
}

/// Phillips-Perron Z-tau test. Same hypotheses and critical values as
/// [`adf_test`], with a Newey-West correction for serial correlation in
/// place of lagged-difference regressors.
pub fn pp_test<F: Scalar>(
    s: &Series<F>,
    cfg: &UnitRootConfig,
    alpha: F,
) -> Result<TestOutcome<F>> {
    check_alpha(alpha)?;
    let n = s.len();
    if n < 50 {
        return Err(Error::arg(format!(
            "pp_test needs at least 50 samples, got {n}"
        )));
    }
    let y = s.values();
    let rows = n - 1;
    let target: Vec<F> = (1..n).map(|t| y[t] - y[t - 1]).collect();
    let mut columns = vec![y[..n - 1].to_vec()];
    append_deterministic(&mut columns, rows, cfg.deterministic);
    let k = columns.len();
    let fit = linalg::ols(&columns, &target)?;
    let t_stat = (fit.coeffs[0] / fit.std_errors[0]).to64();
    let se = fit.std_errors[0].to64();
    let u: Vec<f64> = fit.residuals.iter().map(|r| r.to64()).collect();

    let nf = rows as f64;
    let gamma0: f64 = u.iter().map(|v| v * v).sum::<f64>() / nf;
    let bandwidth = (4.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize;
    let mut lam2 = gamma0;
    for j in 1..=bandwidth.min(rows - 1) {
        let gj: f64 = u[j..].iter().zip(&u[..rows - j]).map(|(a, b)| a * b).sum::<f64>() / nf;
        lam2 += 2.0 * (1.0 - j as f64 / (bandwidth as f64 + 1.0)) * gj;
    }
    if lam2 <= 0.0 {
        lam2 = gamma0;
    }
    let s2 = fit.rss.to64() / (nf - k as f64);
    let lam = lam2.sqrt();
    let z_tau = (gamma0 / lam2).sqrt() * t_stat - nf * se * (lam2 - gamma0) / (2.0 * lam * s2);

    Ok(df_outcome(F::c(z_tau), cfg.deterministic, alpha))
}

fn append_deterministic<F: Scalar>(columns: &mut Vec<Vec<F>>, rows: usize, det: Deterministic) {
    match det {
        Deterministic::None => {}
        Deterministic::Drift => columns.push(vec![F::one(); rows]),
        Deterministic::Trend => {
            columns.push(vec![F::one(); rows]);
            columns.push((0..rows).map(|t| F::of(t + 1)).collect());
        }
    }
}

fn df_outcome<F: Scalar>(stat: F, det: Deterministic, alpha: F) -> TestOutcome<F> {
    let p = dickey_fuller_p_value(stat.to64(), det);
    let crit = dickey_fuller_critical_value(alpha.to64(), det);
    TestOutcome {
        statistic: stat,
        p_value: Some(F::c(p)),
        critical_lower: Some(F::c(crit)),
        critical_upper: None,
        tail: Tail::Left,
        reject_null: p < alpha.to64(),
        alpha,
    }
}

/// Least-squares AR(1) coefficient; values above 0.967 indicate an
/// integrating effect regardless of heteroskedasticity.
pub fn ar1_coefficient<F: Scalar>(s: &Series<F>) -> Result<F> {
    let n = s.len();
    if n < 100 {
        return Err(Error::arg(format!(
            "ar1_coefficient needs at least 100 samples, got {n}"
        )));
    }
    let y = s.values();
    let target = y[1..].to_vec();
    let columns = vec![y[..n - 1].to_vec(), vec![F::one(); n - 1]];
    let fit = linalg::ols(&columns, &target).map_err(|e| match e {
        Error::DegenerateInput(_) => Error::degenerate("zero-variance series has no AR(1) fit"),
        other => other,
    })?;
    Ok(fit.coeffs[0])
}

/// Threshold from the methodology: AR(1) estimates above this value are
/// treated as evidence of an integrating effect.
pub const AR1_UNIT_ROOT_THRESHOLD: f64 = 0.967;
