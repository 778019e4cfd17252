//! Engle's ARCH Lagrange-multiplier test on a residual series.

use crate::dist;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::series::Series;

use super::{check_alpha, Tail, TestOutcome};

/// ARCH LM test: regress `x^2[k]` on its first `order` lags and an
/// intercept; N*R^2 is chi-square with `order` degrees of freedom under the
/// no-ARCH null. Right-tailed.
pub fn arch_lm_test<F: Scalar>(x: &Series<F>, order: usize, alpha: F) -> Result<TestOutcome<F>> {
    check_alpha(alpha)?;
    if order == 0 {
        return Err(Error::arg("arch_lm_test needs order >= 1"));
    }
    let n = x.len();
    if n < 20 * (order + 1) {
        return Err(Error::arg(format!(
            "arch_lm_test needs at least {} samples for order {order}, got {n}",
            20 * (order + 1)
        )));
    }
    let sq: Vec<F> = x.values().iter().map(|&v| v * v).collect();
    let rows = n - order;
    let target = sq[order..].to_vec();
    let mut columns: Vec<Vec<F>> = vec![vec![F::one(); rows]];
    for j in 1..=order {
        columns.push(sq[order - j..n - j].to_vec());
    }
    let fit = linalg::ols(&columns, &target).map_err(|e| match e {
        Error::DegenerateInput(_) => Error::degenerate("constant series has no ARCH structure"),
        other => other,
    })?;

    let mean = target.iter().copied().sum::<F>() / F::of(rows);
    let tss: F = target.iter().map(|&v| (v - mean) * (v - mean)).sum();
    if tss <= F::zero() {
        return Err(Error::degenerate("constant squared series"));
    }
    let r2 = F::one() - fit.rss / tss;
    let stat = (F::of(rows) * r2).to64();
    let df = order as f64;
    let p = 1.0 - dist::chi2_cdf(stat, df);
    let crit = dist::chi2_ppf(1.0 - alpha.to64(), df);
    Ok(TestOutcome {
        statistic: F::c(stat),
        p_value: Some(F::c(p)),
        critical_lower: None,
        critical_upper: Some(F::c(crit)),
        tail: Tail::Right,
        reject_null: p < alpha.to64(),
        alpha,
    })
}
