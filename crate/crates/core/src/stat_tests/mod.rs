//! Classical hypothesis tests used by the characterization pipeline:
//! ADF and PP unit-root tests, the AR(1)-coefficient heuristic, the
//! Priestley-Subba Rao stationarity test, Engle's ARCH LM test, the
//! Shapiro-Wilk normality test and residual-whiteness checks.

mod arch_lm;
mod psr;
mod shapiro;
mod unit_root;
mod whiteness;

pub use arch_lm::arch_lm_test;
pub use psr::{psr_defaults, psr_test, psr_test_with_tapers, PsrOutcome};
pub use shapiro::{shapiro_wilk, sw_weights, SwWeights};
pub use unit_root::{
    adf_test, ar1_coefficient, dickey_fuller_critical_value, dickey_fuller_p_value, pp_test,
    Deterministic, LagOrder, UnitRootConfig, AR1_UNIT_ROOT_THRESHOLD,
};
pub use whiteness::{default_whiteness_lag, ljung_box, whiteness_test, WhitenessOutcome};

use crate::scalar::Scalar;

/// Which tail of the null distribution rejects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Left,
    Right,
    Two,
}

/// Outcome of a single hypothesis test.
///
/// `p_value` is absent for tests defined only through critical values
/// (the surrogate envelope test, the ACF band check).
#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome<F: Scalar> {
    pub statistic: F,
    pub p_value: Option<F>,
    pub critical_lower: Option<F>,
    pub critical_upper: Option<F>,
    pub tail: Tail,
    pub reject_null: bool,
    pub alpha: F,
}

impl<F: Scalar> TestOutcome<F> {
    /// Recompute the decision from the stored statistic, critical values and
    /// p-value; true when it reproduces `reject_null`.
    pub fn decision_consistent(&self) -> bool {
        let from_crit = match self.tail {
            Tail::Left => self.critical_lower.map(|c| self.statistic < c),
            Tail::Right => self.critical_upper.map(|c| self.statistic > c),
            Tail::Two => match (self.critical_lower, self.critical_upper) {
                (Some(lo), Some(hi)) => Some(self.statistic < lo || self.statistic > hi),
                _ => None,
            },
        };
        let crit_ok = from_crit.map_or(true, |r| r == self.reject_null);
        let p_ok = self
            .p_value
            .map_or(true, |p| (p < self.alpha) == self.reject_null);
        crit_ok && p_ok
    }
}

pub(crate) fn check_alpha<F: Scalar>(alpha: F) -> crate::Result<()> {
    if alpha <= F::zero() || alpha >= F::one() {
        return Err(crate::Error::arg("significance level must lie in (0, 1)"));
    }
    Ok(())
}
