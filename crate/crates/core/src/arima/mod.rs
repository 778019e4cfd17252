//! ARIMA(p,d,m) estimation, simulation, order selection and the
//! underfit/overfit validation loop.
//!
//! Model convention: (1 - sum phi_i q^-i) (1-q^-1)^d y[k] = (1 + sum theta_j q^-j) e[k],
//! with e[k] zero-mean white noise of variance sigma_e^2.

mod estimate;
mod select;

pub use estimate::{fit_arima, fit_arma};
pub use select::{determine_d, select_order, DStage, IntegrationOutcome};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::garch::GarchModel;
use crate::scalar::Scalar;
use crate::series::Series;
use crate::stat_tests::WhitenessOutcome;
use crate::Coeff;

/// Fitted (or specified) ARIMA model.
#[derive(Debug, Clone, PartialEq)]
pub struct ArimaModel<F: Scalar> {
    pub p: usize,
    pub d: usize,
    pub m: usize,
    /// AR coefficients phi_1..phi_p.
    pub ar: Vec<Coeff<F>>,
    /// MA coefficients theta_1..theta_m.
    pub ma: Vec<Coeff<F>>,
    /// Innovation variance sigma_e^2.
    pub sigma2: F,
    /// Length of the series the model was fitted on (before differencing).
    pub n_fit: usize,
    pub log_likelihood: F,
    pub aic: F,
    pub bic: F,
    pub flags: ModelFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelFlags {
    /// Some reflection coefficient ended within 1e-3 of the unit circle.
    pub boundary: bool,
    /// Order selection could not validate any candidate.
    pub not_validated: bool,
}

impl<F: Scalar> ArimaModel<F> {
    /// Build a model from raw coefficients, enforcing stationarity of the AR
    /// polynomial, invertibility of the MA polynomial and sigma2 > 0.
    pub fn from_coefficients(
        p: usize,
        d: usize,
        m: usize,
        ar: &[F],
        ma: &[F],
        sigma2: F,
    ) -> Result<Self> {
        if ar.len() != p || ma.len() != m {
            return Err(Error::arg("coefficient count does not match orders"));
        }
        if !(sigma2 > F::zero()) {
            return Err(Error::arg("sigma2 must be > 0"));
        }
        let phi: Vec<f64> = ar.iter().map(|v| v.to64()).collect();
        if ar_reflection(&phi).is_none() {
            return Err(Error::arg("AR polynomial is not stationary"));
        }
        let tht: Vec<f64> = ma.iter().map(|v| -v.to64()).collect();
        if ar_reflection(&tht).is_none() {
            return Err(Error::arg("MA polynomial is not invertible"));
        }
        Ok(ArimaModel {
            p,
            d,
            m,
            ar: ar.iter().map(|&v| Coeff::new(v, F::zero())).collect(),
            ma: ma.iter().map(|&v| Coeff::new(v, F::zero())).collect(),
            sigma2,
            n_fit: 0,
            log_likelihood: F::nan(),
            aic: F::nan(),
            bic: F::nan(),
            flags: ModelFlags::default(),
        })
    }

    pub fn ar_values(&self) -> Vec<F> {
        self.ar.iter().map(|c| c.value).collect()
    }

    pub fn ma_values(&self) -> Vec<F> {
        self.ma.iter().map(|c| c.value).collect()
    }

    /// Number of freely estimated parameters, including sigma2.
    pub fn n_free_parameters(&self) -> usize {
        1 + self
            .ar
            .iter()
            .chain(self.ma.iter())
            .filter(|c| !c.pinned)
            .count()
    }
}

/// Residual diagnostics attached to a fit.
#[derive(Debug, Clone)]
pub struct FitDiagnostics<F: Scalar> {
    pub residuals: Series<F>,
    pub whiteness: WhitenessOutcome<F>,
    /// Names ("ar1", "ma2", ...) of parameters whose confidence interval
    /// includes zero at the fit's significance level.
    pub insignificant_params: Vec<String>,
    pub converged: bool,
}

/// A fitted model together with its diagnostics.
#[derive(Debug, Clone)]
pub struct ArimaFit<F: Scalar> {
    pub model: ArimaModel<F>,
    pub diagnostics: FitDiagnostics<F>,
}

/// Innovation source for [`simulate_arima`].
#[derive(Debug, Clone, Copy)]
pub enum Innovation<'a, F: Scalar> {
    /// Gaussian white noise with the model's sigma2.
    Gaussian,
    /// Innovations drawn from a GARCH process.
    GarchDriven(&'a GarchModel<F>),
}

/// Simulate from an ARIMA model. Deterministic given the seed; a burn-in of
/// 10*(p+m+1) samples is discarded before integration.
pub fn simulate_arima<F: Scalar>(
    model: &ArimaModel<F>,
    n: usize,
    seed: u64,
    innovation: Innovation<'_, F>,
) -> Result<Series<F>> {
    if n == 0 {
        return Err(Error::arg("simulation length must be >= 1"));
    }
    let p = model.p;
    let m = model.m;
    let burn = 10 * (p + m + 1);
    let total = n + burn;

    let e: Vec<f64> = match innovation {
        Innovation::Gaussian => {
            let sd = model.sigma2.to64().sqrt();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..total)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z * sd
                })
                .collect()
        }
        Innovation::GarchDriven(g) => {
            let inner = crate::garch::simulate_garch::<F>(g, total, seed)?;
            inner.values().iter().map(|v| v.to64()).collect()
        }
    };

    let phi: Vec<f64> = model.ar.iter().map(|c| c.value.to64()).collect();
    let theta: Vec<f64> = model.ma.iter().map(|c| c.value.to64()).collect();
    let mut w = vec![0.0f64; total];
    for k in 0..total {
        let mut v = e[k];
        for (j, &th) in theta.iter().enumerate() {
            if k > j {
                v += th * e[k - j - 1];
            }
        }
        for (i, &ph) in phi.iter().enumerate() {
            if k > i {
                v += ph * w[k - i - 1];
            }
        }
        w[k] = v;
    }
    let mut out: Vec<f64> = w[burn..].to_vec();
    for _ in 0..model.d {
        for k in 1..out.len() {
            out[k] += out[k - 1];
        }
    }
    Series::new(out.into_iter().map(F::c).collect(), F::one())
}

/// Reflection coefficients of a stationary AR polynomial
/// (1 - sum phi_i z^i), or `None` when some |r| >= 1 (non-stationary).
pub(crate) fn ar_reflection(phi: &[f64]) -> Option<Vec<f64>> {
    let p = phi.len();
    let mut c = phi.to_vec();
    let mut refl = vec![0.0; p];
    for k in (1..=p).rev() {
        let r = c[k - 1];
        if !(r.abs() < 1.0) {
            return None;
        }
        refl[k - 1] = r;
        if k > 1 {
            let denom = 1.0 - r * r;
            let prev: Vec<f64> = (0..k - 1)
                .map(|i| (c[i] + r * c[k - 2 - i]) / denom)
                .collect();
            c[..k - 1].copy_from_slice(&prev);
        }
    }
    Some(refl)
}

/// Inverse of [`ar_reflection`]: build AR coefficients from reflection
/// coefficients in (-1, 1).
pub(crate) fn reflection_to_ar(refl: &[f64]) -> Vec<f64> {
    let p = refl.len();
    let mut c = vec![0.0f64; p];
    for (k, &r) in refl.iter().enumerate() {
        // Extend from order k to k+1.
        let prev = c[..k].to_vec();
        for i in 0..k {
            c[i] = prev[i] - r * prev[k - 1 - i];
        }
        c[k] = r;
    }
    c
}
