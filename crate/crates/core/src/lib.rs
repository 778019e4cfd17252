//! Seismic-noise characterization and time-series modeling.
//!
//! The crate walks a noise record through a fixed battery of hypothesis
//! tests — unit roots (ADF, PP, AR(1) heuristic), second-order stationarity
//! (Priestley-Subba Rao), linearity (AAFT surrogates + correlation
//! dimension), Gaussianity (Shapiro-Wilk) and ARCH effects — and then fits a
//! commensurate ARIMA(p,d,m)-GARCH(P,Q) model, validating it through
//! residual whiteness and coefficient significance.
//!
//! Everything is generic over the sample scalar (`f32` or `f64`) through the
//! [`Scalar`] trait; the `*64` aliases below are the types most callers want.

pub mod arima;
mod dist;
pub mod error;
pub mod garch;
mod linalg;
pub mod nonlinearity;
mod optim;
pub mod pipeline;
pub mod scalar;
pub mod series;
pub mod stat_tests;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use series::{CorrelationSequence, Series, Spectrum, Taper};

/// `f64` concrete aliases for the main domain types.
pub type Series64 = Series<f64>;
pub type Series32 = Series<f32>;
pub type ArimaModel64 = arima::ArimaModel<f64>;
pub type GarchModel64 = garch::GarchModel<f64>;
pub type PipelineConfig64 = pipeline::PipelineConfig<f64>;
pub type CharacterizationReport64 = pipeline::CharacterizationReport<f64>;

/// Shared coefficient-with-uncertainty representation for fitted models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coeff<F: Scalar> {
    pub value: F,
    pub std_err: F,
    /// True when the coefficient was pinned to zero during re-estimation.
    pub pinned: bool,
}

impl<F: Scalar> Coeff<F> {
    pub fn new(value: F, std_err: F) -> Self {
        Coeff {
            value,
            std_err,
            pinned: false,
        }
    }

    pub fn pinned_zero() -> Self {
        Coeff {
            value: F::zero(),
            std_err: F::zero(),
            pinned: true,
        }
    }

    /// Whether the (1 - alpha) normal confidence interval excludes zero.
    pub fn significant(&self, alpha: F) -> bool {
        if self.pinned {
            return true;
        }
        if self.std_err <= F::zero() {
            return self.value != F::zero();
        }
        let z = F::c(crate::dist::norm_ppf(1.0 - alpha.to64() / 2.0));
        self.value.abs() > z * self.std_err
    }
}
