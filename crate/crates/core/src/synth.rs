//! Ground-truth process generators used as oracles: composite ARIMA-GARCH,
//! variance-step, bilinear and chaotic-map series.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::arima::{simulate_arima, ArimaModel, Innovation};
use crate::error::{Error, Result};
use crate::garch::{simulate_garch, GarchModel};
use crate::scalar::Scalar;
use crate::series::Series;

/// What to generate.
#[derive(Debug, Clone)]
pub enum ProcessKind<F: Scalar> {
    /// Gaussian white noise with the given variance.
    Gwn { sigma2: F },
    /// ARIMA with Gaussian innovations.
    Arima { model: ArimaModel<F> },
    /// Plain GARCH innovations.
    Garch { model: GarchModel<F> },
    /// ARIMA driven by GARCH innovations (the composite model).
    ArimaGarch {
        arima: ArimaModel<F>,
        garch: GarchModel<F>,
    },
    /// White noise whose standard deviation switches at the midpoint.
    VarianceStep { sigma1: F, sigma2: F },
    /// y[k] = 0.4 y[k-1] + 0.4 y[k-1] e[k-1] + e[k].
    Bilinear,
    /// First coordinate of the Henon map (a = 1.4, b = 0.3).
    Henon,
}

/// A reproducible process specification.
#[derive(Debug, Clone)]
pub struct ProcessSpec<F: Scalar> {
    pub kind: ProcessKind<F>,
    pub n: usize,
    pub seed: u64,
}

const MAP_BURN: usize = 1000;

/// Generate a series from the specification. Identical specs produce
/// identical output.
pub fn generate<F: Scalar>(spec: &ProcessSpec<F>) -> Result<Series<F>> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::arg("process length must be >= 1"));
    }
    let seed = spec.seed;
    match &spec.kind {
        ProcessKind::Gwn { sigma2 } => {
            if !(*sigma2 > F::zero()) {
                return Err(Error::arg("gwn variance must be > 0"));
            }
            let sd = sigma2.to64().sqrt();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v: Vec<F> = (0..n)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    F::c(z * sd)
                })
                .collect();
            Series::new(v, F::one())
        }
        ProcessKind::Arima { model } => simulate_arima(model, n, seed, Innovation::Gaussian),
        ProcessKind::Garch { model } => simulate_garch(model, n, seed),
        ProcessKind::ArimaGarch { arima, garch } => {
            simulate_arima(arima, n, seed, Innovation::GarchDriven(garch))
        }
        ProcessKind::VarianceStep { sigma1, sigma2 } => {
            if !(*sigma1 > F::zero()) || !(*sigma2 > F::zero()) {
                return Err(Error::arg("variance-step sigmas must be > 0"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let half = n / 2;
            let v: Vec<F> = (0..n)
                .map(|k| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let sd = if k < half { *sigma1 } else { *sigma2 };
                    sd * F::c(z)
                })
                .collect();
            Series::new(v, F::one())
        }
        ProcessKind::Bilinear => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let total = n + MAP_BURN;
            let mut y = 0.0f64;
            let mut e_prev = 0.0f64;
            let mut out = Vec::with_capacity(n);
            for k in 0..total {
                let e: f64 = StandardNormal.sample(&mut rng);
                y = 0.4 * y + 0.4 * y * e_prev + e;
                e_prev = e;
                if k >= MAP_BURN {
                    out.push(F::c(y));
                }
            }
            Series::new(out, F::one())
        }
        ProcessKind::Henon => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let jitter: f64 = StandardNormal.sample(&mut rng);
            let mut x = 0.1 + 1e-4 * jitter;
            let mut y = 0.1;
            let mut out = Vec::with_capacity(n);
            for k in 0..(n + MAP_BURN) {
                let nx = 1.0 - 1.4 * x * x + y;
                y = 0.3 * x;
                x = nx;
                if !x.is_finite() {
                    return Err(Error::Estimation("henon orbit diverged".into()));
                }
                if k >= MAP_BURN {
                    out.push(F::c(x));
                }
            }
            Series::new(out, F::one())
        }
    }
}

/// The published flagship model: ARIMA(5,2,3) with GARCH(1,1) innovations.
pub fn flagship_spec<F: Scalar>(n: usize, seed: u64) -> ProcessSpec<F> {
    let arima = ArimaModel::from_coefficients(
        5,
        2,
        3,
        &[
            F::c(1.29),
            F::c(-0.39),
            F::c(-0.17),
            F::c(0.29),
            F::c(-0.24),
        ],
        &[F::c(-0.54), F::c(-0.62), F::c(0.63)],
        F::c(44.91),
    )
    .expect("published coefficients are stationary and invertible");
    let garch = GarchModel::from_coefficients(F::c(0.31), &[F::c(0.019)], &[F::c(0.98)])
        .expect("published GARCH coefficients are admissible");
    ProcessSpec {
        kind: ProcessKind::ArimaGarch { arima, garch },
        n,
        seed,
    }
}
