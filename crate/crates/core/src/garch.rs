//! GARCH(P,Q) estimation on pre-whitened residuals, simulation, and
//! standardized-residual validation.
//!
//! Variance recursion: sigma2[k] = c0 + sum b_i x^2[k-i] + sum a_j sigma2[k-j],
//! with c0 > 0, b_i >= 0, a_j >= 0 and persistence sum(b) + sum(a) < 1.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg;
use crate::optim::NelderMead;
use crate::scalar::Scalar;
use crate::series::Series;
use crate::stat_tests::{default_whiteness_lag, whiteness_test, WhitenessOutcome};
use crate::Coeff;

/// Fitted (or specified) GARCH model.
#[derive(Debug, Clone, PartialEq)]
pub struct GarchModel<F: Scalar> {
    /// ARCH order P (coefficients on lagged squared innovations).
    pub p: usize,
    /// GARCH order Q (coefficients on lagged variances).
    pub q: usize,
    pub c0: Coeff<F>,
    /// b_1..b_P.
    pub arch_coeffs: Vec<Coeff<F>>,
    /// a_1..a_Q.
    pub garch_coeffs: Vec<Coeff<F>>,
    pub log_likelihood: F,
    pub aic: F,
    pub n_fit: usize,
    pub flags: GarchFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GarchFlags {
    /// Persistence above 0.999 at the optimum.
    pub near_integrated_variance: bool,
    /// The optimizer pushed persistence onto the stationarity wall.
    pub nonstationary_variance: bool,
}

impl<F: Scalar> GarchModel<F> {
    pub fn from_coefficients(c0: F, arch: &[F], garch: &[F]) -> Result<Self> {
        if arch.is_empty() {
            return Err(Error::arg("GARCH needs P >= 1"));
        }
        if !(c0 > F::zero()) {
            return Err(Error::arg("c0 must be > 0"));
        }
        if arch.iter().chain(garch.iter()).any(|&v| v < F::zero()) {
            return Err(Error::arg("GARCH coefficients must be nonnegative"));
        }
        let pers: F = arch.iter().copied().sum::<F>() + garch.iter().copied().sum::<F>();
        if !(pers < F::one()) {
            return Err(Error::arg("persistence must be < 1"));
        }
        Ok(GarchModel {
            p: arch.len(),
            q: garch.len(),
            c0: Coeff::new(c0, F::zero()),
            arch_coeffs: arch.iter().map(|&v| Coeff::new(v, F::zero())).collect(),
            garch_coeffs: garch.iter().map(|&v| Coeff::new(v, F::zero())).collect(),
            log_likelihood: F::nan(),
            aic: F::nan(),
            n_fit: 0,
            flags: GarchFlags::default(),
        })
    }

    pub fn persistence(&self) -> F {
        self.arch_coeffs
            .iter()
            .chain(self.garch_coeffs.iter())
            .map(|c| c.value)
            .sum()
    }

    /// Unconditional innovation variance c0 / (1 - persistence).
    pub fn unconditional_variance(&self) -> F {
        self.c0.value / (F::one() - self.persistence())
    }

    fn params_f64(&self) -> (f64, Vec<f64>, Vec<f64>) {
        (
            self.c0.value.to64(),
            self.arch_coeffs.iter().map(|c| c.value.to64()).collect(),
            self.garch_coeffs.iter().map(|c| c.value.to64()).collect(),
        )
    }
}

/// A fitted model plus the standardized residuals z[k] = x[k] / sigma[k].
#[derive(Debug, Clone)]
pub struct GarchFit<F: Scalar> {
    pub model: GarchModel<F>,
    pub standardized: Series<F>,
    pub converged: bool,
}

/// Whiteness checks on standardized residuals and their squares.
#[derive(Debug, Clone)]
pub struct GarchValidation<F: Scalar> {
    pub residual_whiteness: WhitenessOutcome<F>,
    pub squared_whiteness: WhitenessOutcome<F>,
}

impl<F: Scalar> GarchValidation<F> {
    /// Model accepted when both checks pass.
    pub fn accepted(&self) -> bool {
        self.residual_whiteness.is_white() && self.squared_whiteness.is_white()
    }
}

const PERSISTENCE_WALL: f64 = 0.999999;

/// Gaussian quasi-maximum-likelihood fit. Pre-sample variance and squared
/// innovations are initialized at the sample variance of `x`.
pub fn fit_garch<F: Scalar>(x: &Series<F>, p: usize, q: usize) -> Result<GarchFit<F>> {
    if p == 0 {
        return Err(Error::arg("fit_garch needs P >= 1"));
    }
    if p > 4 || q > 4 {
        return Err(Error::arg("GARCH orders are capped at 4"));
    }
    let n = x.len();
    if n < 1000 {
        return Err(Error::arg(format!(
            "fit_garch needs at least 1000 samples, got {n}"
        )));
    }
    let xs: Vec<f64> = x.values().iter().map(|v| v.to64()).collect();
    let var: f64 = xs.iter().map(|v| v * v).sum::<f64>() / n as f64;
    if !(var > 0.0) {
        return Err(Error::degenerate("zero-variance residual series"));
    }

    let xsq: Vec<f64> = xs.iter().map(|v| v * v).collect();
    let nll = |theta: &[f64]| garch_nll(theta, &xsq, var, p, q);

    // Parameter layout: [c0, b_1..b_P, a_1..a_Q], optimized in natural space
    // against constraint walls, from several deterministic starts.
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for &(btot, atot) in &[(0.10, 0.80), (0.05, 0.45), (0.30, 0.0), (0.02, 0.02)] {
        let atot = if q == 0 { 0.0 } else { atot };
        let mut v = vec![var * (1.0 - btot - atot)];
        v.extend(std::iter::repeat(btot / p as f64).take(p));
        v.extend(std::iter::repeat(atot / q.max(1) as f64).take(q));
        starts.push(v);
    }
    let nm = NelderMead {
        max_iter: 2000 * (1 + p + q),
        ftol: 1e-11,
        initial_step: 0.25,
    };
    // When the data carry no ARCH structure the likelihood is flat along a
    // (c0, a) ridge at b = 0; break near-ties toward lower persistence.
    let mut best: Option<crate::optim::OptimOutcome> = None;
    for s0 in &starts {
        let rough = nm.minimize_restarted(&nll, s0);
        let polished = crate::optim::bfgs_polish(&nll, &rough.x, 150);
        let out = if polished.fx < rough.fx { polished } else { rough };
        let better = match &best {
            None => true,
            Some(b) => {
                // Half a nat is far inside likelihood-ratio noise for these
                // parameter counts.
                let tol = 0.5;
                out.fx < b.fx - tol
                    || ((out.fx - b.fx).abs() <= tol
                        && out.x[1..].iter().sum::<f64>() < b.x[1..].iter().sum::<f64>())
            }
        };
        if better {
            best = Some(out);
        }
    }
    let best = best.expect("at least one start");
    if !best.fx.is_finite() {
        return Err(Error::Estimation("GARCH likelihood never became finite".into()));
    }

    let theta = best.x;
    let ll = -best.fx;
    let pers: f64 = theta[1..].iter().sum();
    let flags = GarchFlags {
        near_integrated_variance: pers > 0.999,
        nonstationary_variance: pers >= PERSISTENCE_WALL * 0.999,
    };

    let se = garch_std_errors(&nll, &theta);
    let k = (1 + p + q) as f64;
    let aic = 2.0 * k - 2.0 * ll;

    // Standardized residuals from the fitted recursion.
    let sig2 = garch_sigma2_path(&theta, &xsq, var, p, q);
    let standardized: Vec<F> = xs
        .iter()
        .zip(&sig2)
        .map(|(&v, &s2)| F::c(v / s2.sqrt()))
        .collect();

    let model = GarchModel {
        p,
        q,
        c0: Coeff::new(F::c(theta[0]), F::c(se[0])),
        arch_coeffs: (0..p)
            .map(|i| Coeff::new(F::c(theta[1 + i]), F::c(se[1 + i])))
            .collect(),
        garch_coeffs: (0..q)
            .map(|j| Coeff::new(F::c(theta[1 + p + j]), F::c(se[1 + p + j])))
            .collect(),
        log_likelihood: F::c(ll),
        aic: F::c(aic),
        n_fit: n,
        flags,
    };
    Ok(GarchFit {
        model,
        standardized: Series::new(standardized, x.sample_rate())?,
        converged: best.converged,
    })
}

fn garch_constraints_ok(theta: &[f64], var: f64) -> bool {
    if theta[0] < var * 1e-12 || !theta[0].is_finite() {
        return false;
    }
    if theta[1..].iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return false;
    }
    theta[1..].iter().sum::<f64>() < PERSISTENCE_WALL
}

fn garch_sigma2_path(theta: &[f64], xsq: &[f64], var: f64, p: usize, q: usize) -> Vec<f64> {
    let n = xsq.len();
    let c0 = theta[0];
    let b = &theta[1..1 + p];
    let a = &theta[1 + p..1 + p + q];
    let mut sig2 = vec![0.0f64; n];
    for k in 0..n {
        let mut s = c0;
        for (i, &bi) in b.iter().enumerate() {
            s += bi * if k > i { xsq[k - i - 1] } else { var };
        }
        for (j, &aj) in a.iter().enumerate() {
            s += aj * if k > j { sig2[k - j - 1] } else { var };
        }
        sig2[k] = s;
    }
    sig2
}

fn garch_nll(theta: &[f64], xsq: &[f64], var: f64, p: usize, q: usize) -> f64 {
    if !garch_constraints_ok(theta, var) {
        return f64::INFINITY;
    }
    let sig2 = garch_sigma2_path(theta, xsq, var, p, q);
    let mut nll = 0.5 * xsq.len() as f64 * (2.0 * std::f64::consts::PI).ln();
    for (s2, &x2) in sig2.iter().zip(xsq) {
        nll += 0.5 * (s2.ln() + x2 / s2);
    }
    if nll.is_finite() {
        nll
    } else {
        f64::INFINITY
    }
}

fn garch_std_errors(nll: &impl Fn(&[f64]) -> f64, theta: &[f64]) -> Vec<f64> {
    let dim = theta.len();
    let mut h: Vec<f64> = theta.iter().map(|v| 1e-5 * (1.0 + v.abs())).collect();
    for _ in 0..4 {
        if let Some(se) = hessian_se(nll, theta, &h) {
            return se;
        }
        for hi in h.iter_mut() {
            *hi *= 0.5;
        }
    }
    vec![f64::NAN; dim]
}

fn hessian_se(nll: &impl Fn(&[f64]) -> f64, c: &[f64], h: &[f64]) -> Option<Vec<f64>> {
    let dim = c.len();
    let f0 = nll(c);
    if !f0.is_finite() {
        return None;
    }
    let mut hess = vec![vec![0.0f64; dim]; dim];
    for i in 0..dim {
        let mut up = c.to_vec();
        up[i] += h[i];
        let mut dn = c.to_vec();
        dn[i] = (dn[i] - h[i]).max(0.0);
        let (fu, fd) = (nll(&up), nll(&dn));
        if !fu.is_finite() || !fd.is_finite() {
            return None;
        }
        hess[i][i] = (fu + fd - 2.0 * f0) / (h[i] * h[i]);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut pp = c.to_vec();
            pp[i] += h[i];
            pp[j] += h[j];
            let mut pm = c.to_vec();
            pm[i] += h[i];
            pm[j] -= h[j];
            let mut mp = c.to_vec();
            mp[i] -= h[i];
            mp[j] += h[j];
            let mut mm = c.to_vec();
            mm[i] -= h[i];
            mm[j] -= h[j];
            let vals = [nll(&pp), nll(&pm), nll(&mp), nll(&mm)];
            if !vals.iter().all(|v| v.is_finite()) {
                return None;
            }
            let v = (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h[i] * h[j]);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    let cov = linalg::spd_inverse(&hess)?;
    Some((0..dim).map(|i| cov[i][i].max(0.0).sqrt()).collect())
}

/// Simulate a GARCH path with standard-Gaussian driving noise; 1000 burn-in
/// samples are discarded. Deterministic given the seed.
pub fn simulate_garch<F: Scalar>(model: &GarchModel<F>, n: usize, seed: u64) -> Result<Series<F>> {
    if n == 0 {
        return Err(Error::arg("simulation length must be >= 1"));
    }
    let (c0, b, a) = model.params_f64();
    let pers: f64 = b.iter().sum::<f64>() + a.iter().sum::<f64>();
    if !(pers < 1.0) || c0 <= 0.0 {
        return Err(Error::arg("model violates GARCH invariants"));
    }
    let burn = 1000;
    let total = n + burn;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uncond = c0 / (1.0 - pers);
    let mut x = vec![0.0f64; total];
    let mut sig2 = vec![uncond; total];
    for k in 0..total {
        let mut s = c0;
        for (i, &bi) in b.iter().enumerate() {
            s += bi * if k > i { x[k - i - 1] * x[k - i - 1] } else { uncond };
        }
        for (j, &aj) in a.iter().enumerate() {
            s += aj * if k > j { sig2[k - j - 1] } else { uncond };
        }
        sig2[k] = s;
        let z: f64 = StandardNormal.sample(&mut rng);
        x[k] = s.sqrt() * z;
    }
    Series::new(x[burn..].iter().map(|&v| F::c(v)).collect(), F::one())
}

/// Whiteness of the standardized residuals and of their squares; the model
/// is accepted when both pass.
pub fn validate_garch<F: Scalar>(
    _model: &GarchModel<F>,
    standardized: &Series<F>,
    alpha: F,
) -> Result<GarchValidation<F>> {
    let lag = default_whiteness_lag(standardized.len());
    let residual_whiteness = whiteness_test(standardized, lag, alpha)?;
    let squared: Vec<F> = standardized.values().iter().map(|&z| z * z).collect();
    let squared = Series::new(squared, standardized.sample_rate())?;
    let squared_whiteness = whiteness_test(&squared, lag, alpha)?;
    Ok(GarchValidation {
        residual_whiteness,
        squared_whiteness,
    })
}
