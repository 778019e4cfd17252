//! Conditional-sum-of-squares ARMA estimation with Gaussian ML refinement.
//!
//! The optimizer works in an unconstrained space: each coefficient vector is
//! parameterized through its reflection coefficients (tanh-transformed), so
//! every candidate is stationary and invertible by construction. Standard
//! errors come from the numerically differentiated observed information in
//! the natural coefficient space.

use super::{ar_reflection, reflection_to_ar, ArimaFit, ArimaModel, FitDiagnostics, ModelFlags};
use crate::error::{Error, Result};
use crate::linalg;
use crate::optim::NelderMead;
use crate::scalar::Scalar;
use crate::series::Series;
use crate::stat_tests::{default_whiteness_lag, whiteness_test};
use crate::Coeff;

const MAX_ORDER: usize = 12;
const DIAGNOSTIC_ALPHA: f64 = 0.05;

/// Fit an ARMA(p,m) model to a stationary series (the d = 0 path).
/// The series is demeaned before estimation.
pub fn fit_arma<F: Scalar>(s: &Series<F>, p: usize, m: usize) -> Result<ArimaFit<F>> {
    fit_core(s, p, m, 0, s.len(), None, None)
}

/// Difference `d` times, then fit ARMA(p,m); the reported model stores `d`.
pub fn fit_arima<F: Scalar>(s: &Series<F>, p: usize, d: usize, m: usize) -> Result<ArimaFit<F>> {
    if d > 3 {
        return Err(Error::arg("differencing order d must be <= 3"));
    }
    let w = s.difference(d)?;
    fit_core(&w, p, m, d, s.len(), None, None)
}

/// Fit conditioning on a fixed number of leading samples, so that
/// likelihoods are comparable across candidate orders in a sweep.
pub(crate) fn fit_with_conditioning<F: Scalar>(
    w: &Series<F>,
    p: usize,
    m: usize,
    d: usize,
    n_orig: usize,
    kstart: usize,
) -> Result<ArimaFit<F>> {
    fit_core(w, p, m, d, n_orig, None, Some(kstart))
}

/// Refit with selected coefficients pinned to zero (overfit pruning).
pub(crate) fn refit_pinned<F: Scalar>(
    w: &Series<F>,
    p: usize,
    m: usize,
    d: usize,
    n_orig: usize,
    free_ar: Vec<bool>,
    free_ma: Vec<bool>,
) -> Result<ArimaFit<F>> {
    fit_core(w, p, m, d, n_orig, Some((free_ar, free_ma)), None)
}

type Mask = (Vec<bool>, Vec<bool>);

fn fit_core<F: Scalar>(
    w: &Series<F>,
    p: usize,
    m: usize,
    d: usize,
    n_orig: usize,
    mask: Option<Mask>,
    kstart_override: Option<usize>,
) -> Result<ArimaFit<F>> {
    if p > MAX_ORDER || m > MAX_ORDER {
        return Err(Error::arg(format!("orders are capped at {MAX_ORDER}")));
    }
    let n = w.len();
    if n < 50 * (p + m + 1) || n < 120 {
        return Err(Error::arg(format!(
            "fit needs at least {} samples for orders ({p},{m}), got {n}",
            (50 * (p + m + 1)).max(120)
        )));
    }

    let mu = w.mean();
    let x: Vec<f64> = w.values().iter().map(|&v| (v - mu).to64()).collect();
    if x.iter().all(|&v| v.abs() < 1e-300) {
        return Err(Error::degenerate("constant series has no ARMA structure"));
    }

    let kstart = kstart_override.unwrap_or(p.max(m)).max(p.max(m));
    let n_eff = n - kstart;

    let (phi, theta, converged) = if p + m == 0 {
        (Vec::new(), Vec::new(), true)
    } else {
        match &mask {
            None => estimate_full(&x, p, m, kstart),
            Some((fa, fm)) => estimate_masked(&x, p, m, kstart, fa, fm),
        }
    };

    let mut workspace = vec![0.0f64; n];
    let css = css_residuals(&x, &phi, &theta, kstart, &mut workspace);
    let sigma2 = css / n_eff as f64;
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::Estimation("degenerate innovation variance".into()));
    }
    let ll = -0.5 * n_eff as f64 * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0);

    // Observed-information standard errors in natural coordinates.
    let free: Vec<bool> = match &mask {
        None => vec![true; p + m],
        Some((fa, fm)) => fa.iter().chain(fm.iter()).copied().collect(),
    };
    let n_free = free.iter().filter(|&&f| f).count();
    let std_errors = if n_free > 0 {
        hessian_std_errors(&x, &phi, &theta, kstart, &free)
    } else {
        Vec::new()
    };
    let mut se_full = vec![f64::NAN; p + m];
    {
        let mut it = std_errors.iter();
        for (i, &f) in free.iter().enumerate() {
            if f {
                se_full[i] = *it.next().unwrap_or(&f64::NAN);
            } else {
                se_full[i] = 0.0;
            }
        }
    }

    let boundary = near_boundary(&phi, &theta);
    let ar: Vec<Coeff<F>> = (0..p)
        .map(|i| {
            if free[i] {
                Coeff::new(F::c(phi[i]), F::c(se_full[i]))
            } else {
                Coeff::pinned_zero()
            }
        })
        .collect();
    let ma: Vec<Coeff<F>> = (0..m)
        .map(|j| {
            if free[p + j] {
                Coeff::new(F::c(theta[j]), F::c(se_full[p + j]))
            } else {
                Coeff::pinned_zero()
            }
        })
        .collect();

    let k_params = (n_free + 1) as f64;
    let aic = 2.0 * k_params - 2.0 * ll;
    let bic = k_params * (n_eff as f64).ln() - 2.0 * ll;

    let residuals: Vec<F> = workspace[kstart..].iter().map(|&e| F::c(e)).collect();
    let residuals = Series::new(residuals, w.sample_rate())?;
    let whiteness = whiteness_test(
        &residuals,
        default_whiteness_lag(residuals.len()),
        F::c(DIAGNOSTIC_ALPHA),
    )?;

    let model = ArimaModel {
        p,
        d,
        m,
        ar,
        ma,
        sigma2: F::c(sigma2),
        n_fit: n_orig,
        log_likelihood: F::c(ll),
        aic: F::c(aic),
        bic: F::c(bic),
        flags: ModelFlags {
            boundary,
            not_validated: false,
        },
    };
    let insignificant_params = insignificant_names(&model, F::c(DIAGNOSTIC_ALPHA));
    Ok(ArimaFit {
        diagnostics: FitDiagnostics {
            residuals,
            whiteness,
            insignificant_params,
            converged,
        },
        model,
    })
}

pub(crate) fn insignificant_names<F: Scalar>(model: &ArimaModel<F>, alpha: F) -> Vec<String> {
    let mut names = Vec::new();
    for (i, c) in model.ar.iter().enumerate() {
        if !c.pinned && !c.significant(alpha) {
            names.push(format!("ar{}", i + 1));
        }
    }
    for (j, c) in model.ma.iter().enumerate() {
        if !c.pinned && !c.significant(alpha) {
            names.push(format!("ma{}", j + 1));
        }
    }
    names
}

/// Conditional residual recursion; returns the sum of squares over
/// k >= kstart and leaves the residual path in `e`.
fn css_residuals(x: &[f64], phi: &[f64], theta: &[f64], kstart: usize, e: &mut [f64]) -> f64 {
    let n = x.len();
    let p = phi.len();
    let mut css = 0.0;
    for k in 0..n {
        if k < p {
            e[k] = 0.0;
            continue;
        }
        let mut v = x[k];
        for (i, &ph) in phi.iter().enumerate() {
            v -= ph * x[k - i - 1];
        }
        for (j, &th) in theta.iter().enumerate() {
            if k > j && k - j - 1 >= p {
                v -= th * e[k - j - 1];
            }
        }
        e[k] = v;
        if k >= kstart {
            css += v * v;
        }
    }
    css
}

fn concentrated_nll(css: f64, n_eff: usize) -> f64 {
    if !(css > 0.0) || !css.is_finite() {
        return f64::INFINITY;
    }
    let nf = n_eff as f64;
    0.5 * nf * ((2.0 * std::f64::consts::PI * css / nf).ln() + 1.0)
}

/// Full-order estimation in the transformed (always-valid) space.
fn estimate_full(x: &[f64], p: usize, m: usize, kstart: usize) -> (Vec<f64>, Vec<f64>, bool) {
    let n = x.len();
    let n_eff = n - kstart;
    let (phi0, theta0) = hannan_rissanen(x, p, m);
    let eta0 = to_eta(&phi0, &theta0, p, m);

    let objective = |eta: &[f64]| {
        let (phi, theta) = from_eta(eta, p, m);
        let mut e = vec![0.0f64; n];
        concentrated_nll(css_residuals(x, &phi, &theta, kstart, &mut e), n_eff)
    };

    let nm = NelderMead {
        max_iter: 600 * (p + m).max(2),
        ftol: 1e-10,
        initial_step: 0.15,
    };
    let out = nm.minimize_restarted(&objective, &eta0);

    // A zero start guards against a bad Hannan-Rissanen initialization.
    let zero = vec![0.0; p + m];
    let alt = nm.minimize_restarted(&objective, &zero);
    let rough = if alt.fx < out.fx { alt } else { out };
    let polished = crate::optim::bfgs_polish(&objective, &rough.x, 200);
    let best = if polished.fx < rough.fx { polished } else { rough };

    let (phi, theta) = from_eta(&best.x, p, m);
    (phi, theta, best.converged)
}

/// Reduced estimation with pinned-to-zero coefficients, in natural space
/// with a stationarity/invertibility wall.
fn estimate_masked(
    x: &[f64],
    p: usize,
    m: usize,
    kstart: usize,
    free_ar: &[bool],
    free_ma: &[bool],
) -> (Vec<f64>, Vec<f64>, bool) {
    let n = x.len();
    let n_eff = n - kstart;
    let free: Vec<usize> = free_ar
        .iter()
        .chain(free_ma.iter())
        .enumerate()
        .filter_map(|(i, &f)| if f { Some(i) } else { None })
        .collect();
    if free.is_empty() {
        return (vec![0.0; p], vec![0.0; m], true);
    }

    let assemble = |v: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let mut phi = vec![0.0; p];
        let mut theta = vec![0.0; m];
        for (slot, &pos) in free.iter().enumerate() {
            if pos < p {
                phi[pos] = v[slot];
            } else {
                theta[pos - p] = v[slot];
            }
        }
        (phi, theta)
    };
    let objective = |v: &[f64]| {
        let (phi, theta) = assemble(v);
        if ar_reflection(&phi).is_none() {
            return f64::INFINITY;
        }
        let neg: Vec<f64> = theta.iter().map(|&t| -t).collect();
        if ar_reflection(&neg).is_none() {
            return f64::INFINITY;
        }
        let mut e = vec![0.0f64; n];
        concentrated_nll(css_residuals(x, &phi, &theta, kstart, &mut e), n_eff)
    };

    // Start from the full-model estimate restricted to the free slots.
    let (phi_full, theta_full, _) = estimate_full(x, p, m, kstart);
    let mut start: Vec<f64> = free
        .iter()
        .map(|&pos| {
            if pos < p {
                phi_full[pos]
            } else {
                theta_full[pos - p]
            }
        })
        .collect();
    let mut shrink = 0;
    while !objective(&start).is_finite() && shrink < 40 {
        for v in start.iter_mut() {
            *v *= 0.9;
        }
        shrink += 1;
    }

    let nm = NelderMead {
        max_iter: 600 * free.len().max(2),
        ftol: 1e-10,
        initial_step: 0.1,
    };
    let out = nm.minimize_restarted(&objective, &start);
    let polished = crate::optim::bfgs_polish(&objective, &out.x, 200);
    let best = if polished.fx < out.fx { polished } else { out };
    let (phi, theta) = assemble(&best.x);
    (phi, theta, best.converged)
}

/// Two-stage Hannan-Rissanen regression starts.
fn hannan_rissanen(x: &[f64], p: usize, m: usize) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    if m == 0 {
        // Pure AR: one OLS pass.
        let rows = n - p;
        let target = x[p..].to_vec();
        let cols: Vec<Vec<f64>> = (1..=p).map(|i| x[p - i..n - i].to_vec()).collect();
        if let Ok(fit) = linalg::ols(&cols, &target) {
            return (fit.coeffs, Vec::new());
        }
        let _ = rows;
        return (vec![0.0; p], Vec::new());
    }

    let long = (2 * (p + m)).max(20).min(n / 5);
    let mut ehat = vec![0.0f64; n];
    let target = x[long..].to_vec();
    let cols: Vec<Vec<f64>> = (1..=long).map(|i| x[long - i..n - i].to_vec()).collect();
    if let Ok(fit) = linalg::ols(&cols, &target) {
        ehat[long..].copy_from_slice(&fit.residuals);
    }

    let k0 = long + m;
    let rows = n - k0;
    if rows < 4 * (p + m + 1) {
        return (vec![0.0; p], vec![0.0; m]);
    }
    let target = x[k0..].to_vec();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p + m);
    for i in 1..=p {
        cols.push(x[k0 - i..n - i].to_vec());
    }
    for j in 1..=m {
        cols.push(ehat[k0 - j..n - j].to_vec());
    }
    match linalg::ols(&cols, &target) {
        Ok(fit) => (fit.coeffs[..p].to_vec(), fit.coeffs[p..].to_vec()),
        Err(_) => (vec![0.0; p], vec![0.0; m]),
    }
}

/// Map natural coefficients into the unconstrained space, shrinking toward
/// zero first if they sit outside the stationary/invertible region.
fn to_eta(phi: &[f64], theta: &[f64], p: usize, m: usize) -> Vec<f64> {
    let mut eta = Vec::with_capacity(p + m);
    eta.extend(coeffs_to_eta(&phi[..p.min(phi.len())], p, false));
    eta.extend(coeffs_to_eta(&theta[..m.min(theta.len())], m, true));
    eta
}

fn coeffs_to_eta(c: &[f64], len: usize, negate: bool) -> Vec<f64> {
    if len == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = c.iter().map(|&x| if negate { -x } else { x }).collect();
    v.resize(len, 0.0);
    let mut tries = 0;
    let refl = loop {
        if let Some(r) = ar_reflection(&v) {
            break r;
        }
        for x in v.iter_mut() {
            *x *= 0.85;
        }
        tries += 1;
        if tries > 80 {
            break vec![0.0; len];
        }
    };
    refl.iter()
        .map(|&r| r.clamp(-0.98, 0.98).atanh())
        .collect()
}

fn from_eta(eta: &[f64], p: usize, m: usize) -> (Vec<f64>, Vec<f64>) {
    let refl_ar: Vec<f64> = eta[..p].iter().map(|&u| u.tanh()).collect();
    let refl_ma: Vec<f64> = eta[p..p + m].iter().map(|&u| u.tanh()).collect();
    let phi = reflection_to_ar(&refl_ar);
    let theta: Vec<f64> = reflection_to_ar(&refl_ma).iter().map(|&a| -a).collect();
    (phi, theta)
}

fn near_boundary(phi: &[f64], theta: &[f64]) -> bool {
    let close = |r: Option<Vec<f64>>| match r {
        None => true,
        Some(v) => v.iter().any(|x| x.abs() > 0.999),
    };
    let neg: Vec<f64> = theta.iter().map(|&t| -t).collect();
    close(ar_reflection(phi)) || close(ar_reflection(&neg))
}

/// Central-difference observed information over the free coefficients,
/// inverted for standard errors.
fn hessian_std_errors(
    x: &[f64],
    phi: &[f64],
    theta: &[f64],
    kstart: usize,
    free: &[bool],
) -> Vec<f64> {
    let n = x.len();
    let n_eff = n - kstart;
    let p = phi.len();
    let all: Vec<f64> = phi.iter().chain(theta.iter()).copied().collect();
    let free_idx: Vec<usize> = free
        .iter()
        .enumerate()
        .filter_map(|(i, &f)| if f { Some(i) } else { None })
        .collect();
    let dim = free_idx.len();

    let eval = |v: &[f64]| -> f64 {
        let mut full = all.clone();
        for (slot, &pos) in free_idx.iter().enumerate() {
            full[pos] = v[slot];
        }
        let (ph, th) = full.split_at(p);
        let mut e = vec![0.0f64; n];
        concentrated_nll(css_residuals(x, ph, th, kstart, &mut e), n_eff)
    };

    let center: Vec<f64> = free_idx.iter().map(|&i| all[i]).collect();
    let mut h: Vec<f64> = center.iter().map(|v| 1e-4 * (1.0 + v.abs())).collect();

    for _ in 0..3 {
        if let Some(se) = try_hessian(&eval, &center, &h, dim) {
            return se;
        }
        for hi in h.iter_mut() {
            *hi *= 0.25;
        }
    }
    vec![f64::NAN; dim]
}

fn try_hessian(
    eval: &impl Fn(&[f64]) -> f64,
    center: &[f64],
    h: &[f64],
    dim: usize,
) -> Option<Vec<f64>> {
    let f0 = eval(center);
    if !f0.is_finite() {
        return None;
    }
    let mut hess = vec![vec![0.0f64; dim]; dim];
    for i in 0..dim {
        let mut up = center.to_vec();
        up[i] += h[i];
        let mut dn = center.to_vec();
        dn[i] -= h[i];
        let (fu, fd) = (eval(&up), eval(&dn));
        if !fu.is_finite() || !fd.is_finite() {
            return None;
        }
        hess[i][i] = (fu + fd - 2.0 * f0) / (h[i] * h[i]);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut pp = center.to_vec();
            pp[i] += h[i];
            pp[j] += h[j];
            let mut pm = center.to_vec();
            pm[i] += h[i];
            pm[j] -= h[j];
            let mut mp = center.to_vec();
            mp[i] -= h[i];
            mp[j] += h[j];
            let mut mm = center.to_vec();
            mm[i] -= h[i];
            mm[j] -= h[j];
            let (a, b, c, d) = (eval(&pp), eval(&pm), eval(&mp), eval(&mm));
            if ![a, b, c, d].iter().all(|v| v.is_finite()) {
                return None;
            }
            let v = (a - b - c + d) / (4.0 * h[i] * h[j]);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    let cov = linalg::spd_inverse(&hess)?;
    Some((0..dim).map(|i| cov[i][i].max(0.0).sqrt()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arima::{simulate_arima, Innovation};

    fn sim(
        p: usize,
        d: usize,
        m: usize,
        ar: &[f64],
        ma: &[f64],
        sigma2: f64,
        n: usize,
        seed: u64,
    ) -> Series<f64> {
        let model = ArimaModel::from_coefficients(p, d, m, ar, ma, sigma2).unwrap();
        simulate_arima(&model, n, seed, Innovation::Gaussian).unwrap()
    }

    #[test]
    fn white_noise_fit_recovers_variance() {
        let s = sim(0, 0, 0, &[], &[], 4.0, 20_000, 1);
        let fit = fit_arma(&s, 0, 0).unwrap();
        let sigma2 = fit.model.sigma2;
        assert!((sigma2 - 4.0).abs() / 4.0 < 0.02, "sigma2 {sigma2}");
        assert!(fit.diagnostics.converged);
        assert!(fit.diagnostics.whiteness.is_white());
        assert_eq!(fit.model.n_free_parameters(), 1);
    }

    #[test]
    fn arma21_estimates_within_three_standard_errors() {
        let truth_ar = [1.2, -0.5];
        let truth_ma = [0.4];
        let mut hits = 0;
        let trials = 12;
        for seed in 0..trials {
            let s = sim(2, 0, 1, &truth_ar, &truth_ma, 1.0, 50_000, 100 + seed);
            let fit = fit_arma(&s, 2, 1).unwrap();
            let mut ok = true;
            for (c, t) in fit.model.ar.iter().zip(truth_ar.iter()) {
                ok &= (c.value - t).abs() <= 3.0 * c.std_err;
            }
            for (c, t) in fit.model.ma.iter().zip(truth_ma.iter()) {
                ok &= (c.value - t).abs() <= 3.0 * c.std_err;
            }
            if ok {
                hits += 1;
            }
        }
        assert!(hits >= trials - 1, "only {hits}/{trials} runs inside 3 SE");
    }

    #[test]
    fn published_five_three_model_round_trips() {
        let ar = [1.29, -0.39, -0.17, 0.29, -0.24];
        let ma = [-0.54, -0.62, 0.63];
        let s = sim(5, 0, 3, &ar, &ma, 44.91, 50_000, 7);
        let fit = fit_arma(&s, 5, 3).unwrap();
        for (c, t) in fit.model.ar.iter().zip(ar.iter()) {
            assert!(
                (c.value - t).abs() <= 3.0 * c.std_err,
                "ar: {} vs {t} (se {})",
                c.value,
                c.std_err
            );
        }
        for (c, t) in fit.model.ma.iter().zip(ma.iter()) {
            assert!(
                (c.value - t).abs() <= 3.0 * c.std_err,
                "ma: {} vs {t} (se {})",
                c.value,
                c.std_err
            );
        }
        let s2 = fit.model.sigma2;
        assert!((s2 - 44.91).abs() / 44.91 < 0.05, "sigma2 {s2}");
    }

    #[test]
    fn arima_d_path_matches_manual_differencing_bit_for_bit() {
        let s = sim(1, 1, 1, &[0.5], &[0.3], 1.0, 20_000, 3);
        let via_d = fit_arima(&s, 1, 1, 1).unwrap();
        let manual = fit_arma(&s.difference(1).unwrap(), 1, 1).unwrap();
        assert_eq!(via_d.model.ar[0].value, manual.model.ar[0].value);
        assert_eq!(via_d.model.ma[0].value, manual.model.ma[0].value);
        assert_eq!(via_d.model.sigma2, manual.model.sigma2);
        assert_eq!(via_d.model.d, 1);
        assert_eq!(manual.model.d, 0);
        assert_eq!(
            via_d.diagnostics.residuals.values(),
            manual.diagnostics.residuals.values()
        );
    }

    #[test]
    fn arima111_recovers_parameters() {
        let s = sim(1, 1, 1, &[0.5], &[0.3], 1.0, 50_000, 5);
        let fit = fit_arima(&s, 1, 1, 1).unwrap();
        let c = &fit.model.ar[0];
        assert!((c.value - 0.5).abs() <= 3.0 * c.std_err, "{:?}", c);
        let c = &fit.model.ma[0];
        assert!((c.value - 0.3).abs() <= 3.0 * c.std_err, "{:?}", c);
    }

    #[test]
    fn residual_length_matches_conditioning_losses() {
        let s = sim(2, 1, 1, &[0.4, 0.2], &[0.3], 1.0, 5_000, 9);
        let fit = fit_arima(&s, 2, 1, 1).unwrap();
        assert_eq!(
            fit.diagnostics.residuals.len(),
            s.len() - 2usize.max(1) - 1
        );
        assert_eq!(fit.model.n_fit, s.len());
    }

    #[test]
    fn aic_identity_holds() {
        let s = sim(1, 0, 0, &[0.6], &[], 1.0, 10_000, 13);
        let fit = fit_arma(&s, 1, 0).unwrap();
        let k = fit.model.n_free_parameters() as f64;
        let expect = 2.0 * k - 2.0 * fit.model.log_likelihood;
        assert!((fit.model.aic - expect).abs() < 1e-9);
    }

    #[test]
    fn pinned_refit_zeroes_masked_terms() {
        let s = sim(2, 0, 0, &[0.5, 0.0], &[], 1.0, 20_000, 17);
        let w = s.clone();
        let fit = refit_pinned(&w, 2, 0, 0, s.len(), vec![true, false], vec![]).unwrap();
        assert!(fit.model.ar[1].pinned);
        assert_eq!(fit.model.ar[1].value, 0.0);
        assert!((fit.model.ar[0].value - 0.5).abs() < 0.05);
        assert_eq!(fit.model.n_free_parameters(), 2);
    }

    #[test]
    fn preconditions_are_enforced() {
        let s = sim(0, 0, 0, &[], &[], 1.0, 200, 1);
        assert!(fit_arma(&s, 2, 2).is_err(), "200 < 50*(p+m+1)");
        assert!(fit_arima(&s, 0, 4, 0).is_err());
        let c = Series::new(vec![1.0; 5000], 1.0).unwrap();
        assert!(matches!(
            fit_arma(&c, 1, 0),
            Err(Error::DegenerateInput(_))
        ));
    }
}
