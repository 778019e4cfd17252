//! Thin wrappers over statrs distribution functions, computed in f64.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

pub(crate) fn norm_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

pub(crate) fn norm_ppf(p: f64) -> f64 {
    let p = p.clamp(1e-300, 1.0 - 1e-16);
    Normal::standard().inverse_cdf(p)
}

pub(crate) fn chi2_cdf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    ChiSquared::new(df).expect("df > 0").cdf(x)
}

pub(crate) fn chi2_ppf(p: f64, df: f64) -> f64 {
    ChiSquared::new(df)
        .expect("df > 0")
        .inverse_cdf(p.clamp(1e-300, 1.0 - 1e-16))
}

/// Trigamma at a positive integer argument: psi'(k) = pi^2/6 - sum_{j<k} 1/j^2.
pub(crate) fn trigamma_int(k: usize) -> f64 {
    assert!(k >= 1);
    let mut v = std::f64::consts::PI * std::f64::consts::PI / 6.0;
    for j in 1..k {
        v -= 1.0 / (j as f64 * j as f64);
    }
    v
}
