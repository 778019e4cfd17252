//! Small dense linear-algebra helpers: QR least squares and SPD inversion.
//!
//! Regressions here are at most a few dozen columns, so plain Householder QR
//! is both fast enough and well conditioned for unit-root designs whose
//! columns live on very different scales.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug)]
pub(crate) struct LeastSquares<F> {
    pub coeffs: Vec<F>,
    pub std_errors: Vec<F>,
    pub residuals: Vec<F>,
    pub rss: F,
}

/// Ordinary least squares of `y` on the given columns.
///
/// Returns coefficient estimates, their classical standard errors
/// (sigma^2 * (X'X)^-1 diagonal with sigma^2 = RSS/(n-k)), residuals and RSS.
pub(crate) fn ols<F: Scalar>(columns: &[Vec<F>], y: &[F]) -> Result<LeastSquares<F>> {
    let k = columns.len();
    let n = y.len();
    if k == 0 || n <= k {
        return Err(Error::arg(format!(
            "regression needs more rows ({n}) than columns ({k})"
        )));
    }
    for c in columns {
        if c.len() != n {
            return Err(Error::arg("regression column length mismatch"));
        }
    }

    // Column-major working copy of the design and the target.
    let mut a: Vec<Vec<F>> = columns.to_vec();
    let mut b: Vec<F> = y.to_vec();

    // Householder QR, storing R in the upper triangle of `a`.
    let mut rdiag = vec![F::zero(); k];
    for j in 0..k {
        let mut norm = F::zero();
        for i in j..n {
            norm = norm + a[j][i] * a[j][i];
        }
        let mut norm = norm.sqrt();
        if norm <= F::c(1e-300) {
            return Err(Error::degenerate("singular regression design"));
        }
        // Householder vector scaled so its pivot exceeds one (LINPACK style):
        // divide by the sign-matched norm, store R_jj = -norm.
        if a[j][j] < F::zero() {
            norm = -norm;
        }
        for i in j..n {
            a[j][i] = a[j][i] / norm;
        }
        a[j][j] = a[j][j] + F::one();
        for l in (j + 1)..k {
            let mut s = F::zero();
            for i in j..n {
                s = s + a[j][i] * a[l][i];
            }
            let s = -s / a[j][j];
            for i in j..n {
                a[l][i] = a[l][i] + s * a[j][i];
            }
        }
        // Apply the reflector to the target as well.
        let mut s = F::zero();
        for i in j..n {
            s = s + a[j][i] * b[i];
        }
        let s = -s / a[j][j];
        for i in j..n {
            b[i] = b[i] + s * a[j][i];
        }
        rdiag[j] = -norm;
    }

    // Rank check against the largest diagonal magnitude.
    let rmax = rdiag.iter().fold(F::zero(), |m, &d| m.max(d.abs()));
    for &d in &rdiag {
        if d.abs() < rmax * F::c(1e-12) {
            return Err(Error::degenerate("rank-deficient regression design"));
        }
    }

    // Back substitution: R beta = Q'y.
    let mut beta = vec![F::zero(); k];
    for j in (0..k).rev() {
        let mut s = b[j];
        for l in (j + 1)..k {
            s = s - a[l][j] * beta[l];
        }
        beta[j] = s / rdiag[j];
    }

    // Residuals from the original data.
    let mut residuals = Vec::with_capacity(n);
    let mut rss = F::zero();
    for i in 0..n {
        let mut fit = F::zero();
        for (j, col) in columns.iter().enumerate() {
            fit = fit + beta[j] * col[i];
        }
        let r = y[i] - fit;
        rss = rss + r * r;
        residuals.push(r);
    }

    // (X'X)^-1 = R^-1 R^-T; invert R by back substitution on the identity.
    let sigma2 = rss / F::of(n - k);
    let mut rinv = vec![vec![F::zero(); k]; k];
    for j in 0..k {
        rinv[j][j] = F::one() / rdiag[j];
        for i in (0..j).rev() {
            let mut s = F::zero();
            for l in (i + 1)..=j {
                s = s + a[l][i] * rinv[j][l];
            }
            rinv[j][i] = -s / rdiag[i];
        }
    }
    let std_errors = (0..k)
        .map(|i| {
            let mut d = F::zero();
            for j in i..k {
                d = d + rinv[j][i] * rinv[j][i];
            }
            (d * sigma2).sqrt()
        })
        .collect();

    Ok(LeastSquares {
        coeffs: beta,
        std_errors,
        residuals,
        rss,
    })
}

/// Invert a symmetric positive-definite matrix via Cholesky.
/// Returns `None` when the matrix is not numerically PD.
pub(crate) fn spd_inverse(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // Solve L L' X = I column by column.
    let mut inv = vec![vec![0.0f64; n]; n];
    for col in 0..n {
        let mut y = vec![0.0f64; n];
        for i in 0..n {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                s -= l[i][k] * y[k];
            }
            y[i] = s / l[i][i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k][i] * inv[k][col];
            }
            inv[i][col] = s / l[i][i];
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_linear_relation() {
        let x1: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let ones = vec![1.0f64; 50];
        let y: Vec<f64> = x1.iter().map(|&v| 2.0 + 3.0 * v).collect();
        let fit = ols(&[ones, x1], &y).unwrap();
        assert!((fit.coeffs[0] - 2.0).abs() < 1e-10);
        assert!((fit.coeffs[1] - 3.0).abs() < 1e-10);
        assert!(fit.rss < 1e-18);
    }

    #[test]
    fn rejects_singular_design() {
        let c = vec![1.0f64; 30];
        let y = vec![0.5f64; 30];
        let err = ols(&[c.clone(), c], &y).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }

    #[test]
    fn standard_errors_match_known_formula() {
        // Simple regression through the origin: se = sigma / sqrt(sum x^2).
        let x: Vec<f64> = (1..=100).map(|i| i as f64 / 10.0).collect();
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| 1.5 * v + if i % 2 == 0 { 0.1 } else { -0.1 })
            .collect();
        let fit = ols(&[x.clone()], &y).unwrap();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let sigma2 = fit.rss / 99.0;
        assert!((fit.std_errors[0] - (sigma2 / sxx).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn spd_inverse_round_trip() {
        let a = vec![vec![4.0, 1.0, 0.5], vec![1.0, 3.0, 0.2], vec![0.5, 0.2, 2.0]];
        let inv = spd_inverse(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += a[i][k] * inv[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-10);
            }
        }
        assert!(spd_inverse(&vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_none());
    }
}
