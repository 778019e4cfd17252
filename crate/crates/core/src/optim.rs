//! Derivative-free minimization used by the ARIMA and GARCH estimators.

/// Nelder-Mead with the adaptive coefficients of Gao & Han. The ARIMA sweep
/// optimizes up to ten free parameters, past where the textbook constants
/// start to stall.
pub(crate) struct NelderMead {
    pub max_iter: usize,
    pub ftol: f64,
    pub initial_step: f64,
}

pub(crate) struct OptimOutcome {
    pub x: Vec<f64>,
    pub fx: f64,
    pub converged: bool,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_iter: 4000,
            ftol: 1e-10,
            initial_step: 0.1,
        }
    }
}

impl NelderMead {
    pub fn minimize(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64]) -> OptimOutcome {
        let n = x0.len();
        if n == 0 {
            return OptimOutcome {
                x: Vec::new(),
                fx: f(&[]),
                converged: true,
            };
        }
        let (alpha, beta, gamma, delta) = if n > 1 {
            let nf = n as f64;
            (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
        } else {
            (1.0, 2.0, 0.5, 0.5)
        };

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut v = x0.to_vec();
            let h = if v[i].abs() > 1e-8 {
                v[i].abs() * self.initial_step
            } else {
                self.initial_step * 0.25
            };
            v[i] += h;
            simplex.push(v);
        }
        let mut fvals: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

        let mut converged = false;
        for _ in 0..self.max_iter {
            // Order the simplex by function value.
            let mut idx: Vec<usize> = (0..=n).collect();
            idx.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap_or(std::cmp::Ordering::Equal));
            let best = idx[0];
            let worst = idx[n];
            let second_worst = idx[n - 1];

            let spread = (fvals[worst] - fvals[best]).abs();
            let scale = fvals[best].abs().max(1.0);
            if spread <= self.ftol * scale && fvals[best].is_finite() {
                converged = true;
                break;
            }

            // Centroid of all but the worst vertex.
            let mut centroid = vec![0.0; n];
            for &i in idx.iter().take(n) {
                for j in 0..n {
                    centroid[j] += simplex[i][j];
                }
            }
            for c in centroid.iter_mut() {
                *c /= n as f64;
            }

            let lerp = |t: f64| -> Vec<f64> {
                (0..n)
                    .map(|j| centroid[j] + t * (centroid[j] - simplex[worst][j]))
                    .collect()
            };

            let xr = lerp(alpha);
            let fr = f(&xr);
            if fr < fvals[best] {
                let xe = lerp(alpha * beta);
                let fe = f(&xe);
                if fe < fr {
                    simplex[worst] = xe;
                    fvals[worst] = fe;
                } else {
                    simplex[worst] = xr;
                    fvals[worst] = fr;
                }
            } else if fr < fvals[second_worst] {
                simplex[worst] = xr;
                fvals[worst] = fr;
            } else {
                // Contract, outside or inside depending on the reflection.
                let (xc, fc) = if fr < fvals[worst] {
                    let xc = lerp(alpha * gamma);
                    let fc = f(&xc);
                    (xc, fc)
                } else {
                    let xc = lerp(-gamma);
                    let fc = f(&xc);
                    (xc, fc)
                };
                if fc < fvals[worst].min(fr) {
                    simplex[worst] = xc;
                    fvals[worst] = fc;
                } else {
                    // Shrink toward the best vertex.
                    let bx = simplex[best].clone();
                    for i in 0..=n {
                        if i == best {
                            continue;
                        }
                        for j in 0..n {
                            simplex[i][j] = bx[j] + delta * (simplex[i][j] - bx[j]);
                        }
                        fvals[i] = f(&simplex[i]);
                    }
                }
            }
        }

        let mut best = 0;
        for i in 1..=n {
            if fvals[i] < fvals[best] {
                best = i;
            }
        }
        OptimOutcome {
            x: simplex[best].clone(),
            fx: fvals[best],
            converged,
        }
    }

    /// Minimize, then restart once from the found point with a smaller simplex.
    pub fn minimize_restarted(&self, f: impl Fn(&[f64]) -> f64, x0: &[f64]) -> OptimOutcome {
        let first = self.minimize(&f, x0);
        let polish = NelderMead {
            max_iter: self.max_iter / 2,
            ftol: self.ftol,
            initial_step: self.initial_step * 0.1,
        };
        let second = polish.minimize(&f, &first.x);
        if second.fx < first.fx {
            OptimOutcome {
                converged: first.converged || second.converged,
                ..second
            }
        } else {
            first
        }
    }
}

/// Quasi-Newton polish with numerical gradients and backtracking line
/// search. ARMA likelihood valleys are narrow and curved; Nelder-Mead gets
/// within ~1e-3 of the optimum and this closes the rest.
pub(crate) fn bfgs_polish(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    max_iter: usize,
) -> OptimOutcome {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if n == 0 || !fx.is_finite() {
        return OptimOutcome {
            x,
            fx,
            converged: fx.is_finite(),
        };
    }

    let grad = |x: &[f64], fbase: f64| -> Option<Vec<f64>> {
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            let h = 1e-6 * (1.0 + x[i].abs());
            let mut up = x.to_vec();
            up[i] += h;
            let mut dn = x.to_vec();
            dn[i] -= h;
            let (fu, fd) = (f(&up), f(&dn));
            if fu.is_finite() && fd.is_finite() {
                g[i] = (fu - fd) / (2.0 * h);
            } else if fu.is_finite() {
                g[i] = (fu - fbase) / h;
            } else if fd.is_finite() {
                g[i] = (fbase - fd) / h;
            } else {
                return None;
            }
        }
        Some(g)
    };

    // Inverse-Hessian approximation, identity start.
    let mut hinv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut g = match grad(&x, fx) {
        Some(g) => g,
        None => {
            return OptimOutcome {
                x,
                fx,
                converged: false,
            }
        }
    };

    let mut converged = false;
    for _ in 0..max_iter {
        let gnorm: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < 1e-9 * (1.0 + fx.abs()) {
            converged = true;
            break;
        }
        // Search direction d = -Hinv g.
        let mut dir = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                dir[i] -= hinv[i][j] * g[j];
            }
        }
        let slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if slope >= 0.0 {
            // Reset to steepest descent when curvature info went bad.
            for i in 0..n {
                for j in 0..n {
                    hinv[i][j] = if i == j { 1.0 } else { 0.0 };
                }
                dir[i] = -g[i];
            }
        }

        // Backtracking Armijo line search.
        let mut step = 1.0;
        let mut accepted = false;
        let mut xn = x.clone();
        let mut fn_ = fx;
        for _ in 0..40 {
            for i in 0..n {
                xn[i] = x[i] + step * dir[i];
            }
            fn_ = f(&xn);
            let want = fx + 1e-4 * step * slope.min(0.0);
            if fn_.is_finite() && fn_ <= want {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted || fn_ >= fx - 1e-14 * (1.0 + fx.abs()) {
            converged = true;
            break;
        }
        let gn = match grad(&xn, fn_) {
            Some(v) => v,
            None => break,
        };

        // BFGS update of the inverse Hessian.
        let s: Vec<f64> = (0..n).map(|i| xn[i] - x[i]).collect();
        let y: Vec<f64> = (0..n).map(|i| gn[i] - g[i]).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-12 {
            let rho = 1.0 / sy;
            // Hinv = (I - rho s y') Hinv (I - rho y s') + rho s s'
            let mut hy = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    hy[i] += hinv[i][j] * y[j];
                }
            }
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for j in 0..n {
                    hinv[i][j] += (sy + yhy) * rho * rho * s[i] * s[j]
                        - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        x = xn;
        fx = fn_;
        g = gn;
    }
    OptimOutcome { x, fx, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfgs_polish_reaches_quadratic_minimum() {
        let f = |x: &[f64]| {
            (x[0] - 1.5).powi(2) + 10.0 * (x[1] + 0.5).powi(2) + 0.5 * x[0] * x[1]
        };
        let out = bfgs_polish(f, &[0.0, 0.0], 100);
        let g0 = 2.0 * (out.x[0] - 1.5) + 0.5 * out.x[1];
        let g1 = 20.0 * (out.x[1] + 0.5) + 0.5 * out.x[0];
        assert!(g0.abs() < 1e-6 && g1.abs() < 1e-6, "{:?}", out.x);
    }

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| {
            let mut s = 0.0;
            for i in 0..x.len() - 1 {
                s += 100.0 * (x[i + 1] - x[i] * x[i]).powi(2) + (1.0 - x[i]).powi(2);
            }
            s
        };
        let out = NelderMead::default().minimize_restarted(rosen, &[-1.2, 1.0, 0.8, -0.5]);
        for v in &out.x {
            assert!((v - 1.0).abs() < 1e-4, "got {:?}", out.x);
        }
    }

    #[test]
    fn respects_penalty_walls() {
        // Minimum of (x-2)^2 subject to x <= 1 via an infinite wall.
        let f = |x: &[f64]| {
            if x[0] > 1.0 {
                f64::INFINITY
            } else {
                (x[0] - 2.0).powi(2)
            }
        };
        let out = NelderMead::default().minimize_restarted(f, &[0.0]);
        assert!((out.x[0] - 1.0).abs() < 1e-5);
    }
}
