//! Priestley-Subba Rao stationarity test.
//!
//! Evolutionary spectral densities are estimated on a time x frequency grid
//! with sine multitapers (one estimate per time block), log-transformed, and
//! decomposed by a two-way ANOVA. Under homoskedasticity the between-time
//! (T), interaction + residual (I+R) and combined (T+I+R) sums of squares,
//! scaled by the known variance of a log spectral estimate, are chi-square
//! with (I-1), (I-1)(J-1) and (I-1)J degrees of freedom.

use num_complex::Complex;

use crate::dist;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{fft_in_place, Series};

use super::{check_alpha, Tail, TestOutcome};

/// Number of sine tapers per block. The variance of a log multitaper
/// estimate is trigamma(K); frequencies are sampled at least K+1 Fourier
/// bins apart so grid estimates are approximately independent.
const N_TAPERS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct PsrOutcome<F: Scalar> {
    pub t_component: TestOutcome<F>,
    pub ir_component: TestOutcome<F>,
    pub tir_component: TestOutcome<F>,
    pub n_time_blocks: usize,
    pub n_freq_points: usize,
}

impl<F: Scalar> PsrOutcome<F> {
    /// Overall decision: heteroskedastic when any component rejects.
    pub fn reject_any(&self) -> bool {
        self.t_component.reject_null
            || self.ir_component.reject_null
            || self.tir_component.reject_null
    }
}

/// Default grid for a record of length `n`: time blocks capped so each holds
/// at least 1024 samples, and 12 frequency points.
pub fn psr_defaults(n: usize) -> (usize, usize) {
    let by_log = (n as f64).log2().floor() as usize;
    let by_size = n / 1024;
    ((by_log.min(by_size)).max(2), 12)
}

pub fn psr_test<F: Scalar>(
    s: &Series<F>,
    n_time_blocks: usize,
    n_freq_points: usize,
    alpha: F,
) -> Result<PsrOutcome<F>> {
    psr_test_with_tapers(s, n_time_blocks, n_freq_points, N_TAPERS, alpha)
}

#[doc(hidden)]
pub fn psr_test_with_tapers<F: Scalar>(
    s: &Series<F>,
    n_time_blocks: usize,
    n_freq_points: usize,
    n_tapers: usize,
    alpha: F,
) -> Result<PsrOutcome<F>> {
    check_alpha(alpha)?;
    let n = s.len();
    if n < 4096 {
        return Err(Error::arg(format!(
            "psr_test needs at least 4096 samples, got {n}"
        )));
    }
    if n_time_blocks < 2 || n_freq_points < 2 {
        return Err(Error::arg("psr_test needs >= 2 blocks and >= 2 frequencies"));
    }
    let block = n / n_time_blocks;
    let n_slots = (block / 2).saturating_sub(1) / (n_tapers + 1);
    if block < 64 || n_slots < n_freq_points {
        return Err(Error::arg(format!(
            "grid too fine: {n_time_blocks} x {n_freq_points} for length {n}"
        )));
    }

    // Frequency bins: evenly spread over the slots spaced (K+1) bins apart.
    let bins: Vec<usize> = (0..n_freq_points)
        .map(|j| {
            let slot = 1 + (j as f64 / (n_freq_points as f64 - 1.0) * (n_slots as f64 - 1.0))
                .round() as usize;
            slot * (n_tapers + 1)
        })
        .collect();

    let tapers = sine_tapers(block, n_tapers);
    let logf = F::ln;
    // One global demean: per-block centering perturbs the eigenspectra
    // enough to inflate the I+R component's chi-square tail.
    let mean = s.mean();
    let mut grid = vec![vec![0.0f64; n_freq_points]; n_time_blocks];
    let mut buf = vec![Complex::new(F::zero(), F::zero()); block];
    for (i, row) in grid.iter_mut().enumerate() {
        let seg = &s.values()[i * block..(i + 1) * block];
        let mut spec = vec![F::zero(); n_freq_points];
        for taper in &tapers {
            for (t, c) in buf.iter_mut().enumerate() {
                *c = Complex::new((seg[t] - mean) * taper[t], F::zero());
            }
            fft_in_place(&mut buf);
            for (j, &bin) in bins.iter().enumerate() {
                spec[j] = spec[j] + buf[bin].norm_sqr();
            }
        }
        for (j, &p) in spec.iter().enumerate() {
            if p <= F::zero() {
                return Err(Error::degenerate("zero spectral estimate in psr grid"));
            }
            row[j] = logf(p / F::of(n_tapers)).to64();
        }
    }

    // Two-way ANOVA on the log grid.
    let (ni, nj) = (n_time_blocks as f64, n_freq_points as f64);
    let grand: f64 = grid.iter().flatten().sum::<f64>() / (ni * nj);
    let row_means: Vec<f64> = grid
        .iter()
        .map(|r| r.iter().sum::<f64>() / nj)
        .collect();
    let col_means: Vec<f64> = (0..n_freq_points)
        .map(|j| grid.iter().map(|r| r[j]).sum::<f64>() / ni)
        .collect();
    let mut ss_t = 0.0;
    for rm in &row_means {
        ss_t += (rm - grand) * (rm - grand);
    }
    ss_t *= nj;
    let mut ss_ir = 0.0;
    for (i, row) in grid.iter().enumerate() {
        for (j, &y) in row.iter().enumerate() {
            let dev = y - row_means[i] - col_means[j] + grand;
            ss_ir += dev * dev;
        }
    }

    let sigma2 = dist::trigamma_int(n_tapers);
    let stat_t = ss_t / sigma2;
    let stat_ir = ss_ir / sigma2;
    let stat_tir = stat_t + stat_ir;
    let df_t = n_time_blocks as f64 - 1.0;
    let df_ir = df_t * (n_freq_points as f64 - 1.0);
    let df_tir = df_t * n_freq_points as f64;

    let outcome = |stat: f64, df: f64| -> TestOutcome<F> {
        let p = 1.0 - dist::chi2_cdf(stat, df);
        let crit = dist::chi2_ppf(1.0 - alpha.to64(), df);
        TestOutcome {
            statistic: F::c(stat),
            p_value: Some(F::c(p)),
            critical_lower: None,
            critical_upper: Some(F::c(crit)),
            tail: Tail::Right,
            reject_null: p < alpha.to64(),
            alpha,
        }
    };

    Ok(PsrOutcome {
        t_component: outcome(stat_t, df_t),
        ir_component: outcome(stat_ir, df_ir),
        tir_component: outcome(stat_tir, df_tir),
        n_time_blocks,
        n_freq_points,
    })
}

fn sine_tapers<F: Scalar>(len: usize, n_tapers: usize) -> Vec<Vec<F>> {
    let norm = (2.0 / (len as f64 + 1.0)).sqrt();
    (1..=n_tapers)
        .map(|k| {
            (0..len)
                .map(|t| {
                    F::c(norm
                        * (std::f64::consts::PI * k as f64 * (t as f64 + 1.0)
                            / (len as f64 + 1.0))
                            .sin())
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gwn(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn series(v: Vec<f64>) -> Series<f64> {
        Series::new(v, 1.0).unwrap()
    }

    #[test]
    fn components_sum_to_total() {
        let s = series(gwn(16384, 1));
        let out = psr_test(&s, 8, 12, 0.05).unwrap();
        let sum = out.t_component.statistic + out.ir_component.statistic;
        let rel = ((sum - out.tir_component.statistic) / out.tir_component.statistic).abs();
        assert!(rel < 1e-6);
        assert!(out.t_component.decision_consistent());
        assert!(out.ir_component.decision_consistent());
        assert!(out.tir_component.decision_consistent());
    }

    #[test]
    fn homoskedastic_noise_mostly_passes() {
        let mut rejects = 0;
        for seed in 0..40 {
            let (blocks, freqs) = psr_defaults(16384);
            let out = psr_test(&series(gwn(16384, 100 + seed)), blocks, freqs, 0.05).unwrap();
            if out.reject_any() {
                rejects += 1;
            }
        }
        assert!(rejects <= 8, "rejected {rejects}/40 homoskedastic seeds");
    }

    #[test]
    fn variance_step_rejects() {
        for seed in 0..10 {
            let mut v = gwn(16384, 500 + seed);
            for x in v.iter_mut().skip(8192) {
                *x *= 2.0;
            }
            let (blocks, freqs) = psr_defaults(16384);
            let out = psr_test(&series(v), blocks, freqs, 0.05).unwrap();
            assert!(out.reject_any(), "seed {seed} failed to reject a x4 variance step");
            assert!(out.t_component.reject_null, "T component must drive the rejection");
        }
    }

    #[test]
    fn default_grid_matches_block_size_rule() {
        assert_eq!(psr_defaults(50_000), (15, 12));
        assert_eq!(psr_defaults(8192), (8, 12));
        assert_eq!(psr_defaults(4096), (4, 12));
    }

    #[test]
    fn grid_and_length_argument_errors() {
        let s = series(gwn(4096, 2));
        assert!(psr_test(&s, 32, 12, 0.05).is_err(), "blocks of 128 have too few slots");
        assert!(psr_test(&s, 1, 12, 0.05).is_err());
        assert!(psr_test(&series(gwn(2048, 3)), 2, 12, 0.05).is_err());
    }
}
