//! Surrogate-data linearity testing: FT and AAFT surrogates, phase-space
//! embedding, the Grassberger-Procaccia correlation dimension, and the
//! two-tailed surrogate envelope test.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{fft_in_place, ifft_in_place, Series};
use crate::stat_tests::{Tail, TestOutcome};

/// How a surrogate ensemble was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateMethod {
    /// Phase randomization only (assumes a Gaussian marginal).
    Ft,
    /// Amplitude-adjusted Fourier transform: preserves the exact value
    /// multiset along with the linear correlation structure.
    Aaft,
}

/// A source series together with its constrained-realization surrogates.
#[derive(Debug, Clone)]
pub struct SurrogateEnsemble<F: Scalar> {
    pub original: Series<F>,
    pub surrogates: Vec<Series<F>>,
    pub method: SurrogateMethod,
    pub seed: u64,
}

/// Generate `n_surrogates` surrogates with per-surrogate derived seeds.
pub fn surrogate_ensemble<F: Scalar>(
    s: &Series<F>,
    n_surrogates: usize,
    method: SurrogateMethod,
    seed: u64,
) -> Result<SurrogateEnsemble<F>> {
    if n_surrogates == 0 {
        return Err(Error::arg("ensemble needs at least one surrogate"));
    }
    let surrogates = (0..n_surrogates)
        .map(|i| {
            let si = derive_seed(seed, 2 * i as u64);
            match method {
                SurrogateMethod::Ft => ft_surrogate(s, si),
                SurrogateMethod::Aaft => aaft_surrogate(s, si),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SurrogateEnsemble {
        original: s.clone(),
        surrogates,
        method,
        seed,
    })
}

/// Phase-randomized surrogate. The amplitude spectrum of the output equals
/// that of the input; Hermitian symmetry keeps the output real.
pub fn ft_surrogate<F: Scalar>(s: &Series<F>, seed: u64) -> Result<Series<F>> {
    let n = s.len();
    if n < 256 {
        return Err(Error::arg(format!(
            "ft_surrogate needs at least 256 samples, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = ft_surrogate_values(s.values(), &mut rng);
    s.like(values)
}

fn ft_surrogate_values<F: Scalar>(x: &[F], rng: &mut ChaCha8Rng) -> Vec<F> {
    let n = x.len();
    let mut buf: Vec<Complex<F>> = x.iter().map(|&v| Complex::new(v, F::zero())).collect();
    fft_in_place(&mut buf);
    let half = n / 2;
    for k in 1..half + (n % 2) {
        // k runs over 1..ceil(n/2)-?; pair k with n-k.
        if k == n - k {
            continue;
        }
        let mag = buf[k].norm();
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let c = Complex::new(mag * F::c(phi.cos()), mag * F::c(phi.sin()));
        buf[k] = c;
        buf[n - k] = c.conj();
    }
    if n % 2 == 0 && half >= 1 {
        // Nyquist coefficient must stay real; a random sign keeps |X|.
        let flip: bool = rng.random();
        if flip {
            buf[half] = -buf[half];
        }
    }
    ifft_in_place(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Amplitude-adjusted Fourier transform surrogate: Gaussianize by rank
/// remapping onto a sorted Gaussian sample, phase-randomize, then rank-remap
/// back onto the sorted original values. The output multiset equals the
/// source multiset exactly.
pub fn aaft_surrogate<F: Scalar>(s: &Series<F>, seed: u64) -> Result<Series<F>> {
    let n = s.len();
    if n < 256 {
        return Err(Error::arg(format!(
            "aaft_surrogate needs at least 256 samples, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = s.values();

    let mut gauss: Vec<F> = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            F::c(z)
        })
        .collect();
    gauss.sort_by(|a, b| a.partial_cmp(b).expect("gaussian draws are finite"));

    let rank_x = ranks(x);
    let gaussianized: Vec<F> = rank_x.iter().map(|&r| gauss[r]).collect();

    let shuffled = ft_surrogate_values(&gaussianized, &mut rng);

    let mut sorted_x = x.to_vec();
    sorted_x.sort_by(|a, b| a.partial_cmp(b).expect("series values are finite"));
    let rank_s = ranks(&shuffled);
    let values: Vec<F> = rank_s.iter().map(|&r| sorted_x[r]).collect();
    s.like(values)
}

/// rank[i] = position of x[i] in ascending order (ties broken by index).
fn ranks<F: Scalar>(x: &[F]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| {
        x[a].partial_cmp(&x[b])
            .expect("values are finite")
            .then(a.cmp(&b))
    });
    let mut rank = vec![0usize; x.len()];
    for (pos, &idx) in order.iter().enumerate() {
        rank[idx] = pos;
    }
    rank
}

/// Phase-space embedding and correlation-integral settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingConfig {
    /// Embedding dimension m.
    pub dimension: usize,
    /// Delay in samples; `None` picks the first lag where the ACF drops
    /// below 1/e.
    pub delay: Option<usize>,
    /// Temporal exclusion window; `None` uses m * delay.
    pub theiler_window: Option<usize>,
    /// Cap on seeded random reference points for pair counting.
    pub max_reference_points: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            dimension: 5,
            delay: None,
            theiler_window: None,
            max_reference_points: 2000,
        }
    }
}

/// Correlation-dimension estimate with its scaling-region diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationDimEstimate<F: Scalar> {
    pub d2: F,
    pub r_fit_range: (F, F),
    pub fit_r_squared: F,
    /// Sampled (log r, log C(r)) pairs.
    pub curve: Vec<(F, F)>,
    /// False when the scaling-region fit has R^2 below 0.9.
    pub reliable: bool,
}

const N_GRID: usize = 24;
const MIN_FIT_POINTS: usize = 7;
const PCT_LO: f64 = 0.01;
const PCT_HI: f64 = 0.30;

/// Grassberger-Procaccia correlation dimension with max-norm distances,
/// Theiler-window exclusion and seeded reference-point sampling. D2 is the
/// least-squares slope of log C(r) against log r over the sub-range of the
/// [1st, 30th] distance-percentile window with the most constant local slope.
pub fn correlation_dimension<F: Scalar>(
    s: &Series<F>,
    cfg: &EmbeddingConfig,
    seed: u64,
) -> Result<CorrelationDimEstimate<F>> {
    corr_dim_impl(s, cfg, seed, None).map(|(est, _)| est)
}

fn corr_dim_impl<F: Scalar>(
    s: &Series<F>,
    cfg: &EmbeddingConfig,
    seed: u64,
    grid_override: Option<&[F]>,
) -> Result<(CorrelationDimEstimate<F>, Vec<F>)> {
    let (points, dimension) = embed(s, cfg)?;
    let m_count = points.len() / dimension;
    if m_count < 2000 {
        return Err(Error::arg(format!(
            "correlation_dimension needs >= 2000 embedded points, got {m_count}"
        )));
    }
    let theiler = cfg
        .theiler_window
        .unwrap_or(cfg.dimension * resolve_delay(s, cfg)?);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let grid: Vec<F> = match grid_override {
        Some(g) => g.to_vec(),
        None => {
            // Distance percentiles from a random pair sample set the r grid.
            let mut sample = Vec::with_capacity(4096);
            let mut guard = 0;
            while sample.len() < 4096 && guard < 60_000 {
                guard += 1;
                let i = rng.random_range(0..m_count);
                let j = rng.random_range(0..m_count);
                if i.abs_diff(j) <= theiler {
                    continue;
                }
                let d = maxnorm(&points[i * dimension..], &points[j * dimension..], dimension);
                if d > F::zero() {
                    sample.push(d);
                }
            }
            if sample.len() < 256 {
                return Err(Error::degenerate(
                    "series too degenerate for distance statistics",
                ));
            }
            sample.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
            let r_lo = sample[((sample.len() - 1) as f64 * PCT_LO) as usize];
            let r_hi = sample[((sample.len() - 1) as f64 * PCT_HI) as usize];
            if !(r_hi > r_lo) || r_lo <= F::zero() {
                return Err(Error::degenerate("distance percentiles collapsed"));
            }
            let log_lo = r_lo.ln().to64();
            let log_hi = r_hi.ln().to64();
            (0..N_GRID)
                .map(|g| {
                    F::c((log_lo + (log_hi - log_lo) * g as f64 / (N_GRID - 1) as f64).exp())
                })
                .collect()
        }
    };

    debug_assert_eq!(grid.len(), N_GRID);

    // Seeded reference subset, then exact counting against all other points.
    let refs = sample_indices(&mut rng, m_count, cfg.max_reference_points);
    let (hist, total) = refs
        .par_iter()
        .map(|&ridx| {
            let mut h = [0u64; N_GRID];
            let mut t = 0u64;
            let rp = &points[ridx * dimension..(ridx + 1) * dimension];
            for j in 0..m_count {
                if ridx.abs_diff(j) <= theiler {
                    continue;
                }
                let d = maxnorm(rp, &points[j * dimension..], dimension);
                t += 1;
                let bucket = grid.partition_point(|&g| g < d);
                if bucket < N_GRID {
                    h[bucket] += 1;
                }
            }
            (h, t)
        })
        .reduce(
            || ([0u64; N_GRID], 0u64),
            |(mut ha, ta), (hb, tb)| {
                for (a, b) in ha.iter_mut().zip(hb.iter()) {
                    *a += b;
                }
                (ha, ta + tb)
            },
        );
    if total == 0 {
        return Err(Error::degenerate("no admissible pairs after Theiler exclusion"));
    }

    // Cumulative counts -> correlation integral on the grid.
    let mut curve: Vec<(F, F)> = Vec::with_capacity(N_GRID);
    let mut acc = 0u64;
    for (g, &h) in hist.iter().enumerate() {
        acc += h;
        if acc > 0 {
            let c = acc as f64 / total as f64;
            curve.push((F::c(grid[g].ln().to64()), F::c(c.ln())));
        }
    }
    if curve.len() < MIN_FIT_POINTS {
        return Err(Error::degenerate("correlation integral support too small"));
    }

    let (a, b, slope, r2) = best_scaling_window(&curve);
    let d2 = F::c(slope.max(0.0));
    let estimate = CorrelationDimEstimate {
        d2,
        r_fit_range: (
            F::c(curve[a].0.to64().exp()),
            F::c(curve[b].0.to64().exp()),
        ),
        fit_r_squared: F::c(r2),
        reliable: r2 >= 0.9,
        curve,
    };
    Ok((estimate, grid))
}

/// Two-tailed surrogate linearity test with the correlation dimension as the
/// discriminating statistic. With 20 surrogates the critical values are the
/// ensemble envelope (effective size about 2/21); larger ensembles use the
/// empirical alpha/2 and 1-alpha/2 quantiles.
pub fn linearity_test<F: Scalar>(
    s: &Series<F>,
    n_surrogates: usize,
    cfg: &EmbeddingConfig,
    seed: u64,
    alpha: F,
) -> Result<TestOutcome<F>> {
    if n_surrogates < 19 {
        return Err(Error::arg("linearity_test needs at least 19 surrogates"));
    }
    // The data's r grid is shared by every surrogate evaluation so the
    // envelope spread reflects the statistic, not per-series grid jitter
    // (the AAFT marginal identity keeps distance scales comparable).
    let (data_est, grid) = corr_dim_impl(s, cfg, derive_seed(seed, u64::MAX), None)?;

    let d2s: Vec<F> = (0..n_surrogates)
        .into_par_iter()
        .map(|i| {
            let sur = aaft_surrogate(s, derive_seed(seed, 2 * i as u64))?;
            let (est, _) =
                corr_dim_impl(&sur, cfg, derive_seed(seed, 2 * i as u64 + 1), Some(&grid))?;
            Ok(est.d2)
        })
        .collect::<Result<Vec<F>>>()?;

    let mut sorted = d2s.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("d2 values are finite"));
    let (lower, upper) = if n_surrogates <= 20 {
        (sorted[0], sorted[n_surrogates - 1])
    } else {
        (
            empirical_quantile(&sorted, alpha.to64() / 2.0),
            empirical_quantile(&sorted, 1.0 - alpha.to64() / 2.0),
        )
    };
    let stat = data_est.d2;
    Ok(TestOutcome {
        statistic: stat,
        p_value: None,
        critical_lower: Some(lower),
        critical_upper: Some(upper),
        tail: Tail::Two,
        reject_null: stat < lower || stat > upper,
        alpha,
    })
}

fn resolve_delay<F: Scalar>(s: &Series<F>, cfg: &EmbeddingConfig) -> Result<usize> {
    if let Some(d) = cfg.delay {
        if d == 0 {
            return Err(Error::arg("embedding delay must be >= 1"));
        }
        return Ok(d);
    }
    auto_delay(s)
}

/// First lag where the ACF drops below 1/e, capped at n/16.
pub fn auto_delay<F: Scalar>(s: &Series<F>) -> Result<usize> {
    let cap = (s.len() / 16).clamp(1, 512);
    let acf = s.acf(cap)?;
    let threshold = F::c(1.0 / std::f64::consts::E);
    for k in 1..=cap {
        if acf.coefficients[k] < threshold {
            return Ok(k);
        }
    }
    Ok(cap)
}

fn embed<F: Scalar>(s: &Series<F>, cfg: &EmbeddingConfig) -> Result<(Vec<F>, usize)> {
    let m = cfg.dimension;
    if m == 0 {
        return Err(Error::arg("embedding dimension must be >= 1"));
    }
    let tau = resolve_delay(s, cfg)?;
    let n = s.len();
    if (m - 1) * tau >= n {
        return Err(Error::arg(format!(
            "embedding (m={m}, tau={tau}) does not fit series of length {n}"
        )));
    }
    let count = n - (m - 1) * tau;
    let x = s.values();
    let mut flat = Vec::with_capacity(count * m);
    for i in 0..count {
        for d in 0..m {
            flat.push(x[i + d * tau]);
        }
    }
    Ok((flat, m))
}

#[inline]
fn maxnorm<F: Scalar>(a: &[F], b: &[F], m: usize) -> F {
    let mut best = F::zero();
    for d in 0..m {
        let diff = (a[d] - b[d]).abs();
        if diff > best {
            best = diff;
        }
    }
    best
}

fn sample_indices(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<usize> {
    if count >= n {
        return (0..n).collect();
    }
    // Partial Fisher-Yates over an index arena.
    let mut arena: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = rng.random_range(i..n);
        arena.swap(i, j);
    }
    arena.truncate(count);
    arena
}

/// Pick the contiguous window (>= MIN_FIT_POINTS) minimizing the variance of
/// local slopes; return (start, end, ls_slope, r_squared).
fn best_scaling_window<F: Scalar>(curve: &[(F, F)]) -> (usize, usize, f64, f64) {
    let xs: Vec<f64> = curve.iter().map(|p| p.0.to64()).collect();
    let ys: Vec<f64> = curve.iter().map(|p| p.1.to64()).collect();
    let n = xs.len();
    let mut best: Option<(f64, usize, usize)> = None;
    for a in 0..=(n - MIN_FIT_POINTS) {
        for b in (a + MIN_FIT_POINTS - 1)..n {
            let mut slopes = Vec::with_capacity(b - a);
            for i in a..b {
                slopes.push((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
            }
            let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
            let var = slopes.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / slopes.len() as f64;
            if best.map_or(true, |(bv, _, _)| var < bv) {
                best = Some((var, a, b));
            }
        }
    }
    let (_, a, b) = best.expect("at least one window exists");
    let (slope, r2) = ls_fit(&xs[a..=b], &ys[a..=b]);
    (a, b, slope, r2)
}

fn ls_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    (slope, r2)
}

fn empirical_quantile<F: Scalar>(sorted: &[F], q: f64) -> F {
    let n = sorted.len();
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        return sorted[lo];
    }
    let w = F::c(pos - lo as f64);
    sorted[lo] * (F::one() - w) + sorted[hi] * w
}

/// Derive a stream seed from a base seed (SplitMix64 step).
pub(crate) fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn gwn(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn series(v: Vec<f64>) -> Series<f64> {
        Series::new(v, 1.0).unwrap()
    }

    fn amplitude_spectrum(x: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft_in_place(&mut buf);
        buf.iter().map(|c| c.norm()).collect()
    }

    #[test]
    fn ft_surrogate_preserves_amplitudes() {
        for n in [512usize, 513] {
            let s = series(gwn(n, 1));
            let sur = ft_surrogate(&s, 99).unwrap();
            let a = amplitude_spectrum(s.values());
            let b = amplitude_spectrum(sur.values());
            for (x, y) in a.iter().zip(&b) {
                let scale = x.abs().max(1.0);
                assert!((x - y).abs() / scale < 1e-9, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn ft_surrogate_of_zero_series_is_zero() {
        let s = series(vec![0.0; 512]);
        let sur = ft_surrogate(&s, 5).unwrap();
        assert!(sur.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn ft_surrogate_of_gwn_stays_white() {
        let s = series(gwn(8192, 2));
        let sur = ft_surrogate(&s, 7).unwrap();
        let acf = sur.acf(50).unwrap();
        let outside = acf.coefficients[1..]
            .iter()
            .filter(|c| c.abs() > acf.confidence_band)
            .count();
        assert!(outside <= 5, "{outside} of 50 lags outside the band");
    }

    #[test]
    fn aaft_multiset_identity_is_exact() {
        let skewed: Vec<f64> = gwn(2048, 3).iter().map(|v| v.exp()).collect();
        let s = series(skewed);
        for seed in 0..20 {
            let sur = aaft_surrogate(&s, seed).unwrap();
            let mut a = s.values().to_vec();
            let mut b = sur.values().to_vec();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            assert_eq!(a, b, "multiset differs for seed {seed}");
            assert_ne!(s.values(), sur.values(), "surrogate must differ in order");
        }
    }

    #[test]
    fn aaft_preserves_ar1_autocorrelation() {
        let e = gwn(20_500, 4);
        let mut y = vec![0.0; e.len()];
        for k in 1..e.len() {
            y[k] = 0.7 * y[k - 1] + e[k];
        }
        let s = series(y[500..].to_vec());
        let sur = aaft_surrogate(&s, 11).unwrap();
        let a1 = s.acf(1).unwrap().coefficients[1];
        let b1 = sur.acf(1).unwrap().coefficients[1];
        assert!((a1 - b1).abs() <= 0.05, "acf(1) {a1} vs surrogate {b1}");
    }

    #[test]
    fn line_has_dimension_one() {
        let s = series((0..20_000).map(|k| k as f64).collect());
        let cfg = EmbeddingConfig {
            dimension: 3,
            delay: Some(1),
            theiler_window: Some(3),
            ..Default::default()
        };
        let est = correlation_dimension(&s, &cfg, 1).unwrap();
        assert!((est.d2 - 1.0).abs() <= 0.1, "line d2 = {}", est.d2);
        assert!(est.reliable);
        assert!(est.r_fit_range.0 < est.r_fit_range.1);
    }

    #[test]
    fn gwn_fills_three_dimensions() {
        let s = series(gwn(20_000, 6));
        let cfg = EmbeddingConfig {
            dimension: 3,
            delay: Some(1),
            theiler_window: Some(3),
            ..Default::default()
        };
        let est = correlation_dimension(&s, &cfg, 2).unwrap();
        assert!((est.d2 - 3.0).abs() <= 0.3, "gwn d2 = {}", est.d2);
    }

    #[test]
    fn henon_dimension_near_one_point_two() {
        let s = series(henon(20_000, 3));
        let cfg = EmbeddingConfig {
            dimension: 2,
            delay: Some(1),
            theiler_window: Some(2),
            ..Default::default()
        };
        let est = correlation_dimension(&s, &cfg, 3).unwrap();
        assert!((est.d2 - 1.2).abs() <= 0.1, "henon d2 = {}", est.d2);
    }

    #[test]
    fn affine_rescaling_leaves_d2_unchanged() {
        let s = series(gwn(12_000, 8));
        let cfg = EmbeddingConfig {
            dimension: 3,
            delay: Some(1),
            theiler_window: Some(3),
            ..Default::default()
        };
        let base = correlation_dimension(&s, &cfg, 4).unwrap();
        let scaled = series(s.values().iter().map(|v| 3.5 * v + 11.0).collect());
        let est = correlation_dimension(&scaled, &cfg, 4).unwrap();
        assert!(
            (base.d2 - est.d2).abs() <= 0.05,
            "{} vs {}",
            base.d2,
            est.d2
        );
    }

    #[test]
    fn degenerate_and_argument_errors() {
        let c = series(vec![1.0; 4000]);
        let cfg = EmbeddingConfig::default();
        assert!(correlation_dimension(&c, &cfg, 0).is_err());
        let short = series(gwn(1000, 9));
        assert!(correlation_dimension(&short, &cfg, 0).is_err());
        assert!(linearity_test(&short, 10, &cfg, 0, 0.05).is_err());
    }

    #[test]
    fn linearity_test_is_deterministic() {
        let e = gwn(6_000, 10);
        let mut y = vec![0.0; e.len()];
        for k in 1..e.len() {
            y[k] = 0.5 * y[k - 1] + e[k];
        }
        let s = series(y);
        let cfg = EmbeddingConfig {
            dimension: 3,
            delay: Some(1),
            theiler_window: Some(3),
            max_reference_points: 500,
        };
        let a = linearity_test(&s, 19, &cfg, 42, 0.05).unwrap();
        let b = linearity_test(&s, 42.max(19), &cfg, 42, 0.05).unwrap();
        let c = linearity_test(&s, 19, &cfg, 42, 0.05).unwrap();
        assert_eq!(a, c, "same seed must reproduce bit for bit");
        assert_eq!(a.statistic, b.statistic);
    }

    pub(super) fn henon(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0.1 + 1e-3 * <f64 as From<f32>>::from(rng.random::<f32>());
        let mut y = 0.1;
        let mut out = Vec::with_capacity(n);
        for i in 0..(n + 1000) {
            let nx = 1.0 - 1.4 * x * x + y;
            y = 0.3 * x;
            x = nx;
            if i >= 1000 {
                out.push(x);
            }
        }
        out
    }
}
