//! Shapiro-Wilk normality test with Royston's approximation for the
//! weights and the p-value (AS R94), valid for 3 <= n <= 5000.

use crate::dist;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Series;

use super::{check_alpha, Tail, TestOutcome};

/// Shapiro-Wilk weighting coefficients for a given sample size.
///
/// The vector is antisymmetric (`a[j] = -a[n-1-j]`) with unit sum of
/// squares, approximating m'V^-1 / ||m'V^-1|| for the expected values m and
/// covariance V of standard-normal order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SwWeights<F: Scalar> {
    pub coefficients: Vec<F>,
    pub sample_size: usize,
}

/// Compute the full Royston-approximated weight vector.
pub fn sw_weights<F: Scalar>(n: usize) -> Result<SwWeights<F>> {
    if !(3..=5000).contains(&n) {
        return Err(Error::arg(format!(
            "shapiro_wilk supports 3 <= n <= 5000, got {n}"
        )));
    }
    let half = upper_half_weights(n);
    // Largest order statistics get +a, smallest get -a; middle (odd n) is 0.
    let mut full = vec![0.0f64; n];
    for (i, &w) in half.iter().enumerate() {
        full[n - 1 - i] = w;
        full[i] = -w;
    }
    Ok(SwWeights {
        coefficients: full.into_iter().map(F::c).collect(),
        sample_size: n,
    })
}

/// Shapiro-Wilk test. H0: the sample is drawn from a normal distribution;
/// small W (left tail) rejects.
pub fn shapiro_wilk<F: Scalar>(x: &Series<F>, alpha: F) -> Result<TestOutcome<F>> {
    check_alpha(alpha)?;
    let n = x.len();
    if !(3..=5000).contains(&n) {
        return Err(Error::arg(format!(
            "shapiro_wilk supports 3 <= n <= 5000, got {n}"
        )));
    }
    let mut sorted: Vec<f64> = x.values().iter().map(|v| v.to64()).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("series values are finite"));
    if sorted[n - 1] - sorted[0] <= 0.0 {
        return Err(Error::degenerate("constant sample has undefined W"));
    }

    let half = upper_half_weights(n);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let ssq: f64 = sorted.iter().map(|v| (v - mean) * (v - mean)).sum();
    let mut num = 0.0;
    for (i, &w) in half.iter().enumerate() {
        num += w * (sorted[n - 1 - i] - sorted[i]);
    }
    let w_stat = (num * num / ssq).clamp(0.0, 1.0);
    let p = royston_p_value(w_stat, n);

    Ok(TestOutcome {
        statistic: F::c(w_stat),
        p_value: Some(F::c(p)),
        critical_lower: None,
        critical_upper: None,
        tail: Tail::Left,
        reject_null: p < alpha.to64(),
        alpha,
    })
}

/// Weights for the upper half of the order statistics (all positive),
/// index 0 pairing the extreme order statistics.
fn upper_half_weights(n: usize) -> Vec<f64> {
    let nn2 = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let an = n as f64;
    let an25 = an + 0.25;
    // Blom-scored normal quantiles for the lower half (negative values).
    let mut m: Vec<f64> = (1..=nn2)
        .map(|i| dist::norm_ppf((i as f64 - 0.375) / an25))
        .collect();
    let summ2: f64 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();

    const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
    const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let (start, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
            / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
            .sqrt();
        m[1] = a2;
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    m[0] = a1;
    for v in m.iter_mut().skip(start) {
        *v = -*v / fac;
    }
    // m[0..start] already hold positive polished weights; the rest were
    // negative quantiles flipped positive by the -1/fac rescale.
    m
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Royston (1995) p-value for the W statistic.
fn royston_p_value(w: f64, n: usize) -> f64 {
    if w >= 1.0 {
        return 1.0;
    }
    if w <= 0.0 {
        return 0.0;
    }
    let an = n as f64;
    if n == 3 {
        let stqr = (0.75f64).sqrt().asin();
        let p = 6.0 / std::f64::consts::PI * (w.sqrt().asin() - stqr);
        return p.clamp(0.0, 1.0);
    }
    let y = (1.0 - w).ln();
    const G: [f64; 2] = [-2.273, 0.459];
    const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
    const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
    const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
    const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

    let (z, mu, sigma) = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 1e-99;
        }
        let yt = -(gamma - y).ln();
        (yt, poly(&C3, an), poly(&C4, an).exp())
    } else {
        let x = an.ln();
        (y, poly(&C5, x), poly(&C6, x).exp())
    };
    1.0 - dist::norm_cdf((z - mu) / sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: Vec<f64>) -> Series<f64> {
        Series::new(v, 1.0).unwrap()
    }

    #[test]
    fn matches_reference_implementation_n20() {
        let x20 = vec![
            -1.423825, 1.263728, -0.870662, -0.259173, -0.075343, -0.740885, -1.367793, 0.648893,
            0.361058, -1.952863, 2.34741, 0.968497, -0.759387, 0.902198, -0.466953, -0.06069,
            0.788844, -1.256668, 0.575858, 1.398979,
        ];
        let out = shapiro_wilk(&series(x20), 0.05).unwrap();
        assert!((out.statistic - 0.9796577505).abs() < 1e-7, "{}", out.statistic);
        assert!((out.p_value.unwrap() - 0.9296052925).abs() < 1e-6);
        assert!(!out.reject_null);
    }

    #[test]
    fn matches_reference_implementation_n12() {
        let x12 = vec![
            0.081595, 0.159896, 0.3401, 0.465193, 0.266421, 0.815776, 0.193294, 0.129469,
            0.091665, 0.598568, 0.854742, 0.601621,
        ];
        let out = shapiro_wilk(&series(x12), 0.05).unwrap();
        assert!((out.statistic - 0.8921322842).abs() < 1e-7, "{}", out.statistic);
        assert!((out.p_value.unwrap() - 0.1255432163).abs() < 1e-6);
    }

    #[test]
    fn matches_reference_implementation_n300() {
        let data = include_str!("../../tests/data/sw300.txt");
        let x: Vec<f64> = data.lines().map(|l| l.trim().parse().unwrap()).collect();
        assert_eq!(x.len(), 300);
        let out = shapiro_wilk(&series(x), 0.05).unwrap();
        assert!((out.statistic - 0.9969037193).abs() < 1e-7, "{}", out.statistic);
        assert!((out.p_value.unwrap() - 0.8356110377).abs() < 1e-5);
    }

    #[test]
    fn weights_are_antisymmetric_with_unit_norm() {
        for n in [3, 5, 6, 11, 12, 50, 2000] {
            let w: SwWeights<f64> = sw_weights(n).unwrap();
            assert_eq!(w.coefficients.len(), n);
            let norm: f64 = w.coefficients.iter().map(|a| a * a).sum();
            assert!((norm - 1.0).abs() < 1e-6, "n={n} norm={norm}");
            for j in 0..n {
                assert_eq!(w.coefficients[j], -w.coefficients[n - 1 - j], "n={n} j={j}");
            }
        }
    }

    #[test]
    fn scale_and_location_invariance() {
        let x: Vec<f64> = (0..200).map(|i| ((i * 37 + 11) % 97) as f64 / 9.7).collect();
        let base = shapiro_wilk(&series(x.clone()), 0.05).unwrap();
        let moved: Vec<f64> = x.iter().map(|v| 12.5 * v - 300.0).collect();
        let shifted = shapiro_wilk(&series(moved), 0.05).unwrap();
        assert!((base.statistic - shifted.statistic).abs() < 1e-9);
    }

    #[test]
    fn rejects_uniform_data() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut reject = 0;
        for seed in 0..50 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
            if shapiro_wilk(&series(x), 0.05).unwrap().reject_null {
                reject += 1;
            }
        }
        assert!(reject >= 49, "rejected uniform in only {reject}/50 seeds");
    }

    #[test]
    fn argument_and_degenerate_errors() {
        assert!(shapiro_wilk(&series(vec![1.0, 2.0]), 0.05).is_err());
        let too_long = vec![0.5; 5001];
        assert!(shapiro_wilk(&series(too_long), 0.05).is_err());
        assert!(matches!(
            shapiro_wilk(&series(vec![1.0; 100]), 0.05),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn tiny_sample_p_value_branch() {
        let out = shapiro_wilk(&series(vec![1.0, 2.0, 2.5]), 0.05).unwrap();
        let p = out.p_value.unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
}
