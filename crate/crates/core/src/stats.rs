//! Correlation between indicator vectors and the two-proportion z-test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub coefficient: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZTestResult {
    pub z: f64,
    pub p_two_sided: f64,
    pub pooled_proportion: f64,
    pub proportion_a: f64,
    pub proportion_b: f64,
}

impl ZTestResult {
    /// Upper-tail p-value for the alternative that sample A's proportion is larger.
    pub fn p_one_sided(&self) -> f64 {
        normal_cdf(-self.z)
    }
}

/// Standard normal CDF, via the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    (0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)).clamp(0.0, 1.0)
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::TooFewObservations(x.len()));
    }
    let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if constant(x) || constant(y) {
        return Err(Error::ZeroVariance);
    }
    Ok(())
}

/// Product-moment correlation coefficient.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    check_pair(x, y)?;
    let n = x.len();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(CorrelationResult {
        coefficient: (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0),
        n,
    })
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Rank-order correlation: Pearson over average ranks.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    check_pair(x, y)?;
    pearson_r(&average_ranks(x), &average_ranks(y))
}

/// Pooled-variance z-test for the difference of two independent proportions.
pub fn ztest_proportions(k1: u64, n1: u64, k2: u64, n2: u64) -> Result<ZTestResult> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidCounts("sample sizes must be positive".into()));
    }
    if k1 > n1 || k2 > n2 {
        return Err(Error::InvalidCounts(format!(
            "successes exceed trials ({k1}/{n1}, {k2}/{n2})"
        )));
    }
    let pooled = (k1 + k2) as f64 / (n1 + n2) as f64;
    if pooled == 0.0 || pooled == 1.0 {
        return Err(Error::DegenerateProportions(pooled));
    }
    let (pa, pb) = (k1 as f64 / n1 as f64, k2 as f64 / n2 as f64);
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    let z = (pa - pb) / se;
    Ok(ZTestResult {
        z,
        p_two_sided: (2.0 * normal_cdf(-z.abs())).min(1.0),
        pooled_proportion: pooled,
        proportion_a: pa,
        proportion_b: pb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Φ by composite Simpson integration of the density from 0.
    fn cdf_by_quadrature(x: f64) -> f64 {
        let steps = 20_000;
        let h = x / steps as f64;
        let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = pdf(0.0) + pdf(x);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * pdf(i as f64 * h);
        }
        0.5 + acc * h / 3.0
    }

    #[test]
    fn normal_cdf_examples() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((cdf_by_quadrature(1.96) - 0.975_002_1).abs() < 1e-7);
        assert!((normal_cdf(1.96) - 0.97500).abs() < 1e-4);
        assert!((normal_cdf(-1.96) - 0.02500).abs() < 1e-4);
        for x in [-4.0, -2.5, -1.0, -0.3, 0.7, 1.5, 3.2] {
            assert!((normal_cdf(x) - cdf_by_quadrature(x)).abs() < 1e-7, "x={x}");
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 4.0, 2.5, 9.0, -3.0];
        assert!((pearson_r(&x, &x).unwrap().coefficient - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = x.iter().map(|v| -2.0 * v + 3.0).collect();
        assert!((pearson_r(&x, &neg).unwrap().coefficient + 1.0).abs() < 1e-12);
        // sxy = 3, sxx = 2, syy = 14/3: r = 3 / sqrt(28/3)
        let r = pearson_r(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap();
        assert!((r.coefficient - 0.98198).abs() < 1e-5);
        assert_eq!(r.n, 3);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson_r(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch(2, 1))
        ));
        assert!(matches!(
            pearson_r(&[0.1, 0.1, 0.1], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroVariance)
        ));
        assert!(matches!(
            pearson_r(&[1.0], &[1.0]),
            Err(Error::TooFewObservations(1))
        ));
    }

    #[test]
    fn spearman_examples() {
        let x = [3.0, 1.0, 4.0, 1.5, 9.0];
        let cubed: Vec<f64> = x.iter().map(|v| v * v * v + 7.0).collect();
        assert!((spearman_rho(&x, &cubed).unwrap().coefficient - 1.0).abs() < 1e-12);
        let rev: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((spearman_rho(&x, &rev).unwrap().coefficient + 1.0).abs() < 1e-12);
        // d = (-2, 1, 1), sum d^2 = 6, rho = 1 - 6*6/(3*8)
        let rho = spearman_rho(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0]).unwrap();
        assert!((rho.coefficient + 0.5).abs() < 1e-12);
    }

    #[test]
    fn average_ranks_ties() {
        assert_eq!(
            average_ranks(&[10.0, 20.0, 10.0, 5.0]),
            vec![2.5, 4.0, 2.5, 1.0]
        );
    }

    #[test]
    fn ztest_examples() {
        let same = ztest_proportions(50, 100, 50, 100).unwrap();
        assert_eq!(same.z, 0.0);
        assert_eq!(same.p_two_sided, 1.0);

        // pooled 0.15, se = sqrt(0.15 * 0.85 * 0.02) = 0.0504975
        let t = ztest_proportions(20, 100, 10, 100).unwrap();
        assert!((t.z - 1.9803).abs() < 1e-3);
        assert!((t.p_two_sided - 0.0477).abs() < 1e-3);
        assert!((t.pooled_proportion - 0.15).abs() < 1e-15);
        assert!((t.p_one_sided() - t.p_two_sided / 2.0).abs() < 1e-12);

        let r = ztest_proportions(10, 100, 20, 100).unwrap();
        assert_eq!(r.z, -t.z);
    }

    #[test]
    fn ztest_errors() {
        assert!(matches!(
            ztest_proportions(0, 10, 0, 20),
            Err(Error::DegenerateProportions(_))
        ));
        assert!(matches!(
            ztest_proportions(10, 10, 20, 20),
            Err(Error::DegenerateProportions(_))
        ));
        assert!(ztest_proportions(11, 10, 1, 20).is_err());
        assert!(ztest_proportions(0, 0, 1, 20).is_err());
    }
}
