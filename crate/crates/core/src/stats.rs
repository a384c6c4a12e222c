//! Correlation and significance helpers.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_pair<T: Scalar>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "vectors differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::Insufficient {
            what: "paired observations".into(),
            needed: 3,
            available: x.len(),
        });
    }
    Ok(())
}

pub fn mean<T: Scalar>(x: &[T]) -> Option<T> {
    (!x.is_empty()).then(|| x.iter().sum::<T>() / T::from_usize_lossy(x.len()))
}

/// Sample standard deviation (n - 1 denominator); `None` below two values.
pub fn sample_sd<T: Scalar>(x: &[T]) -> Option<T> {
    if x.len() < 2 {
        return None;
    }
    let m = mean(x)?;
    let ss: T = x.iter().map(|&v| (v - m) * (v - m)).sum();
    Some((ss / T::from_usize_lossy(x.len() - 1)).sqrt())
}

/// Pearson product-moment correlation.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    check_pair(x, y)?;
    let mx = mean(x).unwrap();
    let my = mean(y).unwrap();
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy = sxy + da * db;
        sxx = sxx + da * da;
        syy = syy + db * db;
    }
    if sxx == T::zero() {
        return Err(Error::ZeroVariance("first vector".into()));
    }
    if syy == T::zero() {
        return Err(Error::ZeroVariance("second vector".into()));
    }
    // sqrt of the product keeps r(x, x) exactly 1
    let r = sxy / (sxx * syy).sqrt();
    Ok(r.max(-T::one()).min(T::one()))
}

/// 1-based ranks, ties get the average of the positions they span.
pub fn ranks<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![T::zero(); x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share rank mean(i+1..=j+1)
        let avg = T::from_usize_lossy(i + j + 2) / T::from_usize_lossy(2);
        for &k in &order[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation: Pearson over average ranks.
pub fn spearman<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    check_pair(x, y)?;
    pearson(&ranks(x), &ranks(y))
}

/// Fisher z-transform, clamped away from +-1 so perfect correlations stay finite.
pub fn fisher_z(r: f64) -> f64 {
    let r = r.clamp(-0.999_999_999, 0.999_999_999);
    r.atanh()
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-sided p-value.
    pub p: f64,
}

/// Welch two-sample t-test.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TTest> {
    for (name, v) in [("first sample", a), ("second sample", b)] {
        if v.len() < 2 {
            return Err(Error::Insufficient {
                what: name.into(),
                needed: 2,
                available: v.len(),
            });
        }
    }
    let (ma, mb) = (mean(a).unwrap(), mean(b).unwrap());
    let va = sample_sd(a).unwrap().powi(2) / a.len() as f64;
    let vb = sample_sd(b).unwrap().powi(2) / b.len() as f64;
    let se2 = va + vb;
    if se2 == 0.0 {
        return Err(Error::ZeroVariance("both samples".into()));
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (va * va / (a.len() - 1) as f64 + vb * vb / (b.len() - 1) as f64);
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::invalid(e.to_string()))?;
    let p = 2.0 * (1.0 - dist.cdf(t.abs()));
    Ok(TTest { t, df, p })
}

/// Welch test on Fisher-z transformed correlations.
pub fn compare_correlations(a: &[f64], b: &[f64]) -> Result<TTest> {
    let za: Vec<f64> = a.iter().map(|&r| fisher_z(r)).collect();
    let zb: Vec<f64> = b.iter().map(|&r| fisher_z(r)).collect();
    welch_t_test(&za, &zb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // sum((x-mx)(y-my)) / sqrt(sum((x-mx)^2) sum((y-my)^2)), written out longhand
    fn definition_r(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let mut num = 0.0;
        let mut dx = 0.0;
        let mut dy = 0.0;
        for i in 0..x.len() {
            num += (x[i] - mx) * (y[i] - my);
            dx += (x[i] - mx).powi(2);
            dy += (y[i] - my).powi(2);
        }
        num / (dx * dy).sqrt()
    }

    #[test]
    fn identities() {
        let x = [0.1, 0.5, 0.2, 0.9, 0.4];
        assert_eq!(pearson(&x, &x).unwrap(), 1.0);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson(&x, &neg).unwrap(), -1.0);
    }

    #[test]
    fn ten_point_fixture() {
        let x = [0.12, 0.85, 0.33, 0.47, 0.91, 0.05, 0.66, 0.29, 0.74, 0.58];
        let y = [0.20, 0.70, 0.41, 0.39, 0.88, 0.11, 0.52, 0.35, 0.80, 0.47];
        let r: f64 = pearson(&x, &y).unwrap();
        assert!((r - definition_r(&x, &y)).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_is_error() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroVariance(_))
        ));
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn spearman_ties() {
        let x = [10.0, 20.0, 20.0, 30.0, 40.0];
        assert_eq!(ranks(&x), vec![1.0, 2.5, 2.5, 4.0, 5.0]);
        // ranks by hand: x -> 1, 2.5, 2.5, 4, 5 ; y -> 2, 1, 3, 5, 4
        let y = [2.0, 1.0, 3.0, 9.0, 7.0];
        let rs: f64 = spearman(&x, &y).unwrap();
        let expected = definition_r(&[1.0, 2.5, 2.5, 4.0, 5.0], &[2.0, 1.0, 3.0, 5.0, 4.0]);
        assert!((rs - expected).abs() < 1e-12);
        assert!((expected - 0.7181848464596079).abs() < 1e-12);
    }

    #[test]
    fn welch_separates() {
        let a = [0.8, 0.82, 0.79, 0.85, 0.81, 0.78];
        let b = [0.1, 0.15, 0.12, 0.2, 0.05, 0.11];
        let t = compare_correlations(&a, &b).unwrap();
        assert!(t.t > 0.0);
        assert!(t.p < 0.001);
        let same = welch_t_test(&a, &a).unwrap();
        assert!((same.p - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn pearson_bounded_and_symmetric(v in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 3..40)) {
            let (x, y): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
            if let Ok(r) = pearson(&x, &y) {
                prop_assert!((-1.0..=1.0).contains(&r));
                prop_assert!((r - pearson(&y, &x).unwrap()).abs() < 1e-12);
            }
        }

        #[test]
        fn ranks_sum(v in prop::collection::vec(0u8..10, 1..50)) {
            let x: Vec<f64> = v.iter().map(|&b| b as f64).collect();
            let n = x.len() as f64;
            let s: f64 = ranks(&x).iter().sum();
            prop_assert!((s - n * (n + 1.0) / 2.0).abs() < 1e-9);
        }
    }
}
