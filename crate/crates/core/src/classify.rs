//! Tense/stable/lax labels for close vowels, absolute and relative.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::num::{c, Real};
use crate::stats::{mean, median, welch_t, TestKind, TestResult};
use crate::tenseness::deviation_index;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TensenessClass {
    Tense,
    Stable,
    Lax,
}

impl TensenessClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Tense => "tense",
            Self::Stable => "stable",
            Self::Lax => "lax",
        }
    }
}

impl fmt::Display for TensenessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Negative angle is tense, positive is lax, `|θ| ≤ ε` is stable.
pub fn classify_theta<T: Real>(theta1_rad: T, epsilon_rad: T) -> TensenessClass {
    if theta1_rad < -epsilon_rad {
        TensenessClass::Tense
    } else if theta1_rad > epsilon_rad {
        TensenessClass::Lax
    } else {
        TensenessClass::Stable
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPolicy<T = f64> {
    pub alpha: T,
    pub min_gap: T,
    pub epsilon: T,
}

impl<T: Real> Default for PairPolicy<T> {
    fn default() -> Self {
        Self { alpha: c(0.05), min_gap: c(0.1), epsilon: T::zero() }
    }
}

impl<T: Real> PairPolicy<T> {
    pub fn new(alpha: T, min_gap: T, epsilon: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if !(min_gap >= T::zero()) || !min_gap.is_finite() {
            return Err(Error::Config(format!("min_gap must be finite and >= 0, got {min_gap}")));
        }
        if !(epsilon >= T::zero()) || !epsilon.is_finite() {
            return Err(Error::Config(format!("epsilon must be finite and >= 0, got {epsilon}")));
        }
        Ok(Self { alpha, min_gap, epsilon })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEvidence<T = f64> {
    pub median_a: T,
    pub median_b: T,
    pub welch_t: T,
    pub welch_df: T,
    pub welch_p: T,
    pub median_gap: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairVerdict<T = f64> {
    pub label_a: TensenessClass,
    pub label_b: TensenessClass,
    pub bifurcated: bool,
    pub evidence: PairEvidence<T>,
}

fn welch_or_point_mass<T: Real>(a: &[T], b: &[T]) -> Result<TestResult<T>> {
    match welch_t(a, b) {
        Err(Error::DegenerateData(_)) => {
            // Two constant groups: either identical or separated with certainty.
            let diff = mean(a) - mean(b);
            let df = T::from_usize_lossy(a.len() + b.len() - 2);
            let (statistic, p_value) = if diff == T::zero() {
                (T::zero(), T::one())
            } else {
                (diff.signum() * T::infinity(), T::zero())
            };
            Ok(TestResult { statistic, df, df2: None, p_value, kind: TestKind::WelchT })
        }
        other => other,
    }
}

/// Relative classification of two θ₁ samples.
///
/// The pair is bifurcated when the Welch test rejects at `alpha` and the
/// medians are at least `min_gap` apart; the lower group is then tense.
pub fn classify_pair<T: Real>(thetas_a: &[T], thetas_b: &[T], policy: &PairPolicy<T>) -> Result<PairVerdict<T>> {
    if thetas_a.len() < 2 || thetas_b.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "each group needs at least 2 angles (got {} and {})",
            thetas_a.len(),
            thetas_b.len()
        )));
    }
    let (median_a, median_b) = (median(thetas_a)?, median(thetas_b)?);
    let test = welch_or_point_mass(thetas_a, thetas_b)?;
    let median_gap = (median_a - median_b).abs();
    let bifurcated = test.p_value < policy.alpha && median_gap >= policy.min_gap && median_a != median_b;
    let (label_a, label_b) = if bifurcated {
        if median_a < median_b {
            (TensenessClass::Tense, TensenessClass::Lax)
        } else {
            (TensenessClass::Lax, TensenessClass::Tense)
        }
    } else {
        (classify_theta(median_a, policy.epsilon), classify_theta(median_b, policy.epsilon))
    };
    Ok(PairVerdict {
        label_a,
        label_b,
        bifurcated,
        evidence: PairEvidence {
            median_a,
            median_b,
            welch_t: test.statistic,
            welch_df: test.df,
            welch_p: test.p_value,
            median_gap,
        },
    })
}

/// Which of two vowels sits further from the neutral F1.
///
/// `Ordering::Greater` means vowel A is relatively more tense.
pub fn relative_by_deviation<T: Real>(f1_a: T, f1_b: T, f_neu: T) -> Ordering {
    let (da, db) = (deviation_index(f1_a, f_neu), deviation_index(f1_b, f_neu));
    da.partial_cmp(&db).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn around(median: f64, sd: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Normal::new(0.0, sd).unwrap();
        let mut v: Vec<f64> = (0..n).map(|_| d.sample(&mut rng)).collect();
        let m = median_of(&v);
        v.iter_mut().for_each(|x| *x += median - m);
        v
    }

    fn median_of(v: &[f64]) -> f64 {
        median(v).unwrap()
    }

    #[test]
    fn theta_rules() {
        assert_eq!(classify_theta(-0.3, 0.01), TensenessClass::Tense);
        assert_eq!(classify_theta(0.0, 0.0), TensenessClass::Stable);
        assert_eq!(classify_theta(0.005, 0.01), TensenessClass::Stable);
        assert_eq!(classify_theta(-0.01, 0.01), TensenessClass::Stable);
        assert_eq!(classify_theta(0.2, 0.0), TensenessClass::Lax);
    }

    #[test]
    fn median_pairs_bifurcate() {
        let policy = PairPolicy::default();
        for (i, (ma, mb)) in [(-0.2810, 0.5170), (-0.69243, 0.4031), (-0.18350, 0.2810)].into_iter().enumerate() {
            let a = around(ma, 0.15, 40, 10 + i as u64);
            let b = around(mb, 0.15, 40, 20 + i as u64);
            let v = classify_pair(&a, &b, &policy).unwrap();
            assert!(v.bifurcated);
            assert_eq!((v.label_a, v.label_b), (TensenessClass::Tense, TensenessClass::Lax));
            assert!((v.evidence.median_a - ma).abs() < 1e-12);
        }
    }

    #[test]
    fn same_sign_pair_is_relative() {
        let a = around(0.05, 0.02, 30, 1);
        let b = around(0.3, 0.02, 30, 2);
        let v = classify_pair(&a, &b, &PairPolicy::default()).unwrap();
        assert!(v.bifurcated);
        assert_eq!((v.label_a, v.label_b), (TensenessClass::Tense, TensenessClass::Lax));
    }

    #[test]
    fn identical_groups_fall_back_to_absolute() {
        let a = around(-0.2, 0.1, 20, 5);
        let v = classify_pair(&a, &a, &PairPolicy::default()).unwrap();
        assert!(!v.bifurcated);
        assert_eq!((v.label_a, v.label_b), (TensenessClass::Tense, TensenessClass::Tense));
        assert_eq!(v.evidence.welch_t, 0.0);
    }

    #[test]
    fn point_masses() {
        let v = classify_pair(&[-0.3, -0.3], &[0.4, 0.4], &PairPolicy::default()).unwrap();
        assert!(v.bifurcated);
        assert_eq!(v.evidence.welch_p, 0.0);
        let v = classify_pair(&[0.1, 0.1], &[0.1, 0.1], &PairPolicy::default()).unwrap();
        assert!(!v.bifurcated);
        assert_eq!(v.label_a, TensenessClass::Lax);
    }

    #[test]
    fn small_gap_is_not_bifurcated() {
        let a = around(0.0, 0.001, 50, 3);
        let b = around(0.05, 0.001, 50, 4);
        let v = classify_pair(&a, &b, &PairPolicy::default()).unwrap();
        assert!(v.evidence.welch_p < 1e-10);
        assert!(!v.bifurcated);
    }

    #[test]
    fn too_few_values() {
        assert!(matches!(classify_pair(&[0.1], &[0.2, 0.3], &PairPolicy::default()), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn policy_validation() {
        assert!(PairPolicy::new(0.0, 0.1, 0.0).is_err());
        assert!(PairPolicy::new(0.05, -0.1, 0.0).is_err());
        assert!(PairPolicy::new(0.05, 0.1, f64::NAN).is_err());
        assert!(PairPolicy::new(0.05_f64, 0.1, 0.0).is_ok());
    }

    #[test]
    fn deviation_ordering() {
        assert_eq!(relative_by_deviation(300.0, 450.0, 500.0), Ordering::Greater);
        assert_eq!(relative_by_deviation(500.0, 500.0, 500.0), Ordering::Equal);
        assert_eq!(relative_by_deviation(700.0, 350.0, 500.0), Ordering::Greater);
        assert_eq!(relative_by_deviation(480.0_f32, 300.0, 500.0), Ordering::Less);
    }

    proptest! {
        #[test]
        fn theta_monotone(x in -3.0f64..3.0, y in -3.0f64..3.0, eps in 0.0f64..0.5) {
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            prop_assert!(classify_theta(lo, eps) <= classify_theta(hi, eps));
        }

        #[test]
        fn pair_symmetry(ma in -1.0f64..1.0, mb in -1.0f64..1.0, sd in 0.01f64..0.3, seed in 0u64..1000) {
            let a = around(ma, sd, 12, seed);
            let b = around(mb, sd, 15, seed + 7);
            let p = PairPolicy::default();
            let ab = classify_pair(&a, &b, &p).unwrap();
            let ba = classify_pair(&b, &a, &p).unwrap();
            prop_assert_eq!(ab.bifurcated, ba.bifurcated);
            prop_assert_eq!((ab.label_a, ab.label_b), (ba.label_b, ba.label_a));
        }

        #[test]
        fn pair_translation(ma in -1.0f64..1.0, mb in -1.0f64..1.0, shift in -2.0f64..2.0, seed in 0u64..1000) {
            let a = around(ma, 0.1, 20, seed);
            let b = around(mb, 0.1, 20, seed + 1);
            let p = PairPolicy::default();
            let base = classify_pair(&a, &b, &p).unwrap();
            let sa: Vec<f64> = a.iter().map(|x| x + shift).collect();
            let sb: Vec<f64> = b.iter().map(|x| x + shift).collect();
            let moved = classify_pair(&sa, &sb, &p).unwrap();
            // Borderline gaps can flip on rounding alone.
            prop_assume!((base.evidence.median_gap - p.min_gap).abs() > 1e-9);
            prop_assume!((base.evidence.welch_p - p.alpha).abs() > 1e-9);
            prop_assert_eq!(base.bifurcated, moved.bifurcated);
            prop_assert!((base.evidence.welch_t - moved.evidence.welch_t).abs() < 1e-6 * (1.0 + base.evidence.welch_t.abs()));
            if base.bifurcated {
                prop_assert_eq!((base.label_a, base.label_b), (moved.label_a, moved.label_b));
            }
        }

        #[test]
        fn deviation_reflection(a in 50.0f64..1500.0, b in 50.0f64..1500.0, neu in 300.0f64..900.0) {
            let (ra, rb) = (2.0 * neu - a, 2.0 * neu - b);
            prop_assume!(ra > 0.0 && rb > 0.0);
            let da = (a - neu).abs();
            let db = (b - neu).abs();
            prop_assume!((da - db).abs() > 1e-9 * neu);
            prop_assert_eq!(relative_by_deviation(a, b, neu), relative_by_deviation(ra, rb, neu));
        }
    }
}
