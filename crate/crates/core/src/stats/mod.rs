//! Descriptive summaries and the inferential battery: Welch's t-test,
//! two-way ANOVA with Type II sums of squares, and Pearson correlation.

pub(crate) mod anova;
pub mod special;

pub use anova::{anova2, Anova2, AnovaMode, EffectRow};

use std::fmt;

use crate::error::{Error, Result};
use crate::num::{c, Real};
use special::t_two_sided_p;

/// Sample quantile definition (Hyndman & Fan numbering).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantileMethod {
    /// `h = (n − 1)p + 1`, linear interpolation.
    #[default]
    Type7,
    /// `h = (n + 1)p`, linear interpolation, clamped to the sample range.
    Type6,
}

/// `Min. 1st Qu. Median Mean 3rd Qu. Max.`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SixNumberSummary<T = f64> {
    pub min: T,
    pub q1: T,
    pub median: T,
    pub mean: T,
    pub q3: T,
    pub max: T,
}

fn sorted_finite<T: Real>(values: &[T]) -> Result<Vec<T>> {
    if values.is_empty() {
        return Err(Error::InsufficientData("empty sample".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite value {v} in sample")));
    }
    let mut s = values.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(s)
}

fn quantile_sorted<T: Real>(sorted: &[T], p: f64, method: QuantileMethod) -> T {
    let n = sorted.len();
    let h = match method {
        QuantileMethod::Type7 => (n as f64 - 1.0) * p,
        QuantileMethod::Type6 => ((n as f64 + 1.0) * p - 1.0).clamp(0.0, n as f64 - 1.0),
    };
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= n || frac == 0.0 {
        return sorted[lo.min(n - 1)];
    }
    sorted[lo] + (sorted[lo + 1] - sorted[lo]) * c(frac)
}

/// Single quantile `p ∈ [0, 1]`.
pub fn quantile<T: Real>(values: &[T], p: f64, method: QuantileMethod) -> Result<T> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("quantile probability {p} outside [0, 1]")));
    }
    Ok(quantile_sorted(&sorted_finite(values)?, p, method))
}

pub fn median<T: Real>(values: &[T]) -> Result<T> {
    quantile(values, 0.5, QuantileMethod::Type7)
}

pub fn mean<T: Real>(values: &[T]) -> T {
    values.iter().copied().sum::<T>() / T::from_usize_lossy(values.len())
}

/// Unbiased sample variance.
pub fn variance<T: Real>(values: &[T]) -> T {
    let m = mean(values);
    values.iter().map(|v| (*v - m) * (*v - m)).sum::<T>() / T::from_usize_lossy(values.len() - 1)
}

pub fn summarize<T: Real>(values: &[T]) -> Result<SixNumberSummary<T>> {
    summarize_with(values, QuantileMethod::Type7)
}

pub fn summarize_with<T: Real>(values: &[T], method: QuantileMethod) -> Result<SixNumberSummary<T>> {
    let s = sorted_finite(values)?;
    let mean = mean(&s).max(s[0]).min(s[s.len() - 1]);
    Ok(SixNumberSummary {
        min: s[0],
        q1: quantile_sorted(&s, 0.25, method),
        median: quantile_sorted(&s, 0.5, method),
        mean,
        q3: quantile_sorted(&s, 0.75, method),
        max: s[s.len() - 1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    WelchT,
    AnovaF,
    PearsonT,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestKind::WelchT => "welch_t",
            TestKind::AnovaF => "anova_f",
            TestKind::PearsonT => "pearson_t",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult<T = f64> {
    pub statistic: T,
    /// Degrees of freedom; fractional for Welch. Numerator df for F tests.
    pub df: T,
    /// Denominator df for F tests.
    pub df2: Option<T>,
    pub p_value: T,
    pub kind: TestKind,
}

/// Welch's unequal-variance t-test, two-sided.
pub fn welch_t<T: Real>(a: &[T], b: &[T]) -> Result<TestResult<T>> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "each group needs at least 2 values (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (T::from_usize_lossy(a.len()), T::from_usize_lossy(b.len()));
    let (va, vb) = (variance(a) / na, variance(b) / nb);
    if va + vb == T::zero() {
        return Err(Error::DegenerateData("both groups have zero variance".into()));
    }
    let t = (mean(a) - mean(b)) / (va + vb).sqrt();
    let df = (va + vb).powi(2) / (va * va / (na - T::one()) + vb * vb / (nb - T::one()));
    Ok(TestResult { statistic: t, df, df2: None, p_value: t_two_sided_p(t, df), kind: TestKind::WelchT })
}

/// Two-sided p-value of a sample correlation `r` over `n` pairs.
pub fn pearson_p_value<T: Real>(r: T, n: usize) -> TestResult<T> {
    let df = T::from_usize_lossy(n - 2);
    let denom = T::one() - r * r;
    let t = if denom <= T::zero() { T::infinity() * r.signum() } else { r * (df / denom).sqrt() };
    TestResult { statistic: t, df, df2: None, p_value: t_two_sided_p(t, df), kind: TestKind::PearsonT }
}

/// Sample correlation and its t-test.
pub fn pearson<T: Real>(x: &[T], y: &[T]) -> Result<(T, TestResult<T>)> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!("length mismatch: {} vs {}", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!("need at least 3 pairs, got {}", x.len())));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (xi, yi) in x.iter().zip(y) {
        let (dx, dy) = (*xi - mx, *yi - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::DegenerateData("zero variance in a correlation input".into()));
    }
    let r = (sxy / (sxx * syy).sqrt()).max(-T::one()).min(T::one());
    Ok((r, pearson_p_value(r, x.len())))
}
