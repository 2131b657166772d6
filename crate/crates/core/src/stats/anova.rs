//! Fixed-effects two-way ANOVA with Type II sums of squares, suitable for
//! unbalanced designs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::num::{c, Real};

use super::special::f_upper_p;
use super::{TestKind, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnovaMode {
    /// `A + B + A×B`; every cell must be populated.
    #[default]
    WithInteraction,
    /// `A + B` only; tolerates empty cells.
    MainEffectsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectRow<T = f64> {
    pub sum_sq: T,
    pub test: TestResult<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Anova2<T = f64> {
    pub factor_a: EffectRow<T>,
    pub factor_b: EffectRow<T>,
    pub interaction: Option<EffectRow<T>>,
    pub residual_ss: T,
    pub residual_df: usize,
    pub levels_a: usize,
    pub levels_b: usize,
}

fn rss_of<T: Real>(ys: &[T], a_idx: &[usize], b_idx: &[usize], la: usize, lb: usize, use_a: bool, use_b: bool) -> Result<T> {
    let cols = 1 + if use_a { la - 1 } else { 0 } + if use_b { lb - 1 } else { 0 };
    let n = ys.len();
    let mut design = vec![T::zero(); n * cols];
    for i in 0..n {
        let row = &mut design[i * cols..(i + 1) * cols];
        row[0] = T::one();
        let mut off = 1;
        if use_a {
            if a_idx[i] > 0 {
                row[off + a_idx[i] - 1] = T::one();
            }
            off += la - 1;
        }
        if use_b && b_idx[i] > 0 {
            row[off + b_idx[i] - 1] = T::one();
        }
    }
    Ok(least_squares(&design, n, cols, ys)?.rss)
}

fn effect<T: Real>(ss: T, df: usize, resid_ss: T, resid_df: usize, zero: T) -> EffectRow<T> {
    let ss = if ss <= zero { T::zero() } else { ss };
    let (dfe, dfr) = (T::from_usize_lossy(df), T::from_usize_lossy(resid_df));
    let (f, p) = if ss == T::zero() {
        (T::zero(), T::one())
    } else if resid_ss <= zero {
        (T::infinity(), T::zero())
    } else {
        let f = (ss / dfe) / (resid_ss / dfr);
        (f, f_upper_p(f, dfe, dfr))
    };
    EffectRow { sum_sq: ss, test: TestResult { statistic: f, df: dfe, df2: Some(dfr), p_value: p, kind: TestKind::AnovaF } }
}

/// Two-way ANOVA over `(level_a, level_b, value)` observations.
///
/// Type II: each main effect is tested after the other main effect, and the
/// interaction after both.
pub fn anova2<A: Ord + Clone, B: Ord + Clone, T: Real>(records: &[(A, B, T)], mode: AnovaMode) -> Result<Anova2<T>> {
    let mut levels_a: BTreeMap<A, usize> = BTreeMap::new();
    let mut levels_b: BTreeMap<B, usize> = BTreeMap::new();
    for (a, b, _) in records {
        levels_a.entry(a.clone()).or_insert(0);
        levels_b.entry(b.clone()).or_insert(0);
    }
    let (la, lb) = (levels_a.len(), levels_b.len());
    if la < 2 || lb < 2 {
        return Err(Error::InsufficientData(format!("each factor needs >= 2 levels (got {la} and {lb})")));
    }
    for (i, v) in levels_a.values_mut().enumerate() {
        *v = i;
    }
    for (i, v) in levels_b.values_mut().enumerate() {
        *v = i;
    }
    if let Some((_, _, y)) = records.iter().find(|(_, _, y)| !y.is_finite()) {
        return Err(Error::Domain(format!("non-finite observation {y}")));
    }
    let a_idx: Vec<usize> = records.iter().map(|(a, _, _)| levels_a[a]).collect();
    let b_idx: Vec<usize> = records.iter().map(|(_, b, _)| levels_b[b]).collect();
    let ys: Vec<T> = records.iter().map(|(_, _, y)| *y).collect();
    let n = ys.len();

    let mut cell_sum = vec![T::zero(); la * lb];
    let mut cell_n = vec![0usize; la * lb];
    for i in 0..n {
        cell_sum[a_idx[i] * lb + b_idx[i]] += ys[i];
        cell_n[a_idx[i] * lb + b_idx[i]] += 1;
    }
    let empty = cell_n.iter().filter(|&&k| k == 0).count();
    if mode == AnovaMode::WithInteraction && empty > 0 {
        return Err(Error::Config(format!(
            "{empty} empty cell(s); the interaction term is not estimable, use main-effects-only mode"
        )));
    }

    let grand = ys.iter().copied().sum::<T>() / T::from_usize_lossy(n);
    let total_ss: T = ys.iter().map(|y| (*y - grand) * (*y - grand)).sum();
    let raw_ss: T = ys.iter().map(|y| *y * *y).sum();
    let zero = (total_ss + raw_ss) * T::epsilon() * c::<T>(1e3) * T::from_usize_lossy(n);

    let rss_ab = rss_of(&ys, &a_idx, &b_idx, la, lb, true, true)?;
    let rss_a = rss_of(&ys, &a_idx, &b_idx, la, lb, true, false)?;
    let rss_b = rss_of(&ys, &a_idx, &b_idx, la, lb, false, true)?;

    let (resid_ss, resid_df, interaction_ss) = match mode {
        AnovaMode::WithInteraction => {
            let within: T = (0..n)
                .map(|i| {
                    let cell = a_idx[i] * lb + b_idx[i];
                    let m = cell_sum[cell] / T::from_usize_lossy(cell_n[cell]);
                    (ys[i] - m) * (ys[i] - m)
                })
                .sum();
            (within, n.checked_sub(la * lb), Some(rss_ab - within))
        }
        AnovaMode::MainEffectsOnly => (rss_ab, n.checked_sub(la + lb - 1), None),
    };
    let resid_df = resid_df
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::DegenerateData(format!("no residual degrees of freedom with {n} observations")))?;
    let resid_ss = if resid_ss <= zero { T::zero() } else { resid_ss };

    Ok(Anova2 {
        factor_a: effect(rss_b - rss_ab, la - 1, resid_ss, resid_df, zero),
        factor_b: effect(rss_a - rss_ab, lb - 1, resid_ss, resid_df, zero),
        interaction: interaction_ss.map(|ss| effect(ss, (la - 1) * (lb - 1), resid_ss, resid_df, zero)),
        residual_ss: resid_ss,
        residual_df: resid_df,
        levels_a: la,
        levels_b: lb,
    })
}
