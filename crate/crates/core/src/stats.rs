//! Paired significance tests for classifier comparison: the 5x2
//! cross-validation t-test and the k-fold t-test, both decided at a
//! configurable level (0.01 by default).

use serde::{Deserialize, Serialize};

use crate::num::Real;

/// Default significance level.
pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error("difference score {0} outside [-1, 1]")]
    DiffOutOfRange(f64),
    #[error("degenerate variance: all difference scores identical")]
    DegenerateVariance,
    #[error("need at least {need} fold scores, got {got}")]
    TooFewFolds { need: usize, got: usize },
    #[error("alpha must be in (0, 1), got {0}")]
    BadAlpha(f64),
}

/// The ten difference scores of a 5x2 cross-validation: five repetitions,
/// two folds each. The repetition order is the caller's and is preserved:
/// the test statistic uses the first repetition's first fold in its
/// numerator, so reordering repetitions changes the result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedDiffs<T> {
    pub diffs: [[T; 2]; 5],
}

impl<T: Real> PairedDiffs<T> {
    pub fn new(diffs: [[T; 2]; 5]) -> Result<Self, StatsError> {
        for row in &diffs {
            for &d in row {
                if !(d >= T::of(-1.0) && d <= T::of(1.0)) {
                    return Err(StatsError::DiffOutOfRange(d.to_f64()));
                }
            }
        }
        Ok(Self { diffs })
    }

    /// Elementwise mean of several difference tables (pooling subjects).
    pub fn pooled(tables: &[PairedDiffs<T>]) -> Option<PairedDiffs<T>> {
        if tables.is_empty() {
            return None;
        }
        let scale = T::one() / T::of(tables.len() as f64);
        let mut out = [[T::zero(); 2]; 5];
        for t in tables {
            for (acc, row) in out.iter_mut().zip(&t.diffs) {
                acc[0] += row[0];
                acc[1] += row[1];
            }
        }
        for row in &mut out {
            row[0] *= scale;
            row[1] *= scale;
        }
        Some(PairedDiffs { diffs: out })
    }
}

/// Outcome of a paired t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult<T> {
    pub t: T,
    pub df: u32,
    pub alpha: f64,
    pub significant: bool,
}

/// 5x2 cv paired t-test at the default level.
pub fn dietterich_t<T: Real>(diffs: &PairedDiffs<T>) -> Result<TTestResult<T>, StatsError> {
    dietterich_t_at(diffs, DEFAULT_ALPHA)
}

/// 5x2 cv paired t-test: `t = p_1^(1) / sqrt(mean_i of s_i^2)` with
/// `s_i^2 = (p_i^(1) - m_i)^2 + (p_i^(2) - m_i)^2`, five degrees of freedom.
pub fn dietterich_t_at<T: Real>(
    diffs: &PairedDiffs<T>,
    alpha: f64,
) -> Result<TTestResult<T>, StatsError> {
    check_alpha(alpha)?;
    let two = T::of(2.0);
    let mut var_sum = T::zero();
    for row in &diffs.diffs {
        let mean = (row[0] + row[1]) / two;
        var_sum += (row[0] - mean).powi(2) + (row[1] - mean).powi(2);
    }
    let var = var_sum / T::of(5.0);
    if var <= T::zero() {
        return Err(StatsError::DegenerateVariance);
    }
    let t = diffs.diffs[0][0] / var.sqrt();
    let df = 5;
    Ok(decide(t, df, alpha))
}

/// Variance convention for [`kfold_t_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfoldVariance {
    /// Unbiased sample variance over all folds.
    Unbiased,
    /// Sums only the first `n-1` squared deviations, reproducing the
    /// printed form of the test exactly.
    AsPrinted,
}

/// k-fold cv t-test at the default level with the unbiased variance.
pub fn kfold_t<T: Real>(scores: &[T]) -> Result<TTestResult<T>, StatsError> {
    kfold_t_with(scores, KfoldVariance::Unbiased, DEFAULT_ALPHA)
}

/// k-fold cv t-test: `t = mean * sqrt(n) / s`, `n - 1` degrees of freedom.
pub fn kfold_t_with<T: Real>(
    scores: &[T],
    variance: KfoldVariance,
    alpha: f64,
) -> Result<TTestResult<T>, StatsError> {
    check_alpha(alpha)?;
    let n = scores.len();
    if n < 2 {
        return Err(StatsError::TooFewFolds { need: 2, got: n });
    }
    let nf = T::of(n as f64);
    let mean = scores.iter().copied().sum::<T>() / nf;
    let upto = match variance {
        KfoldVariance::Unbiased => n,
        KfoldVariance::AsPrinted => n - 1,
    };
    let ss = scores[..upto]
        .iter()
        .map(|&p| (p - mean).powi(2))
        .sum::<T>();
    let var = ss / T::of((n - 1) as f64);
    if var <= T::zero() {
        return Err(StatsError::DegenerateVariance);
    }
    let t = mean * nf.sqrt() / var.sqrt();
    Ok(decide(t, (n - 1) as u32, alpha))
}

fn check_alpha(alpha: f64) -> Result<(), StatsError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(StatsError::BadAlpha(alpha))
    }
}

fn decide<T: Real>(t: T, df: u32, alpha: f64) -> TTestResult<T> {
    let crit = critical_value(df, alpha);
    TTestResult {
        t,
        df,
        alpha,
        significant: t.to_f64().abs() > crit,
    }
}

/// Two-sided Student-t critical value: the threshold `c` with
/// `P(|T| > c) = alpha` at `df` degrees of freedom. Accurate to well below
/// 1e-4 via bisection on the regularized incomplete beta form of the CDF.
pub fn critical_value(df: u32, alpha: f64) -> f64 {
    assert!(df >= 1 && alpha > 0.0 && alpha < 1.0);
    let target = alpha; // two-sided tail mass
    let tail = |x: f64| -> f64 {
        // P(|T| > x) = I_{df/(df+x^2)}(df/2, 1/2)
        let z = df as f64 / (df as f64 + x * x);
        betai(df as f64 / 2.0, 0.5, z)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while tail(hi) > target {
        hi *= 2.0;
        if hi > 1e12 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided p-value for a t statistic.
pub fn p_value(t: f64, df: u32) -> f64 {
    let z = df as f64 / (df as f64 + t * t);
    betai(df as f64 / 2.0, 0.5, z)
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7.
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta `I_x(a, b)` by Lentz's continued fraction.
fn betai(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_bt = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let bt = ln_bt.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * betacf(a, b, x) / a
    } else {
        1.0 - bt * betacf(b, a, 1.0 - x) / b
    }
}

fn betacf(a: f64, b: f64, x: f64) -> f64 {
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..300 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
