//! Goodness-of-fit tests: one-sample Kolmogorov-Smirnov and pooled chi-square.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::oracles::bounds::Verdict;

/// Fewest samples for which the asymptotic KS p-value is reported.
pub const KS_MIN_SAMPLES: usize = 20;

/// Smallest expected count per chi-square bin after pooling.
pub const CHI_MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KsTest {
    pub n: usize,
    pub distance: f64,
    /// `NaN` when there are too few samples
    pub p_value: f64,
}

impl KsTest {
    pub fn verdict(&self, alpha: f64) -> Verdict {
        if self.n < KS_MIN_SAMPLES || self.p_value.is_nan() {
            Verdict::Inconclusive
        } else if self.p_value > alpha {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.0 {
        // theta-function form converges fast for small lambda
        let s: f64 = (1..=8)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-m * m * std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp()
            })
            .sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let t = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        s += if k % 2 == 1 { t } else { -t };
        if t < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// One-sample KS test of `samples` against the continuous `cdf`.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> KsTest {
    let n = samples.len();
    if n == 0 {
        return KsTest {
            n,
            distance: f64::NAN,
            p_value: f64::NAN,
        };
    }
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in x.iter().enumerate() {
        let f = cdf(v);
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    let p_value = if n < KS_MIN_SAMPLES {
        f64::NAN
    } else {
        let sq = nf.sqrt();
        kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d)
    };
    KsTest {
        n,
        distance: d,
        p_value,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub df: usize,
    /// `NaN` when fewer than two bins survive pooling
    pub p_value: f64,
    /// `(first category, last category)` of each pooled bin
    pub bins: Vec<(usize, usize)>,
}

impl ChiSquareTest {
    pub fn verdict(&self, alpha: f64) -> Verdict {
        if self.p_value.is_nan() {
            Verdict::Inconclusive
        } else if self.p_value > alpha {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Pearson chi-square of `counts` against `pmf` (same categories; the mass
/// not covered by `pmf` is treated as one extra tail category). Bins are
/// pooled from the tail end until each expected count reaches
/// [`CHI_MIN_EXPECTED`]; `fitted` parameters are removed from the degrees of freedom.
pub fn chi_square_test(counts: &[u64], pmf: &[f64], fitted: usize) -> Result<ChiSquareTest> {
    if counts.len() > pmf.len() + 1 || counts.is_empty() {
        return Err(Error::Usage("counts and pmf do not line up".into()));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::Usage("no observations".into()));
    }
    let nf = total as f64;
    let covered: f64 = pmf.iter().sum();
    let mut probs = pmf.to_vec();
    probs.push((1.0 - covered).max(0.0));
    let mut obs = counts.to_vec();
    obs.resize(probs.len(), 0);

    let mut bins: Vec<(usize, usize, f64, u64)> = Vec::new();
    let (mut e, mut o, mut hi) = (0.0, 0u64, probs.len() - 1);
    for i in (0..probs.len()).rev() {
        e += probs[i] * nf;
        o += obs[i];
        if e >= CHI_MIN_EXPECTED {
            bins.push((i, hi, e, o));
            e = 0.0;
            o = 0;
            hi = i.saturating_sub(1);
        }
    }
    if e > 0.0 || o > 0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 = 0;
                last.2 += e;
                last.3 += o;
            }
            None => bins.push((0, hi, e, o)),
        }
    }
    bins.reverse();
    let statistic: f64 = bins
        .iter()
        .map(|&(_, _, e, o)| {
            let diff = o as f64 - e;
            diff * diff / e
        })
        .sum();
    let ranges = bins.iter().map(|b| (b.0, b.1)).collect();
    if bins.len() < 2 + fitted {
        return Ok(ChiSquareTest {
            statistic,
            df: 0,
            p_value: f64::NAN,
            bins: ranges,
        });
    }
    let df = bins.len() - 1 - fitted;
    let dist = ChiSquared::new(df as f64).map_err(|e| Error::Usage(e.to_string()))?;
    Ok(ChiSquareTest {
        statistic,
        df,
        p_value: dist.sf(statistic),
        bins: ranges,
    })
}

/// Total variation distance between the empirical law of `counts` and `pmf`
/// (both including whatever mass lies beyond the listed categories).
pub fn total_variation(counts: &[u64], pmf: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let nf = total.max(1) as f64;
    let len = counts.len().max(pmf.len());
    let mut tv = 0.0;
    let (mut emp_mass, mut pmf_mass) = (0.0, 0.0);
    for i in 0..len {
        let e = counts.get(i).copied().unwrap_or(0) as f64 / nf;
        let p = pmf.get(i).copied().unwrap_or(0.0);
        emp_mass += e;
        pmf_mass += p;
        tv += (e - p).abs();
    }
    tv += ((1.0 - emp_mass) - (1.0 - pmf_mass)).abs().max(0.0);
    0.5 * tv
}

/// Median of a sample (mean of the middle pair for even sizes).
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}
