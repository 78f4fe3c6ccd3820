//! Predicates comparing probabilities with the inequality bounds used for the
//! planar and linear walks. Monte Carlo inputs carry a confidence interval, and
//! an interval straddling the bound yields [`Verdict::Inconclusive`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::excursion::{excursion_sum_law, ExcursionLaw};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Which side of the bound the probability must lie on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    AtMost,
    AtLeast,
}

/// A probability estimate: exact value or Monte Carlo frequency with interval.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            lower: value,
            upper: value,
        }
    }

    /// Wilson score interval for `hits` successes out of `trials`.
    pub fn binomial(hits: u64, trials: u64, z: f64) -> Result<Self> {
        if trials == 0 || hits > trials {
            return Err(Error::Usage(format!("bad binomial counts {hits}/{trials}")));
        }
        let n = trials as f64;
        let ph = hits as f64 / n;
        let z2 = z * z;
        let centre = (ph + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
        Ok(Estimate {
            value: ph,
            lower: (centre - half).max(0.0),
            upper: (centre + half).min(1.0),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub estimate: Estimate,
    pub bound: f64,
    pub side: Side,
    pub verdict: Verdict,
    /// signed distance of the point estimate from the bound, positive when satisfied
    pub margin: f64,
}

pub fn check_bound(name: &str, estimate: Estimate, bound: f64, side: Side) -> BoundCheck {
    let (verdict, margin) = match side {
        Side::AtMost => {
            let v = if estimate.upper <= bound {
                Verdict::Pass
            } else if estimate.lower > bound {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            };
            (v, bound - estimate.value)
        }
        Side::AtLeast => {
            let v = if estimate.lower >= bound {
                Verdict::Pass
            } else if estimate.upper < bound {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            };
            (v, estimate.value - bound)
        }
    };
    BoundCheck {
        name: name.to_string(),
        estimate,
        bound,
        side,
        verdict,
        margin,
    }
}

/// `P(Y_1 + ... + Y_n > u n)` computed exactly, against `exp(n p (1 - u/2))`.
pub fn excursion_sum_tail_check(p: f64, n: usize, u: f64) -> Result<BoundCheck> {
    if !(u > 0.0) {
        return Err(Error::Domain("u must be positive".into()));
    }
    let law = ExcursionLaw::new(p)?;
    let cut = (u * n as f64).floor() as usize;
    let body: f64 = excursion_sum_law(&law, n, cut).iter().sum();
    let tail = (1.0 - body).max(0.0);
    let bound = (n as f64 * p * (1.0 - u / 2.0)).exp();
    Ok(check_bound(
        "excursion sum tail",
        Estimate::exact(tail),
        bound,
        Side::AtMost,
    ))
}

/// `2 g(a) / g(k - 1)` bound on `P(T_a >= k)`; `g` is the truncated Green table.
pub fn return_delay_bound(g: &[f64], a: usize, k: usize) -> Result<f64> {
    if k == 0 || a >= g.len() || k - 1 >= g.len() {
        return Err(Error::Usage("truncated Green table too short".into()));
    }
    Ok(2.0 * g[a] / g[k - 1])
}

/// Upper tail bound `n^{-(1-delta) pi alpha}` for `P(xi(0,n) >= alpha log^2 n)`.
pub fn planar_local_time_upper(n: f64, alpha: f64, delta: f64) -> f64 {
    n.powf(-(1.0 - delta) * PI * alpha)
}

/// Lower tail bound `n^{-(1+delta) pi alpha}` for the same event.
pub fn planar_local_time_lower(n: f64, alpha: f64, delta: f64) -> f64 {
    n.powf(-(1.0 + delta) * PI * alpha)
}

/// Empirical constant for an unspecified-constant bound `P <= C * shape`.
/// Returns `max P / shape` over the supplied points.
pub fn fit_upper_constant(points: &[(f64, f64)]) -> Option<f64> {
    points
        .iter()
        .filter(|(_, shape)| *shape > 0.0)
        .map(|(p, shape)| p / shape)
        .reduce(f64::max)
}

/// Shape `k log a / log u` of the planar return-delay sum bound.
pub fn planar_delay_sum_shape(k: usize, a: usize, u: f64) -> f64 {
    k as f64 * (a as f64).ln() / u.ln()
}

/// Shape `k sqrt(a / u)` of the linear return-delay sum bound.
pub fn linear_delay_sum_shape(k: usize, a: usize, u: f64) -> f64 {
    k as f64 * (a as f64 / u).sqrt()
}

/// Shape `f log a / log(t - (f + 2) a)` of the planar renewal-count bound.
pub fn planar_count_shape(f: f64, a: usize, t: f64) -> Option<f64> {
    let rest = t - (f + 2.0) * a as f64;
    (rest > 1.0 && a > 1).then(|| f * (a as f64).ln() / rest.ln())
}

/// Largest `c` with `P(xi(0,n) >= x log n) <= exp(-c x)` over the points
/// `(x, P)`; the fitted rate of the planar exponential tail.
pub fn fit_exponential_rate(points: &[(f64, f64)]) -> Option<f64> {
    points
        .iter()
        .filter(|(x, p)| *x > 0.0 && *p > 0.0)
        .map(|(x, p)| -p.ln() / x)
        .reduce(f64::min)
}

/// Constants `(C1, C2)` making `C1 e^{-x^2/2} <= P <= C2 e^{-x^2/2}` hold on
/// the points `(x, P)` (unit step variance, `epsilon = 0`).
pub fn fit_gaussian_tail(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let ratios: Vec<f64> = points
        .iter()
        .map(|(x, p)| p / (-(x * x) / 2.0).exp())
        .collect();
    let lo = ratios.iter().copied().reduce(f64::min)?;
    let hi = ratios.iter().copied().reduce(f64::max)?;
    Some((lo, hi))
}
