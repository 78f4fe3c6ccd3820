//! Return probabilities `P_n(0,0)` of the simple walk and the first-return law.
//!
//! Three independent routes: exact path counting (big integers), dense
//! convolution of the transition kernel on a finite box, and quadrature of
//! `phi(theta)^n` with `phi = (1/d) sum cos theta_i`.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::quadrature::gl_rule;
use crate::error::{Error, Result};

/// Largest `n` for which the first-return law is computed in exact arithmetic.
pub const EXACT_RATIONAL_MAX: usize = 64;

/// Tolerance for the renewal identity `P_n = sum_k f_k P_{n-k}`.
pub const RENEWAL_TOLERANCE: f64 = 1e-12;

const LATTICE_MAX_CELLS: f64 = 4.2e6;
const PEAK_WIDTH: f64 = 9.0;
const GAUSS_NODES: usize = 32;
const GAUSS_CHECK_NODES: usize = 48;
const GAUSS_TOLERANCE: f64 = 1e-11;

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Usage("dimension must be at least 1".into()));
    }
    Ok(())
}

/// Number of closed nearest-neighbour paths of length `n` in `Z^d`.
pub fn closed_path_count(d: usize, n: usize) -> BigUint {
    if n % 2 == 1 {
        return BigUint::from(0u32);
    }
    // binomial rows up to n
    let mut binom = vec![BigUint::from(1u32)];
    let mut rows = vec![binom.clone()];
    for m in 1..=n {
        let mut next = vec![BigUint::from(1u32); m + 1];
        for k in 1..m {
            next[k] = &binom[k - 1] + &binom[k];
        }
        binom = next;
        rows.push(binom.clone());
    }
    // one dimension: C(2m, m)
    let one: Vec<BigUint> = (0..=n)
        .map(|k| {
            if k % 2 == 0 {
                rows[k][k / 2].clone()
            } else {
                BigUint::from(0u32)
            }
        })
        .collect();
    let mut acc = one.clone();
    for _ in 1..d {
        let mut next = vec![BigUint::from(0u32); n + 1];
        for (m, slot) in next.iter_mut().enumerate().step_by(2) {
            let mut s = BigUint::from(0u32);
            for k in (0..=m).step_by(2) {
                s += &rows[m][k] * &one[k] * &acc[m - k];
            }
            *slot = s;
        }
        acc = next;
    }
    acc[n].clone()
}

/// `P_n(0,0)` as an exact fraction.
pub fn return_prob_exact(d: usize, n: usize) -> BigRational {
    let den = BigUint::from(2 * d as u64).pow(n as u32);
    BigRational::new(BigInt::from(closed_path_count(d, n)), BigInt::from(den))
}

/// Largest `n` handled by the dense lattice convolution in dimension `d`.
pub fn lattice_limit(d: usize) -> usize {
    let cap = match d {
        1 => 4096,
        2 => 512,
        3 => 96,
        _ => usize::MAX,
    };
    let by_memory = (LATTICE_MAX_CELLS.powf(1.0 / d as f64) as usize).saturating_sub(5);
    (cap.min(by_memory).max(2)) & !1
}

/// `P_k(0,0)` for `k = 0..=n_max` by iterating the transition kernel on a box
/// just large enough that mass leaving it cannot come back by time `n_max`.
pub fn return_prob_lattice_table(d: usize, n_max: usize) -> Result<Vec<f64>> {
    check_dim(d)?;
    let r = n_max / 2 + 1;
    let side = 2 * r + 3;
    let cells = (side as f64).powi(d as i32);
    if cells > 1e8 {
        return Err(Error::MemoryPolicy(format!(
            "lattice convolution for d = {d}, n = {n_max} needs {cells:.0} cells"
        )));
    }
    let cells = cells as usize;
    let strides: Vec<usize> = (0..d).map(|i| side.pow(i as u32)).collect();
    let interior: Vec<usize> = (0..cells)
        .filter(|&i| {
            let mut rem = i;
            (0..d).all(|_| {
                let c = rem % side;
                rem /= side;
                c >= 1 && c <= side - 2
            })
        })
        .collect();
    let origin: usize = strides.iter().map(|s| (r + 1) * s).sum();
    let w = 1.0 / (2 * d) as f64;
    let mut cur = vec![0.0f64; cells];
    let mut next = vec![0.0f64; cells];
    cur[origin] = 1.0;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    for _ in 1..=n_max {
        for &i in &interior {
            let mut s = 0.0;
            for &st in &strides {
                s += cur[i - st] + cur[i + st];
            }
            next[i] = w * s;
        }
        std::mem::swap(&mut cur, &mut next);
        out.push(cur[origin]);
    }
    Ok(out)
}

/// Equally spaced midpoint rule with more nodes per axis than `n`; exact up to
/// rounding because `phi^n` is a trigonometric polynomial of degree `n`.
pub fn return_prob_grid(d: usize, n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let m = n + 2; // even, > n
    let half = m / 2;
    // symmetric under theta -> -theta: keep nodes in (0, pi)
    let cosines: Vec<f64> = (0..half)
        .map(|j| ((j as f64 + 0.5) * 2.0 * PI / m as f64).cos())
        .collect();
    let inv_d = 1.0 / d as f64;
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    loop {
        let x: f64 = idx.iter().map(|&j| cosines[j]).sum::<f64>() * inv_d;
        total += x.powi(n as i32);
        let mut a = 0;
        loop {
            if a == d {
                return total / (half as f64).powi(d as i32);
            }
            idx[a] += 1;
            if idx[a] < half {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

fn gauss_peak(d: usize, n: usize, nodes: usize) -> f64 {
    let sigma = (d as f64 / n as f64).sqrt();
    let w = PEAK_WIDTH * sigma;
    let rule = gl_rule(nodes, 0.0, w);
    let cosines: Vec<(f64, f64)> = rule.iter().map(|&(t, wt)| (t.cos(), wt)).collect();
    let inv_d = 1.0 / d as f64;
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    'outer: loop {
        let mut x = 0.0;
        let mut wt = 1.0;
        for &j in &idx {
            x += cosines[j].0;
            wt *= cosines[j].1;
        }
        total += wt * (x * inv_d).powi(n as i32);
        let mut a = 0;
        loop {
            if a == d {
                break 'outer;
            }
            idx[a] += 1;
            if idx[a] < nodes {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
    // 2^d orthants, two peaks (0 and (pi,...,pi)), normalisation (2 pi)^d
    2.0 * total / PI.powi(d as i32)
}

/// Whether the peak-localised Gauss rule applies (peaks well separated).
pub fn gauss_applicable(d: usize, n: usize) -> bool {
    n > 0 && PEAK_WIDTH * (d as f64 / n as f64).sqrt() < 0.5 * PI
}

/// Gauss-Legendre quadrature localised at the two peaks of `|phi|^n`. Two
/// rule sizes are compared; disagreement beyond tolerance is an error.
pub fn return_prob_gauss(d: usize, n: usize) -> Result<f64> {
    check_dim(d)?;
    if n % 2 == 1 {
        return Ok(0.0);
    }
    if !gauss_applicable(d, n) {
        return Err(Error::Usage(format!(
            "peak-localised quadrature needs larger n (d = {d}, n = {n})"
        )));
    }
    let a = gauss_peak(d, n, GAUSS_NODES);
    let b = gauss_peak(d, n, GAUSS_CHECK_NODES);
    let residual = ((a - b) / b).abs();
    if residual > GAUSS_TOLERANCE {
        return Err(Error::Numeric {
            what: "return probability quadrature",
            residual,
            tolerance: GAUSS_TOLERANCE,
        });
    }
    Ok(b)
}

/// Quadrature route: localised Gauss once the peaks separate, exact grid before.
pub fn return_prob_quadrature(d: usize, n: usize) -> Result<f64> {
    check_dim(d)?;
    if gauss_applicable(d, n) {
        return_prob_gauss(d, n)
    } else {
        let grid_points = ((n / 2 + 1) as f64).powi(d as i32);
        if grid_points > 1e9 {
            return Err(Error::Usage(format!(
                "no affordable quadrature for d = {d}, n = {n}"
            )));
        }
        Ok(return_prob_grid(d, n))
    }
}

/// `P_n(0,0)` for the simple walk on `Z^d`.
pub fn return_prob(d: usize, n: usize) -> Result<f64> {
    check_dim(d)?;
    if n <= lattice_limit(d) {
        Ok(return_prob_lattice_table(d, n)?[n])
    } else {
        return_prob_quadrature(d, n)
    }
}

/// `P_k(0,0)` for `k = 0..=n_max`: lattice convolution up to
/// [`lattice_limit`], quadrature beyond.
pub fn return_prob_table(d: usize, n_max: usize) -> Result<Vec<f64>> {
    check_dim(d)?;
    let lim = lattice_limit(d).min(n_max);
    let mut p = return_prob_lattice_table(d, lim)?;
    for n in lim + 1..=n_max {
        p.push(return_prob_quadrature(d, n)?);
    }
    Ok(p)
}

/// Return probabilities together with the first-return law `f`.
#[derive(Clone, Debug)]
pub struct ReturnLaw {
    pub d: usize,
    /// `p[k] = P_k(0,0)`
    pub p: Vec<f64>,
    /// `f[k]` = probability that the first return happens at step `k`; `f[0] = 0`
    pub f: Vec<f64>,
    /// `(2d)^k f_k` for `k <= EXACT_RATIONAL_MAX`
    f_scaled: Vec<BigInt>,
}

impl ReturnLaw {
    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }

    /// Exact first-return probability, available for `k <= EXACT_RATIONAL_MAX`.
    pub fn f_exact(&self, k: usize) -> Option<BigRational> {
        let num = self.f_scaled.get(k)?.clone();
        let den = BigInt::from(2 * self.d as u64).pow(k as u32);
        Some(BigRational::new(num, den))
    }

    /// `max_n |P_n - sum_{k=1}^n f_k P_{n-k}|` over `1 <= n <= n_max`.
    pub fn renewal_residual(&self) -> f64 {
        (1..=self.n_max())
            .map(|n| {
                let s: f64 = (1..=n).map(|k| self.f[k] * self.p[n - k]).sum();
                (self.p[n] - s).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Probability of some return within `n` steps.
    pub fn returned_by(&self, n: usize) -> f64 {
        self.f[..=n.min(self.n_max())].iter().sum()
    }
}

/// First-return law by renewal inversion. Exact integer arithmetic up to
/// `EXACT_RATIONAL_MAX` steps, floating point beyond.
pub fn first_return_law(d: usize, n_max: usize) -> Result<ReturnLaw> {
    check_dim(d)?;
    if n_max < 2 {
        return Err(Error::Usage("first_return_law needs n_max >= 2".into()));
    }
    let mut p = return_prob_table(d, n_max)?;
    let exact_max = EXACT_RATIONAL_MAX.min(n_max);
    // W_k = (2d)^k P_k and F_k = (2d)^k f_k satisfy F_n = W_n - sum F_k W_{n-k}
    let counts: Vec<BigInt> = (0..=exact_max)
        .map(|k| BigInt::from(closed_path_count(d, k)))
        .collect();
    let mut f_scaled = vec![BigInt::from(0)];
    for n in 1..=exact_max {
        let mut v = counts[n].clone();
        for k in 1..n {
            v -= &f_scaled[k] * &counts[n - k];
        }
        f_scaled.push(v);
    }
    let base = BigInt::from(2 * d as u64);
    let ratio = |num: &BigInt, k: usize| -> f64 {
        let r = BigRational::new(num.clone(), base.pow(k as u32));
        num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN)
    };
    let mut f = vec![0.0; n_max + 1];
    for k in 0..=exact_max {
        p[k] = ratio(&counts[k], k);
        f[k] = ratio(&f_scaled[k], k);
    }
    for n in exact_max + 1..=n_max {
        let s: f64 = (1..n).map(|k| f[k] * p[n - k]).sum();
        f[n] = p[n] - s;
    }
    let law = ReturnLaw { d, p, f, f_scaled };
    let residual = law.renewal_residual();
    if residual > RENEWAL_TOLERANCE {
        return Err(Error::Numeric {
            what: "renewal identity",
            residual,
            tolerance: RENEWAL_TOLERANCE,
        });
    }
    Ok(law)
}
