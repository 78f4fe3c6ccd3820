//! Planar quantities: truncated Green function `g(n)`, potential kernel
//! `a(x)` and the hit-before-return probability `p(x)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::quadrature::gl_integrate;
use super::returns::return_prob_table;
use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Constant term of the planar potential kernel, `(2 gamma + log 8) / pi`.
pub fn potential_kernel_constant() -> f64 {
    (2.0 * EULER_GAMMA + 8f64.ln()) / PI
}

/// `g(k) = sum_{j<=k} P_j(0,0)` for the planar simple walk, `k = 0..=n`.
pub fn green_truncated(n: usize) -> Result<Vec<f64>> {
    let p = return_prob_table(2, n)?;
    Ok(partial_sums(&p))
}

fn partial_sums(p: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    p.iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

/// Largest horizon accepted by [`green_truncated_law`].
pub const GENERIC_GREEN_MAX: usize = 1024;

/// Truncated Green function of a planar walk with uniform law on `steps`,
/// by dense convolution. Intended for projected or reduced walks.
pub fn green_truncated_law(steps: &[[i64; 2]], n: usize) -> Result<Vec<f64>> {
    if steps.is_empty() {
        return Err(Error::Usage("empty step set".into()));
    }
    if n > GENERIC_GREEN_MAX {
        return Err(Error::Usage(format!(
            "generic truncated Green function limited to n <= {GENERIC_GREEN_MAX}"
        )));
    }
    let reach = steps
        .iter()
        .map(|s| s[0].abs().max(s[1].abs()))
        .max()
        .unwrap_or(1) as usize;
    // sites further than half the horizon cannot return in time
    let r = reach * (n / 2 + 1);
    let side = 2 * r + 1;
    if side * side > 50_000_000 {
        return Err(Error::MemoryPolicy(format!(
            "box of side {side} is too large for the dense convolution"
        )));
    }
    let w = 1.0 / steps.len() as f64;
    let mut cur = vec![0.0; side * side];
    let mut next = vec![0.0; side * side];
    let origin = r * side + r;
    cur[origin] = 1.0;
    let mut p = vec![1.0];
    let offsets: Vec<(i64, i64)> = steps.iter().map(|s| (s[0], s[1])).collect();
    let ri = r as i64;
    for _ in 1..=n {
        next.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..side {
            for j in 0..side {
                let m = cur[i * side + j];
                if m == 0.0 {
                    continue;
                }
                for &(dx, dy) in &offsets {
                    let (a, b) = (i as i64 + dx, j as i64 + dy);
                    if (0..=2 * ri).contains(&a) && (0..=2 * ri).contains(&b) {
                        next[a as usize * side + b as usize] += w * m;
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        p.push(cur[origin]);
    }
    Ok(partial_sums(&p))
}

const KERNEL_TOLERANCE: f64 = 1e-12;

fn kernel_integral(freq: i64, decay: i64, panels: usize) -> f64 {
    let k = decay as f64;
    let m = freq as f64;
    let f = |th: f64| {
        if th == 0.0 {
            return k;
        }
        let c = th.cos();
        let s = ((1.0 - c) * (3.0 - c)).sqrt();
        let ln_t = -s.asinh();
        let tk = (k * ln_t).exp();
        let half = (0.5 * m * th).sin();
        (-(k * ln_t).exp_m1() + tk * 2.0 * half * half) / s
    };
    2.0 / PI * gl_integrate(f, 0.0, PI, panels, 20)
}

/// Potential kernel `a(x) = sum_n (P_n(0,0) - P_n(0,x))` of the planar simple
/// walk, from the one-dimensional integral left after integrating out one
/// frequency in closed form.
pub fn potential_kernel(x: [i64; 2]) -> Result<f64> {
    let (u, v) = (x[0].abs(), x[1].abs());
    if u == 0 && v == 0 {
        return Ok(0.0);
    }
    // oscillate in the smaller coordinate, decay in the larger
    let (freq, decay) = (u.min(v), u.max(v));
    let panels = (2 * freq as usize).max(8);
    let a = kernel_integral(freq, decay, panels);
    let b = kernel_integral(freq, decay, 2 * panels);
    let residual = (a - b).abs() / b.max(1.0);
    if residual > KERNEL_TOLERANCE {
        return Err(Error::Numeric {
            what: "potential kernel",
            residual,
            tolerance: KERNEL_TOLERANCE,
        });
    }
    Ok(b)
}

/// Large-`|x|` expansion of the potential kernel including the first
/// anisotropic correction.
pub fn potential_kernel_asymptotic(x: [i64; 2]) -> f64 {
    let (u, v) = (x[0] as f64, x[1] as f64);
    let r2 = u * u + v * v;
    let phi = v.atan2(u);
    (2.0 / PI) * 0.5 * r2.ln() + potential_kernel_constant() - (4.0 * phi).cos() / (6.0 * PI * r2)
}

/// `h(y) = P_y(reach x before 0)` on the box `[-r, r]^2`, outside of which
/// `h` is frozen at `1/2`; returns `p(x) = average of h over the neighbours of 0`.
pub fn hit_before_return_box(x: [i64; 2], radius: usize) -> Result<f64> {
    if x == [0, 0] {
        return Err(Error::Domain("p(x) needs x != 0".into()));
    }
    let r = radius as i64;
    if x[0].abs() >= r || x[1].abs() >= r {
        return Err(Error::Usage(format!(
            "box radius {radius} does not contain {x:?} strictly"
        )));
    }
    let side = (2 * r + 1) as usize;
    let idx = |a: i64, b: i64| ((a + r) as usize) * side + (b + r) as usize;
    let n = side * side;
    let fixed_zero = idx(0, 0);
    let fixed_one = idx(x[0], x[1]);
    let free = |i: usize| i != fixed_zero && i != fixed_one;

    // A u = u - 1/4 sum of free neighbours; b = 1/4 sum of fixed neighbour values
    let mut rhs = vec![0.0; n];
    for a in -r..=r {
        for b in -r..=r {
            let i = idx(a, b);
            if !free(i) {
                continue;
            }
            let mut s = 0.0;
            for (da, db) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (c, d) = (a + da, b + db);
                if c.abs() > r || d.abs() > r {
                    s += 0.5;
                } else {
                    let j = idx(c, d);
                    if j == fixed_one {
                        s += 1.0;
                    }
                }
            }
            rhs[i] = 0.25 * s;
        }
    }
    let apply = |u: &[f64], out: &mut [f64]| {
        for a in 0..side {
            for b in 0..side {
                let i = a * side + b;
                if !free(i) {
                    out[i] = 0.0;
                    continue;
                }
                let mut s = 0.0;
                if a > 0 {
                    s += u[i - side];
                }
                if a + 1 < side {
                    s += u[i + side];
                }
                if b > 0 {
                    s += u[i - 1];
                }
                if b + 1 < side {
                    s += u[i + 1];
                }
                out[i] = u[i] - 0.25 * s;
            }
        }
    };
    // conjugate gradients; u is zero on the fixed cells throughout
    let mut u = vec![0.5; n];
    u[fixed_zero] = 0.0;
    u[fixed_one] = 0.0;
    let mut au = vec![0.0; n];
    apply(&u, &mut au);
    let mut res: Vec<f64> = rhs.iter().zip(&au).map(|(b, a)| b - a).collect();
    let mut dir = res.clone();
    let mut rr: f64 = res.iter().map(|v| v * v).sum();
    let bnorm: f64 = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-14 * bnorm;
    let mut ad = vec![0.0; n];
    let max_iter = 20 * side + 1000;
    let mut iter = 0;
    while rr.sqrt() > tol {
        if iter == max_iter {
            return Err(Error::Numeric {
                what: "hit-before-return linear solve",
                residual: rr.sqrt() / bnorm,
                tolerance: 1e-14,
            });
        }
        apply(&dir, &mut ad);
        let alpha = rr / dir.iter().zip(&ad).map(|(a, b)| a * b).sum::<f64>();
        for i in 0..n {
            u[i] += alpha * dir[i];
            res[i] -= alpha * ad[i];
        }
        let rr_new: f64 = res.iter().map(|v| v * v).sum();
        let beta = rr_new / rr;
        for i in 0..n {
            dir[i] = res[i] + beta * dir[i];
        }
        rr = rr_new;
        iter += 1;
    }
    u[fixed_one] = 1.0;
    let p = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        .iter()
        .map(|&(a, b)| u[idx(a, b)])
        .sum::<f64>()
        * 0.25;
    Ok(p)
}

/// Box solutions on radii `2^j` and their extrapolation to infinite radius.
#[derive(Clone, Debug, serde::Serialize)]
pub struct HitEstimate {
    pub x: [i64; 2],
    pub radii: Vec<usize>,
    pub values: Vec<f64>,
    /// extrapolated value
    pub p: f64,
    /// difference between the two most refined extrapolants
    pub spread: f64,
}

/// Default schedule of box radii: doubling from about twice `|x|`.
pub fn default_radii(x: [i64; 2]) -> Vec<usize> {
    let reach = x[0].abs().max(x[1].abs()) as usize;
    let start = (2 * reach + 1).next_power_of_two().max(16);
    let count = if start <= 16 { 4 } else { 3 };
    (0..count).map(|j| start << j).collect()
}

pub const HIT_TOLERANCE: f64 = 1e-4;

/// `p(x)`: chance the planar walk started at 0 reaches `x` before returning.
pub fn hit_before_return(x: [i64; 2]) -> Result<HitEstimate> {
    hit_before_return_with(x, &default_radii(x), HIT_TOLERANCE)
}

/// Box solutions at each radius, extrapolated with the error model
/// `(A + B log R) / R^2`. The spread compares the two finest extrapolants
/// (with only three radii, the plain `R^{-2}` Richardson value stands in for
/// the coarser one).
pub fn hit_before_return_with(x: [i64; 2], radii: &[usize], tolerance: f64) -> Result<HitEstimate> {
    if radii.len() < 3 {
        return Err(Error::Usage("need at least three radii".into()));
    }
    let values = radii
        .iter()
        .map(|&r| hit_before_return_box(x, r))
        .collect::<Result<Vec<_>>>()?;
    let k = values.len();
    let fine = log_model_fit(&radii[k - 3..], &values[k - 3..]);
    let coarse = if k >= 4 {
        log_model_fit(&radii[k - 4..k - 1], &values[k - 4..k - 1])
    } else {
        let q = (radii[k - 1] as f64 / radii[k - 2] as f64).powi(2);
        (q * values[k - 1] - values[k - 2]) / (q - 1.0)
    };
    let (lower, upper) = (fine.min(coarse), fine.max(coarse));
    if upper - lower > tolerance || !fine.is_finite() {
        return Err(Error::Extrapolation { lower, upper });
    }
    Ok(HitEstimate {
        x,
        radii: radii.to_vec(),
        values,
        p: fine,
        spread: upper - lower,
    })
}

/// Solve `v_i = p + (A + B ln R_i) / R_i^2` for `p` from three points.
fn log_model_fit(radii: &[usize], values: &[f64]) -> f64 {
    let rows: Vec<[f64; 4]> = radii
        .iter()
        .zip(values)
        .map(|(&r, &v)| {
            let r = r as f64;
            [1.0, 1.0 / (r * r), r.ln() / (r * r), v]
        })
        .collect();
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let a = [0, 1, 2].map(|i| [rows[i][0], rows[i][1], rows[i][2]]);
    let a_p = [0, 1, 2].map(|i| [rows[i][3], rows[i][1], rows[i][2]]);
    det3(a_p) / det3(a)
}

/// Oracle tables for a finite set of planar sites.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PotentialTables {
    pub g_trunc: Vec<f64>,
    pub a: BTreeMap<[i64; 2], f64>,
    pub p: BTreeMap<[i64; 2], f64>,
    pub q: BTreeMap<[i64; 2], f64>,
}

pub fn potential_tables(n_max: usize, sites: &[[i64; 2]]) -> Result<PotentialTables> {
    let mut a = BTreeMap::new();
    let mut p = BTreeMap::new();
    let mut q = BTreeMap::new();
    for &x in sites {
        a.insert(x, potential_kernel(x)?);
        if x != [0, 0] {
            let h = hit_before_return(x)?.p;
            p.insert(x, h);
            q.insert(x, 1.0 - h);
        }
    }
    Ok(PotentialTables {
        g_trunc: green_truncated(n_max)?,
        a,
        p,
        q,
    })
}

/// Largest `C` with `p(x) >= C / log |x|` over the given `(x, p(x))` pairs,
/// restricted to `|x| > e` so that the logarithm exceeds one.
pub fn fit_hit_lower_constant(pairs: &[([i64; 2], f64)]) -> Option<f64> {
    pairs
        .iter()
        .filter_map(|&(x, p)| {
            let r = ((x[0] * x[0] + x[1] * x[1]) as f64).sqrt();
            (r > std::f64::consts::E).then(|| p * r.ln())
        })
        .reduce(f64::min)
}
