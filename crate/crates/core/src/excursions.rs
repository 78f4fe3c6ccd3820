//! Local time at a planar site `x` during single excursions from the origin.
//!
//! Excursions of the planar walk have infinite mean length, so each one is
//! followed only inside the box `|z|_inf <= R`. On leaving it at `z`, the
//! walk hits `x` before `0` with probability
//! `h(z) = (a(z) - a(z - x) + a(x)) / (2 a(x))`, `a` the potential kernel;
//! one uniform decides which, and the path resumes at `x` or the excursion
//! ends. By the strong Markov property the resulting counts have exactly the
//! law of the unbounded excursion.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::oracles::potential_kernel;
use crate::walk::{uniform01, walker_rng, StepLaw};

pub const DEFAULT_EXIT_RADIUS: i64 = 48;

pub struct ExcursionSampler {
    x: [i64; 2],
    radius: i64,
    a_x: f64,
    kernel: FxHashMap<[i64; 2], f64>,
}

impl ExcursionSampler {
    pub fn new(x: [i64; 2], radius: i64) -> Result<Self> {
        if x == [0, 0] {
            return Err(Error::Domain("x must differ from the origin".into()));
        }
        if radius < x[0].abs().max(x[1].abs()) {
            return Err(Error::Usage("exit box must contain x".into()));
        }
        Ok(ExcursionSampler {
            x,
            radius,
            a_x: potential_kernel(x)?,
            kernel: FxHashMap::default(),
        })
    }

    fn a(&mut self, z: [i64; 2]) -> Result<f64> {
        if let Some(&v) = self.kernel.get(&z) {
            return Ok(v);
        }
        let v = potential_kernel(z)?;
        self.kernel.insert(z, v);
        Ok(v)
    }

    /// Chance that the walk at `z` reaches `x` before the origin.
    pub fn hit_x_first(&mut self, z: [i64; 2]) -> Result<f64> {
        let d = [z[0] - self.x[0], z[1] - self.x[1]];
        Ok((self.a(z)? - self.a(d)? + self.a_x) / (2.0 * self.a_x))
    }

    /// Local time at `x` of excursion number `id`, and the planar steps taken.
    pub fn sample(&mut self, seed: u64, id: u64) -> Result<(u64, u64)> {
        let law = StepLaw::new(2)?;
        let mut src = law.source(walker_rng(seed, id));
        let (mut p, mut y, mut steps) = ([0i64; 2], 0u64, 0u64);
        loop {
            let s = src.sample_step();
            p[s.axis()] += s.sign();
            steps += 1;
            if p == [0, 0] {
                return Ok((y, steps));
            }
            if p == self.x {
                y += 1;
            } else if p[0].abs().max(p[1].abs()) > self.radius {
                let h = self.hit_x_first(p)?;
                if uniform01(src.rng_mut()) < h {
                    y += 1;
                    p = self.x;
                } else {
                    return Ok((y, steps));
                }
            }
        }
    }
}

/// Local times at `x` of `count` independent excursions.
pub fn excursion_local_times(x: [i64; 2], count: u64, seed: u64, radius: i64) -> Result<Vec<u64>> {
    let mut s = ExcursionSampler::new(x, radius)?;
    (0..count)
        .map(|id| s.sample(seed, id).map(|r| r.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::ExcursionLaw;

    #[test]
    fn boundary_values() {
        let mut s = ExcursionSampler::new([1, 1], 4).unwrap();
        assert!(s.hit_x_first([0, 0]).unwrap().abs() < 1e-12);
        assert!((s.hit_x_first([1, 1]).unwrap() - 1.0).abs() < 1e-12);
        // point reflection z -> x - z swaps the targets
        let h = s.hit_x_first([7, -3]).unwrap() + s.hit_x_first([-6, 4]).unwrap();
        assert!((h - 1.0).abs() < 1e-10);
    }

    #[test]
    fn mean_is_one_and_law_matches() {
        let x = [2, 1];
        let ys = excursion_local_times(x, 100_000, 8, 24).unwrap();
        let n = ys.len() as f64;
        let mean = ys.iter().sum::<u64>() as f64 / n;
        let var = ys.iter().map(|&y| (y as f64 - mean).powi(2)).sum::<f64>() / n;
        assert!((mean - 1.0).abs() < 4.0 * (var / n).sqrt(), "mean {mean}");
        let p = 0.5 / potential_kernel(x).unwrap();
        let law = ExcursionLaw::new(p).unwrap();
        let zero = ys.iter().filter(|&&y| y == 0).count() as f64 / n;
        assert!((zero - law.pmf(0)).abs() < 0.005);
    }
}
