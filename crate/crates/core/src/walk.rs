//! Simple symmetric random walks on `Z^d`, reproducible from `(seed, walker_id)`.
//!
//! Every walker owns a xoshiro256++ stream whose 64-bit seed is
//! `mix64(master_seed ^ mix64(walker_id))`. `mix64` is the splitmix64
//! finalizer, a bijection on `u64`, so for a fixed master seed distinct
//! walker ids always receive distinct stream seeds.
//!
//! Steps are drawn exactly uniformly from the `2d` signed unit vectors. When
//! `2d` is a power of two the raw bits are consumed directly; otherwise
//! Lemire's multiply-shift method with rejection is applied to 16- or 32-bit
//! chunks of each 64-bit output.

use std::borrow::Borrow;
use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

/// Longest supported path. Coordinates stay far inside `i64` and squared
/// norms inside `i128`.
pub const MAX_STEPS: u64 = 1 << 40;

/// Splitmix64 finalizer. Bijective.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream seed of walker `walker_id` under `master_seed`.
pub fn stream_seed(master_seed: u64, walker_id: u64) -> u64 {
    mix64(master_seed ^ mix64(walker_id))
}

/// The generator used by every walker.
pub type WalkRng = Xoshiro256PlusPlus;

pub fn walker_rng(master_seed: u64, walker_id: u64) -> WalkRng {
    WalkRng::seed_from_u64(stream_seed(master_seed, walker_id))
}

/// Uniform double in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeSite(Vec<i64>);

impl LatticeSite {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeSite(coords)
    }

    pub fn origin(dim: usize) -> Self {
        LatticeSite(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coord_sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Squared Euclidean norm, exact.
    pub fn norm_sq(&self) -> i128 {
        self.0.iter().map(|&c| c as i128 * c as i128).sum()
    }

    #[inline]
    pub fn apply(&mut self, step: Step) {
        self.0[step.axis()] += step.sign();
    }
}

impl Borrow<[i64]> for LatticeSite {
    fn borrow(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for LatticeSite {
    fn from(v: Vec<i64>) -> Self {
        LatticeSite(v)
    }
}

impl fmt::Display for LatticeSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A signed unit step `±e_axis`, encoded as `2 * axis + negative`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step(u32);

impl Step {
    pub fn new(axis: usize, positive: bool) -> Self {
        Step(2 * axis as u32 + u32::from(!positive))
    }

    #[inline]
    pub fn from_code(code: u32) -> Self {
        Step(code)
    }

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn axis(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// `+1` or `-1`.
    #[inline]
    pub fn sign(self) -> i64 {
        1 - 2 * (self.0 & 1) as i64
    }
}

/// Uniform law on the `2d` signed unit vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepLaw {
    dim: usize,
}

impl StepLaw {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if dim > 1 << 20 {
            return Err(Error::Config(format!("dimension {dim} is unsupported")));
        }
        Ok(StepLaw { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> u32 {
        2 * self.dim as u32
    }

    pub fn probability(&self) -> f64 {
        1.0 / f64::from(self.outcomes())
    }

    pub fn source<R: RngCore>(&self, rng: R) -> StepSource<R> {
        StepSource::new(*self, rng)
    }
}

#[derive(Clone, Copy, Debug)]
enum Extraction {
    Bits {
        bits: u32,
        per_word: u32,
    },
    Lemire {
        width: u32,
        per_word: u32,
        threshold: u64,
    },
}

/// Buffered step sampler over a 64-bit generator.
#[derive(Clone, Debug)]
pub struct StepSource<R> {
    rng: R,
    outcomes: u64,
    extraction: Extraction,
    word: u64,
    left: u32,
}

impl<R: RngCore> StepSource<R> {
    pub fn new(law: StepLaw, rng: R) -> Self {
        let outcomes = u64::from(law.outcomes());
        let extraction = if outcomes.is_power_of_two() {
            let bits = outcomes.trailing_zeros();
            Extraction::Bits {
                bits,
                per_word: 64 / bits,
            }
        } else {
            let width = if outcomes <= 1 << 15 { 16 } else { 32 };
            Extraction::Lemire {
                width,
                per_word: 64 / width,
                threshold: ((1u64 << width) - outcomes) % outcomes,
            }
        };
        StepSource {
            rng,
            outcomes,
            extraction,
            word: 0,
            left: 0,
        }
    }

    #[inline]
    fn chunk(&mut self, width: u32, per_word: u32) -> u64 {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = per_word;
        }
        let c = self.word & ((1u64 << width) - 1);
        self.word >>= width;
        self.left -= 1;
        c
    }

    /// Draw one step.
    #[inline]
    pub fn sample_step(&mut self) -> Step {
        match self.extraction {
            Extraction::Bits { bits, per_word } => {
                Step::from_code(self.chunk(bits, per_word) as u32)
            }
            Extraction::Lemire {
                width,
                per_word,
                threshold,
            } => loop {
                let m = self.chunk(width, per_word) * self.outcomes;
                let low = m & ((1u64 << width) - 1);
                if low >= threshold {
                    return Step::from_code((m >> width) as u32);
                }
            },
        }
    }

    pub fn rng_mut(&mut self) -> &mut R {
        &mut self.rng
    }
}

/// An unbounded walker started at the origin.
#[derive(Clone, Debug)]
pub struct Walker {
    site: LatticeSite,
    t: u64,
    source: StepSource<WalkRng>,
}

impl Walker {
    pub fn new(dim: usize, master_seed: u64, walker_id: u64) -> Result<Self> {
        let law = StepLaw::new(dim)?;
        Ok(Walker {
            site: LatticeSite::origin(dim),
            t: 0,
            source: law.source(walker_rng(master_seed, walker_id)),
        })
    }

    #[inline]
    pub fn step(&mut self) -> Step {
        let s = self.source.sample_step();
        self.site.apply(s);
        self.t += 1;
        s
    }

    pub fn site(&self) -> &LatticeSite {
        &self.site
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.site.dim()
    }

    /// Randomness for auxiliary decisions. Drawing from it changes the
    /// subsequent steps of this walker, but deterministically.
    pub fn rng_mut(&mut self) -> &mut WalkRng {
        self.source.rng_mut()
    }

    /// Move to an arbitrary site without advancing the clock.
    pub fn relocate(&mut self, site: &[i64]) {
        self.site.0.copy_from_slice(site);
    }
}

/// A path of exactly `n` steps.
#[derive(Clone, Debug)]
pub struct WalkPath {
    pub seed: u64,
    pub walker_id: u64,
    pub n: u64,
    walker: Walker,
}

impl WalkPath {
    pub fn new(dim: usize, seed: u64, walker_id: u64, n: u64) -> Result<Self> {
        if n > MAX_STEPS {
            return Err(Error::Config(format!(
                "path length {n} exceeds the supported maximum {MAX_STEPS}"
            )));
        }
        Ok(WalkPath {
            seed,
            walker_id,
            n,
            walker: Walker::new(dim, seed, walker_id)?,
        })
    }

    pub fn t(&self) -> u64 {
        self.walker.t
    }

    pub fn current(&self) -> &LatticeSite {
        &self.walker.site
    }

    /// Advance one step, or `None` once `t == n`.
    #[inline]
    pub fn advance(&mut self) -> Option<Step> {
        (self.walker.t < self.n).then(|| self.walker.step())
    }

    /// Run to completion; `observer` sees `(t, S_t)` for `t = 1..=n`.
    pub fn run<F: FnMut(u64, &LatticeSite)>(mut self, mut observer: F) -> LatticeSite {
        while self.advance().is_some() {
            observer(self.walker.t, &self.walker.site);
        }
        self.walker.site
    }
}

/// Convenience wrapper around [`WalkPath::run`].
pub fn run_path<F: FnMut(u64, &LatticeSite)>(
    dim: usize,
    seed: u64,
    walker_id: u64,
    n: u64,
    observer: F,
) -> Result<LatticeSite> {
    Ok(WalkPath::new(dim, seed, walker_id, n)?.run(observer))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(dim: usize, draws: usize, seed: u64) -> Vec<u64> {
        let law = StepLaw::new(dim).unwrap();
        let mut src = law.source(walker_rng(seed, 0));
        let mut c = vec![0u64; law.outcomes() as usize];
        for _ in 0..draws {
            c[src.sample_step().code() as usize] += 1;
        }
        c
    }

    #[test]
    fn one_dimensional_steps_are_plus_minus_one() {
        let c = counts(1, 100_000, 3);
        assert_eq!(c.len(), 2);
        let frac = c[0] as f64 / 100_000.0;
        assert!((frac - 0.5).abs() < 4.0 * (0.25f64 / 100_000.0).sqrt());
    }

    #[test]
    fn planar_step_frequencies_within_three_sigma() {
        let draws = 1_000_000;
        let c = counts(2, draws, 11);
        let sigma = (draws as f64 * 0.25 * 0.75).sqrt();
        for &k in &c {
            assert!((k as f64 - 250_000.0).abs() < 3.0 * sigma, "{c:?}");
        }
    }

    #[test]
    fn non_power_of_two_dimensions_are_uniform() {
        for dim in [3, 5, 6] {
            let draws = 600_000;
            let c = counts(dim, draws, 5);
            let p = 1.0 / (2 * dim) as f64;
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            for &k in &c {
                assert!(
                    (k as f64 - draws as f64 * p).abs() < 4.0 * sigma,
                    "d={dim} {c:?}"
                );
            }
        }
    }

    #[test]
    fn empty_path_stays_at_origin() {
        let mut calls = 0;
        let end = run_path(3, 1, 2, 0, |_, _| calls += 1).unwrap();
        assert!(end.is_origin());
        assert_eq!(calls, 0);
    }

    #[test]
    fn two_steps_have_even_coordinate_sum() {
        for seed in 0..50 {
            let end = run_path(2, seed, 0, 2, |_, _| {}).unwrap();
            assert_eq!(end.coord_sum().rem_euclid(2), 0);
        }
    }

    #[test]
    fn parity_tracks_step_index() {
        run_path(4, 9, 1, 10_000, |t, s| {
            assert_eq!(s.coord_sum().rem_euclid(2) as u64, t % 2);
        })
        .unwrap();
    }

    #[test]
    fn observer_sees_every_step_once() {
        let mut ts = Vec::new();
        run_path(2, 4, 4, 17, |t, _| ts.push(t)).unwrap();
        assert_eq!(ts, (1..=17).collect::<Vec<_>>());
    }

    #[test]
    fn same_seed_reproduces_path() {
        let record = |id| {
            let mut v = Vec::new();
            run_path(3, 77, id, 500, |_, s| v.push(s.clone())).unwrap();
            v
        };
        assert_eq!(record(5), record(5));
        assert_ne!(record(5), record(6));
    }

    #[test]
    fn overlong_path_is_rejected() {
        assert!(matches!(
            WalkPath::new(2, 0, 0, MAX_STEPS + 1),
            Err(Error::Config(_))
        ));
        assert!(StepLaw::new(0).is_err());
    }

    #[test]
    fn stream_seeds_are_distinct_for_distinct_walkers() {
        let mut seeds: Vec<u64> = (0..10_000).map(|w| stream_seed(42, w)).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 10_000);
    }
}
