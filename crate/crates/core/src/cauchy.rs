//! The planar walk watched on the diagonal: a one-dimensional walk with
//! heavy-tailed even steps, sampled either directly or by embedding.
//!
//! With `V = S1 + S2` and `Z = S1 - S2`, each planar step moves `V` and `Z` by
//! independent `+-1`. At the `k`-th zero `rho_k` of `Z` the walk sits on the
//! diagonal at `(R_k/2, R_k/2)` where `R_k = V_{rho_k}`.

use std::f64::consts::FRAC_2_PI;

use rand_core::RngCore;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::walk::{uniform01, walker_rng, Step, StepLaw, StepSource, WalkRng};

/// Default cap on planar steps for one embedded run.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000_000;

/// Law of one step `U`: `P(U = 0) = 1 - 2/pi`, `P(U = 2k) = (2/pi) / (4k^2 - 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CauchyStepLaw;

impl CauchyStepLaw {
    pub fn pmf(&self, u: i64) -> f64 {
        if u % 2 != 0 {
            return 0.0;
        }
        if u == 0 {
            return 1.0 - FRAC_2_PI;
        }
        let k = (u / 2).unsigned_abs() as f64;
        FRAC_2_PI / (4.0 * k * k - 1.0)
    }

    /// `P(|U| > 2K) = (2/pi) / (2K + 1)` by telescoping `1/(2k-1) - 1/(2k+1)`.
    pub fn tail_beyond(&self, big_k: u64) -> f64 {
        FRAC_2_PI / (2 * big_k + 1) as f64
    }

    /// Exact inverse-CDF draw; no truncation of the support.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> i64 {
        let v = 1.0 - uniform01(rng); // (0, 1]
        if v >= FRAC_2_PI {
            return 0;
        }
        // given |U| >= 2: P(|U| >= 2k) = 1/(2k-1); w uniform on (0, 1)
        let w = v / FRAC_2_PI;
        let k = ((1.0 / w + 1.0) / 2.0).floor() as i64;
        let k = k.max(1);
        if rng.next_u32() & 1 == 0 {
            2 * k
        } else {
            -2 * k
        }
    }
}

/// One draw of the embedded sampler.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedded {
    Step(i64),
    /// the step budget ran out before `Z` returned to zero
    Truncated,
}

/// The coupled planar walk and its diagonal return clock.
#[derive(Clone, Debug)]
pub struct EmbeddedCauchy {
    source: StepSource<WalkRng>,
    s: [i64; 2],
    t: u64,
    budget: u64,
    returns: u64,
    last_r: i64,
    exhausted: bool,
}

impl EmbeddedCauchy {
    pub fn new(seed: u64, walker_id: u64, budget: u64) -> Self {
        let law = StepLaw::new(2).expect("planar law");
        EmbeddedCauchy {
            source: law.source(walker_rng(seed, walker_id)),
            s: [0, 0],
            t: 0,
            budget,
            returns: 0,
            last_r: 0,
            exhausted: false,
        }
    }

    /// Planar steps taken so far.
    pub fn planar_steps(&self) -> u64 {
        self.t
    }

    /// Completed diagonal returns `n`, so that `planar_steps()` equals `rho_n`
    /// right after a `Step` is produced.
    pub fn returns(&self) -> u64 {
        self.returns
    }

    pub fn position(&self) -> [i64; 2] {
        self.s
    }

    pub fn v(&self) -> i64 {
        self.s[0] + self.s[1]
    }

    pub fn z(&self) -> i64 {
        self.s[0] - self.s[1]
    }

    /// Advance to the next zero of `Z`, reporting every planar site visited.
    pub fn next_step_observed<F: FnMut(u64, [i64; 2])>(&mut self, mut observe: F) -> Embedded {
        if self.exhausted {
            return Embedded::Truncated;
        }
        loop {
            if self.t >= self.budget {
                self.exhausted = true;
                return Embedded::Truncated;
            }
            let st: Step = self.source.sample_step();
            self.s[st.axis()] += st.sign();
            self.t += 1;
            observe(self.t, self.s);
            if self.s[0] == self.s[1] {
                self.returns += 1;
                let r = self.v();
                let u = r - self.last_r;
                self.last_r = r;
                return Embedded::Step(u);
            }
        }
    }

    pub fn next_step(&mut self) -> Embedded {
        self.next_step_observed(|_, _| {})
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CauchyMode {
    Direct,
    Embedded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CauchyMax {
    /// `max_y eta(y, n)` over the steps actually produced
    pub eta_max: u64,
    /// Cauchy steps produced; below the request when truncated
    pub steps: u64,
    /// planar steps used, `rho_steps` in embedded mode
    pub planar_steps: Option<u64>,
    pub truncated: bool,
}

/// Maximal local time `eta(n) = max_y #{1 <= k <= n : R_k = y}`.
pub fn max_local_time_cauchy(
    n: u64,
    mode: CauchyMode,
    seed: u64,
    walker_id: u64,
    budget: u64,
) -> CauchyMax {
    let mut counts: FxHashMap<i64, u64> = FxHashMap::default();
    let mut best = 0u64;
    let mut bump = |r: i64| {
        let c = counts.entry(r).or_insert(0);
        *c += 1;
        best = best.max(*c);
    };
    match mode {
        CauchyMode::Direct => {
            let mut rng = walker_rng(seed, walker_id);
            let law = CauchyStepLaw;
            let mut r = 0i64;
            for _ in 0..n {
                r += law.sample(&mut rng);
                bump(r);
            }
            CauchyMax {
                eta_max: best,
                steps: n,
                planar_steps: None,
                truncated: false,
            }
        }
        CauchyMode::Embedded => {
            let mut e = EmbeddedCauchy::new(seed, walker_id, budget);
            let mut done = 0;
            while done < n {
                match e.next_step() {
                    Embedded::Step(_) => {
                        bump(e.v());
                        done += 1;
                    }
                    Embedded::Truncated => break,
                }
            }
            CauchyMax {
                eta_max: best,
                steps: done,
                planar_steps: Some(e.planar_steps()),
                truncated: done < n,
            }
        }
    }
}

/// Direct and embedded step samples with truncation accounting.
#[derive(Clone, Debug, Default)]
pub struct CauchySamples {
    pub steps: Vec<i64>,
    pub truncated: u64,
}

pub fn sample_direct(count: usize, seed: u64, walker_id: u64) -> Vec<i64> {
    let mut rng = walker_rng(seed, walker_id);
    (0..count).map(|_| CauchyStepLaw.sample(&mut rng)).collect()
}

/// `count` embedded steps spread over independent walkers, each walker
/// limited to `per_walker` steps and `budget` planar steps.
pub fn sample_embedded(
    count: usize,
    seed: u64,
    per_walker: usize,
    budget: u64,
) -> Result<CauchySamples> {
    if per_walker == 0 {
        return Err(Error::Usage("per_walker must be positive".into()));
    }
    let mut out = CauchySamples::default();
    let mut id = 0u64;
    while out.steps.len() < count {
        let mut e = EmbeddedCauchy::new(seed, id, budget);
        for _ in 0..per_walker.min(count - out.steps.len()) {
            match e.next_step() {
                Embedded::Step(u) => out.steps.push(u),
                Embedded::Truncated => {
                    out.truncated += 1;
                    break;
                }
            }
        }
        id += 1;
    }
    Ok(out)
}

/// Histogram over `U / 2 in -k_max..=k_max`; values beyond land in `overflow`.
pub fn even_histogram(steps: &[i64], k_max: i64) -> (Vec<u64>, u64) {
    let mut h = vec![0u64; (2 * k_max + 1) as usize];
    let mut overflow = 0;
    for &u in steps {
        let k = u / 2;
        if k.abs() <= k_max {
            h[(k + k_max) as usize] += 1;
        } else {
            overflow += 1;
        }
    }
    (h, overflow)
}
