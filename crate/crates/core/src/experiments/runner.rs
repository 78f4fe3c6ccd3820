//! Drives walker ensembles over a schedule of path lengths.

use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, Statistic, SubsetTemplate, TheoremTag};
use super::envelope::{band, BandInputs};
use crate::error::{Error, Result};
use crate::local_time::{LocalTimeLedger, UNRESTRICTED_MAX_STEPS};
use crate::oracles::bounds::{
    check_bound, planar_local_time_lower, planar_local_time_upper, Estimate, Side, Verdict,
};
use crate::oracles::escape::{green_total, lambda_from_gamma};
use crate::projections::Projection1D;
use crate::stats::{chi_square_test, ks_test, mean, median, total_variation};
use crate::subsets::SubsetSpec;
use crate::walk::{mix64, uniform01, walker_rng, StepLaw};

/// Ledgers expected to hold more sites than this are refused for long paths.
const BALL_SITES_LIMIT: f64 = 1e7;
const JITTER_SALT: u64 = 0x6a09_e667_f3bc_c908;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConstants {
    pub pi: f64,
    pub gamma_d: Option<f64>,
    pub lambda_d: Option<f64>,
}

pub fn oracle_constants(d: usize) -> Result<OracleConstants> {
    let gamma = if d >= 3 {
        Some(1.0 / green_total(d)?)
    } else {
        None
    };
    Ok(OracleConstants {
        pi: PI,
        gamma_d: gamma,
        lambda_d: gamma.map(lambda_from_gamma),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        Summary {
            mean: mean(values),
            median: median(values),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub name: String,
    pub verdict: Verdict,
    pub value: f64,
    pub detail: String,
    /// false for edge comparisons that are reported but do not decide the outcome
    #[serde(default = "gating_default")]
    pub gating: bool,
}

fn gating_default() -> bool {
    true
}

impl NamedVerdict {
    pub fn new(name: &str, verdict: Verdict, value: f64, detail: String) -> Self {
        NamedVerdict {
            name: name.into(),
            verdict,
            value,
            detail,
            gating: true,
        }
    }

    pub fn reported(mut self) -> Self {
        self.gating = false;
        self
    }

    fn pass_if(name: &str, ok: bool, value: f64, detail: String) -> Self {
        Self::new(
            name,
            if ok { Verdict::Pass } else { Verdict::Fail },
            value,
            detail,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareSeries {
    pub subset: String,
    pub values: Vec<u64>,
}

/// Outcome at one path length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub config_hash: String,
    pub n: u64,
    pub seed: u64,
    pub r_n: Option<f64>,
    /// resolved primary subset, `all` for the whole lattice
    pub subset: String,
    /// per-walker statistic: maximal local time, or local time at the origin
    pub values: Vec<u64>,
    pub normalizer: Option<f64>,
    pub normalized: Option<Summary>,
    pub compare: Vec<CompareSeries>,
    pub verdicts: Vec<NamedVerdict>,
    /// excluded from reproducibility comparisons
    pub wall_time_ms: f64,
}

impl EstimateRecord {
    /// Equality of every field except the wall time.
    pub fn same_numbers(&self, other: &EstimateRecord) -> bool {
        let mut a = self.clone();
        a.wall_time_ms = other.wall_time_ms;
        &a == other
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub config_text: String,
    pub config_hash: String,
    pub oracle: OracleConstants,
    pub records: Vec<EstimateRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn config_hash(cfg: &ExperimentConfig) -> String {
    sha256_hex(cfg.to_text().as_bytes())
}

fn describe(spec: &Option<SubsetSpec>) -> String {
    spec.as_ref()
        .map_or_else(|| "all".to_string(), ToString::to_string)
}

/// `primary` is contained in `other` by construction.
fn implied_subset(primary: &SubsetTemplate, other: &SubsetTemplate) -> bool {
    if other.is_all() {
        return true;
    }
    if primary.0 == other.0 {
        return true;
    }
    // member of an intersection, compared textually after parsing at a probe radius
    let probe = |t: &SubsetTemplate| t.resolve(Some(7.5)).ok().flatten();
    match (probe(primary), probe(other)) {
        (Some(SubsetSpec::Intersection(m)), Some(o)) => {
            let o = o.canonicalize().ok();
            m.iter().any(|x| x.canonicalize().ok() == o)
        }
        _ => false,
    }
}

struct Plan {
    d: usize,
    schedule: Vec<u64>,
    origin_only: bool,
    /// `None` member means the whole lattice
    tracked: Vec<Option<SubsetSpec>>,
    /// per schedule index: primary then compare subsets
    resolved: Vec<Vec<Option<SubsetSpec>>>,
    /// hyperplanes checked against their projected walk: (slot, subset, projection)
    identities: Vec<(usize, SubsetSpec, Projection1D)>,
}

#[derive(Clone, Debug, Default)]
struct WalkerOutcome {
    /// per schedule index, one value per slot (primary first)
    values: Vec<Vec<u64>>,
    identity_ok: Vec<bool>,
}

impl Plan {
    fn new(cfg: &ExperimentConfig) -> Result<Plan> {
        let n_max = *cfg.schedule.last().expect("validated");
        let r_max = cfg.radius_at(n_max);
        let templates: Vec<&SubsetTemplate> =
            std::iter::once(&cfg.subset).chain(&cfg.compare).collect();
        let tracked: Vec<Option<SubsetSpec>> = templates
            .iter()
            .map(|t| t.resolve(r_max))
            .collect::<Result<_>>()?;
        for spec in &tracked {
            let sites = match spec {
                None => f64::INFINITY,
                Some(s) => ball_sites(s, cfg.d),
            };
            if n_max > UNRESTRICTED_MAX_STEPS && sites > BALL_SITES_LIMIT {
                return Err(Error::MemoryPolicy(format!(
                    "a ledger over `{}` for n = {n_max} may exceed {BALL_SITES_LIMIT:e} sites; \
                     restrict to a subspace or a smaller ball, or keep n <= {UNRESTRICTED_MAX_STEPS}",
                    describe(spec)
                )));
            }
        }
        let resolved = cfg
            .schedule
            .iter()
            .map(|&n| {
                templates
                    .iter()
                    .map(|t| t.resolve(cfg.radius_at(n)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let identities = tracked
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Some(h @ SubsetSpec::Hyperplane { .. }) => {
                    Projection1D::from_subset(h).ok().map(|p| (i, h.clone(), p))
                }
                _ => None,
            })
            .collect();
        Ok(Plan {
            d: cfg.d,
            schedule: cfg.schedule.clone(),
            origin_only: cfg.statistic != Statistic::MaxLocalTime,
            tracked,
            resolved,
            identities,
        })
    }

    fn admits(&self, site: &[i64]) -> bool {
        self.tracked.iter().any(|s| match s {
            None => true,
            Some(s) => s.contains_unchecked(site),
        })
    }

    fn run_walker(&self, seed: u64, walker: u64) -> WalkerOutcome {
        let law = StepLaw::new(self.d).expect("validated dimension");
        let mut src = law.source(walker_rng(seed, walker));
        let mut pos = vec![0i64; self.d];
        let mut out = WalkerOutcome::default();
        let mut t = 0u64;
        if self.origin_only {
            let mut hits = 0u64;
            for &n in &self.schedule {
                while t < n {
                    let s = src.sample_step();
                    pos[s.axis()] += s.sign();
                    t += 1;
                    if pos.iter().all(|&x| x == 0) {
                        hits += 1;
                    }
                }
                out.values.push(vec![hits]);
            }
            return out;
        }
        let mut ledger = LocalTimeLedger::new();
        let mut z = vec![0i64; self.identities.len()];
        let mut zeros = vec![0u64; self.identities.len()];
        let mut ok = vec![true; self.identities.len()];
        for (k, &n) in self.schedule.iter().enumerate() {
            while t < n {
                let s = src.sample_step();
                pos[s.axis()] += s.sign();
                t += 1;
                for (j, (_, _, p)) in self.identities.iter().enumerate() {
                    z[j] += p.increment(s);
                    if z[j] == 0 {
                        zeros[j] += 1;
                    }
                }
                if self.admits(&pos) {
                    ledger.record_unchecked(&pos);
                }
            }
            let values = self.resolved[k]
                .iter()
                .map(|spec| match spec {
                    None => ledger.max_local_time().map_or(0, |m| m.1),
                    Some(s) => ledger.max_over(s),
                })
                .collect();
            out.values.push(values);
            for (j, (_, h, _)) in self.identities.iter().enumerate() {
                let visits: u64 = ledger
                    .iter()
                    .filter(|(site, _)| h.contains_unchecked(site.coords()))
                    .map(|(_, c)| c)
                    .sum();
                ok[j] &= visits == zeros[j];
            }
        }
        out.identity_ok = ok;
        out
    }
}

/// Rough count of lattice sites a ledger restricted to `spec` may hold.
fn ball_sites(spec: &SubsetSpec, d: usize) -> f64 {
    match spec {
        SubsetSpec::Ball { radius, .. } => (2.0 * radius + 1.0).powi(d as i32),
        SubsetSpec::Intersection(m) => m
            .iter()
            .map(|s| ball_sites(s, d))
            .fold(f64::INFINITY, f64::min),
        // subspaces: visits grow sublinearly and are accepted
        _ => 0.0,
    }
}

fn run_walkers(plan: &Plan, seed: u64, walkers: u64) -> Vec<WalkerOutcome> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..walkers)
            .into_par_iter()
            .map(|w| plan.run_walker(seed, w))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..walkers).map(|w| plan.run_walker(seed, w)).collect()
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let started = Instant::now();
    let plan = Plan::new(cfg)?;
    let oracle = oracle_constants(cfg.d)?;
    let outcomes = run_walkers(&plan, cfg.seed, cfg.walkers);
    let hash = config_hash(cfg);
    let inputs = BandInputs {
        lambda: oracle.lambda_d,
    };
    let templates: Vec<&SubsetTemplate> =
        std::iter::once(&cfg.subset).chain(&cfg.compare).collect();

    // one jitter variate per walker and schedule point, from its own stream
    let jitter: Vec<Vec<f64>> = (0..cfg.walkers)
        .map(|w| {
            let mut rng = walker_rng(mix64(cfg.seed) ^ JITTER_SALT, w);
            cfg.schedule.iter().map(|_| uniform01(&mut rng)).collect()
        })
        .collect();

    let mut records = Vec::with_capacity(cfg.schedule.len());
    for (k, &n) in cfg.schedule.iter().enumerate() {
        let r_n = cfg.radius_at(n);
        let values: Vec<u64> = outcomes.iter().map(|o| o.values[k][0]).collect();
        let normalizer = cfg.normalization.value(n, r_n);
        let normalized = normalizer.map(|z| {
            let v: Vec<f64> = values.iter().map(|&x| x as f64 / z).collect();
            Summary::of(&v)
        });
        let compare: Vec<CompareSeries> = (1..templates.len())
            .map(|j| CompareSeries {
                subset: describe(&plan.resolved[k][j]),
                values: outcomes
                    .iter()
                    .map(|o| o.values[k].get(j).copied().unwrap_or(0))
                    .collect(),
            })
            .collect();
        let mut verdicts = Vec::new();
        match cfg.statistic {
            Statistic::MaxLocalTime => {
                if let (Some(b), Some(s)) = (band(cfg, inputs, n), normalized) {
                    let w = b.widened(cfg.widen);
                    let span = format!("[{:.6}, {:.6}]", w.lower, w.upper);
                    verdicts.push(NamedVerdict::pass_if(
                        "envelope-mean",
                        w.contains(s.mean),
                        s.mean,
                        span.clone(),
                    ));
                    verdicts.push(NamedVerdict::pass_if(
                        "envelope-median",
                        w.contains(s.median),
                        s.median,
                        span.clone(),
                    ));
                    verdicts.push(
                        NamedVerdict::pass_if("liminf-min", s.min >= w.lower, s.min, span.clone())
                            .reported(),
                    );
                    verdicts.push(
                        NamedVerdict::pass_if("limsup-max", s.max <= w.upper, s.max, span)
                            .reported(),
                    );
                }
                for (j, t) in templates.iter().enumerate().skip(1) {
                    if implied_subset(&cfg.subset, t) {
                        let bad = values
                            .iter()
                            .zip(&compare[j - 1].values)
                            .filter(|(a, b)| a > b)
                            .count();
                        verdicts.push(NamedVerdict::pass_if(
                            "monotone",
                            bad == 0,
                            bad as f64,
                            format!("primary <= {} samplewise", t.0),
                        ));
                    }
                }
                for (j, (slot, _, _)) in plan.identities.iter().enumerate() {
                    let bad = outcomes.iter().filter(|o| !o.identity_ok[j]).count();
                    verdicts.push(NamedVerdict::pass_if(
                        "cross-identity",
                        bad == 0,
                        bad as f64,
                        format!(
                            "visits to `{}` equal zeros of the projected walk",
                            templates[*slot].0
                        ),
                    ));
                }
            }
            Statistic::Distribution => {
                verdicts.extend(distribution_verdicts(cfg, &oracle, n, &values, &jitter, k)?)
            }
            Statistic::BoundCheck => {
                let level = cfg.alpha * (n as f64).ln().powi(2);
                let hits = values.iter().filter(|&&x| x as f64 >= level).count() as u64;
                let est = Estimate::binomial(hits, cfg.walkers, 2.576)?;
                let nn = n as f64;
                for (name, bound, side) in [
                    (
                        "tail-upper",
                        planar_local_time_upper(nn, cfg.alpha, cfg.delta),
                        Side::AtMost,
                    ),
                    (
                        "tail-lower",
                        planar_local_time_lower(nn, cfg.alpha, cfg.delta),
                        Side::AtLeast,
                    ),
                ] {
                    let c = check_bound(name, est, bound, side);
                    verdicts.push(NamedVerdict::new(
                        name,
                        c.verdict,
                        est.value,
                        format!(
                            "bound {:.6e}, interval [{:.6e}, {:.6e}]",
                            bound, est.lower, est.upper
                        ),
                    ));
                }
            }
        }
        records.push(EstimateRecord {
            config_hash: hash.clone(),
            n,
            seed: cfg.seed,
            r_n,
            subset: describe(&plan.resolved[k][0]),
            values,
            normalizer,
            normalized,
            compare,
            verdicts,
            wall_time_ms: 0.0,
        });
    }
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    for r in &mut records {
        r.wall_time_ms = elapsed;
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        config_text: cfg.to_text(),
        config_hash: hash,
        oracle,
        records,
    })
}

fn distribution_verdicts(
    cfg: &ExperimentConfig,
    oracle: &OracleConstants,
    n: u64,
    values: &[u64],
    jitter: &[Vec<f64>],
    k: usize,
) -> Result<Vec<NamedVerdict>> {
    let mut out = Vec::new();
    if cfg.d == 2 {
        let ln = (n as f64).ln();
        if ln > 0.0 {
            // continuity correction: (xi + U) has CDF P(xi < k) at each integer k
            let xs: Vec<f64> = values
                .iter()
                .zip(jitter)
                .map(|(&v, u)| (v as f64 + u[k]) / ln)
                .collect();
            let t = ks_test(&xs, |x| if x <= 0.0 { 0.0 } else { 1.0 - (-PI * x).exp() });
            let verdict = if t.n < crate::stats::KS_MIN_SAMPLES {
                Verdict::Inconclusive
            } else if t.distance < cfg.ks_tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            out.push(NamedVerdict::new(
                "ks-exponential",
                verdict,
                t.distance,
                format!("tolerance {}, p-value {:.4}", cfg.ks_tolerance, t.p_value),
            ));
        }
    } else if let Some(g) = oracle.gamma_d {
        let top = values.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0u64; top + 1];
        for &v in values {
            counts[v as usize] += 1;
        }
        let pmf: Vec<f64> = (0..=top).map(|j| g * (1.0 - g).powi(j as i32)).collect();
        let t = chi_square_test(&counts, &pmf, 0)?;
        out.push(NamedVerdict::new(
            "chi-square-geometric",
            t.verdict(0.01),
            t.p_value,
            format!("statistic {:.4}, df {}", t.statistic, t.df),
        ));
        let tv = total_variation(&counts, &pmf);
        out.push(NamedVerdict::new("total-variation", Verdict::Pass, tv, String::new()).reported());
    }
    Ok(out)
}

/// Theorem tag of a record set, for reports.
pub fn tag_of(result: &ExperimentResult) -> TheoremTag {
    result.config.theorem
}
