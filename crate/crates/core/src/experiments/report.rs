//! Scaling summaries across the schedule of one experiment.

use serde::Serialize;

use super::config::{ExperimentConfig, Statistic};
use super::envelope::{band, BandInputs};
use super::runner::{EstimateRecord, NamedVerdict, OracleConstants};
use crate::oracles::bounds::Verdict;

/// A scaling claim needs this many schedule points...
pub const MIN_POINTS: usize = 3;
/// ...spread over at least this many decades of `n`.
pub const MIN_DECADES: f64 = 2.0;
/// Largest tolerated ratio between normalised means across the schedule.
pub const MAX_MEAN_RATIO: f64 = 3.0;

#[derive(Clone, Debug, Serialize)]
pub struct ScalePoint {
    pub n: u64,
    pub r_n: Option<f64>,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// widened band, when the tag has one
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub theorem: String,
    pub config_hash: String,
    pub points: Vec<ScalePoint>,
    pub decades: f64,
    pub mean_ratio: Option<f64>,
    pub verdicts: Vec<NamedVerdict>,
}

impl ScalingReport {
    /// Worst verdict: any failure fails, then any inconclusive.
    pub fn overall(&self) -> Verdict {
        let gating = || self.verdicts.iter().filter(|v| v.gating);
        if gating().any(|v| v.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if gating().any(|v| v.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} [{}]  points {}  decades {:.2}\n",
            self.theorem,
            &self.config_hash[..12.min(self.config_hash.len())],
            self.points.len(),
            self.decades
        );
        for p in &self.points {
            s += &format!(
                "  n={:<12} mean={:.4} median={:.4} min={:.4} max={:.4}",
                p.n, p.mean, p.median, p.min, p.max
            );
            if let (Some(l), Some(u)) = (p.lower, p.upper) {
                s += &format!("  band=[{l:.4}, {u:.4}]");
            }
            s.push('\n');
        }
        for v in &self.verdicts {
            let tag = if v.gating { "" } else { " (reported)" };
            s += &format!(
                "  {:<22} {:<12} {:.6}  {}{tag}\n",
                v.name,
                v.verdict.to_string(),
                v.value,
                v.detail
            );
        }
        s += &format!("  overall: {}\n", self.overall());
        s
    }
}

fn verdict(name: &str, verdict: Verdict, value: f64, detail: String) -> NamedVerdict {
    NamedVerdict::new(name, verdict, value, detail)
}

pub fn scaling_report(
    cfg: &ExperimentConfig,
    oracle: &OracleConstants,
    config_hash: &str,
    records: &[EstimateRecord],
) -> ScalingReport {
    let inputs = BandInputs {
        lambda: oracle.lambda_d,
    };
    let points: Vec<ScalePoint> = records
        .iter()
        .filter_map(|r| {
            let s = r.normalized?;
            let b = band(cfg, inputs, r.n).map(|b| b.widened(cfg.widen));
            Some(ScalePoint {
                n: r.n,
                r_n: r.r_n,
                mean: s.mean,
                median: s.median,
                min: s.min,
                max: s.max,
                lower: b.map(|b| b.lower),
                upper: b.map(|b| b.upper),
            })
        })
        .collect();
    let decades = match (points.first(), points.last()) {
        (Some(a), Some(b)) if a.n > 0 => (b.n as f64 / a.n as f64).log10(),
        _ => 0.0,
    };
    let mut verdicts = Vec::new();
    let enough = points.len() >= MIN_POINTS && decades >= MIN_DECADES;
    verdicts.push(verdict(
        "range",
        if enough {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        },
        decades,
        format!(
            "{} points, need {MIN_POINTS} over {MIN_DECADES} decades",
            points.len()
        ),
    ));

    let means: Vec<f64> = points.iter().map(|p| p.mean).collect();
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean_ratio = (cfg.statistic == Statistic::MaxLocalTime && lo > 0.0).then(|| hi / lo);
    if let Some(ratio) = mean_ratio {
        verdicts.push(verdict(
            "mean-ratio",
            if !enough {
                Verdict::Inconclusive
            } else if ratio < MAX_MEAN_RATIO {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            ratio,
            format!("largest over smallest normalised mean, below {MAX_MEAN_RATIO}"),
        ));
    }

    // per-record verdicts rolled up by name
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        for v in &r.verdicts {
            if !names.contains(&v.name.as_str()) {
                names.push(&v.name);
            }
        }
    }
    for name in names {
        let all: Vec<&NamedVerdict> = records
            .iter()
            .flat_map(|r| &r.verdicts)
            .filter(|v| v.name == name)
            .collect();
        let fails: Vec<String> = records
            .iter()
            .filter(|r| {
                r.verdicts
                    .iter()
                    .any(|v| v.name == name && v.verdict == Verdict::Fail)
            })
            .map(|r| r.n.to_string())
            .collect();
        let v = if !fails.is_empty() {
            Verdict::Fail
        } else if all.iter().any(|v| v.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        let detail = if fails.is_empty() {
            format!("{} schedule points", all.len())
        } else {
            format!("fails at n = {}", fails.join(", "))
        };
        let last = all.last().map_or(f64::NAN, |v| v.value);
        let mut rolled = verdict(name, v, last, detail);
        rolled.gating = all.iter().all(|v| v.gating);
        verdicts.push(rolled);
    }

    ScalingReport {
        theorem: cfg.theorem.name().into(),
        config_hash: config_hash.into(),
        points,
        decades,
        mean_ratio,
        verdicts,
    }
}
