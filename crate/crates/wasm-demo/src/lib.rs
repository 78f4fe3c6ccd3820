//! Browser demo: a planar walk with its local times, the return-probability
//! tables, and the two Cauchy-walk samplers side by side.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use loctime::cauchy::{even_histogram, sample_direct, sample_embedded, CauchyStepLaw};
use loctime::oracles::first_return_law;
use loctime::walk::run_path;
use loctime::{LocalTimeLedger, SubsetSpec};

/// Longest path the page may request.
pub const MAX_DEMO_STEPS: u64 = 2_000_000;
/// Most path points shipped back for drawing.
const MAX_POINTS: u64 = 20_000;

#[derive(Serialize)]
struct WalkView {
    n: u64,
    /// every `stride`-th position, starting at the origin
    points: Vec<[i64; 2]>,
    stride: u64,
    max_site: Option<[i64; 2]>,
    max_count: u64,
    subset_max: Option<u64>,
    distinct: usize,
    /// sites with their counts, largest first, at most 200
    hot: Vec<([i64; 2], u64)>,
}

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

pub fn planar_walk_json(n: u64, seed: u64, subset: &str) -> Result<String, String> {
    if n > MAX_DEMO_STEPS {
        return Err(format!("at most {MAX_DEMO_STEPS} steps in the demo"));
    }
    let spec = match subset.trim() {
        "" | "all" => None,
        s => Some(SubsetSpec::parse(s).map_err(|e| e.to_string())?),
    };
    let stride = n.div_ceil(MAX_POINTS).max(1);
    let mut points = vec![[0, 0]];
    let mut ledger = LocalTimeLedger::new();
    run_path(2, seed, 0, n, |t, s| {
        ledger.record(s.coords());
        if t % stride == 0 {
            points.push([s.coords()[0], s.coords()[1]]);
        }
    })
    .map_err(|e| e.to_string())?;
    let best = ledger.max_local_time();
    let mut hot: Vec<([i64; 2], u64)> = ledger
        .iter()
        .map(|(s, c)| ([s.coords()[0], s.coords()[1]], c))
        .collect();
    hot.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    hot.truncate(200);
    let view = WalkView {
        n,
        points,
        stride,
        max_site: best.as_ref().map(|(s, _)| [s.coords()[0], s.coords()[1]]),
        max_count: best.map_or(0, |b| b.1),
        subset_max: spec.as_ref().map(|s| ledger.max_over(s)),
        distinct: ledger.distinct_sites(),
        hot,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ReturnView {
    d: usize,
    p: Vec<f64>,
    f: Vec<f64>,
    returned: f64,
}

pub fn return_table_json(d: usize, n_max: usize) -> Result<String, String> {
    if !(1..=4).contains(&d) || !(2..=2000).contains(&n_max) {
        return Err("d in 1..=4 and n_max in 2..=2000".into());
    }
    let law = first_return_law(d, n_max).map_err(|e| e.to_string())?;
    let view = ReturnView {
        d,
        returned: law.returned_by(n_max),
        p: law.p,
        f: law.f,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CauchyView {
    k: Vec<i64>,
    exact: Vec<f64>,
    direct: Vec<f64>,
    embedded: Vec<f64>,
    truncated: u64,
    total_variation: f64,
}

pub fn cauchy_compare_json(samples: usize, seed: u64) -> Result<String, String> {
    if !(1..=200_000).contains(&samples) {
        return Err("between 1 and 200000 samples".into());
    }
    let k_max = 10i64;
    let direct = sample_direct(samples, seed, 0);
    let emb =
        sample_embedded(samples, seed ^ 0x5bd1_e995, 1, 1_000_000).map_err(|e| e.to_string())?;
    let freq = |steps: &[i64]| {
        let (h, _) = even_histogram(steps, k_max);
        h.iter()
            .map(|&c| c as f64 / steps.len() as f64)
            .collect::<Vec<_>>()
    };
    let (fd, fe) = (freq(&direct), freq(&emb.steps));
    let tv = 0.5 * fd.iter().zip(&fe).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let view = CauchyView {
        k: (-k_max..=k_max).map(|k| 2 * k).collect(),
        exact: (-k_max..=k_max).map(|k| CauchyStepLaw.pmf(2 * k)).collect(),
        direct: fd,
        embedded: fe,
        truncated: emb.truncated,
        total_variation: tv,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn planar_walk(n: u32, seed: u32, subset: &str) -> Result<String, JsValue> {
    planar_walk_json(n as u64, seed as u64, subset).map_err(err)
}

#[wasm_bindgen]
pub fn return_table(d: u32, n_max: u32) -> Result<String, JsValue> {
    return_table_json(d as usize, n_max as usize).map_err(err)
}

#[wasm_bindgen]
pub fn cauchy_compare(samples: u32, seed: u32) -> Result<String, JsValue> {
    cauchy_compare_json(samples as usize, seed as u64).map_err(err)
}
