//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::time::Instant;

use num_rational::BigRational;

use loctime::cauchy::{
    even_histogram, sample_direct, sample_embedded, CauchyStepLaw, Embedded, EmbeddedCauchy,
};
use loctime::excursions::{excursion_local_times, DEFAULT_EXIT_RADIUS};
use loctime::experiments::envelope::{band, BandInputs};
use loctime::experiments::persist::{write_outputs, Manifest};
use loctime::experiments::{run_experiment, scaling_report, ExperimentConfig};
use loctime::oracles::bounds::{excursion_sum_tail_check, Verdict};
use loctime::oracles::returns::return_prob_exact;
use loctime::oracles::{escape_constants, first_return_law, hit_before_return, ExcursionLaw};
use loctime::projections::{subgroup_basis, Projection1D, Projection2D};
use loctime::stats::total_variation;
use loctime::walk::{uniform01, walker_rng, StepLaw};
use loctime::{LocalTimeLedger, SubsetSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn oracle_exactness() -> Outcome {
    let t = Instant::now();
    let law = first_return_law(2, 512).expect("first-return law");
    let p2 = return_prob_exact(2, 2) == rational(1, 4);
    let p4 = return_prob_exact(2, 4) == rational(9, 64);
    let f2 = law.f_exact(2) == Some(rational(1, 4));
    let f4 = law.f_exact(4) == Some(rational(5, 64));
    let residual = law.renewal_residual();
    let secs = t.elapsed().as_secs_f64();
    outcome(
        p2 && p4 && f2 && f4 && residual < 1e-12 && secs < 1.0,
        format!("P2 {p2}, P4 {p4}, f2 {f2}, f4 {f4}, renewal residual {residual:.2e} over n <= 512, {secs:.3} s"),
    )
}

fn escape() -> Outcome {
    let t = Instant::now();
    let e = escape_constants(3, 1000).expect("escape constants");
    let secs = t.elapsed().as_secs_f64();
    let bracket = e.bracket_violation();
    outcome(
        (0.6590..=0.6600).contains(&e.gamma)
            && (0.925..=0.932).contains(&e.lambda)
            && e.lambda < 1.0
            && bracket.is_none()
            && secs < 10.0,
        format!(
            "gamma_3 {:.8}, lambda_3 {:.6}, bracket violations {:?} over n <= 1000, {secs:.2} s",
            e.gamma, e.lambda, bracket
        ),
    )
}

fn verdict_of<'a>(
    r: &'a loctime::experiments::EstimateRecord,
    name: &str,
) -> Option<&'a loctime::experiments::runner::NamedVerdict> {
    r.verdicts.iter().find(|v| v.name == name)
}

fn planar_origin_law() -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig::parse(
        "theorem = origin-law-2d\nd = 2\nsubset = ball:0\nschedule = 1000000\nwalkers = 10000\nseed = 5\nks_tolerance = 0.05\n",
    )
    .expect("config");
    let r = run_experiment(&cfg).expect("run");
    let v = verdict_of(&r.records[0], "ks-exponential").expect("ks verdict");
    outcome(
        v.verdict == Verdict::Pass && v.value < 0.05,
        format!(
            "KS distance {:.4} (< 0.05), {}, n = 1e6, 1e4 walkers, {:.0} s",
            v.value,
            v.detail,
            t.elapsed().as_secs_f64()
        ),
    )
}

fn spatial_origin_law() -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig::parse(
        "theorem = origin-geometric\nd = 3\nsubset = ball:0\nschedule = 100000\nwalkers = 100000\nseed = 12\n",
    )
    .expect("config");
    let r = run_experiment(&cfg).expect("run");
    let v = verdict_of(&r.records[0], "chi-square-geometric").expect("chi-square verdict");
    outcome(
        v.value > 0.01,
        format!(
            "chi-square p-value {:.4}, {}, {:.0} s",
            v.value,
            v.detail,
            t.elapsed().as_secs_f64()
        ),
    )
}

fn excursion_law() -> Outcome {
    let t = Instant::now();
    let h = hit_before_return([1, 0]).expect("hit-before-return");
    let p_ok = (0.497..=0.503).contains(&h.p);
    let ys = excursion_local_times([1, 0], 1_000_000, 3, DEFAULT_EXIT_RADIUS).expect("excursions");
    let law = ExcursionLaw::new(h.p).expect("law");
    let top = *ys.iter().max().unwrap_or(&0) as usize;
    let mut counts = vec![0u64; top + 1];
    for &y in &ys {
        counts[y as usize] += 1;
    }
    let tv = total_variation(&counts, &law.pmf_table(top));
    let tail = excursion_sum_tail_check(0.5, 10, 4.0).expect("tail check");
    outcome(
        p_ok && tv < 0.02 && tail.verdict == Verdict::Pass,
        format!(
            "p(1,0) {:.6}, TV {tv:.5} over 1e6 excursions, tail {:.4e} vs e^-5 {:.4e} ({}), {:.1} s",
            h.p,
            tail.estimate.value,
            tail.bound,
            tail.verdict,
            t.elapsed().as_secs_f64()
        ),
    )
}

fn projections() -> Outcome {
    let mut rng = walker_rng(2024, 0);
    let coef = |rng: &mut _| (uniform01(rng) * 7.0).floor() as i64 - 3;
    let (mut cases, mut subspace_bad, mut reduction_bad, mut steps) = (0u32, 0u64, 0u64, 0u64);
    while cases < 1000 {
        let hyper = cases % 2 == 0;
        let d = if hyper {
            2 + (uniform01(&mut rng) * 5.0) as usize
        } else {
            3 + (uniform01(&mut rng) * 4.0) as usize
        };
        let a: Vec<i64> = (0..d).map(|_| coef(&mut rng)).collect();
        let b: Vec<i64> = (0..d).map(|_| coef(&mut rng)).collect();
        let spec = if hyper {
            SubsetSpec::hyperplane(a.clone())
        } else {
            SubsetSpec::codim2(a.clone(), b.clone())
        };
        let Ok(spec) = spec else { continue };
        let law = StepLaw::new(d).unwrap();
        let mut src = law.source(walker_rng(77, cases as u64));
        let mut pos = vec![0i64; d];
        if hyper {
            let proj = Projection1D::from_subset(&spec).unwrap();
            let mut z = 0i64;
            for _ in 0..10_000 {
                let s = src.sample_step();
                pos[s.axis()] += s.sign();
                z += proj.increment(s);
                subspace_bad += (spec.contains_unchecked(&pos) != (z == 0)) as u64;
            }
        } else {
            let proj = Projection2D::from_subset(&spec).unwrap();
            let red = subgroup_basis(&proj.pairs()).unwrap();
            let (mut z, mut w) = ([0i64; 2], [0i64; 2]);
            for _ in 0..10_000 {
                let s = src.sample_step();
                pos[s.axis()] += s.sign();
                let dz = proj.increment(s);
                let dw = red.increment(s);
                z = [z[0] + dz[0], z[1] + dz[1]];
                w = [w[0] + dw[0], w[1] + dw[1]];
                subspace_bad += (spec.contains_unchecked(&pos) != (z == [0, 0])) as u64;
                reduction_bad += ((z == [0, 0]) != (w == [0, 0])) as u64;
                reduction_bad += (red.coordinates_of(z) != Some(w)) as u64;
            }
        }
        steps += 10_000;
        cases += 1;
    }
    outcome(
        subspace_bad == 0 && reduction_bad == 0,
        format!("{cases} cases, {steps} steps: {subspace_bad} subspace violations, {reduction_bad} reduction violations"),
    )
}

fn cauchy() -> Outcome {
    let t = Instant::now();
    let law = CauchyStepLaw;
    let mut mass_err: f64 = 0.0;
    for k in [0u64, 1, 10, 1000, 1_000_000] {
        let body: f64 = (1..=k).map(|j| 2.0 * law.pmf(2 * j as i64)).sum::<f64>() + law.pmf(0);
        let tail = (2.0 / PI) / (2 * k + 1) as f64;
        mass_err = mass_err
            .max((law.tail_beyond(k) - tail).abs())
            .max((body + tail - 1.0).abs());
    }
    let direct = sample_direct(1_000_000, 31, 0);
    let emb = sample_embedded(1_000_000, 32, 1, 1_000_000).expect("embedded");
    let k = 10;
    let (hd, od) = even_histogram(&direct, k);
    let (he, oe) = even_histogram(&emb.steps, k);
    let nd = direct.len() as f64;
    let ne = emb.steps.len() as f64;
    let tv = 0.5
        * (hd
            .iter()
            .zip(&he)
            .map(|(&a, &b)| (a as f64 / nd - b as f64 / ne).abs())
            .sum::<f64>()
            + (od as f64 / nd - oe as f64 / ne).abs());

    let diag = SubsetSpec::line(1, -1).unwrap();
    let mut path_bad = 0u64;
    for id in 0..50 {
        let mut e = EmbeddedCauchy::new(33, id, 100_000_000);
        let mut ledger = LocalTimeLedger::restricted(diag.clone());
        let mut eta = std::collections::HashMap::new();
        for _ in 0..500 {
            match e.next_step_observed(|_, s| {
                ledger.record(&s);
            }) {
                Embedded::Step(_) => *eta.entry(e.v()).or_insert(0u64) += 1,
                Embedded::Truncated => break,
            }
        }
        for (&r, &c) in &eta {
            path_bad += (r % 2 != 0 || ledger.count(&[r / 2, r / 2]) != c) as u64;
        }
        path_bad += (ledger.total_recorded() != e.returns()) as u64;
    }
    outcome(
        tv < 0.01 && mass_err < 1e-12 && path_bad == 0,
        format!(
            "TV {tv:.5} on |u| <= 20 ({} embedded truncated), mass identity error {mass_err:.1e}, {path_bad} pathwise mismatches, {:.1} s",
            emb.truncated,
            t.elapsed().as_secs_f64()
        ),
    )
}

fn envelopes() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;

    let line = ExperimentConfig::parse(
        "theorem = max-line\nd = 2\nsubset = line:1,-1\nschedule = 10000, 100000, 1000000\nwalkers = 100\nseed = 41\n",
    )
    .unwrap();
    let r = run_experiment(&line).unwrap();
    let w = band(&line, BandInputs { lambda: None }, 10_000)
        .unwrap()
        .widened(line.widen);
    let same_band =
        (w.lower - 1.0 / (16.0 * PI)).abs() < 1e-15 && (w.upper - 1.0 / PI).abs() < 1e-15;
    ok &= same_band;
    for rec in &r.records {
        let s = rec.normalized.unwrap();
        let inside = w.contains(s.mean) && w.contains(s.median);
        ok &= inside;
        notes.push(format!(
            "line n={} mean {:.4} median {:.4}",
            rec.n, s.mean, s.median
        ));
    }

    let axis = ExperimentConfig::parse(
        "theorem = max-codim2\nd = 3\nsubset = codim2:1,0,0;0,1,0\nschedule = 10000, 1000000, 100000000\nwalkers = 32\nseed = 42\n",
    )
    .unwrap();
    let r = run_experiment(&axis).unwrap();
    let rep = scaling_report(&axis, &r.oracle, &r.config_hash, &r.records);
    let ratio = rep.mean_ratio.unwrap_or(f64::INFINITY);
    ok &= ratio < 3.0 && rep.decades >= 2.0;
    notes.push(format!("axis mean ratio {ratio:.3}"));

    let mono = ExperimentConfig::parse(
        "theorem = max-ball-line\nd = 2\nsubset = and(ball:rn,line:1,-1)\ncompare = ball:rn\ncompare = line:1,-1\nradius = pow:0.25\nschedule = 10000, 100000, 1000000\nwalkers = 50\nseed = 43\n",
    )
    .unwrap();
    let r = run_experiment(&mono).unwrap();
    let mut violations = 0.0;
    let mut checks = 0;
    for rec in &r.records {
        for v in rec.verdicts.iter().filter(|v| v.name == "monotone") {
            violations += v.value;
            checks += 1;
            ok &= v.verdict == Verdict::Pass;
        }
    }
    ok &= checks == 6;
    notes.push(format!(
        "monotonicity violations {violations} over {checks} checks"
    ));
    outcome(
        ok,
        format!("{}; {:.0} s", notes.join(", "), t.elapsed().as_secs_f64()),
    )
}

fn numeric_json(m: &Manifest) -> serde_json::Value {
    let mut v = serde_json::to_value(m).unwrap();
    v["wall_time_ms"] = 0.into();
    for r in v["records"].as_array_mut().unwrap() {
        r["wall_time_ms"] = 0.into();
    }
    v
}

fn reproducibility() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (label, text) in [
        ("max-ball-line", "theorem = max-ball-line\nd = 2\nsubset = and(ball:rn,line:1,-1)\ncompare = ball:rn\ncompare = line:1,-1\nradius = pow:0.3\nschedule = 1000, 10000, 100000\nwalkers = 24\nseed = 9\n"),
        ("origin-law-2d", "theorem = origin-law-2d\nd = 2\nsubset = ball:0\nschedule = 1000, 10000\nwalkers = 200\nseed = 10\n"),
        ("max-hyperplane", "theorem = max-hyperplane\nd = 3\nsubset = hyp:1,0,0\nschedule = 1000, 10000, 100000\nwalkers = 16\nseed = 11\n"),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let first = run_experiment(&ExperimentConfig::parse(text).unwrap()).unwrap();
        let m1 = write_outputs(&first, &dir.path().join("a"), true).unwrap();
        let stored = Manifest::read(&dir.path().join("a/manifest.json")).unwrap();
        let (again, same) = stored.rerun().unwrap();
        let m2 = write_outputs(&again, &dir.path().join("b"), true).unwrap();
        let files_equal = m1.outputs.iter().all(|f| {
            std::fs::read(dir.path().join("a").join(f)).unwrap() == std::fs::read(dir.path().join("b").join(f)).unwrap()
        });
        let json_equal = numeric_json(&m1) == numeric_json(&m2);
        ok &= same && files_equal && json_equal;
        notes.push(format!("{label}: records {same}, files {files_equal}, manifest {json_equal}"));
    }
    outcome(ok, notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle exactness", oracle_exactness),
        ("escape constants", escape),
        ("planar origin law", planar_origin_law),
        ("geometric origin law d=3", spatial_origin_law),
        ("excursion law", excursion_law),
        ("projection invariants", projections),
        ("cauchy walk", cauchy),
        ("envelopes and monotonicity", envelopes),
        ("reproducibility", reproducibility),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let o = run();
        failed += !o.pass as u32;
        println!(
            "criterion {}: {} [{name}] {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
