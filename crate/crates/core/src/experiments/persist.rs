//! CSV records, JSON manifests and plot files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::report::{scaling_report, ScalingReport};
use super::runner::{
    run_experiment, sha256_hex, EstimateRecord, ExperimentResult, OracleConstants,
};
use crate::error::{Error, Result};

pub const MANIFEST_FORMAT: &str = "loctime-manifest/1";

/// Everything needed to reproduce and re-report a run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub crate_version: String,
    pub config_text: String,
    /// sha256 of the canonical config text
    pub config_hash: String,
    /// git-style object id: sha256 of `blob <len>\0<text>`
    pub config_blob_id: String,
    pub oracle: OracleConstants,
    pub records: Vec<EstimateRecord>,
    pub outputs: Vec<String>,
    pub wall_time_ms: f64,
}

pub fn blob_id(text: &str) -> String {
    let mut bytes = format!("blob {}\0", text.len()).into_bytes();
    bytes.extend_from_slice(text.as_bytes());
    sha256_hex(&bytes)
}

impl Manifest {
    pub fn from_result(result: &ExperimentResult) -> Manifest {
        Manifest {
            format: MANIFEST_FORMAT.into(),
            crate_version: env!("CARGO_PKG_VERSION").into(),
            config_text: result.config_text.clone(),
            config_hash: result.config_hash.clone(),
            config_blob_id: blob_id(&result.config_text),
            oracle: result.oracle,
            records: result.records.clone(),
            outputs: Vec::new(),
            wall_time_ms: result.records.first().map_or(0.0, |r| r.wall_time_ms),
        }
    }

    /// Parsed config, after checking it against the stored hash.
    pub fn config(&self) -> Result<ExperimentConfig> {
        if self.format != MANIFEST_FORMAT {
            return Err(Error::Parse(format!(
                "unknown manifest format `{}`",
                self.format
            )));
        }
        let cfg = ExperimentConfig::parse(&self.config_text)?;
        let hash = super::runner::config_hash(&cfg);
        if hash != self.config_hash {
            return Err(Error::Parse(format!(
                "config hash mismatch: stored {}, recomputed {hash}",
                self.config_hash
            )));
        }
        Ok(cfg)
    }

    pub fn report(&self) -> Result<ScalingReport> {
        Ok(scaling_report(
            &self.config()?,
            &self.oracle,
            &self.config_hash,
            &self.records,
        ))
    }

    pub fn read(path: &Path) -> Result<Manifest> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        writeln!(f)?;
        Ok(())
    }

    /// Run the stored config again; true when every number agrees.
    pub fn rerun(&self) -> Result<(ExperimentResult, bool)> {
        let result = run_experiment(&self.config()?)?;
        let same = result.records.len() == self.records.len()
            && result
                .records
                .iter()
                .zip(&self.records)
                .all(|(a, b)| a.same_numbers(b));
        Ok((result, same))
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:?}"))
}

/// One row per walker, schedule point and tracked subset.
pub fn write_records_csv<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    writeln!(
        out,
        "config_hash,n,seed,r_n,role,subset,walker,value,normalized"
    )?;
    for r in &result.records {
        let series = std::iter::once(("primary".to_string(), &r.subset, &r.values)).chain(
            r.compare
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("compare{}", i + 1), &c.subset, &c.values)),
        );
        for (role, subset, values) in series {
            for (w, v) in values.iter().enumerate() {
                let z = r.normalizer.map(|z| *v as f64 / z);
                writeln!(
                    out,
                    "{},{},{},{},{role},\"{subset}\",{w},{v},{}",
                    r.config_hash,
                    r.n,
                    r.seed,
                    opt(r.r_n),
                    opt(z)
                )?;
            }
        }
    }
    Ok(())
}

/// One row per schedule point with the summary and verdicts.
pub fn write_summary_csv<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    writeln!(out, "n,r_n,subset,normalizer,mean,median,min,max,verdicts")?;
    for r in &result.records {
        let s = r.normalized;
        let verdicts: Vec<String> = r
            .verdicts
            .iter()
            .map(|v| format!("{}={}", v.name, v.verdict))
            .collect();
        writeln!(
            out,
            "{},{},\"{}\",{},{},{},{},{},{}",
            r.n,
            opt(r.r_n),
            r.subset,
            opt(r.normalizer),
            opt(s.map(|s| s.mean)),
            opt(s.map(|s| s.median)),
            opt(s.map(|s| s.min)),
            opt(s.map(|s| s.max)),
            verdicts.join(";")
        )?;
    }
    Ok(())
}

pub fn plot_csv(report: &ScalingReport) -> String {
    let mut s = String::from("n,mean,median,min,max,lower,upper\n");
    for p in &report.points {
        let _ = writeln!(
            s,
            "{},{:?},{:?},{:?},{:?},{},{}",
            p.n,
            p.mean,
            p.median,
            p.min,
            p.max,
            opt(p.lower),
            opt(p.upper)
        );
    }
    s
}

/// Normalised statistic against `log10 n`, with the widened band dashed.
pub fn plot_svg(report: &ScalingReport) -> String {
    let (w, h, m) = (640.0, 400.0, 50.0);
    let pts = &report.points;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = writeln!(s, "<text x=\"{m}\" y=\"20\">{}</text>", report.theorem);
    let xs: Vec<f64> = pts.iter().map(|p| (p.n.max(1) as f64).log10()).collect();
    let mut ys: Vec<f64> = pts.iter().flat_map(|p| [p.min, p.max]).collect();
    ys.extend(pts.iter().filter_map(|p| p.lower));
    ys.extend(pts.iter().filter_map(|p| p.upper));
    if xs.is_empty() {
        s += "</svg>\n";
        return s;
    }
    let (x0, mut x1) = (xs[0], xs[xs.len() - 1]);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let y0 = ys.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
    let mut y1 = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let _ = writeln!(
        s,
        "<rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>",
        w - 2.0 * m,
        h - 2.0 * m
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\">log10 n</text>",
        w / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        s,
        "<text x=\"4\" y=\"{}\">{y1:.3}</text><text x=\"4\" y=\"{}\">{y0:.3}</text>",
        m + 4.0,
        h - m
    );
    let line = |get: &dyn Fn(&super::report::ScalePoint) -> Option<f64>, style: &str| {
        let coords: Vec<String> = pts
            .iter()
            .zip(&xs)
            .filter_map(|(p, &x)| get(p).map(|y| format!("{:.1},{:.1}", px(x), py(y))))
            .collect();
        if coords.is_empty() {
            String::new()
        } else {
            format!(
                "<polyline fill=\"none\" {style} points=\"{}\"/>\n",
                coords.join(" ")
            )
        }
    };
    s += &line(&|p| p.lower, "stroke=\"#c33\" stroke-dasharray=\"6 4\"");
    s += &line(&|p| p.upper, "stroke=\"#c33\" stroke-dasharray=\"6 4\"");
    s += &line(&|p| Some(p.min), "stroke=\"#99b\"");
    s += &line(&|p| Some(p.max), "stroke=\"#99b\"");
    s += &line(&|p| Some(p.mean), "stroke=\"#124\" stroke-width=\"2\"");
    for (p, &x) in pts.iter().zip(&xs) {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"#124\"/>",
            px(x),
            py(p.median)
        );
    }
    s += "</svg>\n";
    s
}

/// Write records, summary, plot data and the manifest into `dir`.
pub fn write_outputs(result: &ExperimentResult, dir: &Path, svg: bool) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut manifest = Manifest::from_result(result);
    let mut written: Vec<PathBuf> = Vec::new();
    let path = dir.join("records.csv");
    write_records_csv(result, fs::File::create(&path)?)?;
    written.push(path);
    let path = dir.join("summary.csv");
    write_summary_csv(result, fs::File::create(&path)?)?;
    written.push(path);
    let report = scaling_report(
        &result.config,
        &result.oracle,
        &result.config_hash,
        &result.records,
    );
    if !report.points.is_empty() {
        let path = dir.join("plot.csv");
        fs::write(&path, plot_csv(&report))?;
        written.push(path);
        if svg {
            let path = dir.join("plot.svg");
            fs::write(&path, plot_svg(&report))?;
            written.push(path);
        }
    }
    manifest.outputs = written
        .iter()
        .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
        .collect();
    manifest.write(&dir.join("manifest.json"))?;
    Ok(manifest)
}
