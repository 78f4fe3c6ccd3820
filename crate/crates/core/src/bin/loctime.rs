use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use loctime::cauchy::CauchyStepLaw;
use loctime::experiments::persist::{plot_csv, plot_svg, write_outputs, Manifest};
use loctime::experiments::{run_experiment, ExperimentConfig};
use loctime::oracles::bounds::Verdict;
use loctime::oracles::green::green_truncated;
use loctime::oracles::returns::{lattice_limit, EXACT_RATIONAL_MAX, RENEWAL_TOLERANCE};
use loctime::oracles::{
    escape_constants, first_return_law, hit_before_return, potential_kernel, renewal_xi_law,
    ExcursionLaw,
};
use loctime::{LocalTimeLedger, Result, SubsetSpec};

#[derive(Parser)]
#[command(
    name = "loctime",
    version,
    about = "Local times of simple random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one path and dump its local-time ledger as CSV.
    Simulate {
        #[arg(short, long)]
        d: usize,
        #[arg(short, long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        walker: u64,
        /// record only sites in this subset, e.g. `line:1,-1`
        #[arg(long)]
        subset: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Emit an oracle table as CSV.
    Oracle {
        #[command(subcommand)]
        table: OracleTable,
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Run or rerun experiments.
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
    /// Scaling report for one or more manifests.
    Report {
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
        /// write plot.csv and plot.svg next to each manifest
        #[arg(long)]
        plots: bool,
    },
}

#[derive(Subcommand)]
enum OracleTable {
    /// `P_n(0,0)` and first-return probabilities `f_n`.
    Returns {
        #[arg(short, long)]
        d: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// `gamma_d(n)` with the limits `gamma_d`, `lambda_d` in the header.
    Escape {
        #[arg(short, long)]
        d: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Planar truncated Green function `g(n)`.
    Green {
        #[arg(long)]
        n_max: usize,
    },
    /// Potential kernel and hit-before-return probability at planar sites.
    Potential {
        /// sites as `x,y;x,y;...`
        #[arg(long, default_value = "1,0;1,1;2,0")]
        sites: String,
    },
    /// Law of the local time at `x` during one excursion.
    Excursion {
        #[arg(short, long)]
        p: f64,
        #[arg(long, default_value_t = 30)]
        k_max: usize,
    },
    /// Law of the local time at the origin up to time `n`.
    Renewal {
        #[arg(short, long)]
        d: usize,
        #[arg(short, long)]
        n: usize,
    },
    /// Step law of the Cauchy walk on `-2K..=2K`.
    Cauchy {
        #[arg(long, default_value_t = 20)]
        k_max: i64,
    },
}

#[derive(Subcommand)]
enum ExperimentAction {
    /// Run a config file, or rerun a manifest.json and compare.
    Run {
        config: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
    },
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn provenance(w: &mut dyn Write, method: &str, tolerance: &str, truncation: &str) -> Result<()> {
    writeln!(w, "# method: {method}")?;
    writeln!(w, "# tolerance: {tolerance}")?;
    writeln!(w, "# truncation: {truncation}")?;
    Ok(())
}

fn parse_sites(text: &str) -> Result<Vec<[i64; 2]>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let v: Vec<i64> = s
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| loctime::Error::Parse(format!("site `{s}`: {e}")))?;
            match v[..] {
                [x, y] => Ok([x, y]),
                _ => Err(loctime::Error::Parse(format!("site `{s}` is not planar"))),
            }
        })
        .collect()
}

fn oracle(table: &OracleTable, out: &Option<PathBuf>) -> Result<()> {
    let mut w = sink(out)?;
    match *table {
        OracleTable::Returns { d, n_max } => {
            let law = first_return_law(d, n_max)?;
            provenance(
                &mut *w,
                &format!(
                    "lattice convolution for n <= {}, Fourier quadrature beyond; renewal inversion exact for n <= {EXACT_RATIONAL_MAX}",
                    lattice_limit(d)
                ),
                &format!("renewal residual {:.3e} (limit {RENEWAL_TOLERANCE:e})", law.renewal_residual()),
                &format!("n <= {n_max}"),
            )?;
            writeln!(w, "n,p_n,f_n")?;
            for n in 0..=n_max {
                writeln!(w, "{n},{:?},{:?}", law.p[n], law.f[n])?;
            }
        }
        OracleTable::Escape { d, n_max } => {
            let e = escape_constants(d, n_max)?;
            provenance(
                &mut *w,
                "Green value by Bessel-product integral; gamma_d(n) from the first-return law",
                "integral 1e-12",
                &format!("n <= {n_max}"),
            )?;
            writeln!(w, "# gamma_d: {:?}", e.gamma)?;
            writeln!(w, "# lambda_d: {:?}", e.lambda)?;
            writeln!(w, "n,gamma_n")?;
            for (n, g) in e.gamma_n.iter().enumerate() {
                writeln!(w, "{n},{g:?}")?;
            }
        }
        OracleTable::Green { n_max } => {
            let g = green_truncated(n_max)?;
            provenance(
                &mut *w,
                "partial sums of P_k(0,0)",
                "return probabilities 1e-10",
                &format!("n <= {n_max}"),
            )?;
            writeln!(w, "n,g_n,g_over_log_n")?;
            for (n, v) in g.iter().enumerate() {
                let ratio = if n >= 2 {
                    format!("{:?}", v / (n as f64).ln())
                } else {
                    String::new()
                };
                writeln!(w, "{n},{v:?},{ratio}")?;
            }
        }
        OracleTable::Potential { ref sites } => {
            let sites = parse_sites(sites)?;
            provenance(
                &mut *w,
                "a(x) by one-dimensional Fourier integral; p(x) by box solves extrapolated in the radius",
                "a: 1e-12, p: extrapolation spread reported",
                "box radii doubling from 2|x|+1",
            )?;
            writeln!(w, "x,y,a,p,p_spread,inverse_2a")?;
            for x in sites {
                let a = potential_kernel(x)?;
                if x == [0, 0] {
                    writeln!(w, "0,0,{a:?},,,")?;
                    continue;
                }
                let h = hit_before_return(x)?;
                writeln!(
                    w,
                    "{},{},{a:?},{:?},{:e},{:?}",
                    x[0],
                    x[1],
                    h.p,
                    h.spread,
                    0.5 / a
                )?;
            }
        }
        OracleTable::Excursion { p, k_max } => {
            let law = ExcursionLaw::new(p)?;
            provenance(
                &mut *w,
                "closed form",
                "exact",
                &format!("k <= {k_max}, survival column carries the rest"),
            )?;
            writeln!(w, "k,pmf,survival")?;
            for k in 0..=k_max as u64 {
                writeln!(w, "{k},{:?},{:?}", law.pmf(k), law.survival(k))?;
            }
        }
        OracleTable::Renewal { d, n } => {
            let pmf = renewal_xi_law(d, n)?;
            provenance(
                &mut *w,
                "convolution powers of the first-return law",
                "1e-12",
                &format!("n = {n}"),
            )?;
            writeln!(w, "m,pmf")?;
            for (m, v) in pmf.iter().enumerate() {
                writeln!(w, "{m},{v:?}")?;
            }
        }
        OracleTable::Cauchy { k_max } => {
            let law = CauchyStepLaw;
            provenance(
                &mut *w,
                "closed form",
                "exact",
                &format!("|u| <= {}", 2 * k_max),
            )?;
            writeln!(w, "# tail_beyond: {:?}", law.tail_beyond(k_max as u64))?;
            writeln!(w, "u,pmf")?;
            for k in -k_max..=k_max {
                writeln!(w, "{},{:?}", 2 * k, law.pmf(2 * k))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn simulate(
    d: usize,
    n: u64,
    seed: u64,
    walker: u64,
    subset: &Option<String>,
    out: &Option<PathBuf>,
) -> Result<()> {
    let mut ledger = match subset {
        Some(s) => LocalTimeLedger::restricted(SubsetSpec::parse(s)?),
        None => {
            if n > loctime::local_time::UNRESTRICTED_MAX_STEPS {
                return Err(loctime::Error::MemoryPolicy(format!(
                    "unrestricted ledgers are limited to {} steps; pass --subset",
                    loctime::local_time::UNRESTRICTED_MAX_STEPS
                )));
            }
            LocalTimeLedger::new()
        }
    };
    let end = loctime::walk::run_path(d, seed, walker, n, |_, s| {
        ledger.record(s.coords());
    })?;
    match ledger.max_local_time() {
        Some((site, c)) => eprintln!(
            "final site {end}, max local time {c} at {site}, {} sites",
            ledger.distinct_sites()
        ),
        None => eprintln!("final site {end}, no recorded visits"),
    }
    let mut w = sink(out)?;
    ledger.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn experiment_run(path: &Path, out: &Path, svg: bool) -> Result<bool> {
    let text = fs::read_to_string(path)?;
    let rerun = path.extension().is_some_and(|e| e == "json");
    let (result, same) = if rerun {
        let m: Manifest = serde_json::from_str(&text)?;
        let (r, same) = m.rerun()?;
        (r, Some(same))
    } else {
        (run_experiment(&ExperimentConfig::parse(&text)?)?, None)
    };
    let manifest = write_outputs(&result, out, svg)?;
    let report = manifest.report()?;
    print!("{}", report.to_text());
    eprintln!(
        "wrote {} files to {}",
        manifest.outputs.len() + 1,
        out.display()
    );
    if let Some(same) = same {
        println!("rerun identical: {same}");
        return Ok(same);
    }
    Ok(true)
}

fn report(paths: &[PathBuf], plots: bool) -> Result<bool> {
    let mut ok = true;
    for p in paths {
        let m = Manifest::read(p)?;
        let r = m.report()?;
        print!("{}", r.to_text());
        ok &= r.overall() != Verdict::Fail;
        if plots {
            let dir = p.parent().unwrap_or(Path::new("."));
            fs::write(dir.join("plot.csv"), plot_csv(&r))?;
            fs::write(dir.join("plot.svg"), plot_svg(&r))?;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate {
            d,
            n,
            seed,
            walker,
            subset,
            out,
        } => simulate(*d, *n, *seed, *walker, subset, out).map(|_| true),
        Command::Oracle { table, out } => oracle(table, out).map(|_| true),
        Command::Experiment {
            action: ExperimentAction::Run { config, out, svg },
        } => experiment_run(config, out, *svg),
        Command::Report { manifests, plots } => report(manifests, *plots),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // reader went away, e.g. `| head`
        Err(loctime::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
