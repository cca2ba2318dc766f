//! Batch front-end behind the `bogoflow` binary.
//!
//! Settings resolve in three layers: a `--config` key=value file, then
//! command-line flags, then `BOGOFLOW_OUT` for the output directory.
//!
//! Exit codes: 0 success, 2 solved outside the proven regime (solve mode),
//! 1 configuration or hard numerical error.

pub mod config;
pub mod output;
pub mod point;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Parser;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fmt::{num, opt};
use crate::groundstate::expand_ground_state;
use crate::oracle::{build_sector_hamiltonian, lowest_eigenpair};
use crate::sequences::bound_sequences;
pub use config::{GridPoint, Mode, RunConfig, OUT_ENV};
use output::{OutputDir, PointStatusEntry};
use point::{evaluate, PointRecord, PointStatus};

#[derive(Debug, Parser)]
#[command(
    name = "bogoflow",
    version,
    about = "Ground-state energy of the three-mode Bogoliubov Hamiltonian by a scalar Feshbach-Schur flow"
)]
pub struct Cli {
    /// solve | sweep | verify | sequences (same as --mode).
    #[arg(value_name = "MODE")]
    pub mode_arg: Option<String>,
    #[arg(long)]
    pub mode: Option<String>,
    /// Flat key=value file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Particle number(s): list `a,b,c` or range `start:stop:factor`.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub delta0: Option<String>,
    #[arg(long)]
    pub nu: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// Window parameter δ (default 1 + √ε).
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long = "c-gamma")]
    pub c_gamma: Option<String>,
    #[arg(long = "k-gamma")]
    pub k_gamma: Option<String>,
    /// Root bracket width, in units of φ.
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// csv, json, or csv,json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    /// Verify mode: comma list of suites or groups.
    #[arg(long)]
    pub only: Option<String>,
    /// Verify mode: relative perturbation of t_0 (negative control).
    #[arg(long)]
    pub perturb: Option<String>,
    /// Add a wall_ms column to results.csv (breaks byte-reproducibility).
    #[arg(long)]
    pub timing: bool,
}

impl Cli {
    /// Merges the config file (if any) with flag overrides.
    pub fn resolve(&self, out_env: Option<&str>) -> Result<RunConfig> {
        let mut pairs = match &self.config {
            Some(path) => config::read_config_file(path)?,
            None => BTreeMap::new(),
        };
        if let (Some(a), Some(b)) = (&self.mode_arg, &self.mode) {
            if a != b {
                return Err(Error::config(
                    "mode",
                    format!("positional `{a}` conflicts with --mode {b}"),
                ));
            }
        }
        let flags = [
            ("mode", self.mode.as_ref().or(self.mode_arg.as_ref())),
            ("n", self.n.as_ref()),
            ("epsilon", self.epsilon.as_ref()),
            ("phi", self.phi.as_ref()),
            ("delta0", self.delta0.as_ref()),
            ("nu", self.nu.as_ref()),
            ("mu", self.mu.as_ref()),
            ("gamma", self.gamma.as_ref()),
            ("beta", self.beta.as_ref()),
            ("delta", self.delta.as_ref()),
            ("theta", self.theta.as_ref()),
            ("c_gamma", self.c_gamma.as_ref()),
            ("k_gamma", self.k_gamma.as_ref()),
            ("tol", self.tol.as_ref()),
            ("out", self.out.as_ref()),
            ("format", self.format.as_ref()),
            ("workers", self.workers.as_ref()),
            ("only", self.only.as_ref()),
            ("perturb", self.perturb.as_ref()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                pairs.insert(k.to_string(), v.clone());
            }
        }
        if self.timing {
            pairs.insert("timing".into(), "true".into());
        }
        RunConfig::from_pairs(&pairs, out_env)
    }
}

/// Parses arguments, runs the selected mode and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out_env = std::env::var(OUT_ENV).ok().filter(|s| !s.is_empty());
    let outcome = cli.resolve(out_env.as_deref()).and_then(|cfg| dispatch(&cfg));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bogoflow: error: {e}");
            1
        }
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<i32> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    pool.install(|| match cfg.mode {
        Mode::Solve => run_solve(cfg),
        Mode::Sweep => run_sweep(cfg),
        Mode::Verify => run_verify(cfg),
        Mode::Sequences => run_sequences(cfg),
    })
}

/// results.csv body; identical configs give identical bytes.
pub fn results_csv(records: &[PointRecord], timing: bool) -> String {
    let mut s = String::from("n,epsilon,z_star,e_bog,abs_err,sector_gap,overlap,assumptions_ok,status");
    if timing {
        s.push_str(",wall_ms");
    }
    s.push('\n');
    for r in records {
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.params.n,
            num(r.params.epsilon),
            opt(r.z_star),
            num(r.e_bog),
            opt(r.abs_err),
            opt(r.gap.map(|g| g.sector_gap)),
            opt(r.overlap),
            r.assumptions_ok(),
            r.status.as_str()
        );
        if timing {
            let _ = write!(s, ",{:.3}", r.wall_ms);
        }
        s.push('\n');
    }
    s
}

fn evaluate_all(cfg: &RunConfig) -> Vec<PointRecord> {
    cfg.points().par_iter().map(|p| evaluate(p, &cfg.flow)).collect()
}

fn write_records(dir: &mut OutputDir, cfg: &RunConfig, records: &[PointRecord]) -> Result<()> {
    if cfg.formats.csv {
        dir.write("results.csv", results_csv(records, cfg.timing).as_bytes())?;
    }
    if cfg.formats.json {
        for r in records {
            dir.write_json(&format!("point-{}.json", r.index), r)?;
        }
    }
    Ok(())
}

fn status_entries(records: &[PointRecord]) -> Vec<PointStatusEntry> {
    records
        .iter()
        .map(|r| PointStatusEntry {
            index: r.index,
            status: r.status.as_str().to_string(),
            wall_ms: r.wall_ms,
        })
        .collect()
}

fn run_solve(cfg: &RunConfig) -> Result<i32> {
    let records = evaluate_all(cfg);
    let r = &records[0];
    let mut dir = OutputDir::create(&cfg.out)?;
    write_records(&mut dir, cfg, &records)?;
    if r.status.solved() && cfg.formats.csv {
        // Full vector export next to the record.
        let p = cfg.points()[0].params()?;
        let tri = build_sector_hamiltonian(p);
        let oracle = lowest_eigenpair(&tri, f64::EPSILON)?;
        let psi = expand_ground_state(&p, &cfg.flow, r.z_star.unwrap_or(0.0), None)?;
        let mut buf = Vec::new();
        psi.write_csv(&oracle.vector, &mut buf)
            .map_err(|e| Error::io(dir.path(), e))?;
        dir.write("groundstate-0.csv", &buf)?;
    }
    dir.finish(cfg, status_entries(&records))?;

    match r.status {
        PointStatus::Error => {
            eprintln!("bogoflow: error: {}", r.error.as_deref().unwrap_or("unknown failure"));
            Ok(1)
        }
        status => {
            println!(
                "z*={} E^Bog={} |z*-E^Bog|={} gap={} overlap={}",
                opt(r.z_star),
                num(r.e_bog),
                opt(r.abs_err),
                opt(r.gap.map(|g| g.sector_gap)),
                opt(r.overlap)
            );
            if status == PointStatus::OutsideRegime {
                let a = r.assumptions.expect("assumptions are set before solving");
                eprintln!(
                    "bogoflow: outside the proven regime: 1/N <= eps^nu {}, gap condition {}, 1/N^mu <= eps^((1+theta)/2) {}",
                    pass_word(a.nu.pass),
                    pass_word(a.mu_gap.pass),
                    pass_word(a.mu_eps.pass)
                );
                Ok(2)
            } else {
                Ok(0)
            }
        }
    }
}

fn pass_word(p: bool) -> &'static str {
    if p {
        "holds"
    } else {
        "fails"
    }
}

fn run_sweep(cfg: &RunConfig) -> Result<i32> {
    let records = evaluate_all(cfg);
    let mut dir = OutputDir::create(&cfg.out)?;
    write_records(&mut dir, cfg, &records)?;
    let manifest = dir.finish(cfg, status_entries(&records))?;
    let solved = records.iter().filter(|r| r.status.solved()).count();
    for r in records.iter().filter(|r| !r.status.solved()) {
        eprintln!(
            "bogoflow: point {} (n={}, eps={}): {}",
            r.index,
            r.params.n,
            num(r.params.epsilon),
            r.error.as_deref().unwrap_or("failed")
        );
    }
    println!(
        "{solved}/{} points solved; manifest {}",
        records.len(),
        manifest.display()
    );
    Ok(if solved > 0 { 0 } else { 1 })
}

fn run_verify(cfg: &RunConfig) -> Result<i32> {
    let results = verify::run_suites(cfg)?;
    let mut dir = OutputDir::create(&cfg.out)?;
    dir.write_json("verify.json", &results)?;
    dir.finish(cfg, Vec::new())?;
    for r in &results {
        println!(
            "{} {:<20} checked={:<6} worst={:e} tol={:e}  {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.checked,
            r.worst,
            r.tolerance,
            r.detail
        );
    }
    Ok(if results.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn run_sequences(cfg: &RunConfig) -> Result<i32> {
    let points = cfg.points();
    let tables: Vec<_> = points
        .par_iter()
        .map(|p| p.params().map(|params| (params, bound_sequences(&params, &cfg.flow))))
        .collect::<Result<_>>()?;
    let mut dir = OutputDir::create(&cfg.out)?;
    let mut summary = String::from(
        "index,n,epsilon,x_checked,x_violations,x_min_margin,xtilde_checked,xtilde_violations,xtilde_min_margin,xtilde_positive\n",
    );
    for (p, (_, seq)) in points.iter().zip(&tables) {
        let mut buf = Vec::new();
        seq.x.write_csv(&mut buf).map_err(|e| Error::io(dir.path(), e))?;
        dir.write(&format!("x-{}.csv", p.index), &buf)?;
        buf.clear();
        seq.xtilde.write_csv(&mut buf).map_err(|e| Error::io(dir.path(), e))?;
        dir.write(&format!("xtilde-{}.csv", p.index), &buf)?;
        let mut y = String::from("l,value\n");
        for (l, v) in seq.y_closed.iter().enumerate() {
            let _ = writeln!(y, "{},{}", l + 1, num(*v));
        }
        dir.write(&format!("y-closed-{}.csv", p.index), y.as_bytes())?;
        let (xs, ts) = (seq.x.summary(), seq.xtilde.summary());
        let _ = writeln!(
            summary,
            "{},{},{},{},{},{},{},{},{},{}",
            p.index,
            p.n,
            num(p.epsilon),
            xs.checked,
            xs.violations,
            num(xs.min_margin),
            ts.checked,
            ts.violations,
            num(ts.min_margin),
            ts.positive
        );
    }
    dir.write("sequences.csv", summary.as_bytes())?;
    dir.finish(cfg, Vec::new())?;
    println!("{} sequence sets written to {}", points.len(), cfg.out.display());
    Ok(0)
}
