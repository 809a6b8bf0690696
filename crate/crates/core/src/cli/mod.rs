//! Command-line front end: reads a JSON run configuration, dispatches to the
//! library and writes CSV tables, JSON reports and two-column plot files.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or configuration
//! error, 3 numerical divergence.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{MeasureConfig, RegionPolicy, RunConfig};

use crate::grid::{discretization_error, discretize, restricted_discretization_error, GridLayout};
use crate::harness::bounds::{example_bound_terms, total_bound, BoundTerm};
use crate::harness::conditions::check_conditions;
use crate::harness::gof::{count_law_check, sample_count_vectors, GofReport};
use crate::harness::lemma::{lemma_checks, LemmaReport};
use crate::harness::sweep::{default_sweep, m3_sweep, SweepResult};
use crate::measures::{Estimate, MeasureSpec};
use crate::simulate::{JumpSampler, RandomStream};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "JUMPCOUNT_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "jumpcount",
    version,
    about = "Grid discretization and count experiments for Lévy measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override the master seed.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", env = OUT_ENV)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Override the quadrature tolerance.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Grid table, discretized ratios and the discretization error per m.
    Discretize,
    /// Discretization error, 2 sinh bound and closed-form envelopes per m.
    Bound,
    /// Simulated paths on the configured region.
    Simulate,
    /// Count-vector samples per m.
    Counts,
    /// Monte-Carlo likelihood checks and count-law tests per m.
    Verify,
    /// Worst-case discretization error over the class parameter grid.
    Sweep,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Discretize => "discretize",
            Command::Bound => "bound",
            Command::Simulate => "simulate",
            Command::Counts => "counts",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergent { .. } | Error::ConditionViolated { .. } => EXIT_DIVERGENCE,
        Error::SingularRatio { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(passed) => {
            if passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("jumpcount {}: error: {e}", cli.command.name());
            exit_code(&e)
        }
    }
}

/// Loads and resolves the configuration with command-line overrides applied.
pub fn load_config(cli: &Cli) -> Result<RunConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("missing --config PATH".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    cfg.validate()?;
    Ok(cfg.resolve())
}

fn output_dir(cli: &Cli, cfg: &RunConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

/// Returns whether every check of the command passed.
pub fn execute(cli: &Cli) -> Result<bool> {
    let cfg = load_config(cli)?;
    let out = Output::new(output_dir(cli, &cfg))?;
    let threads = cli.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {threads} threads: {e}")))?;
    pool.install(|| {
        out.json("config.json", &cfg)?;
        let spec = cfg.measure.build()?;
        match cli.command {
            Command::Discretize => cmd_discretize(&cfg, &spec, &out),
            Command::Bound => cmd_bound(&cfg, &spec, &out),
            Command::Simulate => cmd_simulate(&cfg, &spec, &out),
            Command::Counts => cmd_counts(&cfg, &spec, &out),
            Command::Verify => cmd_verify(&cfg, &spec, &out),
            Command::Sweep => cmd_sweep(&cfg, &spec, &out),
        }
    })
}

struct Output {
    dir: PathBuf,
}

impl Output {
    fn new(dir: PathBuf) -> Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Output { dir })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn text(&self, name: &str, content: &str) -> Result<()> {
        let p = self.path(name);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(p, content)?;
        Ok(())
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        self.text(name, &s)
    }

    fn report<T: Serialize>(&self, name: &str, command: &str, cfg: &RunConfig, results: &T) -> Result<()> {
        #[derive(Serialize)]
        struct Report<'a, T> {
            command: &'a str,
            config: &'a RunConfig,
            results: &'a T,
        }
        self.json(
            name,
            &Report {
                command,
                config: cfg,
                results,
            },
        )
    }

    /// Two-column plot file.
    fn plot(&self, name: &str, xlabel: &str, ylabel: &str, points: &[(f64, f64)]) -> Result<()> {
        let mut s = format!("# {xlabel} {ylabel}\n");
        for (x, y) in points {
            s.push_str(&format!("{x} {y}\n"));
        }
        self.text(name, &s)
    }

    fn dir(&self) -> &Path {
        &self.dir
    }
}

/// Quotes a CSV field when it contains a comma or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

#[derive(Serialize)]
struct DiscretizeRecord {
    m: u32,
    identity: Estimate,
    finite_bins: Estimate,
    tails: Estimate,
    total: Estimate,
}

fn cmd_discretize(cfg: &RunConfig, spec: &MeasureSpec, out: &Output) -> Result<bool> {
    let mut records = Vec::new();
    let mut summary = String::from("m,d_m,error,identity,finite_bins,tails\n");
    for m in cfg.m_values() {
        let disc = discretize(spec, m, cfg.tol)?;
        let err = discretization_error(spec, &disc, cfg.tol)?;
        let mut table = String::from("index,tag,lo,hi,dominating_mass,nu_mass,ratio,abs_error\n");
        let mut plot = Vec::new();
        for (i, bin) in disc.layout.bins().iter().enumerate() {
            table.push_str(&format!(
                "{i},{},{},{},{},{},{},{}\n",
                csv_field(&bin.tag.to_string()),
                bin.interval.lo,
                bin.interval.hi,
                disc.dominating_mass[i].value,
                disc.nu_mass[i].value,
                disc.ratios[i],
                err.per_bin[i].value
            ));
            if bin.interval.is_bounded() {
                plot.push((0.5 * (bin.interval.lo + bin.interval.hi), disc.ratios[i]));
            }
        }
        out.text(&format!("grid_m{m}.csv"), &table)?;
        out.plot(&format!("ratio_m{m}.dat"), "bin_midpoint", "ratio", &plot)?;
        summary.push_str(&format!(
            "{m},{},{},{},{},{}\n",
            err.total.value, err.total.error, err.identity.value, err.finite_bins.value, err.tails.value
        ));
        println!("m={m}: {} bins, D_m = {:.6e}", disc.layout.len(), err.total.value);
        records.push(DiscretizeRecord {
            m,
            identity: err.identity,
            finite_bins: err.finite_bins,
            tails: err.tails,
            total: err.total,
        });
    }
    out.text("discretize.csv", &summary)?;
    out.report("discretize.json", "discretize", cfg, &records)?;
    Ok(true)
}

#[derive(Serialize)]
struct BoundRecord {
    m: u32,
    d_m: Estimate,
    sinh_bound: f64,
    envelope: Option<f64>,
    envelope_proven: bool,
    terms: Vec<BoundTerm>,
}

fn region_error(spec: &MeasureSpec, cfg: &RunConfig, m: u32) -> Result<Estimate> {
    let disc = discretize(spec, m, cfg.tol)?;
    match cfg.region {
        RegionPolicy::FullLine => Ok(discretization_error(spec, &disc, cfg.tol)?.total),
        _ => restricted_discretization_error(spec, &disc, &cfg.region.region(m)?, cfg.tol),
    }
}

fn cmd_bound(cfg: &RunConfig, spec: &MeasureSpec, out: &Output) -> Result<bool> {
    let m_values = cfg.m_values();
    let conditions = check_conditions(spec, &m_values, cfg.tol)?;
    let mut records = Vec::new();
    let mut table = String::from("m,d_m,error,sinh_bound,envelope,envelope_proven\n");
    for &m in &m_values {
        let d_m = region_error(spec, cfg, m)?;
        let terms = match spec.class {
            crate::measures::ClassTag::Custom => Vec::new(),
            _ => example_bound_terms(spec, m, cfg.tol)?,
        };
        let (envelope, envelope_proven) = if terms.is_empty() {
            (None, false)
        } else {
            let (t, p) = total_bound(&terms);
            (Some(t), p)
        };
        let sinh_bound = 2.0 * (cfg.horizon * d_m.value).sinh();
        table.push_str(&format!(
            "{m},{},{},{sinh_bound},{},{envelope_proven}\n",
            d_m.value,
            d_m.error,
            opt(envelope)
        ));
        println!("m={m}: D_m = {:.6e}, 2 sinh(T D_m) = {sinh_bound:.6e}", d_m.value);
        records.push(BoundRecord {
            m,
            d_m,
            sinh_bound,
            envelope,
            envelope_proven,
            terms,
        });
    }
    out.text("bound.csv", &table)?;
    out.plot(
        "bound.dat",
        "m",
        "d_m",
        &records.iter().map(|r| (r.m as f64, r.d_m.value)).collect::<Vec<_>>(),
    )?;
    out.plot(
        "sinh_bound.dat",
        "m",
        "sinh_bound",
        &records.iter().map(|r| (r.m as f64, r.sinh_bound)).collect::<Vec<_>>(),
    )?;
    #[derive(Serialize)]
    struct BoundReport<'a> {
        conditions: &'a crate::harness::ConditionReport,
        rows: &'a [BoundRecord],
    }
    out.report(
        "bound.json",
        "bound",
        cfg,
        &BoundReport {
            conditions: &conditions,
            rows: &records,
        },
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct PathSummary {
    index: usize,
    jumps: usize,
    terminal_value: f64,
}

fn cmd_simulate(cfg: &RunConfig, spec: &MeasureSpec, out: &Output) -> Result<bool> {
    let m = cfg.m_values()[0];
    let region = cfg.region.region(m)?;
    let sampler = JumpSampler::new(spec, &region, cfg.resolution)?;
    let paths = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|i| sampler.simulate_path(cfg.horizon, cfg.drift, RandomStream::new(cfg.seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = String::from("index,jumps,terminal_value\n");
    let mut records = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        let mut buf = Vec::new();
        p.write_table(&mut buf)?;
        out.text(&format!("paths/path_{i:05}.csv"), &String::from_utf8_lossy(&buf))?;
        let terminal = p.value_at(p.horizon);
        summary.push_str(&format!("{i},{},{terminal}\n", p.jumps().len()));
        records.push(PathSummary {
            index: i,
            jumps: p.jumps().len(),
            terminal_value: terminal,
        });
    }
    if let Some(first) = paths.first() {
        let mut pts = vec![(0.0, 0.0)];
        for &(t, _) in first.jumps() {
            pts.push((t, first.value_at(t.next_down())));
            pts.push((t, first.value_at(t)));
        }
        pts.push((first.horizon, first.value_at(first.horizon)));
        out.plot("path_00000.dat", "t", "x_t", &pts)?;
    }
    out.text("simulate.csv", &summary)?;
    #[derive(Serialize)]
    struct SimReport<'a> {
        region: &'a crate::interval::Region,
        intensity: f64,
        paths: &'a [PathSummary],
    }
    out.report(
        "simulate.json",
        "simulate",
        cfg,
        &SimReport {
            region: &region,
            intensity: sampler.intensity(),
            paths: &records,
        },
    )?;
    println!(
        "{} paths, intensity {:.6e}, written to {}",
        paths.len(),
        sampler.intensity(),
        out.dir().display()
    );
    Ok(true)
}

#[derive(Serialize)]
struct CountsRecord {
    m: u32,
    replications: usize,
    expected_means: Vec<f64>,
    empirical_means: Vec<f64>,
}

fn cmd_counts(cfg: &RunConfig, spec: &MeasureSpec, out: &Output) -> Result<bool> {
    let opts = cfg.gof_options();
    let mut records = Vec::new();
    for m in cfg.m_values() {
        let layout = GridLayout::new(m)?;
        let (means, samples) = sample_count_vectors(spec, &layout, cfg.horizon, cfg.replications, cfg.seed, &opts)?;
        let mut long = String::from("replication,index,tag,count\n");
        let mut sums = vec![0u64; layout.len()];
        for (r, s) in samples.iter().enumerate() {
            for (i, &c) in s.counts.iter().enumerate() {
                sums[i] += c;
                if c > 0 {
                    long.push_str(&format!(
                        "{r},{i},{},{c}\n",
                        csv_field(&layout.bins()[i].tag.to_string())
                    ));
                }
            }
        }
        let n = samples.len() as f64;
        let empirical: Vec<f64> = sums.iter().map(|&s| s as f64 / n).collect();
        let mut summary = String::from("index,tag,expected_mean,empirical_mean\n");
        for (i, bin) in layout.bins().iter().enumerate() {
            summary.push_str(&format!(
                "{i},{},{},{}\n",
                csv_field(&bin.tag.to_string()),
                means[i],
                empirical[i]
            ));
        }
        out.text(&format!("counts_m{m}.csv"), &long)?;
        out.text(&format!("counts_summary_m{m}.csv"), &summary)?;
        out.plot(
            &format!("counts_m{m}.dat"),
            "bin_index",
            "empirical_mean",
            &empirical
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as f64, v))
                .collect::<Vec<_>>(),
        )?;
        println!("m={m}: {} count vectors", samples.len());
        records.push(CountsRecord {
            m,
            replications: samples.len(),
            expected_means: means,
            empirical_means: empirical,
        });
    }
    out.report("counts.json", "counts", cfg, &records)?;
    Ok(true)
}

#[derive(Serialize)]
struct VerifyRecord {
    m: u32,
    lemma: LemmaReport,
    count_law: GofReport,
    passed: bool,
}

fn cmd_verify(cfg: &RunConfig, spec: &MeasureSpec, out: &Output) -> Result<bool> {
    let opts = cfg.gof_options();
    let mut records = Vec::new();
    let mut table = String::from(
        "m,d_m,bound,abs_deviation,se,martingale_mean,martingale_se,sinh_identity_mean,sinh_identity_se,count_law_pass,passed\n",
    );
    for m in cfg.m_values() {
        let region = cfg.region.region(m)?;
        let lemma = lemma_checks(
            spec,
            m,
            cfg.horizon,
            &region,
            cfg.replications,
            cfg.seed,
            cfg.resolution,
            cfg.tol,
        )?;
        let count_law = count_law_check(spec, m, cfg.horizon, cfg.replications, cfg.seed, &opts)?;
        let passed = lemma.passed && count_law.passed;
        table.push_str(&format!(
            "{m},{},{},{},{},{},{},{},{},{},{passed}\n",
            lemma.discrepancy,
            lemma.sinh_bound,
            lemma.abs_deviation.mean,
            lemma.abs_deviation.se,
            lemma.martingale.mean,
            lemma.martingale.se,
            lemma.sinh_identity.mean,
            lemma.sinh_identity.se,
            count_law.passed
        ));
        println!(
            "m={m}: martingale {:.5} ± {:.5}, E|1-R| {:.5} ± {:.5} vs bound {:.5}, count law {}: {}",
            lemma.martingale.mean,
            lemma.martingale.se,
            lemma.abs_deviation.mean,
            lemma.abs_deviation.se,
            lemma.sinh_bound,
            if count_law.passed { "ok" } else { "rejected" },
            if passed { "PASS" } else { "FAIL" }
        );
        records.push(VerifyRecord {
            m,
            lemma,
            count_law,
            passed,
        });
    }
    out.text("verify.csv", &table)?;
    out.plot(
        "verify.dat",
        "m",
        "abs_deviation",
        &records
            .iter()
            .map(|r| (r.m as f64, r.lemma.abs_deviation.mean))
            .collect::<Vec<_>>(),
    )?;
    out.plot(
        "verify_bound.dat",
        "m",
        "sinh_bound",
        &records
            .iter()
            .map(|r| (r.m as f64, r.lemma.sinh_bound))
            .collect::<Vec<_>>(),
    )?;
    out.report("verify.json", "verify", cfg, &records)?;
    Ok(records.iter().all(|r| r.passed))
}

fn cmd_sweep(cfg: &RunConfig, spec: &MeasureSpec, out: &Output) -> Result<bool> {
    let m_values = cfg.m_values();
    let result: SweepResult = match cfg.measure.example_class() {
        Some(class) => default_sweep(class, &m_values, cfg.tol)?,
        None => m3_sweep("custom", std::slice::from_ref(spec), &m_values, cfg.tol)?,
    };
    let mut cells = String::from("point,m,d_m,error,identity,finite_bins,tails,bound,bound_proven,within_bound\n");
    for c in &result.cells {
        cells.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            c.point,
            c.m,
            opt(c.d_m.map(|e| e.value)),
            opt(c.d_m.map(|e| e.error)),
            opt(c.identity.map(|e| e.value)),
            opt(c.finite_bins.map(|e| e.value)),
            opt(c.tails.map(|e| e.value)),
            opt(c.bound),
            c.bound_proven,
            c.within_bound.map_or_else(String::new, |b| b.to_string())
        ));
    }
    let mut worst = String::from("m,worst_d_m,error,argmax,worst_finite_bins\n");
    for w in &result.worst_case {
        worst.push_str(&format!(
            "{},{},{},{},{}\n",
            w.m, w.d_m.value, w.d_m.error, w.argmax, w.finite_bins.value
        ));
        println!("m={}: worst D_m = {:.6e} at point {}", w.m, w.d_m.value, w.argmax);
    }
    out.text("sweep.csv", &cells)?;
    out.text("sweep_worst.csv", &worst)?;
    out.plot(
        "sweep.dat",
        "m",
        "worst_d_m",
        &result
            .worst_case
            .iter()
            .map(|w| (w.m as f64, w.d_m.value))
            .collect::<Vec<_>>(),
    )?;
    out.report("sweep.json", "sweep", cfg, &result)?;
    let passed = result.worst_case_nonincreasing && result.proven_bounds_hold;
    println!(
        "worst case nonincreasing: {}, proven bounds hold: {}",
        result.worst_case_nonincreasing, result.proven_bounds_hold
    );
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_in(dir: &Path, config: &str, command: &str) -> i32 {
        let cfg_path = dir.join("config.in.json");
        fs::write(&cfg_path, config).unwrap();
        let out = dir.join("out");
        run([
            "jumpcount",
            command,
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
    }

    #[test]
    fn discretize_identity_ratio() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = r#"{"measure": {"class": "custom", "dominating": {"kind": "gaussian", "sigma": 1},
                      "ratio": {"kind": "one"}}, "m_list": [1, 2]}"#;
        assert_eq!(run_in(dir.path(), cfg, "discretize"), EXIT_OK);
        let table = fs::read_to_string(dir.path().join("out/grid_m2.csv")).unwrap();
        assert_eq!(table.lines().count(), 9);
        assert!(table.contains("\"J(1,-2)\""));
        assert!(table.lines().skip(1).all(|l| l.rsplit(',').nth(1) == Some("1")));
        let m1 = fs::read_to_string(dir.path().join("out/grid_m1.csv")).unwrap();
        assert_eq!(m1.lines().count(), 3);
        let summary = fs::read_to_string(dir.path().join("out/discretize.csv")).unwrap();
        assert!(summary.lines().skip(1).all(|l| l.split(',').nth(1) == Some("0")));
    }

    #[test]
    fn bad_config_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(
            run_in(
                dir.path(),
                r#"{"measure": {"class": "example1"}, "m": 0}"#,
                "discretize"
            ),
            EXIT_CONFIG
        );
        assert_eq!(
            run_in(dir.path(), r#"{"measure": {"class": "example1"}, "bogus": 1}"#, "bound"),
            EXIT_CONFIG
        );
        assert_eq!(run(["jumpcount", "discretize"]), EXIT_CONFIG);
        assert_eq!(run(["jumpcount", "frobnicate"]), EXIT_CONFIG);
    }

    #[test]
    fn infinite_region_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = r#"{"measure": {"class": "example2", "lambda": 1, "eps": 0.5, "big_m": 2},
                      "m": 4, "region": {"policy": "full_line"}, "paths": 2}"#;
        assert_eq!(run_in(dir.path(), cfg, "simulate"), EXIT_CONFIG);
    }

    #[test]
    fn divergence_exit_code() {
        // e^{|y|} against y^{-2} has infinite mass on the tail bins
        let dir = tempfile::tempdir().unwrap();
        let cfg = r#"{"measure": {"class": "custom", "dominating": {"kind": "inverse_square"},
                      "ratio": {"kind": "exponential_tilt", "neg": -1, "pos": -1}}, "m": 2}"#;
        assert_eq!(run_in(dir.path(), cfg, "discretize"), EXIT_DIVERGENCE);
    }

    #[test]
    fn bound_linear_full_line() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = r#"{"measure": {"class": "custom", "dominating": {"kind": "lebesgue", "lo": 0, "hi": 1},
                      "ratio": {"kind": "linear", "intercept": 0, "slope": 1}},
                      "m": 2, "region": {"policy": "full_line"}}"#;
        assert_eq!(run_in(dir.path(), cfg, "bound"), EXIT_OK);
        let table = fs::read_to_string(dir.path().join("out/bound.csv")).unwrap();
        let row: Vec<&str> = table.lines().nth(1).unwrap().split(',').collect();
        let d: f64 = row[1].parse().unwrap();
        let b: f64 = row[3].parse().unwrap();
        assert!((d - 0.4375).abs() < 1e-8);
        assert!((b - 0.9032).abs() < 1e-4);
    }
}
