//! Command-line front end.
//!
//! Subcommands `attractor-map`, `relax`, `freeze`, `sweep` and
//! `env-inspect` read an optional JSON [`RunConfig`], apply the command-line
//! flags on top, and write CSV or JSON. Without `--out` the main result goes
//! to stdout. Exit codes: 0 pass, 1 usage or configuration error, 2 a
//! scientific tolerance failed.

mod config;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{write_series_csv, Engine, ResetMode};
use crate::error::Result;
use crate::experiments::{attractor_map, run_relaxation, verify_freezing};
use crate::model::{beta_working_point, binomial_degeneracy, effective_beta, BetaMethod};
use crate::VERSION;

pub use config::{GridConfig, InspectConfig, MapConfig, ResolvedSweep, RunConfig, SweepAxis, SweepConfig};
pub use sweep::{evaluate, SweepRow, PARAMS, QUANTITIES};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "measured-bath", version, about = "TLS relaxation under periodic environment measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed for sampled ensembles.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory; stdout when absent.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub engine: Option<Engine>,
    #[arg(long, global = true, value_enum)]
    pub reset: Option<ResetMode>,
    /// Relaxation scenario: fig2, fig3 or custom.
    #[arg(long, global = true, value_name = "NAME")]
    pub scenario: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Attractor ρ00* over a (Δt, Δδ) grid as CSV.
    AttractorMap,
    /// Exact relaxation run with the analytic overlay.
    Relax,
    /// Coherence and population drift at a freezing point.
    Freeze,
    /// Analytic quantity over one or two parameters as CSV.
    Sweep {
        /// Quantity name, e.g. r, rho00_star, c2.
        #[arg(long)]
        quantity: Option<String>,
        /// Axis as PARAM=LO:HI:N, e.g. dt=0:3.14159:101.
        #[arg(long, value_parser = parse_axis)]
        x: Option<SweepAxis>,
        #[arg(long, value_parser = parse_axis)]
        y: Option<SweepAxis>,
    },
    /// Band table, degeneracies and β estimates of the environment.
    EnvInspect,
}

fn parse_axis(s: &str) -> std::result::Result<SweepAxis, String> {
    let (param, rest) = s.split_once('=').ok_or("expected PARAM=LO:HI:N")?;
    let parts: Vec<&str> = rest.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err("expected PARAM=LO:HI:N".into());
    };
    Ok(SweepAxis {
        param: param.to_string(),
        lo: lo.parse().map_err(|e| format!("LO: {e}"))?,
        hi: hi.parse().map_err(|e| format!("HI: {e}"))?,
        n: n.parse().map_err(|e| format!("N: {e}"))?,
        open_lo: false,
    })
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_TOLERANCE,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Merges the config file and the flags; flags win.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.engine.is_some() {
        cfg.engine = cli.engine;
    }
    if cli.reset.is_some() {
        cfg.reset = cli.reset;
    }
    if cli.scenario.is_some() {
        cfg.scenario = cli.scenario.clone();
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.display().to_string());
    }
    if let Command::Sweep { quantity, x, y } = &cli.command {
        let sweep = cfg.sweep.get_or_insert_with(Default::default);
        if quantity.is_some() {
            sweep.quantity = quantity.clone();
        }
        if x.is_some() {
            sweep.x = x.clone();
        }
        if y.is_some() {
            sweep.y = y.clone();
        }
    }
    Ok(cfg)
}

/// Runs the selected subcommand; `Ok(false)` means a tolerance failed.
pub fn execute(cli: &Cli) -> Result<bool> {
    let cfg = resolve_config(cli)?;
    let out = cfg.out.as_ref().map(PathBuf::from);
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir)?;
    }
    match &cli.command {
        Command::AttractorMap => cmd_attractor_map(&cfg, out.as_deref()),
        Command::Relax => cmd_relax(&cfg, out.as_deref()),
        Command::Freeze => cmd_freeze(&cfg, out.as_deref()),
        Command::Sweep { .. } => cmd_sweep(&cfg, out.as_deref()),
        Command::EnvInspect => cmd_env_inspect(&cfg, out.as_deref()),
    }
}

/// `# ` comment lines carrying the version and the resolved config.
pub fn csv_preamble<C: Serialize>(command: &str, resolved: &C) -> Result<Vec<String>> {
    Ok(vec![
        format!("measured-bath {VERSION}"),
        format!("command {command}"),
        format!("config {}", serde_json::to_string(resolved)?),
    ])
}

fn sink(dir: Option<&Path>, file: &str) -> Result<Box<dyn Write>> {
    Ok(match dir {
        Some(d) => Box::new(BufWriter::new(File::create(d.join(file))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// JSON document with the run-dependent timing confined to `timing`.
fn json_document<C: Serialize, R: Serialize>(command: &str, resolved: &C, report: &R) -> Result<Value> {
    let mut report = serde_json::to_value(report)?;
    let mut wall = Value::Null;
    if let Value::Object(map) = &mut report {
        wall = map.remove("wall_time_s").unwrap_or(Value::Null);
        map.remove("config");
        map.remove("version");
    }
    Ok(json!({
        "version": VERSION,
        "command": command,
        "config": resolved,
        "report": report,
        "timing": { "wall_time_s": wall },
    }))
}

fn write_json(dir: Option<&Path>, file: &str, doc: &Value) -> Result<()> {
    let mut w = sink(dir, file)?;
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_attractor_map(cfg: &RunConfig, out: Option<&Path>) -> Result<bool> {
    let map = cfg.map()?;
    let grid = attractor_map(&map.dt, &map.detuning, map.delta_s, map.beta)?;
    let mut w = sink(out, "attractor_map.csv")?;
    for line in csv_preamble("attractor-map", &map)? {
        writeln!(w, "# {line}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    for cell in &grid.cells {
        csv.serialize(cell)?;
    }
    csv.flush()?;
    if out.is_some() {
        let frozen = grid.cells.iter().filter(|c| c.is_freezing).count();
        println!("attractor-map: {} cells, {frozen} freezing", grid.cells.len());
    }
    Ok(true)
}

fn cmd_relax(cfg: &RunConfig, out: Option<&Path>) -> Result<bool> {
    let scenario = cfg.relaxation()?;
    let report = run_relaxation(&scenario)?;
    let doc = json_document("relax", &scenario, &report)?;
    let stem = scenario.name.clone();
    if let Some(dir) = out {
        let preamble = csv_preamble("relax", &scenario)?;
        let series = report.series.as_ref().expect("relaxation keeps its series");
        let mut w = sink(Some(dir), &format!("{stem}_series.csv"))?;
        write_series_csv(&mut w, &preamble, &series.rows())?;
        let mut w = sink(Some(dir), &format!("{stem}_analytic.csv"))?;
        for line in &preamble {
            writeln!(w, "# {line}")?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["j", "recursion", "closed_form"])?;
        for (j, (a, c)) in report.analytic.iter().zip(&report.closed_form).enumerate() {
            csv.serialize((j, a, c))?;
        }
        csv.flush()?;
        write_json(Some(dir), &format!("{stem}_report.json"), &doc)?;
        println!(
            "relax {stem}: plateau {:.4}, max gap {:.4}, {}",
            report.plateau,
            report.max_gap,
            if report.pass { "pass" } else { "FAIL" }
        );
    } else {
        write_json(None, "", &doc)?;
    }
    Ok(report.pass)
}

fn cmd_freeze(cfg: &RunConfig, out: Option<&Path>) -> Result<bool> {
    let fc = cfg.freezing()?;
    let report = verify_freezing(&fc)?;
    let doc = json_document("freeze", &fc, &report)?;
    if let Some(dir) = out {
        let series = report.series.as_ref().expect("freezing keeps its series");
        let mut w = sink(Some(dir), "freeze_series.csv")?;
        write_series_csv(&mut w, &csv_preamble("freeze", &fc)?, &series.rows())?;
        write_json(Some(dir), "freeze_report.json", &doc)?;
        println!(
            "freeze (n, m) = ({}, {}): drift rho00 {:.2e}, |rho10| {:.2e}, {}",
            report.n,
            report.m,
            report.rho00_drift,
            report.abs_rho10_drift,
            if report.pass { "pass" } else { "FAIL" }
        );
    } else {
        write_json(None, "", &doc)?;
    }
    Ok(report.pass)
}

fn cmd_sweep(cfg: &RunConfig, out: Option<&Path>) -> Result<bool> {
    let s = cfg.sweep()?;
    let rows = sweep::run(&s)?;
    let mut w = sink(out, &format!("sweep_{}.csv", s.quantity))?;
    for line in csv_preamble("sweep", &s)? {
        writeln!(w, "# {line}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    let mut header = vec![s.x.param.clone()];
    header.extend(s.y.as_ref().map(|y| y.param.clone()));
    header.push(s.quantity.clone());
    csv.write_record(&header)?;
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in &rows {
        let mut rec = vec![row.x.to_string()];
        if s.y.is_some() {
            rec.push(fmt(row.y));
        }
        rec.push(fmt(row.value));
        csv.write_record(&rec)?;
    }
    csv.flush()?;
    Ok(true)
}

#[derive(Debug, Serialize)]
struct BandRow {
    k: usize,
    degeneracy: u64,
    energy: f64,
    /// ‖C_{k+1,k}‖_F when the environment could be built.
    coupling_norm_up: Option<f64>,
}

#[derive(Debug, Serialize)]
struct BetaEstimates {
    log_approx: Option<f64>,
    digamma: Option<f64>,
    pair_below: Option<f64>,
    pair_above: Option<f64>,
    pair_across: Option<f64>,
}

fn cmd_env_inspect(cfg: &RunConfig, out: Option<&Path>) -> Result<bool> {
    let ic = cfg.inspect()?;
    let (n, k0, db) = (ic.env.n as u64, ic.k0 as u64, ic.env.delta_b);
    let built = match ic.env.build() {
        Ok(env) => Some(env),
        Err(e) => {
            log::warn!("environment not built: {e}");
            None
        }
    };
    let mut bands = Vec::new();
    for k in ic.env.range() {
        let coupling_norm_up = built
            .as_ref()
            .filter(|env| env.contains(k + 1))
            .and_then(|env| env.coupling(k).ok())
            .map(|c| c.norm());
        bands.push(BandRow {
            k,
            degeneracy: binomial_degeneracy(n, k as u64)?,
            energy: k as f64 * db,
            coupling_norm_up,
        });
    }
    let betas = BetaEstimates {
        log_approx: beta_working_point(n, k0, db, BetaMethod::LogApprox).ok(),
        digamma: beta_working_point(n, k0, db, BetaMethod::Digamma).ok(),
        pair_below: k0.checked_sub(1).and_then(|lo| effective_beta(n, lo, k0, db).ok()),
        pair_above: effective_beta(n, k0, k0 + 1, db).ok(),
        pair_across: k0.checked_sub(1).and_then(|lo| effective_beta(n, lo, k0 + 1, db).ok()),
    };
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "measured-bath {VERSION}")?;
    writeln!(stdout, "config {}", serde_json::to_string(&ic)?)?;
    writeln!(stdout, "{:>4} {:>16} {:>12} {:>14}", "k", "N_k", "E_k", "|C_k+1,k|_F")?;
    for b in &bands {
        let norm = b.coupling_norm_up.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
        writeln!(stdout, "{:>4} {:>16} {:>12.6} {:>14}", b.k, b.degeneracy, b.energy, norm)?;
    }
    let show = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
    writeln!(stdout, "beta log-approx {}", show(betas.log_approx))?;
    writeln!(stdout, "beta digamma    {}", show(betas.digamma))?;
    writeln!(stdout, "beta (k0-1, k0) {}", show(betas.pair_below))?;
    writeln!(stdout, "beta (k0, k0+1) {}", show(betas.pair_above))?;
    writeln!(stdout, "beta (k0-1, k0+1) {}", show(betas.pair_across))?;
    stdout.flush()?;
    if let Some(dir) = out {
        let doc = json!({
            "version": VERSION,
            "command": "env-inspect",
            "config": ic,
            "report": { "bands": bands, "beta": betas },
        });
        write_json(Some(dir), "env_inspect.json", &doc)?;
    }
    Ok(true)
}
