//! Command-line front end: `run`, `exact` and `verify`.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 invalid input, 3 unexpected
//! blow-up, 4 verification failure.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::blowup::BlowupReport;
use crate::diagnostics::{analyze, k_plus, Report};
use crate::error::{Error, Result};
use crate::exact::{haff_temperature, integrate_singular, SingularState, SteadyParams};
use crate::hydro::{GasParams, Primitive};
use crate::io;
use crate::solver::{self, Background, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable that overrides the output directory.
pub const OUT_ENV: &str = "GRANHYDRO_OUT";

#[derive(Debug, Parser)]
#[command(name = "granhydro", version, about = "Granular gas hydrodynamics in one dimension")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario, or every `*.json` in a directory with `--batch`.
    Run {
        #[arg(required_unless_present = "batch", conflicts_with = "batch")]
        scenario: Option<PathBuf>,
        #[arg(long)]
        batch: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export an exact solution.
    Exact {
        family: Family,
        /// `name=value`, repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute every check from a finished run directory.
    Verify { dir: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Haff,
    Steady,
    Automodel,
    Singular,
}

fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
}

/// Provenance of an output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub scenario_sha256: Option<String>,
    pub version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub files: Vec<FileEntry>,
    pub exit_status: i32,
}

pub const MANIFEST: &str = "manifest.json";

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn file_sha(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(sha256_hex(&bytes))
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

fn write_manifest(
    dir: &Path,
    command: &str,
    scenario_sha256: Option<String>,
    started: f64,
    files: &[String],
    exit_status: i32,
) -> Result<()> {
    let files = files
        .iter()
        .map(|name| Ok(FileEntry { name: name.clone(), sha256: file_sha(&dir.join(name))? }))
        .collect::<Result<Vec<_>>>()?;
    let m = RunManifest {
        command: command.to_string(),
        scenario_sha256,
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix: started,
        finished_unix: now(),
        files,
        exit_status,
    };
    io::write_json(&dir.join(MANIFEST), &m)
}

/// Output directory: `--out`, then the environment override, then the
/// scenario's own directory, then `runs/<stem>`.
pub fn resolve_out(explicit: Option<&Path>, sc: Option<&Scenario>, stem: &str) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_ENV) {
        return PathBuf::from(p);
    }
    if let Some(d) = sc.and_then(|s| s.output.directory.as_ref()) {
        let base = sc.and_then(|s| s.base_dir.clone()).unwrap_or_default();
        return base.join(d);
    }
    PathBuf::from("runs").join(stem)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into())
}

pub fn snapshot_name(t: f64) -> String {
    format!("snapshot_t{t}.csv")
}

/// Runs one scenario into `out` and returns the exit status.
pub fn cmd_run(path: &Path, out: Option<&Path>) -> i32 {
    let started = now();
    let text = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            log::error!("{}: {e}", path.display());
            return EXIT_IO;
        }
    };
    let sc = match solver::parse_scenario(path) {
        Ok(sc) => sc,
        Err(e) => {
            log::error!("{e}");
            return exit_code(&e);
        }
    };
    let dir = resolve_out(out, Some(&sc), &stem(path));
    match run_into(&sc, &text, &dir, started) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e}");
            exit_code(&e)
        }
    }
}

fn run_into(sc: &Scenario, scenario_bytes: &[u8], dir: &Path, started: f64) -> Result<i32> {
    create_dir(dir)?;
    log::info!("running {:?} into {}", sc.name, dir.display());
    let out = solver::run(sc)?;
    let g = &out.gas;
    let mut files = vec!["scenario.json".to_string()];
    std::fs::write(dir.join("scenario.json"), scenario_bytes)?;

    io::write_diagnostics(&dir.join("diagnostics.csv"), &out.records)?;
    io::write_balance(&dir.join("balance.csv"), &out.records)?;
    files.extend(["diagnostics.csv".into(), "balance.csv".into()]);
    if !out.tracked.is_empty() {
        io::write_tracked(&dir.join("tracked.csv"), &out.tracked)?;
        files.push("tracked.csv".into());
    }
    io::write_field(&dir.join("initial.csv"), &out.grid, &out.initial, g)?;
    io::write_field(&dir.join("final.csv"), &out.grid, &out.final_field, g)?;
    files.extend(["initial.csv".into(), "final.csv".into()]);
    for s in &out.snapshots {
        let name = snapshot_name(s.t);
        io::write_field(&dir.join(&name), &out.grid, &s.field, g)?;
        files.push(name);
    }

    let setup = sc.analysis_setup(k_plus(&out.initial, g));
    let tracked: Vec<_> = out.tracked.iter().map(|t| (t.radius, t.record)).collect();
    let report = analyze(&setup, &out.records, &tracked, out.blowup);
    io::write_json(&dir.join("report.json"), &report)?;
    io::write_json(&dir.join("blowup.json"), &out.blowup)?;
    files.extend(["report.json".into(), "blowup.json".into()]);

    log::info!(
        "t = {} after {} steps, {} records, {} violations, flooring events {}",
        out.final_time,
        out.steps,
        out.records.len(),
        report.violations,
        out.flooring_events
    );
    let code = if out.blowup.detected && !sc.blowup.expected {
        log::warn!("unexpected blow-up: {:?}", out.blowup);
        EXIT_BLOWUP
    } else {
        if sc.blowup.expected && !out.blowup.detected {
            log::warn!("blow-up was expected but not detected by t = {}", out.final_time);
        }
        EXIT_OK
    };
    write_manifest(dir, "run", Some(sha256_hex(scenario_bytes)), started, &files, code)?;
    Ok(code)
}

/// Runs every `*.json` in `dir` concurrently into `<out>/<stem>`; returns the largest exit status.
pub fn cmd_batch(dir: &Path, out: Option<&Path>) -> i32 {
    let mut paths: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect(),
        Err(e) => {
            log::error!("{}: {e}", dir.display());
            return EXIT_IO;
        }
    };
    paths.sort();
    let base = resolve_out(out, None, "batch");
    let one = |p: &PathBuf| cmd_run(p, Some(&base.join(stem(p))));
    #[cfg(feature = "parallel")]
    let codes: Vec<i32> = {
        use rayon::prelude::*;
        paths.par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let codes: Vec<i32> = paths.iter().map(one).collect();
    for (p, c) in paths.iter().zip(&codes) {
        log::info!("{}: exit {c}", p.display());
    }
    codes.into_iter().max().unwrap_or(EXIT_OK)
}

struct Params(Vec<(String, f64)>);

impl Params {
    fn take(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.0.iter().position(|(k, _)| k == key) {
            Some(i) => Ok(self.0.remove(i).1),
            None => default.ok_or_else(|| Error::InvalidParameter(format!("missing --param {key}=..."))),
        }
    }

    fn opt(&mut self, key: &str) -> Option<f64> {
        self.take(key, None).ok()
    }

    fn finish(self) -> Result<()> {
        match self.0.first() {
            None => Ok(()),
            Some((k, _)) => Err(Error::InvalidParameter(format!("unknown parameter {k:?}"))),
        }
    }
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.into_iter().map(io::fmt))?;
    }
    w.flush()?;
    Ok(())
}

fn profile_rows(
    p: &mut Params,
    g: &GasParams,
    eval: impl Fn(f64) -> Option<Result<Primitive>>,
) -> Result<Vec<Vec<f64>>> {
    let x_min = p.take("x_min", Some(-10.0))?;
    let x_max = p.take("x_max", Some(10.0))?;
    let n = p.take("points", Some(201.0))? as usize;
    if !(x_min < x_max) || n < 2 {
        return Err(Error::InvalidParameter("need x_min < x_max and points >= 2".into()));
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let x = x_min + (x_max - x_min) * i as f64 / (n - 1) as f64;
        if let Some(w) = eval(x) {
            let w = w?;
            rows.push(vec![x, w.rho, w.u, w.p, w.entropy(g.gamma)]);
        }
    }
    Ok(rows)
}

/// Exports one exact family into `out`; returns the exit status.
pub fn cmd_exact(family: Family, params: Vec<(String, f64)>, out: Option<&Path>) -> i32 {
    let started = now();
    let name = format!("{family:?}").to_lowercase();
    let dir = resolve_out(out, None, &format!("exact_{name}"));
    match exact_into(family, Params(params), &dir, started) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e}");
            exit_code(&e)
        }
    }
}

fn exact_into(family: Family, mut p: Params, dir: &Path, started: f64) -> Result<i32> {
    let gamma = p.take("gamma", Some(5.0 / 3.0))?;
    let lambda = p.take("lambda", Some(1.0))?;
    let g = GasParams::new(gamma, lambda, 1)?;
    let field_header = ["x", "rho", "u", "p", "K"];
    let mut files = Vec::new();
    let mut blowup: Option<BlowupReport> = None;
    let (name, header, rows): (&str, Vec<&str>, Vec<Vec<f64>>) = match family {
        Family::Haff => {
            let rho0 = p.take("rho0", Some(1.0))?;
            let t0 = p.take("T0", Some(1.0))?;
            let t_end = p.take("t_end", Some(10.0))?;
            let n = p.take("points", Some(101.0))? as usize;
            if !(rho0 > 0.0 && t0 > 0.0 && t_end >= 0.0 && n >= 2) {
                return Err(Error::InvalidParameter("need rho0, T0 > 0, t_end >= 0, points >= 2".into()));
            }
            let rows = (0..n)
                .map(|i| {
                    let t = t_end * i as f64 / (n - 1) as f64;
                    vec![t, haff_temperature(t, rho0, t0, lambda)]
                })
                .collect();
            ("haff.csv", vec!["t", "T"], rows)
        }
        Family::Steady => {
            let k = p.take("k", None)?;
            let c2 = p.take("c2", None)?;
            let x_plus = p.take("x_plus", Some(0.0))?;
            let z_anchor = p.opt("z_anchor");
            let sp = SteadyParams::steady(k, c2, x_plus, z_anchor, &g)?;
            let bg = Background::steady(sp, z_anchor, &g)?;
            let rows = profile_rows(&mut p, &g, |x| (x.abs() > x_plus).then(|| bg.eval(x, 0.0, &g)))?;
            ("steady.csv", field_header.to_vec(), rows)
        }
        Family::Automodel => {
            let c1 = p.take("c1", None)?;
            let c2 = p.take("c2", None)?;
            let a = p.take("a", None)?;
            let x_anchor = p.take("x_anchor", Some(0.0))?;
            let z_anchor = p.opt("z_anchor");
            let t = p.take("t", Some(0.0))?;
            let sp = SteadyParams::anchored(c1, c2, a, x_anchor, z_anchor, &g)?;
            let bg = Background::Travelling { sp };
            let rows =
                profile_rows(&mut p, &g, |x| (x - a * t >= x_anchor).then(|| bg.eval(x, t, &g)))?;
            ("automodel.csv", field_header.to_vec(), rows)
        }
        Family::Singular => {
            let st = SingularState {
                alpha: p.take("alpha0", None)?,
                s: p.take("s0", None)?,
                beta0: p.take("beta0", Some(1.0))?,
            };
            let t_end = p.take("t_end", Some(5.0))?;
            let threshold = p.take("threshold", Some(1e6))?;
            let traj = integrate_singular(&st, &g, t_end, threshold)?;
            let rows = traj.points.iter().map(|q| vec![q.t, q.alpha, q.s]).collect();
            blowup = Some(traj.blowup);
            ("singular.csv", vec!["t", "alpha", "s"], rows)
        }
    };
    p.finish()?;
    create_dir(dir)?;
    write_rows(&dir.join(name), &header, rows.into_iter())?;
    files.push(name.to_string());
    if let Some(b) = blowup {
        io::write_json(&dir.join("blowup.json"), &b)?;
        files.push("blowup.json".into());
    }
    write_manifest(dir, "exact", None, started, &files, EXIT_OK)?;
    Ok(EXIT_OK)
}

/// Outcome of re-checking a run directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub report: Report,
    /// Files whose hash differs from the manifest, or that are missing.
    pub altered: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.report.violations == 0 && self.altered.is_empty()
    }
}

/// Rebuilds the report of a run directory from its files alone.
pub fn verify_dir(dir: &Path) -> Result<Verification> {
    let manifest: RunManifest = {
        let p = dir.join(MANIFEST);
        let text = std::fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        serde_json::from_str(&text)?
    };
    let mut altered = Vec::new();
    for f in &manifest.files {
        match file_sha(&dir.join(&f.name)) {
            Ok(h) if h == f.sha256 => {}
            _ => altered.push(f.name.clone()),
        }
    }
    let text = std::fs::read_to_string(dir.join("scenario.json"))?;
    let sc: Scenario = serde_json::from_str(&text)?;
    let mut records = io::read_diagnostics(&dir.join("diagnostics.csv"))?;
    io::read_balance_into(&dir.join("balance.csv"), &mut records)?;
    let tracked_path = dir.join("tracked.csv");
    let tracked: Vec<_> = if tracked_path.exists() {
        io::read_tracked(&tracked_path)?.into_iter().map(|t| (t.radius, t.record)).collect()
    } else {
        Vec::new()
    };
    let initial = io::read_table(&dir.join("initial.csv"))?;
    let blowup: BlowupReport = serde_json::from_str(&std::fs::read_to_string(dir.join("blowup.json"))?)?;
    let setup = sc.analysis_setup(k_plus(&initial, &sc.gas));
    let report = analyze(&setup, &records, &tracked, blowup);
    Ok(Verification { report, altered })
}

pub fn cmd_verify(dir: &Path) -> i32 {
    match verify_dir(dir) {
        Ok(v) => {
            for f in &v.altered {
                println!("ALTERED {f}: hash differs from {MANIFEST}");
            }
            for c in v.report.violated() {
                println!(
                    "VIOLATED {} at t = {}: lhs {} rhs {} (tolerance {})",
                    c.name, c.t, c.lhs, c.rhs, c.tolerance
                );
            }
            for id in &v.report.identities {
                println!("identity {}: residual {:.3e} at t = {}", id.name, id.residual, id.t_worst);
            }
            let enforced = v.report.checks.iter().filter(|c| c.enforced).count();
            println!(
                "{} enforced checks, {} violations, {} altered files",
                enforced, v.report.violations, v.altered.len()
            );
            if v.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            }
        }
        Err(e) => {
            log::error!("{e}");
            exit_code(&e)
        }
    }
}

pub fn dispatch(cli: Cli) -> i32 {
    match cli.command {
        Command::Run { scenario: Some(p), out, .. } => cmd_run(&p, out.as_deref()),
        Command::Run { batch: Some(d), out, .. } => cmd_batch(&d, out.as_deref()),
        Command::Run { .. } => EXIT_INVALID,
        Command::Exact { family, params, out } => cmd_exact(family, params, out.as_deref()),
        Command::Verify { dir } => cmd_verify(&dir),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse_and_leftovers() {
        assert_eq!(parse_param("k=2.5").unwrap(), ("k".to_string(), 2.5));
        assert!(parse_param("k").is_err());
        assert!(parse_param("k=x").is_err());
        let mut p = Params(vec![("a".into(), 1.0), ("zz".into(), 2.0)]);
        assert_eq!(p.take("a", None).unwrap(), 1.0);
        assert_eq!(p.take("b", Some(3.0)).unwrap(), 3.0);
        assert!(p.take("c", None).is_err());
        assert!(p.finish().is_err());
    }

    #[test]
    fn sha_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
