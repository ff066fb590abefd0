//! CSV and JSON artefacts. Floats are written with 17 significant digits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hydro::{Balance, DiagnosticRecord, GasParams, Grid1D, Primitive, PrimitiveField};
use crate::solver::TrackedRecord;

pub const DIAGNOSTICS_HEADER: [&str; 13] =
    ["t", "M", "P", "E", "Ek", "Ei", "G", "F", "S", "Kmax", "rho_max", "dudx_max", "dt"];

pub const BALANCE_HEADER: [&str; 9] = [
    "t",
    "energy_loss",
    "entropy_loss",
    "flux_mass",
    "flux_momentum",
    "flux_energy",
    "flux_inertia",
    "flux_virial",
    "flux_entropy",
];

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_row(row: &csv::StringRecord, path: &Path, line: usize) -> Result<Vec<f64>> {
    row.iter()
        .map(|s| {
            s.trim().parse::<f64>().map_err(|e| {
                Error::Io(format!("{}: line {line}: cannot parse {s:?}: {e}", path.display()))
            })
        })
        .collect()
}

fn check_header(rdr: &mut csv::Reader<File>, want: &[&str], path: &Path) -> Result<()> {
    let got: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if got.len() < want.len() || got.iter().zip(want).any(|(a, b)| a != b) {
        return Err(Error::Io(format!(
            "{}: expected header {}, found {}",
            path.display(),
            want.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

fn rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = reader(path)?;
    check_header(&mut rdr, header, path)?;
    let mut out = Vec::new();
    for (k, row) in rdr.records().enumerate() {
        let v = parse_row(&row?, path, k + 2)?;
        if v.len() < header.len() {
            return Err(Error::Io(format!("{}: line {} is short", path.display(), k + 2)));
        }
        out.push(v);
    }
    Ok(out)
}

/// Cell table with header `x,rho,u,p,K`.
pub fn write_field(path: &Path, grid: &Grid1D, pf: &PrimitiveField, g: &GasParams) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["x", "rho", "u", "p", "K"])?;
    for (i, c) in pf.cells.iter().enumerate() {
        w.write_record([grid.center(i), c.rho, c.u, c.p, c.entropy(g.gamma)].map(fmt))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a cell table `x,rho,u,p[,K]`; the `x` and `K` columns are not used.
pub fn read_table(path: &Path) -> Result<PrimitiveField> {
    let cells = rows(path, &["x", "rho", "u", "p"])?
        .into_iter()
        .map(|v| Primitive::new(v[1], v[2], v[3]))
        .collect();
    Ok(PrimitiveField::new(cells))
}

pub fn write_diagnostics(path: &Path, records: &[DiagnosticRecord]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(DIAGNOSTICS_HEADER)?;
    for r in records {
        w.write_record(diagnostic_row(r).map(fmt))?;
    }
    w.flush()?;
    Ok(())
}

fn diagnostic_row(r: &DiagnosticRecord) -> [f64; 13] {
    [
        r.t,
        r.mass,
        r.momentum,
        r.energy,
        r.kinetic,
        r.internal,
        r.inertia,
        r.virial,
        r.entropy_mass,
        r.k_max,
        r.rho_max,
        r.dudx_max,
        r.dt,
    ]
}

fn record_from(v: &[f64]) -> DiagnosticRecord {
    DiagnosticRecord {
        t: v[0],
        mass: v[1],
        momentum: v[2],
        energy: v[3],
        kinetic: v[4],
        internal: v[5],
        inertia: v[6],
        virial: v[7],
        entropy_mass: v[8],
        k_max: v[9],
        rho_max: v[10],
        dudx_max: v[11],
        dt: v[12],
        balance: Balance::default(),
    }
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticRecord>> {
    Ok(rows(path, &DIAGNOSTICS_HEADER)?.iter().map(|v| record_from(v)).collect())
}

pub fn write_balance(path: &Path, records: &[DiagnosticRecord]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(BALANCE_HEADER)?;
    for r in records {
        let b = &r.balance;
        w.write_record(
            [
                r.t,
                b.energy_loss,
                b.entropy_loss,
                b.flux_mass,
                b.flux_momentum,
                b.flux_energy,
                b.flux_inertia,
                b.flux_virial,
                b.flux_entropy,
            ]
            .map(fmt),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Attaches the balance rows to records with matching times.
pub fn read_balance_into(path: &Path, records: &mut [DiagnosticRecord]) -> Result<()> {
    let rows = rows(path, &BALANCE_HEADER)?;
    if rows.len() != records.len() {
        return Err(Error::Io(format!(
            "{}: {} rows for {} records",
            path.display(),
            rows.len(),
            records.len()
        )));
    }
    for (r, v) in records.iter_mut().zip(rows) {
        if v[0] != r.t {
            return Err(Error::Io(format!("{}: time {} does not match {}", path.display(), v[0], r.t)));
        }
        r.balance = Balance {
            energy_loss: v[1],
            entropy_loss: v[2],
            flux_mass: v[3],
            flux_momentum: v[4],
            flux_energy: v[5],
            flux_inertia: v[6],
            flux_virial: v[7],
            flux_entropy: v[8],
        };
    }
    Ok(())
}

/// Tilde functionals: `radius,measured` followed by the diagnostics columns.
pub fn write_tracked(path: &Path, tracked: &[TrackedRecord]) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["radius", "measured"];
    header.extend(DIAGNOSTICS_HEADER);
    w.write_record(&header)?;
    for tr in tracked {
        let mut row = vec![fmt(tr.radius), (tr.measured as u8).to_string()];
        row.extend(diagnostic_row(&tr.record).map(fmt));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_tracked(path: &Path) -> Result<Vec<TrackedRecord>> {
    let mut header = vec!["radius", "measured"];
    header.extend(DIAGNOSTICS_HEADER);
    Ok(rows(path, &header)?
        .iter()
        .map(|v| {
            let record = record_from(&v[2..]);
            TrackedRecord { t: record.t, radius: v[0], measured: v[1] != 0.0, record }
        })
        .collect())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
