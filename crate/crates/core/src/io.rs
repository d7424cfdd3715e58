//! Result serialization: efficiency records and trajectories as CSV or JSON.
//!
//! CSV schema for sweep records, in this exact column order:
//! `sequence,model,gamma,alpha,n_photons,p3_final,trace_err,min_eig`
//! with numbers printed to 12 significant digits. Identical inputs produce
//! byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::experiments::EfficiencyRecord;
use crate::integrator::TrajectoryRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// 12 significant digits, scientific notation.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub const RECORD_CSV_HEADER: &str = "sequence,model,gamma,alpha,n_photons,p3_final,trace_err,min_eig";

/// Write sweep records as CSV. The header row is always present.
pub fn write_records_csv<W: Write>(mut w: W, records: &[EfficiencyRecord]) -> Result<()> {
    writeln!(w, "{RECORD_CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.sequence,
            r.model,
            sig12(r.gamma),
            sig12(r.alpha),
            sig12(r.n_photons),
            sig12(r.p3_final),
            sig12(r.trace_err),
            sig12(r.min_eig),
        )?;
    }
    Ok(())
}

/// Write sweep records as a JSON array of objects with the CSV's keys.
pub fn write_records_json<W: Write>(w: W, records: &[EfficiencyRecord]) -> Result<()> {
    serde_json::to_writer_pretty(w, records).map_err(|e| crate::error::Error::Io(e.to_string()))?;
    Ok(())
}

/// Write records in the chosen format to `path`.
pub fn write_records(
    records: &[EfficiencyRecord],
    format: OutputFormat,
    path: &Path,
) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Csv => write_records_csv(&mut w, records)?,
        OutputFormat::Json => write_records_json(&mut w, records)?,
    }
    w.flush()?;
    Ok(())
}

pub const TRAJECTORY_CSV_HEADER: &str =
    "time,rho11,rho22,rho33,p_plus,p_zero,p_minus,trace_err,min_eig,herm_defect";

/// Write a trajectory as CSV, one row per sample.
pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &TrajectoryRecord<f64>) -> Result<()> {
    writeln!(w, "{TRAJECTORY_CSV_HEADER}")?;
    for s in &traj.samples {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            sig12(s.time),
            sig12(s.bare[0]),
            sig12(s.bare[1]),
            sig12(s.bare[2]),
            sig12(s.dressed[0]),
            sig12(s.dressed[1]),
            sig12(s.dressed[2]),
            sig12(s.trace_error),
            sig12(s.min_eigenvalue),
            sig12(s.herm_defect),
        )?;
    }
    Ok(())
}

/// Write a trajectory as a JSON array of sample objects.
pub fn write_trajectory_json<W: Write>(mut w: W, traj: &TrajectoryRecord<f64>) -> Result<()> {
    #[derive(serde::Serialize)]
    struct Row {
        time: f64,
        rho11: f64,
        rho22: f64,
        rho33: f64,
        p_plus: f64,
        p_zero: f64,
        p_minus: f64,
        trace_err: f64,
        min_eig: f64,
        herm_defect: f64,
    }
    let rows: Vec<Row> = traj
        .samples
        .iter()
        .map(|s| Row {
            time: s.time,
            rho11: s.bare[0],
            rho22: s.bare[1],
            rho33: s.bare[2],
            p_plus: s.dressed[0],
            p_zero: s.dressed[1],
            p_minus: s.dressed[2],
            trace_err: s.trace_error,
            min_eig: s.min_eigenvalue,
            herm_defect: s.herm_defect,
        })
        .collect();
    serde_json::to_writer_pretty(&mut w, &rows)
        .map_err(|e| crate::error::Error::Io(e.to_string()))?;
    Ok(())
}

/// Write a trajectory in the chosen format to `path`.
pub fn write_trajectory(
    traj: &TrajectoryRecord<f64>,
    format: OutputFormat,
    path: &Path,
) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Csv => write_trajectory_csv(&mut w, traj)?,
        OutputFormat::Json => write_trajectory_json(&mut w, traj)?,
    }
    w.flush()?;
    Ok(())
}
