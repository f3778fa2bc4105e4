//! Single points and bond-length scans.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;
use vqe_core::integrals::{parse_fcidump, sto3g_integrals, IntegralTensors, MolecularGeometry};
use vqe_core::{run_point, PipelineConfig, PointResult};

use crate::config::{NativeGeometry, Source};

#[derive(Debug, Error)]
pub enum PointError {
    #[error("missing fixture {0}")]
    MissingFixture(PathBuf),
    #[error("cannot read {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] vqe_core::Error),
}

pub fn fixture_path(dir: &Path, label: &str, bond: f64) -> PathBuf {
    dir.join(format!("{label}_{bond:.4}.fcidump"))
}

/// Bond lengths of every `<label>_<d>.fcidump` in `dir`, ascending.
pub fn discover_fixtures(dir: &Path, label: &str) -> std::io::Result<Vec<f64>> {
    let prefix = format!("{label}_");
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let name = entry?.file_name();
        let Some(name) = name.to_str() else { continue };
        let Some(rest) = name.strip_prefix(&prefix).and_then(|r| r.strip_suffix(".fcidump")) else { continue };
        if let Ok(d) = rest.parse::<f64>() {
            out.push(d);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

pub fn load_tensors(source: &Source, bond: f64) -> Result<IntegralTensors, PointError> {
    match source {
        Source::Fixtures { dir, label } => {
            let path = fixture_path(dir, label, bond);
            if !path.is_file() {
                return Err(PointError::MissingFixture(path));
            }
            let text = std::fs::read_to_string(&path)
                .map_err(|e| PointError::Read { path: path.clone(), message: e.to_string() })?;
            Ok(parse_fcidump(&text).map_err(vqe_core::Error::from)?)
        }
        Source::Native(g) => {
            let geometry = match g {
                NativeGeometry::Hydrogen => MolecularGeometry::diatomic(1, 1, bond, 0, 1),
                NativeGeometry::TrihydrogenCation => MolecularGeometry::trihydrogen_cation(bond),
            }
            .map_err(vqe_core::Error::from)?;
            Ok(sto3g_integrals(&geometry).map_err(vqe_core::Error::from)?)
        }
    }
}

#[derive(Debug)]
pub struct PointRecord {
    pub bond_length: f64,
    pub n_qubits_full: Option<usize>,
    pub outcome: Result<PointResult, PointError>,
    pub wall_time: Duration,
}

pub fn run_single(source: &Source, bond: f64, pipeline: &PipelineConfig) -> PointRecord {
    let start = Instant::now();
    let mut n_full = None;
    let outcome = load_tensors(source, bond).and_then(|t| {
        n_full = Some(t.n_spin_orbitals());
        Ok(run_point(&t, pipeline)?)
    });
    PointRecord { bond_length: bond, n_qubits_full: n_full, outcome, wall_time: start.elapsed() }
}

/// Runs all points, concurrently up to the pool size, and returns records in
/// bond-length order.
pub fn run_scan(source: &Source, bonds: &[f64], pipeline: &PipelineConfig) -> Vec<PointRecord> {
    bonds.par_iter().map(|&d| run_single(source, d, pipeline)).collect()
}

pub const CSV_HEADER: [&str; 11] = [
    "bond_length_angstrom",
    "e_vqe_hartree",
    "e_ref_hartree",
    "e_fci_hartree",
    "err_vqe",
    "err_ref",
    "n_evaluations",
    "n_qubits",
    "converged",
    "stop_reason",
    "error",
];

pub fn write_csv<W: std::io::Write>(out: W, records: &[PointRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let bond = format!("{:.4}", r.bond_length);
        match &r.outcome {
            Ok(p) => w.write_record([
                bond,
                format!("{:.12}", p.e_vqe),
                format!("{:.12}", p.e_ref),
                format!("{:.12}", p.e_fci),
                format!("{:.6e}", p.err_vqe()),
                format!("{:.6e}", p.err_ref()),
                p.vqe.evaluations.to_string(),
                p.n_qubits.to_string(),
                p.vqe.converged().to_string(),
                format!("{:?}", p.vqe.reason),
                String::new(),
            ])?,
            Err(e) => {
                let mut row = vec![bond];
                row.extend(std::iter::repeat_n(String::new(), CSV_HEADER.len() - 2));
                row.push(e.to_string());
                w.write_record(row)?
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Human-readable summary of one point.
pub fn render_point(label: &str, r: &PointRecord, reduced: bool) -> String {
    let mut s = format!("molecule            {label}\nbond_length_angstrom {:.4}\n", r.bond_length);
    if let Some(n) = r.n_qubits_full {
        s += &format!("n_qubits_full       {n}\n");
        s += &format!("n_qubits_reduced    {}\n", if reduced { n - 2 } else { n });
    }
    match &r.outcome {
        Ok(p) => {
            s += &format!("e_vqe_hartree       {:.12}\n", p.e_vqe);
            s += &format!("e_ref_hartree       {:.12}\n", p.e_ref);
            s += &format!("e_fci_hartree       {:.12}\n", p.e_fci);
            s += &format!("err_vqe             {:.3e}\n", p.err_vqe());
            s += &format!("err_ref             {:.3e}\n", p.err_ref());
            s += &format!("n_evaluations       {}\n", p.vqe.evaluations);
            s += &format!("converged           {} ({:?})\n", p.vqe.converged(), p.vqe.reason);
        }
        Err(e) => s += &format!("error               {e}\n"),
    }
    s += &format!("wall_time_s         {:.3}\n", r.wall_time.as_secs_f64());
    s
}
