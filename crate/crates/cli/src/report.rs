//! Accuracy summary over scan CSVs.

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {message}")]
    Malformed { path: String, message: String },
    #[error("{0}: no successful scan rows")]
    Empty(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub molecule: String,
    pub points: usize,
    pub failed: usize,
    pub mean_abs_error: f64,
    /// `floor(log10(mean_abs_error))`; `None` for an exact zero.
    pub order: Option<i32>,
}

/// Mean `err_vqe` over the successful rows of one scan CSV.
pub fn summarize(molecule: &str, path_label: &str, text: &str) -> Result<AccuracyRow, ReportError> {
    let malformed = |message: String| ReportError::Malformed { path: path_label.to_string(), message };
    if text.trim().is_empty() {
        return Err(ReportError::Empty(path_label.to_string()));
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| malformed(e.to_string()))?.clone();
    let col =
        |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| malformed(format!("missing column {name}")));
    let (err_col, error_col) = (col("err_vqe")?, headers.iter().position(|h| h == "error"));
    let (mut sum, mut points, mut failed) = (0.0, 0usize, 0usize);
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| malformed(e.to_string()))?;
        let failed_row = error_col.and_then(|c| rec.get(c)).is_some_and(|e| !e.is_empty());
        if failed_row {
            failed += 1;
            continue;
        }
        let raw = rec.get(err_col).unwrap_or("");
        let v: f64 = raw.parse().map_err(|_| malformed(format!("row {}: err_vqe '{raw}' is not a number", i + 1)))?;
        if !(v >= 0.0) {
            return Err(malformed(format!("row {}: err_vqe must be non-negative", i + 1)));
        }
        sum += v;
        points += 1;
    }
    if points == 0 {
        return Err(ReportError::Empty(path_label.to_string()));
    }
    let mean = sum / points as f64;
    let order = (mean > 0.0).then(|| mean.log10().floor() as i32);
    Ok(AccuracyRow { molecule: molecule.to_string(), points, failed, mean_abs_error: mean, order })
}

pub fn summarize_file(path: &Path) -> Result<AccuracyRow, ReportError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ReportError::Malformed { path: label.clone(), message: e.to_string() })?;
    let molecule = path.file_stem().and_then(|s| s.to_str()).unwrap_or("?");
    summarize(molecule, &label, &text)
}

pub fn render(rows: &[AccuracyRow]) -> String {
    let width = rows.iter().map(|r| r.molecule.len()).max().unwrap_or(0).max(8);
    let mut s =
        format!("{:<width$}  {:>6}  {:>6}  {:>14}  {:>8}\n", "molecule", "points", "failed", "mean_abs_error", "order");
    for r in rows {
        let order = r.order.map_or("exact".to_string(), |k| format!("1e{k}"));
        s += &format!(
            "{:<width$}  {:>6}  {:>6}  {:>14.3e}  {:>8}\n",
            r.molecule, r.points, r.failed, r.mean_abs_error, order
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "bond_length_angstrom,e_vqe_hartree,e_ref_hartree,e_fci_hartree,err_vqe,err_ref,n_evaluations,n_qubits,converged,stop_reason,error\n";

    #[test]
    fn known_errors_give_order() {
        let text = format!(
            "{HEADER}0.7,-1,-1,-1,1e-5,1e-2,10,4,true,EnergyChange,\n0.8,-1,-1,-1,3e-5,1e-2,10,4,true,EnergyChange,\n"
        );
        let r = summarize("syn", "syn.csv", &text).unwrap();
        assert_eq!(r.points, 2);
        assert!((r.mean_abs_error - 2e-5).abs() < 1e-18);
        assert_eq!(r.order, Some(-5));
        assert!(render(&[r]).contains("1e-5"));
    }

    #[test]
    fn failed_rows_are_skipped() {
        let text = format!("{HEADER}0.7,,,,,,,,,,missing fixture\n0.8,-1,-1,-1,4e-9,1e-2,10,4,true,EnergyChange,\n");
        let r = summarize("m", "m.csv", &text).unwrap();
        assert_eq!((r.points, r.failed, r.order), (1, 1, Some(-9)));
    }

    #[test]
    fn empty_and_malformed() {
        assert!(matches!(summarize("e", "e.csv", ""), Err(ReportError::Empty(_))));
        assert!(matches!(summarize("e", "e.csv", HEADER), Err(ReportError::Empty(_))));
        assert!(matches!(summarize("b", "b.csv", "a,b\n1,2\n"), Err(ReportError::Malformed { .. })));
        let bad = format!("{HEADER}0.7,-1,-1,-1,abc,1e-2,10,4,true,EnergyChange,\n");
        assert!(matches!(summarize("b", "b.csv", &bad), Err(ReportError::Malformed { .. })));
    }
}
