use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vqe-chem"))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .and_then(|v| v.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("{key} missing in\n{text}"))
}

#[test]
fn native_h2_single_point() {
    let o = run(&[
        "single-point",
        "--geometry",
        "h2",
        "--bond-length",
        "0.7414",
        "--mapping",
        "parity",
        "--reduce-two-qubits",
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert_eq!(field(&text, "n_qubits_full"), 4.0);
    assert_eq!(field(&text, "n_qubits_reduced"), 2.0);
    assert!(field(&text, "err_vqe") <= 1e-8);
}

#[test]
fn fixture_scan_writes_sorted_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let dir_str = fixtures().display().to_string();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let out = dir.path().join(format!("h2_{i}.csv"));
        let o = run(&[
            "scan",
            "--fixture-dir",
            &dir_str,
            "--label",
            "h2",
            "--bond-lengths",
            "0.9,0.5,0.7414",
            "--threads",
            threads,
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{o:?}");
        outputs.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let bonds: Vec<&str> = outputs[0].lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(bonds, ["0.5000", "0.7414", "0.9000"]);
    assert!(outputs[0].starts_with(
        "bond_length_angstrom,e_vqe_hartree,e_ref_hartree,e_fci_hartree,err_vqe,err_ref,n_evaluations,n_qubits"
    ));
}

#[test]
fn missing_fixture_fails_point_but_writes_rest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = run(&[
        "scan",
        "--fixture-dir",
        &fixtures().display().to_string(),
        "--label",
        "h2",
        "--bond-lengths",
        "0.7414,3.3333",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let csv = std::fs::read_to_string(out).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(2).unwrap().contains("missing fixture"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(
        &cfg,
        format!(
            "[source]\nfixture_dir = {}\nlabel = h2\n\n[mapping]\nkind = parity\nreduce_two_qubits = true\n",
            fixtures().display()
        ),
    )
    .unwrap();
    let o = run(&["single-point", "--config", cfg.to_str().unwrap(), "--bond-length", "0.7414"]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(field(&stdout(&o), "n_qubits_reduced"), 2.0);
    // Flag overrides the file; Jordan-Wigner cannot be reduced.
    let o = run(&["single-point", "--config", cfg.to_str().unwrap(), "--bond-length", "0.7414", "--mapping", "jw"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_inputs_exit_with_two() {
    assert_eq!(
        run(&["single-point", "--geometry", "h2", "--bond-length", "0.7", "--trotter-order", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["single-point", "--bond-length", "0.7"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--geometry", "h2", "--bond-lengths", "-1,0.5"]).status.code(), Some(2));
    assert_eq!(
        run(&["single-point", "--geometry", "h2", "--bond-length", "0.7", "--tol-energy", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["single-point", "--config", "/nonexistent/run.ini", "--bond-length", "0.7"]).status.code(),
        Some(2)
    );
}

#[test]
fn report_summarizes_and_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let header = "bond_length_angstrom,e_vqe_hartree,e_ref_hartree,e_fci_hartree,err_vqe,err_ref,n_evaluations,n_qubits,converged,stop_reason,error\n";
    let good = dir.path().join("syn.csv");
    std::fs::write(
        &good,
        format!(
            "{header}0.7,-1,-1,-1,2e-7,1e-2,5,4,true,EnergyChange,\n0.8,-1,-1,-1,4e-7,1e-2,5,4,true,EnergyChange,\n"
        ),
    )
    .unwrap();
    let o = run(&["report", good.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let line = text.lines().find(|l| l.starts_with("syn")).unwrap();
    assert!(line.contains("3.000e-7") && line.ends_with("1e-7"), "{line}");

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(run(&["report", empty.to_str().unwrap()]).status.code(), Some(2));
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, format!("{header}0.7,-1,-1,-1,oops,1e-2,5,4,true,EnergyChange,\n")).unwrap();
    assert_eq!(run(&["report", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn scan_then_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h3p.csv");
    let o = run(&[
        "scan",
        "--fixture-dir",
        &fixtures().display().to_string(),
        "--label",
        "h3p",
        "--bond-lengths",
        "0.9",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    let o = run(&["report", out.to_str().unwrap()]);
    assert!(o.status.success());
    let line = stdout(&o).lines().find(|l| l.starts_with("h3p")).unwrap().to_string();
    let order: i32 = line.rsplit("1e").next().unwrap().trim().parse().unwrap();
    assert!(order <= -6, "{line}");
}
