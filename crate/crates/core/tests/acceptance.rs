//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vqe_core::ansatz::{
    enumerate_excitations, parameter_count, trotter_circuit, uccsd_circuit, Angle, Circuit, Gate, TrotterConfig,
};
use vqe_core::fci::{
    ground_energy_dense, ground_energy_iterative, lowest_eigenvalues, sector_ground_energy, LanczosConfig,
    SpectrumMethod, SpectrumRequest,
};
use vqe_core::fermion::{assemble_hamiltonian, FermionOperator, Ladder, LadderKind};
use vqe_core::integrals::{
    parse_fcidump, sto3g_integrals, write_fcidump, IntegralTensors, IntegralsError, MolecularGeometry,
};
use vqe_core::mapping::{map_operator, MappingKind};
use vqe_core::pauli::{Pauli, PauliString, PauliSum};
use vqe_core::simulator::{run_circuit, StateVector};
use vqe_core::vqe::{GradientMethod, OptimizerConfig};
use vqe_core::{run_point, Encoding, PipelineConfig, PointResult};

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Bond length and tensors of every `<label>_<d>.fcidump`, ascending.
fn fixtures(label: &str) -> Vec<(f64, IntegralTensors)> {
    let prefix = format!("{label}_");
    let mut out: Vec<(f64, IntegralTensors)> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .filter_map(|e| {
            let name = e.ok()?.file_name().into_string().ok()?;
            let d: f64 = name.strip_prefix(&prefix)?.strip_suffix(".fcidump")?.parse().ok()?;
            let text = std::fs::read_to_string(fixture_dir().join(&name)).ok()?;
            Some((d, parse_fcidump(&text).unwrap()))
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn fixture(label: &str, d: f64) -> IntegralTensors {
    let text = std::fs::read_to_string(fixture_dir().join(format!("{label}_{d:.4}.fcidump"))).unwrap();
    parse_fcidump(&text).unwrap()
}

struct Benchmark {
    e_rhf: f64,
    e_fci: f64,
}

fn benchmarks() -> BTreeMap<(String, String), Benchmark> {
    let text = std::fs::read_to_string(fixture_dir().join("benchmarks.csv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let key = (f[0].to_string(), f[1].to_string());
            (key, Benchmark { e_rhf: f[4].parse().unwrap(), e_fci: f[5].parse().unwrap() })
        })
        .collect()
}

fn parity_reduced() -> PipelineConfig {
    PipelineConfig { encoding: Encoding::Parity, reduce_two_qubits: true, ..Default::default() }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn monotone(trace: &[(usize, f64)], final_energy: f64) -> bool {
    trace.windows(2).all(|w| w[1].1 <= w[0].1 && w[1].0 > w[0].0) && trace.last().is_some_and(|t| t.1 == final_energy)
}

// ---------------------------------------------------------------- criteria

fn h2_native() -> Check {
    let geometry = MolecularGeometry::diatomic(1, 1, 0.7414, 0, 1).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let tensors = sto3g_integrals(&geometry).map_err(|e| e.to_string())?;
    let r = run_point(&tensors, &parity_reduced()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.n_qubits == 2, || format!("expected 2 qubits, got {}", r.n_qubits))?;
    ensure(r.err_vqe() <= 1e-8, || format!("|E_VQE - E_FCI| = {:.3e}", r.err_vqe()))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("E_VQE {:.10} E_FCI {:.10} err {:.1e} in {:.2?}", r.e_vqe, r.e_fci, r.err_vqe(), elapsed))
}

fn h3_cation(scan: &[(f64, PointResult)], elapsed: Duration) -> Check {
    ensure(scan.len() == 11, || format!("expected 11 points, got {}", scan.len()))?;
    ensure(elapsed < Duration::from_secs(300), || format!("scan took {elapsed:?}"))?;
    let (eq, r) = scan.iter().min_by(|a, b| a.1.e_fci.total_cmp(&b.1.e_fci)).unwrap();
    let interior = *eq > scan[0].0 && *eq < scan[scan.len() - 1].0;
    ensure(interior, || format!("minimum at scan edge {eq}"))?;
    ensure(r.err_vqe() <= 1e-6, || format!("equilibrium {eq}: err {:.3e}", r.err_vqe()))?;
    for (d, p) in scan {
        ensure(monotone(&p.vqe.trace, p.e_vqe), || format!("trace at {d} is not monotone"))?;
    }
    let worst = scan.iter().map(|(_, p)| p.err_vqe()).fold(0.0, f64::max);
    Ok(format!("equilibrium {eq:.2} Å err {:.1e}; scan max err {worst:.1e} in {elapsed:.1?}", r.err_vqe()))
}

fn qubit_counts() -> Check {
    let mut summary = Vec::new();
    for (label, d, expect) in
        [("h2", 0.7414, 4), ("h3p", 0.9, 6), ("ohm", 0.964, 12), ("hf", 0.917, 12), ("bh3", 1.19, 16)]
    {
        let t = fixture(label, d);
        let h = assemble_hamiltonian(&t);
        let full = map_operator(&h, MappingKind::JordanWigner).map_err(|e| e.to_string())?.num_qubits();
        let parity = map_operator(&h, MappingKind::parity()).map_err(|e| e.to_string())?.num_qubits();
        let reduced = map_operator(&h, MappingKind::reduced_parity(t.n_alpha(), t.n_beta()))
            .map_err(|e| e.to_string())?
            .num_qubits();
        ensure(full == expect && parity == expect && reduced == expect - 2, || {
            format!("{label}: {full}/{parity}/{reduced}, expected {expect}/{expect}/{}", expect - 2)
        })?;
        summary.push(format!("{label} {full}->{reduced}"));
    }
    Ok(summary.join(", "))
}

fn random_number_conserving(rng: &mut ChaCha8Rng, n: usize) -> FermionOperator {
    let mut op = FermionOperator::zero(n);
    let coeff = |rng: &mut ChaCha8Rng| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    for _ in 0..rng.gen_range(1..6) {
        let (p, q) = (rng.gen_range(0..n), rng.gen_range(0..n));
        op.add_term(vec![Ladder::create(p), Ladder::annihilate(q)], coeff(rng)).unwrap();
    }
    for _ in 0..rng.gen_range(1..6) {
        let f = vec![
            Ladder::create(rng.gen_range(0..n)),
            Ladder::create(rng.gen_range(0..n)),
            Ladder::annihilate(rng.gen_range(0..n)),
            Ladder::annihilate(rng.gen_range(0..n)),
        ];
        op.add_term(f, coeff(rng)).unwrap();
    }
    op.add(&op.adjoint()).unwrap()
}

fn isospectrality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let op = random_number_conserving(&mut rng, 4);
        let spectrum = |kind| -> Result<Vec<f64>, String> {
            let q = map_operator(&op, kind).map_err(|e| e.to_string())?;
            let req = SpectrumRequest { operator: &q, count: 16, method: SpectrumMethod::Dense };
            lowest_eigenvalues(&req).map_err(|e| e.to_string())
        };
        let (jw, par) = (spectrum(MappingKind::JordanWigner)?, spectrum(MappingKind::parity())?);
        ensure(jw.len() == 16 && par.len() == 16, || format!("operator {k}: short spectrum"))?;
        let diff = jw.iter().zip(&par).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(diff);
        ensure(diff <= 1e-10, || format!("operator {k}: spectra differ by {diff:.3e}"))?;
    }
    Ok(format!("50 operators, max deviation {worst:.1e}"))
}

fn reduction() -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for label in ["h2", "h3p"] {
        for (d, t) in fixtures(label) {
            let (na, nb) = (t.n_alpha(), t.n_beta());
            let h = assemble_hamiltonian(&t);
            let sector = |kind: MappingKind| -> Result<f64, String> {
                let q = map_operator(&h, kind).map_err(|e| e.to_string())?;
                sector_ground_energy(&q, kind, na, nb).map_err(|e| e.to_string())
            };
            let full = sector(MappingKind::parity())?;
            let reduced = sector(MappingKind::reduced_parity(na, nb))?;
            let diff = (full - reduced).abs();
            worst = worst.max(diff);
            count += 1;
            ensure(diff <= 1e-10, || format!("{label} {d}: {full} vs {reduced}"))?;
        }
    }
    Ok(format!("{count} fixtures, max deviation {worst:.1e}"))
}

#[derive(Clone)]
struct ScanRow {
    label: &'static str,
    bond: f64,
    result: PointResult,
}

fn variational_bound(rows: &[ScanRow]) -> Check {
    let mut by_label: BTreeMap<&str, usize> = BTreeMap::new();
    for r in rows {
        let p = &r.result;
        ensure(p.e_vqe >= p.e_fci - 1e-9, || {
            format!("{} {}: E_VQE {} below E_FCI {}", r.label, r.bond, p.e_vqe, p.e_fci)
        })?;
        ensure(p.err_vqe() <= p.err_ref(), || {
            format!("{} {}: err_vqe {:.3e} > err_ref {:.3e}", r.label, r.bond, p.err_vqe(), p.err_ref())
        })?;
        *by_label.entry(r.label).or_default() += 1;
    }
    let counts: Vec<String> = by_label.iter().map(|(l, n)| format!("{l} {n}")).collect();
    Ok(format!("{} rows ({})", rows.len(), counts.join(", ")))
}

fn benchmark_agreement(rows: &[ScanRow]) -> Check {
    let table = benchmarks();
    let mut worst_fci: f64 = 0.0;
    let mut worst_ref: f64 = 0.0;
    for r in rows {
        let key = (r.label.to_string(), format!("{:.4}", r.bond));
        let b = table.get(&key).ok_or_else(|| format!("no benchmark for {key:?}"))?;
        worst_fci = worst_fci.max((r.result.e_fci - b.e_fci).abs());
        worst_ref = worst_ref.max((r.result.e_ref - b.e_rhf).abs());
    }
    ensure(worst_fci <= 1e-8 && worst_ref <= 1e-8, || {
        format!("FCI dev {worst_fci:.3e}, reference dev {worst_ref:.3e}")
    })?;
    Ok(format!("{} rows, FCI dev {worst_fci:.1e}, reference dev {worst_ref:.1e}", rows.len()))
}

/// `a_j` / `a†_j` on a basis state: bit j of the index is mode j's occupation,
/// with the sign counting occupied modes below j.
fn ladder_on_basis(l: Ladder, b: usize) -> Option<(usize, f64)> {
    let j = l.mode;
    let occupied = b >> j & 1 == 1;
    let wanted = matches!(l.kind, LadderKind::Annihilate);
    if occupied != wanted {
        return None;
    }
    let sign = if (b & ((1 << j) - 1)).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((b ^ (1 << j), sign))
}

fn fermion_matrix(op: &FermionOperator) -> DMatrix<Complex64> {
    let dim = 1 << op.n_modes();
    let mut m = DMatrix::zeros(dim, dim);
    for (factors, &coeff) in op.iter() {
        for col in 0..dim {
            let mut state = Some((col, 1.0));
            for &l in factors.iter().rev() {
                state = state.and_then(|(b, s)| ladder_on_basis(l, b).map(|(b2, s2)| (b2, s * s2)));
            }
            if let Some((row, s)) = state {
                m[(row, col)] += coeff * s;
            }
        }
    }
    m
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn letter_matrix(p: Pauli) -> DMatrix<Complex64> {
    let (o, z, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::X => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        Pauli::Z => DMatrix::from_row_slice(2, 2, &[z, o, o, -z]),
    }
}

fn algebra_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let n = rng.gen_range(1..=4);
        let mut op = FermionOperator::zero(n);
        for _ in 0..rng.gen_range(1..4) {
            let len = rng.gen_range(1..=4);
            let factors: Vec<Ladder> = (0..len)
                .map(|_| {
                    let mode = rng.gen_range(0..n);
                    if rng.gen_bool(0.5) {
                        Ladder::create(mode)
                    } else {
                        Ladder::annihilate(mode)
                    }
                })
                .collect();
            op.add_term(factors, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap();
        }
        let oracle = fermion_matrix(&op);
        let ordered = op.normal_order();
        let from_ordered = fermion_matrix(&ordered);
        let mapped = map_operator(&ordered, MappingKind::JordanWigner).map_err(|e| e.to_string())?;
        let from_pauli = mapped.to_matrix().map_err(|e| e.to_string())?.to_dense();
        let diff = max_abs_diff(&oracle, &from_ordered).max(max_abs_diff(&oracle, &from_pauli));
        worst = worst.max(diff);
        ensure(diff <= 1e-12, || format!("operator {k}: deviation {diff:.3e}"))?;
    }
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    for &a in &letters {
        for &b in &letters {
            let (phase, p) = PauliString::from_letters(&[a]).multiply(&PauliString::from_letters(&[b])).unwrap();
            let got = letter_matrix(p.letter(0)) * phase.to_complex();
            let want = letter_matrix(a) * letter_matrix(b);
            ensure(got == want, || format!("{a:?}{b:?} product mismatch"))?;
        }
    }
    Ok(format!("100 operators max deviation {worst:.1e}; 16/16 Pauli products exact"))
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let mut amps: Vec<Complex64> = (0..1 << n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    StateVector::from_amplitudes(amps).unwrap()
}

fn random_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let mut circ = Circuit::new(n, 0);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let a = Angle::constant(rng.gen_range(-4.0..4.0));
        let gate = match rng.gen_range(0..8) {
            0 => Gate::X(q),
            1 => Gate::H(q),
            2 => Gate::S(q),
            3 => Gate::Sdg(q),
            4 => Gate::Rx(q, a),
            5 => Gate::Ry(q, a),
            6 => Gate::Rz(q, a),
            _ => {
                let t = (q + rng.gen_range(1..n)) % n;
                Gate::Cnot { control: q, target: t }
            }
        };
        circ.push(gate).unwrap();
    }
    circ
}

fn simulator_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut circuits: Vec<(Circuit, Vec<f64>)> =
        (0..40).map(|k| (random_circuit(&mut rng, 2 + k % 6, 200), vec![])).collect();
    for (m, na, nb) in [(4, 1, 1), (6, 1, 1), (8, 2, 2)] {
        let ex = enumerate_excitations(m, na, nb).unwrap();
        for kind in [MappingKind::JordanWigner, MappingKind::parity(), MappingKind::reduced_parity(na, nb)] {
            for order in [1, 2] {
                let circ = uccsd_circuit(&ex, m, kind, TrotterConfig::new(order, 2).unwrap()).unwrap();
                let theta: Vec<f64> = (0..parameter_count(&ex)).map(|_| rng.gen_range(-1.0..1.0)).collect();
                circuits.push((circ, theta));
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (k, (circ, theta)) in circuits.iter().enumerate() {
        let mut state = random_state(&mut rng, circ.n_qubits());
        for g in circ.gates() {
            state.apply_gate(g, theta).map_err(|e| e.to_string())?;
            let dev = (1.0 - state.norm().powi(2)).abs();
            worst = worst.max(dev);
            ensure(dev < 1e-12, || format!("circuit {k}: norm deviation {dev:.3e}"))?;
        }
    }

    let phi = 0.37;
    let zz = PauliString::from_letters(&[Pauli::Z, Pauli::Z]);
    let generator = PauliSum::from_terms(2, [(zz, c(0.0, phi))]).unwrap();
    let circ = trotter_circuit(&generator, TrotterConfig::default()).map_err(|e| e.to_string())?;
    let dense_gen = PauliSum::from_terms(2, [(zz, c(0.0, phi))]).unwrap().to_matrix().unwrap().to_dense();
    let unitary = dense_gen.exp();
    let mut exp_dev: f64 = 0.0;
    for _ in 0..8 {
        let psi = random_state(&mut rng, 2);
        let got = run_circuit(&circ, &psi, &[]).map_err(|e| e.to_string())?;
        let want = &unitary * nalgebra::DVector::from_column_slice(psi.amplitudes());
        let dev = got.amplitudes().iter().zip(want.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        exp_dev = exp_dev.max(dev);
    }
    ensure(exp_dev <= 1e-12, || format!("ZZ exponential deviation {exp_dev:.3e}"))?;
    Ok(format!("{} circuits, max norm deviation {worst:.1e}; ZZ exponential deviation {exp_dev:.1e}", circuits.len()))
}

fn eigensolvers() -> Check {
    let mut instances: Vec<(String, PauliSum)> = Vec::new();
    for label in ["h2", "h3p"] {
        for (d, t) in fixtures(label) {
            let h = assemble_hamiltonian(&t);
            for (name, kind) in [
                ("jw", MappingKind::JordanWigner),
                ("parity", MappingKind::parity()),
                ("reduced", MappingKind::reduced_parity(t.n_alpha(), t.n_beta())),
            ] {
                instances.push((format!("{label} {d} {name}"), map_operator(&h, kind).unwrap()));
            }
        }
    }
    for label in ["hf", "ohm"] {
        for (d, t) in fixtures(label) {
            let kind = MappingKind::reduced_parity(t.n_alpha(), t.n_beta());
            instances.push((format!("{label} {d} reduced"), map_operator(&assemble_hamiltonian(&t), kind).unwrap()));
        }
    }
    for (label, d) in [("hf", 0.917), ("ohm", 0.964)] {
        let h = map_operator(&assemble_hamiltonian(&fixture(label, d)), MappingKind::JordanWigner).unwrap();
        instances.push((format!("{label} {d} jw"), h));
    }
    let mut worst: f64 = 0.0;
    for (name, h) in &instances {
        let dense = ground_energy_dense(h).map_err(|e| format!("{name}: {e}"))?;
        let iterative = ground_energy_iterative(h, &LanczosConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        let diff = (dense - iterative).abs();
        worst = worst.max(diff);
        ensure(diff <= 1e-10, || format!("{name}: dense {dense} vs iterative {iterative}"))?;
    }

    let t = fixture("bh3", 1.19);
    let h = map_operator(&assemble_hamiltonian(&t), MappingKind::reduced_parity(t.n_alpha(), t.n_beta())).unwrap();
    let start = Instant::now();
    let e = ground_energy_iterative(&h, &LanczosConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(h.num_qubits() == 14, || format!("BH3 reduced to {} qubits", h.num_qubits()))?;
    ensure(elapsed < Duration::from_secs(60), || format!("14-qubit solve took {elapsed:?}"))?;
    let reference = benchmarks()[&("bh3".to_string(), "1.1900".to_string())].e_fci;
    ensure((e - reference).abs() <= 1e-8, || format!("14-qubit energy {e} vs benchmark {reference}"))?;
    Ok(format!("{} instances max deviation {worst:.1e}; 14-qubit BH3 in {elapsed:.2?}", instances.len()))
}

fn tensors_close(a: &IntegralTensors, b: &IntegralTensors, tol: f64) -> bool {
    let m = a.n_spin_orbitals();
    if m != b.n_spin_orbitals() || (a.n_alpha(), a.n_beta()) != (b.n_alpha(), b.n_beta()) {
        return false;
    }
    if (a.core_energy() - b.core_energy()).abs() > tol {
        return false;
    }
    let one = (0..m).all(|p| (0..m).all(|q| (a.one_body(p, q) - b.one_body(p, q)).abs() <= tol));
    one && (0..m).all(|p| {
        (0..m).all(|q| (0..m).all(|r| (0..m).all(|s| (a.two_body(p, q, r, s) - b.two_body(p, q, r, s)).abs() <= tol)))
    })
}

type ErrorMatch = fn(&IntegralsError) -> bool;

fn fcidump_round_trip() -> Check {
    let mut count = 0;
    for label in ["h2", "h3p", "hf", "ohm", "bh3"] {
        for (d, t) in fixtures(label) {
            let text = write_fcidump(&t).map_err(|e| e.to_string())?;
            let back = parse_fcidump(&text).map_err(|e| format!("{label} {d}: {e}"))?;
            ensure(tensors_close(&t, &back, 1e-12), || format!("{label} {d}: round trip drifted"))?;
            count += 1;
        }
    }
    let header = "&FCI NORB=2,NELEC=2,MS2=0\n&END\n";
    let cases: Vec<(String, ErrorMatch)> = vec![
        (String::new(), |e| matches!(e, IntegralsError::MalformedHeader(_))),
        ("NORB=2,NELEC=2\n&END\n".into(), |e| matches!(e, IntegralsError::MalformedHeader(_))),
        ("&FCI NELEC=2,MS2=0\n&END\n".into(), |e| matches!(e, IntegralsError::MalformedHeader(_))),
        ("&FCI NORB=2,NELEC=2,MS2=0\n0.5 1 1 1 1\n".into(), |e| matches!(e, IntegralsError::MalformedHeader(_))),
        ("&FCI NORB=2,NELEC=5,MS2=1\n&END\n".into(), |e| matches!(e, IntegralsError::MalformedHeader(_))),
        (format!("{header}1.0 3 1 1 1\n"), |e| matches!(e, IntegralsError::IndexOutOfRange { .. })),
        (format!("{header}abc 1 1 1 1\n"), |e| matches!(e, IntegralsError::NonNumeric { .. })),
        (format!("{header}1.0 1 1 1\n"), |e| matches!(e, IntegralsError::MalformedRecord { .. })),
        (format!("{header}0.5 1 2 1 2\n0.6 2 1 2 1\n"), |e| matches!(e, IntegralsError::ConflictingEntry { .. })),
    ];
    for (text, expected) in &cases {
        match parse_fcidump(text) {
            Ok(_) => return Err(format!("accepted malformed input {text:?}")),
            Err(e) => ensure(expected(&e), || format!("{text:?}: unexpected error {e}"))?,
        }
    }
    Ok(format!("{count} fixtures round-trip; {} malformed inputs rejected", cases.len()))
}

// ---------------------------------------------------------------- driver

fn scan(label: &'static str, config: &PipelineConfig) -> Result<Vec<ScanRow>, String> {
    fixtures(label)
        .into_iter()
        .map(|(bond, t)| {
            let result = run_point(&t, config).map_err(|e| format!("{label} {bond}: {e}"))?;
            Ok(ScanRow { label, bond, result })
        })
        .collect()
}

fn guarded(f: impl FnOnce() -> Check) -> Check {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    })
}

fn guarded_rows(f: impl FnOnce() -> Result<Vec<ScanRow>, String>) -> Result<Vec<ScanRow>, String> {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("scan panicked".into()))
}

fn main() {
    let suite_start = Instant::now();
    let mut results: Vec<(String, Check)> = Vec::new();
    let mut record = |name: &str, check: Check| {
        match &check {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => println!("FAIL  {name}: {detail}"),
        }
        results.push((name.to_string(), check));
    };

    record("1 H2 native end-to-end", guarded(h2_native));

    let h3_start = Instant::now();
    let h3_rows = guarded_rows(|| scan("h3p", &PipelineConfig::default()));
    let h3_elapsed = h3_start.elapsed();
    record(
        "2 H3+ equilibrium accuracy and scan",
        h3_rows.as_ref().map_err(Clone::clone).and_then(|rows| {
            let pts: Vec<(f64, PointResult)> = rows.iter().map(|r| (r.bond, r.result.clone())).collect();
            guarded(|| h3_cation(&pts, h3_elapsed))
        }),
    );
    record("3 qubit counts", guarded(qubit_counts));
    record("4 mapping isospectrality", guarded(isospectrality));
    record("5 two-qubit reduction", guarded(reduction));

    let rows = guarded_rows(|| {
        let mut rows = h3_rows.clone()?;
        let fd = PipelineConfig::default();
        for label in ["h2", "hf", "ohm"] {
            rows.extend(scan(label, &fd)?);
        }
        let adjoint = PipelineConfig {
            optimizer: OptimizerConfig { gradient: GradientMethod::Adjoint, ..Default::default() },
            ..parity_reduced()
        };
        rows.extend(scan("bh3", &adjoint)?);
        Ok(rows)
    });
    match rows {
        Ok(rows) => {
            record("6 variational bound on every scan row", guarded(|| variational_bound(&rows)));
            record("  benchmark energies", guarded(|| benchmark_agreement(&rows)));
        }
        Err(e) => record("6 variational bound on every scan row", Err(e)),
    }
    record("7 normal ordering and Pauli algebra", guarded(algebra_oracles));
    record("8 simulator soundness", guarded(simulator_soundness));
    record("9 dense vs iterative eigensolver", guarded(eigensolvers));
    record("10 FCIDUMP round trip", guarded(fcidump_round_trip));

    let failed = results.iter().filter(|(_, r)| r.is_err()).count();
    println!("{} passed, {failed} failed in {:.1?}", results.len() - failed, suite_start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
