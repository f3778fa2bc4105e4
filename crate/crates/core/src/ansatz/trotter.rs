//! Trotterized products of Pauli-string exponentials.
//!
//! A term `exp(i φ P)` is compiled as: basis change to Z on the support of
//! `P`, a CNOT ladder collecting parity onto the highest qubit, `RZ(−2φ)`,
//! then the ladder and basis change undone.

use num_complex::Complex64;

use super::circuit::{Angle, Circuit, Gate};
use super::{parameter_count, AnsatzError, Excitation};
use crate::mapping::{map_operator, MappingKind, OccupationVector};
use crate::pauli::{Pauli, PauliString, PauliSum};

const ANTI_HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrotterOrder {
    #[default]
    First,
    Second,
}

impl TryFrom<u32> for TrotterOrder {
    type Error = AnsatzError;

    fn try_from(order: u32) -> Result<Self, AnsatzError> {
        match order {
            1 => Ok(TrotterOrder::First),
            2 => Ok(TrotterOrder::Second),
            k => Err(AnsatzError::InvalidTrotter(format!("order must be 1 or 2, got {k}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrotterConfig {
    pub order: TrotterOrder,
    pub steps: usize,
}

impl Default for TrotterConfig {
    fn default() -> Self {
        TrotterConfig { order: TrotterOrder::First, steps: 1 }
    }
}

impl TrotterConfig {
    pub fn new(order: u32, steps: usize) -> Result<Self, AnsatzError> {
        if steps == 0 {
            return Err(AnsatzError::InvalidTrotter("at least one step is required".into()));
        }
        Ok(TrotterConfig { order: TrotterOrder::try_from(order)?, steps })
    }
}

/// `exp(i · angle · P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialTerm {
    pub string: PauliString,
    pub angle: Angle,
}

fn push_exponential(c: &mut Circuit, term: &ExponentialTerm) -> Result<(), AnsatzError> {
    let support = term.string.support();
    let Some(&last) = support.last() else {
        // Global phase only.
        return Ok(());
    };
    let mut pre = Vec::new();
    for &q in &support {
        match term.string.letter(q) {
            Pauli::X => pre.push(Gate::H(q)),
            Pauli::Y => {
                pre.push(Gate::Sdg(q));
                pre.push(Gate::H(q));
            }
            _ => {}
        }
    }
    for w in support.windows(2) {
        pre.push(Gate::Cnot { control: w[0], target: w[1] });
    }
    for g in &pre {
        c.push(*g)?;
    }
    let angle = Angle { scale: -2.0 * term.angle.scale, slot: term.angle.slot };
    c.push(Gate::Rz(last, angle))?;
    for g in pre.iter().rev() {
        c.push(g.inverse())?;
    }
    Ok(())
}

/// Expands `terms` into the product-formula sequence of `config`, with each
/// angle scaled by its step fraction.
pub fn trotter_schedule(terms: &[ExponentialTerm], config: TrotterConfig) -> Result<Vec<ExponentialTerm>, AnsatzError> {
    if config.steps == 0 {
        return Err(AnsatzError::InvalidTrotter("at least one step is required".into()));
    }
    let n = config.steps as f64;
    let scaled = |t: &ExponentialTerm, f: f64| ExponentialTerm {
        string: t.string,
        angle: Angle { scale: t.angle.scale * f, slot: t.angle.slot },
    };
    let mut out = Vec::new();
    for _ in 0..config.steps {
        match config.order {
            TrotterOrder::First => out.extend(terms.iter().map(|t| scaled(t, 1.0 / n))),
            TrotterOrder::Second => out.extend(terms.iter().chain(terms.iter().rev()).map(|t| scaled(t, 0.5 / n))),
        }
    }
    Ok(out)
}

/// Product formula over `terms` in the given order.
pub fn product_circuit(
    n_qubits: usize,
    n_parameters: usize,
    terms: &[ExponentialTerm],
    config: TrotterConfig,
) -> Result<Circuit, AnsatzError> {
    let mut c = Circuit::new(n_qubits, n_parameters);
    for t in trotter_schedule(terms, config)? {
        push_exponential(&mut c, &t)?;
    }
    Ok(c)
}

fn imaginary_part(term: &PauliString, coeff: Complex64) -> Result<f64, AnsatzError> {
    if coeff.re.abs() > ANTI_HERMITIAN_TOL {
        return Err(AnsatzError::NotAntiHermitian { term: term.to_string() });
    }
    Ok(coeff.im)
}

/// Circuit for `exp(G)` with numeric anti-Hermitian `G = Σ i b_s P_s`,
/// terms taken in canonical string order.
pub fn trotter_circuit(generator: &PauliSum, config: TrotterConfig) -> Result<Circuit, AnsatzError> {
    let mut terms = Vec::with_capacity(generator.len());
    for (p, &c) in generator.iter() {
        let b = imaginary_part(p, c)?;
        if !p.is_identity() {
            terms.push(ExponentialTerm { string: *p, angle: Angle::constant(b) });
        }
    }
    product_circuit(generator.num_qubits(), 0, &terms, config)
}

/// Exponential terms of the mapped cluster generator, grouped by excitation
/// in enumeration order. Strings within one excitation commute, so each
/// group is exact on its own and particle number is conserved.
pub fn uccsd_terms(
    excitations: &[Excitation],
    n_modes: usize,
    kind: MappingKind,
) -> Result<Vec<ExponentialTerm>, AnsatzError> {
    let mut out = Vec::new();
    for e in excitations {
        let mapped = map_operator(&e.generator(n_modes)?, kind)?;
        for (p, &c) in mapped.iter() {
            let b = imaginary_part(p, c)?;
            if !p.is_identity() {
                out.push(ExponentialTerm { string: *p, angle: Angle::parameter(e.slot, b) });
            }
        }
    }
    Ok(out)
}

/// Parameterized UCCSD circuit, without reference-state preparation.
pub fn uccsd_circuit(
    excitations: &[Excitation],
    n_modes: usize,
    kind: MappingKind,
    config: TrotterConfig,
) -> Result<Circuit, AnsatzError> {
    let terms = uccsd_terms(excitations, n_modes, kind)?;
    product_circuit(kind.qubit_count(n_modes), parameter_count(excitations), &terms, config)
}

/// X gates preparing the encoded reference determinant from `|0…0⟩`.
pub fn reference_state_circuit(
    n_modes: usize,
    n_alpha: usize,
    n_beta: usize,
    kind: MappingKind,
) -> Result<Circuit, AnsatzError> {
    if let Some(sector) = kind.reduction() {
        if sector.n_alpha != n_alpha || sector.n_beta != n_beta {
            return Err(AnsatzError::InconsistentMapping(format!(
                "register reduced for {}α + {}β, reference has {n_alpha}α + {n_beta}β",
                sector.n_alpha, sector.n_beta
            )));
        }
    }
    let occ = OccupationVector::hartree_fock(n_modes, n_alpha, n_beta).map_err(|_| AnsatzError::InvalidOccupation {
        n_alpha,
        n_beta,
        n_modes,
    })?;
    let index = kind.encode_occupation(&occ)?;
    let n_qubits = kind.qubit_count(n_modes);
    let mut c = Circuit::new(n_qubits, 0);
    for q in 0..n_qubits {
        if index >> q & 1 == 1 {
            c.push(Gate::X(q))?;
        }
    }
    Ok(c)
}
