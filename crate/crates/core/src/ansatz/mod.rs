//! Unitary coupled-cluster singles and doubles.
//!
//! The cluster operator `T(θ)` collects single excitations `a†_k a_i` and
//! double excitations `a†_k a†_k' a_i a_j` from occupied spin orbitals
//! `i < j` into virtual spin orbitals `k < k'`. The ansatz unitary is
//! `exp(T − T†)`, realized as a Trotter product of Pauli-string
//! exponentials (see [`trotter`]).

mod circuit;
pub mod trotter;

pub use circuit::{Angle, Circuit, Gate};
pub use trotter::{
    product_circuit, reference_state_circuit, trotter_circuit, trotter_schedule, uccsd_circuit, uccsd_terms,
    ExponentialTerm, TrotterConfig, TrotterOrder,
};

use std::collections::HashMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::fermion::{FermionError, FermionOperator, Ladder};
use crate::mapping::MappingError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnsatzError {
    #[error("occupation {n_alpha}α + {n_beta}β is invalid for {n_modes} spin orbitals")]
    InvalidOccupation { n_alpha: usize, n_beta: usize, n_modes: usize },
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("generator term {term} is not anti-Hermitian")]
    NotAntiHermitian { term: String },
    #[error("qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("parameter slot {slot} out of range for {n_parameters} parameters")]
    UnknownParameter { slot: usize, n_parameters: usize },
    #[error("reference occupation does not match the mapping: {0}")]
    InconsistentMapping(String),
    #[error("trotter configuration invalid: {0}")]
    InvalidTrotter(String),
    #[error(transparent)]
    Fermion(#[from] FermionError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcitationKind {
    Single,
    Double,
}

/// How excitation amplitudes map onto parameter slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParameterTying {
    /// Spin-flip partners share a slot (α↔β mirror images of the same
    /// spatial excitation).
    #[default]
    SpinTied,
    /// One slot per excitation.
    Independent,
}

/// One term of `T(θ)`: occupied spin orbitals are vacated in favour of
/// virtual ones; both lists are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Excitation {
    pub occupied: Vec<usize>,
    pub virtuals: Vec<usize>,
    pub slot: usize,
}

impl Excitation {
    pub fn kind(&self) -> ExcitationKind {
        if self.occupied.len() == 1 {
            ExcitationKind::Single
        } else {
            ExcitationKind::Double
        }
    }

    /// `a†_k a_i` or `a†_k a†_k' a_i a_j`.
    pub fn operator(&self, n_modes: usize) -> Result<FermionOperator, AnsatzError> {
        let mut factors: Vec<Ladder> = self.virtuals.iter().map(|&k| Ladder::create(k)).collect();
        factors.extend(self.occupied.iter().map(|&i| Ladder::annihilate(i)));
        Ok(FermionOperator::term(n_modes, &factors, Complex64::new(1.0, 0.0))?)
    }

    /// Anti-Hermitian generator `τ − τ†` for unit amplitude.
    pub fn generator(&self, n_modes: usize) -> Result<FermionOperator, AnsatzError> {
        let tau = self.operator(n_modes)?;
        Ok(tau.add(&tau.adjoint().scale(Complex64::new(-1.0, 0.0)))?)
    }
}

/// Spin-conserving singles then doubles in lexicographic index order, with
/// spin-flip partners tied to a common parameter slot.
pub fn enumerate_excitations(
    n_spin_orbitals: usize,
    n_alpha: usize,
    n_beta: usize,
) -> Result<Vec<Excitation>, AnsatzError> {
    enumerate_excitations_with(n_spin_orbitals, n_alpha, n_beta, ParameterTying::SpinTied)
}

pub fn enumerate_excitations_with(
    n_spin_orbitals: usize,
    n_alpha: usize,
    n_beta: usize,
    tying: ParameterTying,
) -> Result<Vec<Excitation>, AnsatzError> {
    let m = n_spin_orbitals;
    let n = m / 2;
    if m == 0 || !m.is_multiple_of(2) || n_alpha > n || n_beta > n {
        return Err(AnsatzError::InvalidOccupation { n_alpha, n_beta, n_modes: m });
    }
    let occupied: Vec<usize> = (0..n_alpha).chain(n..n + n_beta).collect();
    let virtuals: Vec<usize> = (n_alpha..n).chain(n + n_beta..m).collect();
    let spin = |p: usize| p / n;

    let mut list: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for &i in &occupied {
        for &k in &virtuals {
            if spin(i) == spin(k) {
                list.push((vec![i], vec![k]));
            }
        }
    }
    for (a, &i) in occupied.iter().enumerate() {
        for &j in &occupied[a + 1..] {
            for (b, &k) in virtuals.iter().enumerate() {
                for &l in &virtuals[b + 1..] {
                    if spin(i) + spin(j) == spin(k) + spin(l) {
                        list.push((vec![i, j], vec![k, l]));
                    }
                }
            }
        }
    }
    list.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.cmp(y)));

    let flip = |p: usize| (p + n) % m;
    let mut slots: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
    let mut out = Vec::with_capacity(list.len());
    for (occ, virt) in list {
        let key = match tying {
            ParameterTying::Independent => (occ.clone(), virt.clone()),
            ParameterTying::SpinTied => {
                let mut po: Vec<usize> = occ.iter().map(|&p| flip(p)).collect();
                let mut pv: Vec<usize> = virt.iter().map(|&p| flip(p)).collect();
                po.sort_unstable();
                pv.sort_unstable();
                std::cmp::min((occ.clone(), virt.clone()), (po, pv))
            }
        };
        let next = slots.len();
        let slot = *slots.entry(key).or_insert(next);
        out.push(Excitation { occupied: occ, virtuals: virt, slot });
    }
    Ok(out)
}

/// Number of distinct parameter slots.
pub fn parameter_count(excitations: &[Excitation]) -> usize {
    excitations.iter().map(|e| e.slot + 1).max().unwrap_or(0)
}

/// `T(θ) − T†(θ)` with one amplitude per parameter slot.
pub fn build_generator(
    excitations: &[Excitation],
    theta: &[f64],
    n_modes: usize,
) -> Result<FermionOperator, AnsatzError> {
    let expected = parameter_count(excitations);
    if theta.len() != expected {
        return Err(AnsatzError::ParameterCount { expected, got: theta.len() });
    }
    let mut g = FermionOperator::zero(n_modes);
    for e in excitations {
        let amp = theta[e.slot];
        if amp != 0.0 {
            g = g.add(&e.generator(n_modes)?.scale(Complex64::new(amp, 0.0)))?;
        }
    }
    Ok(g.simplify())
}
