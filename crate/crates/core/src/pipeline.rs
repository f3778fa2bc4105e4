//! End-to-end VQE for one molecular point: integrals to Hamiltonian, ansatz,
//! optimization and exact reference.

use crate::ansatz::{
    enumerate_excitations_with, parameter_count, product_circuit, reference_state_circuit, trotter_schedule,
    uccsd_terms, Circuit, Excitation, ParameterTying, TrotterConfig,
};
use crate::fci::sector_ground_energy;
use crate::fermion::assemble_hamiltonian;
use crate::integrals::{reference_energy, IntegralTensors};
use crate::mapping::{map_operator, MappingKind};
use crate::pauli::PauliSum;
use crate::vqe::{vqe_minimize, EnergyObjective, OptimizerConfig, VqeResult};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    #[default]
    JordanWigner,
    Parity,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PipelineConfig {
    pub encoding: Encoding,
    /// Remove the two spin-parity qubits (parity encoding only).
    pub reduce_two_qubits: bool,
    pub trotter: TrotterConfig,
    pub optimizer: OptimizerConfig,
    pub tying: ParameterTying,
}

impl PipelineConfig {
    pub fn mapping_kind(&self, n_alpha: usize, n_beta: usize) -> Result<MappingKind, Error> {
        match (self.encoding, self.reduce_two_qubits) {
            (Encoding::JordanWigner, false) => Ok(MappingKind::JordanWigner),
            (Encoding::JordanWigner, true) => {
                Err(Error::Config("two-qubit reduction requires the parity encoding".into()))
            }
            (Encoding::Parity, false) => Ok(MappingKind::parity()),
            (Encoding::Parity, true) => Ok(MappingKind::reduced_parity(n_alpha, n_beta)),
        }
    }
}

/// Mapped Hamiltonian and compiled ansatz for one set of integrals.
#[derive(Debug, Clone)]
pub struct VqeProblem {
    pub kind: MappingKind,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub hamiltonian: PauliSum,
    pub excitations: Vec<Excitation>,
    pub reference: Circuit,
    pub ansatz: Circuit,
    pub objective: EnergyObjective,
    pub reference_energy: f64,
}

impl VqeProblem {
    pub fn build(tensors: &IntegralTensors, config: &PipelineConfig) -> Result<Self, Error> {
        let (na, nb) = (tensors.n_alpha(), tensors.n_beta());
        let m = tensors.n_spin_orbitals();
        let kind = config.mapping_kind(na, nb)?;
        let hamiltonian = map_operator(&assemble_hamiltonian(tensors), kind)?;
        let excitations = enumerate_excitations_with(m, na, nb, config.tying)?;
        let reference = reference_state_circuit(m, na, nb, kind)?;
        let n_qubits = kind.qubit_count(m);
        let n_params = parameter_count(&excitations);
        let terms = uccsd_terms(&excitations, m, kind)?;
        let ansatz = product_circuit(n_qubits, n_params, &terms, config.trotter)?;
        // The objective applies each exponential directly; the gate circuit
        // realizes the same unitary and is kept for inspection.
        let schedule = trotter_schedule(&terms, config.trotter)?;
        let objective = EnergyObjective::from_schedule(hamiltonian.clone(), reference.clone(), n_params, schedule)?;
        Ok(VqeProblem {
            kind,
            n_alpha: na,
            n_beta: nb,
            hamiltonian,
            excitations,
            reference,
            ansatz,
            objective,
            reference_energy: reference_energy(tensors)?,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.num_qubits()
    }

    pub fn n_parameters(&self) -> usize {
        parameter_count(&self.excitations)
    }

    /// Lowest eigenvalue in the electron-number sector of the reference.
    pub fn exact_energy(&self) -> Result<f64, Error> {
        Ok(sector_ground_energy(&self.hamiltonian, self.kind, self.n_alpha, self.n_beta)?)
    }

    pub fn minimize(&self, optimizer: &OptimizerConfig) -> Result<VqeResult, Error> {
        Ok(vqe_minimize(&self.objective, optimizer)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub e_vqe: f64,
    pub e_ref: f64,
    pub e_fci: f64,
    pub n_qubits: usize,
    pub vqe: VqeResult,
}

impl PointResult {
    pub fn err_vqe(&self) -> f64 {
        (self.e_vqe - self.e_fci).abs()
    }

    pub fn err_ref(&self) -> f64 {
        (self.e_ref - self.e_fci).abs()
    }
}

/// Builds, optimizes and checks one point against the exact energy.
pub fn run_point(tensors: &IntegralTensors, config: &PipelineConfig) -> Result<PointResult, Error> {
    let problem = VqeProblem::build(tensors, config)?;
    let vqe = problem.minimize(&config.optimizer)?;
    Ok(PointResult {
        e_vqe: vqe.energy,
        e_ref: problem.reference_energy,
        e_fci: problem.exact_energy()?,
        n_qubits: problem.n_qubits(),
        vqe,
    })
}
