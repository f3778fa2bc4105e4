//! Molecular ground-state energies with the variational quantum eigensolver.
//!
//! Integrals (native STO-3G engine or FCIDUMP files) are assembled into a
//! second-quantized Hamiltonian, mapped to qubits, and minimized over a
//! Trotterized UCCSD ansatz on an exact state-vector simulator. Exact
//! diagonalization provides the reference energies.

pub mod ansatz;
pub mod fci;
pub mod fermion;
pub mod integrals;
pub mod mapping;
pub mod pauli;
pub mod pipeline;
pub mod simulator;
pub mod vqe;

use thiserror::Error;

pub use pipeline::{run_point, Encoding, PipelineConfig, PointResult, VqeProblem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Integrals(#[from] integrals::IntegralsError),
    #[error(transparent)]
    Fermion(#[from] fermion::FermionError),
    #[error(transparent)]
    Pauli(#[from] pauli::PauliError),
    #[error(transparent)]
    Mapping(#[from] mapping::MappingError),
    #[error(transparent)]
    Ansatz(#[from] ansatz::AnsatzError),
    #[error(transparent)]
    Simulator(#[from] simulator::SimulatorError),
    #[error(transparent)]
    Vqe(#[from] vqe::VqeError),
    #[error(transparent)]
    Fci(#[from] fci::FciError),
}
