//! Dense state-vector simulation.

use num_complex::Complex64;
use thiserror::Error;

use crate::ansatz::{Circuit, Gate};
use crate::pauli::{PauliString, PauliSum};

pub const MAX_QUBITS: usize = 24;
const HERMITIAN_TOL: f64 = 1e-10;
const IMAGINARY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulatorError {
    #[error("{n_qubits} qubits exceeds the simulator limit of {limit}")]
    TooManyQubits { n_qubits: usize, limit: usize },
    #[error("basis index {index} out of range for {n_qubits} qubits")]
    BasisOutOfRange { index: usize, n_qubits: usize },
    #[error("register has {state} qubits, operand has {operand}")]
    QubitMismatch { state: usize, operand: usize },
    #[error("circuit expects {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("observable is not Hermitian")]
    NonHermitian,
    #[error("expectation value has imaginary part {0:e}")]
    ComplexExpectation(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|index⟩` on `n_qubits`; qubit 0 is the least significant bit.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, SimulatorError> {
        if n_qubits > MAX_QUBITS {
            return Err(SimulatorError::TooManyQubits { n_qubits, limit: MAX_QUBITS });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(SimulatorError::BasisOutOfRange { index, n_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn zero(n_qubits: usize) -> Result<Self, SimulatorError> {
        Self::basis(n_qubits, 0)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimulatorError> {
        let n_qubits = amps.len().trailing_zeros() as usize;
        if !amps.len().is_power_of_two() {
            return Err(SimulatorError::QubitMismatch { state: n_qubits, operand: amps.len() });
        }
        if n_qubits > MAX_QUBITS {
            return Err(SimulatorError::TooManyQubits { n_qubits, limit: MAX_QUBITS });
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << q;
        for base in (0..self.amps.len()).step_by(2 * stride) {
            for i in base..base + stride {
                let (a0, a1) = (self.amps[i], self.amps[i + stride]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    fn apply_rz(&mut self, q: usize, theta: f64) {
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = lo.conj();
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & bit == 0 { lo } else { hi };
        }
    }

    /// Applies one gate with angles resolved against `params`.
    pub fn apply_gate(&mut self, gate: &Gate, params: &[f64]) -> Result<(), SimulatorError> {
        for q in gate.qubits() {
            if q >= self.n_qubits {
                return Err(SimulatorError::QubitMismatch { state: self.n_qubits, operand: q + 1 });
            }
        }
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match *gate {
            Gate::X(q) => self.apply_1q(q, [[zero, one], [one, zero]]),
            Gate::H(q) => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_1q(q, [[h, h], [h, -h]])
            }
            Gate::S(q) => self.apply_1q(q, [[one, zero], [zero, i]]),
            Gate::Sdg(q) => self.apply_1q(q, [[one, zero], [zero, -i]]),
            Gate::Rx(q, a) => {
                let t = a.resolve(params) / 2.0;
                let (c, s) = (Complex64::new(t.cos(), 0.0), Complex64::new(0.0, -t.sin()));
                self.apply_1q(q, [[c, s], [s, c]])
            }
            Gate::Ry(q, a) => {
                let t = a.resolve(params) / 2.0;
                let (c, s) = (Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0));
                self.apply_1q(q, [[c, -s], [s, c]])
            }
            Gate::Rz(q, a) => self.apply_rz(q, a.resolve(params)),
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit, params: &[f64]) -> Result<(), SimulatorError> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(SimulatorError::QubitMismatch { state: self.n_qubits, operand: circuit.n_qubits() });
        }
        if params.len() != circuit.n_parameters() {
            return Err(SimulatorError::ParameterCount { expected: circuit.n_parameters(), got: params.len() });
        }
        for g in circuit.gates() {
            self.apply_gate(g, params)?;
        }
        Ok(())
    }

    /// `exp(i φ P)` applied in one pass, `cos φ·ψ + i sin φ·Pψ`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, phi: f64) -> Result<(), SimulatorError> {
        if p.num_qubits() != self.n_qubits {
            return Err(SimulatorError::QubitMismatch { state: self.n_qubits, operand: p.num_qubits() });
        }
        let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
        let (c, sn) = (phi.cos(), phi.sin());
        // i^{|x∧z|} from Y = iXZ, times the i of the exponent.
        let base = Complex64::new(0.0, sn) * crate::pauli::Phase::from_exponent((x & z).count_ones()).to_complex();
        let sign = |b: usize| if (b & z).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        if x == 0 {
            for (b, a) in self.amps.iter_mut().enumerate() {
                *a *= c + base * sign(b);
            }
            return Ok(());
        }
        let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for b in 0..self.amps.len() {
            if b & top != 0 {
                continue;
            }
            let b2 = b ^ x;
            let (a, a2) = (self.amps[b], self.amps[b2]);
            // P|b⟩ = ph(b)|b⊕x⟩ with ph(b) = i^{|x∧z|}(−1)^{|b∧z|}.
            self.amps[b] = a * c + base * sign(b2) * a2;
            self.amps[b2] = a2 * c + base * sign(b) * a;
        }
        Ok(())
    }

    /// `⟨self|P|ket⟩`.
    pub fn pauli_element(&self, p: &PauliString, ket: &StateVector) -> Result<Complex64, SimulatorError> {
        if p.num_qubits() != self.n_qubits || ket.n_qubits != self.n_qubits {
            return Err(SimulatorError::QubitMismatch {
                state: self.n_qubits,
                operand: p.num_qubits().max(ket.n_qubits),
            });
        }
        let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, a) in ket.amps.iter().enumerate() {
            let t = self.amps[b ^ x].conj() * a;
            if (b & z).count_ones() % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        Ok(acc * crate::pauli::Phase::from_exponent((x & z).count_ones()).to_complex())
    }

    /// `H|ψ⟩` as raw amplitudes.
    pub fn apply_observable(&self, observable: &PauliSum) -> Result<Vec<Complex64>, SimulatorError> {
        if observable.num_qubits() != self.n_qubits {
            return Err(SimulatorError::QubitMismatch { state: self.n_qubits, operand: observable.num_qubits() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        observable.apply(&self.amps, &mut out);
        Ok(out)
    }

    /// `⟨ψ|H|ψ⟩` for Hermitian `H`.
    pub fn expectation(&self, observable: &PauliSum) -> Result<f64, SimulatorError> {
        if observable.num_qubits() != self.n_qubits {
            return Err(SimulatorError::QubitMismatch { state: self.n_qubits, operand: observable.num_qubits() });
        }
        if !observable.is_hermitian(HERMITIAN_TOL) {
            return Err(SimulatorError::NonHermitian);
        }
        let h_psi = self.apply_observable(observable)?;
        let total: Complex64 = self.amps.iter().zip(&h_psi).map(|(a, b)| a.conj() * b).sum();
        if total.im.abs() > IMAGINARY_TOL * total.re.abs().max(1.0) {
            return Err(SimulatorError::ComplexExpectation(total.im));
        }
        Ok(total.re)
    }
}

/// `circuit` applied to a copy of `initial`.
pub fn run_circuit(circuit: &Circuit, initial: &StateVector, params: &[f64]) -> Result<StateVector, SimulatorError> {
    let mut s = initial.clone();
    s.run(circuit, params)?;
    Ok(s)
}
