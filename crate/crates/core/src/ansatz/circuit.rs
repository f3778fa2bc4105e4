use std::fmt;

use super::AnsatzError;

/// Rotation angle in radians: `scale * θ[slot]`, or the constant `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub scale: f64,
    pub slot: Option<usize>,
}

impl Angle {
    pub fn constant(value: f64) -> Self {
        Angle { scale: value, slot: None }
    }

    pub fn parameter(slot: usize, scale: f64) -> Self {
        Angle { scale, slot: Some(slot) }
    }

    pub fn resolve(&self, params: &[f64]) -> f64 {
        match self.slot {
            Some(k) => self.scale * params[k],
            None => self.scale,
        }
    }

    fn negated(self) -> Self {
        Angle { scale: -self.scale, ..self }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            None => write!(f, "{}", self.scale),
            Some(k) if self.scale == 1.0 => write!(f, "theta[{k}]"),
            Some(k) => write!(f, "{}*theta[{k}]", self.scale),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    Rx(usize, Angle),
    Ry(usize, Angle),
    Rz(usize, Angle),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => {
                vec![q]
            }
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::Rx(_, a) | Gate::Ry(_, a) | Gate::Rz(_, a) => Some(a),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::Rx(q, a) => Gate::Rx(q, a.negated()),
            Gate::Ry(q, a) => Gate::Ry(q, a.negated()),
            Gate::Rz(q, a) => Gate::Rz(q, a.negated()),
            g => g,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X(q) => write!(f, "X q{q}"),
            Gate::H(q) => write!(f, "H q{q}"),
            Gate::S(q) => write!(f, "S q{q}"),
            Gate::Sdg(q) => write!(f, "SDG q{q}"),
            Gate::Rx(q, a) => write!(f, "RX q{q} {a}"),
            Gate::Ry(q, a) => write!(f, "RY q{q} {a}"),
            Gate::Rz(q, a) => write!(f, "RZ q{q} {a}"),
            Gate::Cnot { control, target } => write!(f, "CNOT q{control} q{target}"),
        }
    }
}

/// Ordered gate list on `n_qubits` with a table of `n_parameters` angle slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_parameters: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_parameters: usize) -> Self {
        Circuit { n_qubits, n_parameters, gates: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_parameters(&self) -> usize {
        self.n_parameters
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), AnsatzError> {
        for q in gate.qubits() {
            if q >= self.n_qubits {
                return Err(AnsatzError::QubitOutOfRange { qubit: q, n_qubits: self.n_qubits });
            }
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(AnsatzError::QubitOutOfRange { qubit: target, n_qubits: self.n_qubits });
            }
        }
        if let Some(Angle { slot: Some(k), .. }) = gate.angle() {
            if k >= self.n_parameters {
                return Err(AnsatzError::UnknownParameter { slot: k, n_parameters: self.n_parameters });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<(), AnsatzError> {
        for g in other.gates() {
            self.push(*g)?;
        }
        Ok(())
    }

    /// Gate-wise inverse: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            n_parameters: self.n_parameters,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn count_cnots(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }
}

impl fmt::Display for Circuit {
    /// One gate per line, e.g. `RZ q1 theta[3]`, after a `QUBITS`/`PARAMS` preamble.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.n_qubits)?;
        writeln!(f, "PARAMS {}", self.n_parameters)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_validates_indices() {
        let mut c = Circuit::new(2, 1);
        assert!(c.push(Gate::X(2)).is_err());
        assert!(c.push(Gate::Cnot { control: 1, target: 1 }).is_err());
        assert!(c.push(Gate::Rz(0, Angle::parameter(1, 1.0))).is_err());
        c.push(Gate::Rz(0, Angle::parameter(0, -2.0))).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn text_dump() {
        let mut c = Circuit::new(2, 4);
        c.push(Gate::X(0)).unwrap();
        c.push(Gate::Sdg(1)).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        c.push(Gate::Rz(1, Angle::parameter(3, 1.0))).unwrap();
        c.push(Gate::Rx(0, Angle::parameter(2, -0.5))).unwrap();
        c.push(Gate::Ry(0, Angle::constant(0.25))).unwrap();
        let expect = "QUBITS 2\nPARAMS 4\nX q0\nSDG q1\nCNOT q0 q1\nRZ q1 theta[3]\nRX q0 -0.5*theta[2]\nRY q0 0.25\n";
        assert_eq!(c.to_string(), expect);
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let mut c = Circuit::new(1, 1);
        c.push(Gate::S(0)).unwrap();
        c.push(Gate::Rz(0, Angle::parameter(0, 2.0))).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.gates(), &[Gate::Rz(0, Angle::parameter(0, -2.0)), Gate::Sdg(0)]);
    }
}
