use std::collections::BTreeMap;

use super::{IntegralsError, MolecularGeometry};

const BUNDLED_STO3G: &str = include_str!("../../data/sto-3g.txt");

const ELEMENTS: [&str; 10] = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne"];

/// Contracted s-type Gaussian: `Σ_k c_k N_k exp(−α_k r²)` centred at `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisShell {
    center: [f64; 3],
    exponents: [f64; 3],
    /// Contraction weights with primitive and shell normalization folded in.
    weights: [f64; 3],
}

impl BasisShell {
    /// `coefficients` multiply normalized primitives; the contraction is
    /// rescaled to unit self-overlap.
    pub fn new(center: [f64; 3], exponents: [f64; 3], coefficients: [f64; 3]) -> Result<Self, IntegralsError> {
        if exponents.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(IntegralsError::InvalidBasis(format!("exponents must be positive: {exponents:?}")));
        }
        let prim_norm = exponents.map(|a| (2.0 * a / std::f64::consts::PI).powf(0.75));
        let mut weights = [0.0; 3];
        for k in 0..3 {
            weights[k] = coefficients[k] * prim_norm[k];
        }
        let mut shell = BasisShell { center, exponents, weights };
        let s = shell.self_overlap();
        if !(s > 0.0) {
            return Err(IntegralsError::InvalidBasis("contraction has zero norm".into()));
        }
        let scale = 1.0 / s.sqrt();
        shell.weights.iter_mut().for_each(|w| *w *= scale);
        Ok(shell)
    }

    /// Center in Bohr.
    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    pub fn exponents(&self) -> [f64; 3] {
        self.exponents
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights
    }

    pub fn self_overlap(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let p = self.exponents[a] + self.exponents[b];
                s += self.weights[a] * self.weights[b] * (std::f64::consts::PI / p).powf(1.5);
            }
        }
        s
    }
}

/// Per-element s-shell parameters.
#[derive(Debug, Clone)]
pub struct BasisSet {
    shells: BTreeMap<u32, ([f64; 3], [f64; 3])>,
}

impl BasisSet {
    /// The bundled STO-3G data (s-only elements).
    pub fn sto3g() -> Self {
        Self::parse(BUNDLED_STO3G).expect("bundled basis data is valid")
    }

    /// One shell per line: `element exponent1 coeff1 exponent2 coeff2 exponent3 coeff3`.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, IntegralsError> {
        let mut shells = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(IntegralsError::InvalidBasis(format!("line {}: expected 7 fields", lineno + 1)));
            }
            let z = element_charge(fields[0])
                .ok_or_else(|| IntegralsError::InvalidBasis(format!("unknown element {}", fields[0])))?;
            let mut nums = [0.0; 6];
            for (k, f) in fields[1..].iter().enumerate() {
                nums[k] = f
                    .parse()
                    .map_err(|_| IntegralsError::InvalidBasis(format!("line {}: bad number {f}", lineno + 1)))?;
            }
            shells.insert(z, ([nums[0], nums[2], nums[4]], [nums[1], nums[3], nums[5]]));
        }
        Ok(BasisSet { shells })
    }

    /// One normalized shell per atom, centred on the atom (in Bohr).
    pub fn shells_for(&self, geometry: &MolecularGeometry) -> Result<Vec<BasisShell>, IntegralsError> {
        geometry
            .atoms()
            .iter()
            .map(|atom| {
                let (exps, coefs) = self.shells.get(&atom.charge).ok_or_else(|| {
                    IntegralsError::Unsupported(format!("no s-shell data for nuclear charge {}", atom.charge))
                })?;
                BasisShell::new(atom.position_bohr(), *exps, *coefs)
            })
            .collect()
    }
}

pub(crate) fn element_charge(symbol: &str) -> Option<u32> {
    ELEMENTS.iter().position(|e| e.eq_ignore_ascii_case(symbol)).map(|i| i as u32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::Atom;

    #[test]
    fn bundled_shells_are_normalized() {
        let g = MolecularGeometry::new(vec![Atom::new(1, [0.0; 3]), Atom::new(2, [0.0, 0.0, 3.0])], 0, 2).unwrap();
        for shell in BasisSet::sto3g().shells_for(&g).unwrap() {
            assert!((shell.self_overlap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn missing_element_is_unsupported() {
        let g = MolecularGeometry::new(vec![Atom::new(8, [0.0; 3])], 0, 1).unwrap();
        assert!(matches!(BasisSet::sto3g().shells_for(&g), Err(IntegralsError::Unsupported(_))));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(BasisSet::parse("H 1.0 0.5 2.0").is_err());
        assert!(BasisSet::parse("Xx 1 1 1 1 1 1").is_err());
        assert!(BasisSet::parse("H 1 1 x 1 1 1").is_err());
        assert!(BasisShell::new([0.0; 3], [1.0, -1.0, 1.0], [1.0; 3]).is_err());
    }
}
