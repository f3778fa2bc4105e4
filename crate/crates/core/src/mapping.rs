//! Fermion-to-qubit encodings.
//!
//! Both encodings use the same sign convention: the fermionic sign of `a_p`
//! is the parity of the occupied modes below `p`. Under Jordan-Wigner qubit
//! `p` stores the occupation `f_p`; under the parity encoding qubit `p`
//! stores `f_0 ⊕ … ⊕ f_p`, and
//!
//! ```text
//! a_p  = X_{M-1} … X_{p+1} ⊗ (Q_p ⊗ |0⟩⟨0|_{p-1} − Q†_p ⊗ |1⟩⟨1|_{p-1})
//! a†_p = X_{M-1} … X_{p+1} ⊗ (Q†_p ⊗ |0⟩⟨0|_{p-1} − Q_p ⊗ |1⟩⟨1|_{p-1})
//! ```
//!
//! with `Q = |0⟩⟨1| = ½(X + iY)`.
//!
//! With blocked spin ordering, parity qubit `M/2 − 1` holds the α-number
//! parity and qubit `M − 1` the total-number parity. Both are conserved by
//! number- and spin-conserving operators, which allows
//! [`two_qubit_reduce`] to replace them by their eigenvalues.

use num_complex::Complex64;
use thiserror::Error;

use crate::fermion::{FermionOperator, Ladder, LadderKind};
use crate::pauli::{Pauli, PauliError, PauliString, PauliSum};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MappingError {
    #[error("two-qubit reduction needs an even number of at least two qubits, got {0}")]
    InvalidRegister(usize),
    #[error("term {term} does not commute with the Z2 symmetry on qubit {qubit}")]
    AnticommutingTerm { term: String, qubit: usize },
    #[error("occupation {n_alpha}α + {n_beta}β does not fit {n_modes} modes")]
    InvalidOccupation { n_alpha: usize, n_beta: usize, n_modes: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Occupation numbers `f_0 … f_{M-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationVector(Vec<bool>);

impl OccupationVector {
    pub fn new(bits: Vec<bool>) -> Self {
        OccupationVector(bits)
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        OccupationVector(bits.iter().map(|&b| b != 0).collect())
    }

    /// Lowest `n_alpha` α modes and lowest `n_beta` β modes, blocked ordering.
    pub fn hartree_fock(n_modes: usize, n_alpha: usize, n_beta: usize) -> Result<Self, MappingError> {
        let half = n_modes / 2;
        if !n_modes.is_multiple_of(2) || n_alpha > half || n_beta > half {
            return Err(MappingError::InvalidOccupation { n_alpha, n_beta, n_modes });
        }
        Ok(OccupationVector((0..n_modes).map(|p| if p < half { p < n_alpha } else { p - half < n_beta }).collect()))
    }

    /// Bit `q` of `index` becomes entry `q`.
    pub fn from_index(index: usize, len: usize) -> Self {
        OccupationVector((0..len).map(|q| index >> q & 1 == 1).collect())
    }

    pub fn to_index(&self) -> usize {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(q, _)| 1usize << q).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

/// Optional Z2 reduction settings for the parity encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetrySector {
    pub n_alpha: usize,
    pub n_beta: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MappingKind {
    JordanWigner,
    Parity { reduction: Option<SymmetrySector> },
}

impl MappingKind {
    pub fn parity() -> Self {
        MappingKind::Parity { reduction: None }
    }

    pub fn reduced_parity(n_alpha: usize, n_beta: usize) -> Self {
        MappingKind::Parity { reduction: Some(SymmetrySector { n_alpha, n_beta }) }
    }

    pub fn reduction(&self) -> Option<SymmetrySector> {
        match self {
            MappingKind::Parity { reduction } => *reduction,
            MappingKind::JordanWigner => None,
        }
    }

    /// Qubits needed for `n_modes` fermionic modes.
    pub fn qubit_count(&self, n_modes: usize) -> usize {
        if self.reduction().is_some() {
            n_modes - 2
        } else {
            n_modes
        }
    }

    /// Computational-basis index of the encoded occupation vector.
    pub fn encode_occupation(&self, occ: &OccupationVector) -> Result<usize, MappingError> {
        match self {
            MappingKind::JordanWigner => Ok(occ.to_index()),
            MappingKind::Parity { reduction: None } => Ok(parity_encode(occ).to_index()),
            MappingKind::Parity { reduction: Some(_) } => {
                let m = occ.len();
                if m < 2 || !m.is_multiple_of(2) {
                    return Err(MappingError::InvalidRegister(m));
                }
                let removed = symmetry_qubits(m);
                let q = parity_encode(occ);
                let kept: Vec<bool> =
                    q.bits().iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, &b)| b).collect();
                Ok(OccupationVector::new(kept).to_index())
            }
        }
    }

    /// Occupation vector behind computational-basis `index` of a register of
    /// `n_qubits`. Reduced registers are completed with the sector parities.
    pub fn decode_basis_state(&self, index: usize, n_qubits: usize) -> OccupationVector {
        match self {
            MappingKind::JordanWigner => OccupationVector::from_index(index, n_qubits),
            MappingKind::Parity { reduction: None } => parity_decode(&OccupationVector::from_index(index, n_qubits)),
            MappingKind::Parity { reduction: Some(sector) } => {
                let m = n_qubits + 2;
                let [qa, qt] = symmetry_qubits(m);
                let mut bits = Vec::with_capacity(m);
                let mut src = 0;
                for q in 0..m {
                    if q == qa {
                        bits.push(sector.n_alpha % 2 == 1);
                    } else if q == qt {
                        bits.push((sector.n_alpha + sector.n_beta) % 2 == 1);
                    } else {
                        bits.push(index >> src & 1 == 1);
                        src += 1;
                    }
                }
                parity_decode(&OccupationVector::new(bits))
            }
        }
    }
}

/// `q_p = (Σ_{i≤p} f_i) mod 2`.
pub fn parity_encode(f: &OccupationVector) -> OccupationVector {
    let mut acc = false;
    OccupationVector(
        f.bits()
            .iter()
            .map(|&b| {
                acc ^= b;
                acc
            })
            .collect(),
    )
}

/// Inverse of [`parity_encode`]: `f_p = q_p ⊕ q_{p-1}`.
pub fn parity_decode(q: &OccupationVector) -> OccupationVector {
    let bits = q.bits();
    OccupationVector((0..bits.len()).map(|p| if p == 0 { bits[0] } else { bits[p] ^ bits[p - 1] }).collect())
}

/// Qubits carrying the α-number parity and the total-number parity.
pub fn symmetry_qubits(n_modes: usize) -> [usize; 2] {
    [n_modes / 2 - 1, n_modes - 1]
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single(n: usize, q: usize, p: Pauli, coeff: Complex64) -> PauliSum {
    let mut s = PauliSum::zero(n);
    let mut string = PauliString::identity(n);
    string.set(q, p);
    s.add_term(string, coeff);
    s
}

/// `Q = ½(X + iY)` on qubit `q` (`dagger` gives `Q† = ½(X − iY)`).
fn lowering(n: usize, q: usize, dagger: bool) -> PauliSum {
    let sign = if dagger { -1.0 } else { 1.0 };
    let mut s = single(n, q, Pauli::X, c(0.5, 0.0));
    s.add_assign(&single(n, q, Pauli::Y, c(0.0, 0.5 * sign))).unwrap();
    s
}

/// `|b⟩⟨b| = ½(I ± Z)` on qubit `q`.
fn projector(n: usize, q: usize, bit: bool) -> PauliSum {
    let mut s = PauliSum::identity(n, c(0.5, 0.0));
    s.add_assign(&single(n, q, Pauli::Z, c(if bit { -0.5 } else { 0.5 }, 0.0))).unwrap();
    s
}

fn chain(n: usize, qubits: impl Iterator<Item = usize>, p: Pauli) -> PauliSum {
    let mut string = PauliString::identity(n);
    for q in qubits {
        string.set(q, p);
    }
    PauliSum::from_terms(n, [(string, c(1.0, 0.0))]).unwrap()
}

/// Jordan-Wigner image of a single ladder operator on `n` modes.
pub fn jordan_wigner_ladder(n: usize, ladder: Ladder) -> PauliSum {
    let dagger = ladder.kind == LadderKind::Create;
    let p = ladder.mode;
    chain(n, 0..p, Pauli::Z).multiply(&lowering(n, p, dagger)).unwrap()
}

/// Parity-encoding image of a single ladder operator on `n` modes.
pub fn parity_ladder(n: usize, ladder: Ladder) -> PauliSum {
    let dagger = ladder.kind == LadderKind::Create;
    let p = ladder.mode;
    let update = chain(n, p + 1..n, Pauli::X);
    let local = if p == 0 {
        lowering(n, 0, dagger)
    } else {
        let even = lowering(n, p, dagger).multiply(&projector(n, p - 1, false)).unwrap();
        let odd = lowering(n, p, !dagger).multiply(&projector(n, p - 1, true)).unwrap();
        even.add(&odd.scale(c(-1.0, 0.0))).unwrap()
    };
    update.multiply(&local).unwrap().simplify()
}

/// Maps a fermionic operator to qubits, applying the two-qubit reduction when
/// the parity kind requests one.
pub fn map_operator(op: &FermionOperator, kind: MappingKind) -> Result<PauliSum, MappingError> {
    let n = op.n_modes();
    let ladder_image = |l: Ladder| match kind {
        MappingKind::JordanWigner => jordan_wigner_ladder(n, l),
        MappingKind::Parity { .. } => parity_ladder(n, l),
    };
    let creators: Vec<PauliSum> = (0..n).map(|p| ladder_image(Ladder::create(p))).collect();
    let annihilators: Vec<PauliSum> = (0..n).map(|p| ladder_image(Ladder::annihilate(p))).collect();
    let mut out = PauliSum::zero(n);
    for (factors, coeff) in op.iter() {
        let mut term = PauliSum::identity(n, *coeff);
        for l in factors {
            let image = match l.kind {
                LadderKind::Create => &creators[l.mode],
                LadderKind::Annihilate => &annihilators[l.mode],
            };
            term = term.multiply(image)?;
        }
        out.add_assign(&term)?;
    }
    let out = out.simplify();
    match kind.reduction() {
        Some(sector) => two_qubit_reduce(&out, sector.n_alpha, sector.n_beta),
        None => Ok(out),
    }
}

/// Replaces the α-parity and total-parity qubits of a parity-encoded operator
/// by their eigenvalues `(−1)^{n_alpha}` and `(−1)^{n_alpha+n_beta}`, and
/// removes them.
pub fn two_qubit_reduce(s: &PauliSum, n_alpha: usize, n_beta: usize) -> Result<PauliSum, MappingError> {
    let m = s.num_qubits();
    if m < 2 || !m.is_multiple_of(2) {
        return Err(MappingError::InvalidRegister(m));
    }
    let removed = symmetry_qubits(m);
    let eigen = [parity_sign(n_alpha), parity_sign(n_alpha + n_beta)];
    let mut out = PauliSum::zero(m - 2);
    for (p, coeff) in s.iter() {
        let mut factor = 1.0;
        for (&q, &ev) in removed.iter().zip(&eigen) {
            match p.letter(q) {
                Pauli::I => {}
                Pauli::Z => factor *= ev,
                _ => return Err(MappingError::AnticommutingTerm { term: p.to_string(), qubit: q }),
            }
        }
        out.add_term(p.remove_qubits(&removed), coeff * factor);
    }
    Ok(out.simplify())
}

fn parity_sign(count: usize) -> f64 {
    if count.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
