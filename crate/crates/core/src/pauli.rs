//! Phase-tracked Pauli strings, weighted sums of them, and their sparse
//! matrix realization.
//!
//! Qubit 0 is the least significant bit of an amplitude index everywhere in
//! this crate. A string is stored as a pair of bit masks (the X part and the
//! Z part), so every qubit carries a two-bit letter code: `I = 00`,
//! `X = 10`, `Z = 01`, `Y = 11`. Products track their phase as an exponent
//! of `i` modulo 4, which keeps long multiplication chains exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Coefficients below this magnitude are dropped by [`PauliSum::simplify`].
pub const COEFF_CUTOFF: f64 = 1e-12;

/// Largest register a packed string can describe.
pub const MAX_STRING_QUBITS: usize = 64;

/// Largest register [`PauliSum::to_matrix`] will realize.
pub const MAX_MATRIX_QUBITS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("{n_qubits} qubits exceeds the limit of {limit}")]
    TooManyQubits { n_qubits: usize, limit: usize },
    #[error("cannot parse Pauli term: {0}")]
    Parse(String),
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Product `self * other` as (phase exponent of i, letter).
    pub fn product(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Power of `i`, kept modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Tensor product of single-qubit Paulis over `n` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_STRING_QUBITS, "at most {MAX_STRING_QUBITS} qubits");
        PauliString { n, x: 0, z: 0 }
    }

    /// Letters indexed by qubit (`letters[0]` acts on qubit 0).
    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut s = PauliString::identity(letters.len());
        for (q, &p) in letters.iter().enumerate() {
            s.set(q, p);
        }
        s
    }

    /// `(qubit, letter)` pairs; unspecified qubits are identity.
    pub fn from_sparse(n: usize, letters: &[(usize, Pauli)]) -> Result<Self, PauliError> {
        if n > MAX_STRING_QUBITS {
            return Err(PauliError::TooManyQubits { n_qubits: n, limit: MAX_STRING_QUBITS });
        }
        let mut s = PauliString::identity(n);
        for &(q, p) in letters {
            if q >= n {
                return Err(PauliError::QubitOutOfRange { index: q, n_qubits: n });
            }
            s.set(q, p);
        }
        Ok(s)
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= MAX_STRING_QUBITS);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        PauliString { n, x: x & mask, z: z & mask }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range");
        let (x, z) = p.bits();
        let bit = 1u64 << q;
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        let m = self.x | self.z;
        (0..self.n).filter(|q| m >> q & 1 == 1).collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `self * other` as a phase and the resulting string.
    pub fn multiply(&self, other: &PauliString) -> Result<(Phase, PauliString), PauliError> {
        if self.n != other.n {
            return Err(PauliError::QubitMismatch { left: self.n, right: other.n });
        }
        let mut k = 0u32;
        let mut active = (self.x | self.z) & (other.x | other.z);
        while active != 0 {
            let q = active.trailing_zeros() as usize;
            active &= active - 1;
            let (e, _) = self.letter(q).product(other.letter(q));
            k += e as u32;
        }
        Ok((Phase::from_exponent(k), PauliString { n: self.n, x: self.x ^ other.x, z: self.z ^ other.z }))
    }

    /// Action on a computational basis state: `P|b> = phase * |b'>`.
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        let b64 = b as u64;
        let ny = (self.x & self.z).count_ones();
        let sign = (b64 & self.z).count_ones();
        let phase = Phase::from_exponent(ny + 2 * sign);
        ((b64 ^ self.x) as usize, phase.to_complex())
    }

    /// Drops the listed qubits (which must carry I or Z) and compacts the rest.
    pub(crate) fn remove_qubits(&self, removed: &[usize]) -> PauliString {
        let mut letters = Vec::with_capacity(self.n - removed.len());
        for q in 0..self.n {
            if !removed.contains(&q) {
                letters.push(self.letter(q));
            }
        }
        PauliString::from_letters(&letters)
    }
}

impl Ord for PauliString {
    /// Lexicographic on letters (I < X < Y < Z), qubit 0 first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for q in 0..self.n {
                match self.letter(q).cmp(&other.letter(q)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for q in self.support() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}{}", self.letter(q).symbol(), q)?;
            first = false;
        }
        Ok(())
    }
}

/// Linear combination of Pauli strings on a common register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize, coeff: Complex64) -> Self {
        let mut s = PauliSum::zero(n);
        s.add_term(PauliString::identity(n), coeff);
        s
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, PauliError>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut s = PauliSum::zero(n);
        for (p, c) in terms {
            if p.num_qubits() != n {
                return Err(PauliError::QubitMismatch { left: n, right: p.num_qubits() });
            }
            s.add_term(p, c);
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Accumulates `coeff * p` into the sum.
    pub fn add_term(&mut self, p: PauliString, coeff: Complex64) {
        assert_eq!(p.num_qubits(), self.n, "qubit count mismatch");
        *self.terms.entry(p).or_default() += coeff;
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &PauliSum) -> Result<(), PauliError> {
        if self.n != other.n {
            return Err(PauliError::QubitMismatch { left: self.n, right: other.n });
        }
        for (p, c) in &other.terms {
            self.add_term(*p, *c);
        }
        Ok(())
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        PauliSum { n: self.n, terms: self.terms.iter().map(|(p, c)| (*p, c * factor)).collect() }
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        if self.n != other.n {
            return Err(PauliError::QubitMismatch { left: self.n, right: other.n });
        }
        let mut out = PauliSum::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (phase, p) = a.multiply(b)?;
                out.add_term(p, phase.to_complex() * ca * cb);
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum { n: self.n, terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect() }
    }

    /// Merged, thresholded copy. Terms stay in canonical order.
    pub fn simplify(&self) -> PauliSum {
        PauliSum {
            n: self.n,
            terms: self.terms.iter().filter(|(_, c)| c.norm() >= COEFF_CUTOFF).map(|(p, c)| (*p, *c)).collect(),
        }
    }

    /// True when every coefficient is real within `tol`, i.e. the operator
    /// is Hermitian.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// True when every coefficient is imaginary within `tol`.
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `out = self * v` without forming a matrix.
    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        let dim = 1usize << self.n;
        assert_eq!(v.len(), dim);
        assert_eq!(out.len(), dim);
        out.iter_mut().for_each(|o| *o = Complex64::default());
        for (p, c) in &self.terms {
            let x = p.x_mask() as usize;
            let z = p.z_mask();
            let base = c * Phase::from_exponent((p.x_mask() & z).count_ones()).to_complex();
            for (b, amp) in v.iter().enumerate() {
                let odd = (b as u64 & z).count_ones() & 1 == 1;
                let term = base * amp;
                if odd {
                    out[b ^ x] -= term;
                } else {
                    out[b ^ x] += term;
                }
            }
        }
    }

    /// Sparse matrix in the computational basis (qubit 0 least significant).
    pub fn to_matrix(&self) -> Result<CsrMatrix, PauliError> {
        if self.n > MAX_MATRIX_QUBITS {
            return Err(PauliError::TooManyQubits { n_qubits: self.n, limit: MAX_MATRIX_QUBITS });
        }
        let dim = 1usize << self.n;
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        let mut row: BTreeMap<usize, Complex64> = BTreeMap::new();
        for r in 0..dim {
            row.clear();
            // Row r collects <r|P|b> for b = r ^ x.
            for (p, c) in &self.terms {
                let b = r ^ p.x_mask() as usize;
                let (target, phase) = p.apply_to_basis(b);
                debug_assert_eq!(target, r);
                *row.entry(b).or_default() += c * phase;
            }
            for (&col, &v) in &row {
                if v.norm() > 0.0 {
                    cols.push(col);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(CsrMatrix { dim, row_ptr, cols, vals })
    }
}

impl fmt::Display for PauliSum {
    /// One term per line, e.g. `(-0.5+0i) Z0 X2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({}{:+}i) {}", c.re, c.im, p)?;
        }
        Ok(())
    }
}

/// Parses a single rendered term such as `(-0.5+0i) Z0 X2` on `n` qubits.
pub fn parse_term(n: usize, text: &str) -> Result<(PauliString, Complex64), PauliError> {
    let text = text.trim();
    let err = || PauliError::Parse(text.to_string());
    let rest = text.strip_prefix('(').ok_or_else(err)?;
    let close = rest.find(')').ok_or_else(err)?;
    let coeff = Complex64::from_str(&rest[..close]).map_err(|_| err())?;
    let mut letters = Vec::new();
    for tok in rest[close + 1..].split_whitespace() {
        if tok == "I" {
            continue;
        }
        let mut chars = tok.chars();
        let p = match chars.next() {
            Some('X') => Pauli::X,
            Some('Y') => Pauli::Y,
            Some('Z') => Pauli::Z,
            _ => return Err(err()),
        };
        let q: usize = chars.as_str().parse().map_err(|_| err())?;
        letters.push((q, p));
    }
    Ok((PauliString::from_sparse(n, &letters)?, coeff))
}

/// Parses the multi-line rendering produced by `Display for PauliSum`.
pub fn parse_sum(n: usize, text: &str) -> Result<PauliSum, PauliError> {
    let mut s = PauliSum::zero(n);
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (p, c) = parse_term(n, line)?;
        s.add_term(p, c);
    }
    Ok(s)
}

/// Compressed-sparse-row complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl CsrMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => Complex64::default(),
        }
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.row(r).map(|(c, a)| a * v[c]).sum()).collect()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }
}
