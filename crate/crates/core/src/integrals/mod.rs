//! Molecular integrals over spin orbitals.
//!
//! Spin orbitals use the blocked convention: with `n` spatial orbitals,
//! index `p < n` is spatial orbital `p` with spin α and index `p >= n` is
//! spatial orbital `p - n` with spin β.
//!
//! Two-electron integrals are stored in the physicist layout consumed by the
//! Hamiltonian `½ Σ h_pqrs a†_p a†_q a_r a_s`, i.e. `h_pqrs = (ps|qr)` in
//! chemist notation. Placing the annihilators as `a_r a_s` pairs `r` with
//! electron 2 and `s` with electron 1.

mod basis;
mod fcidump;
mod gaussian;
mod geometry;

pub use basis::{BasisSet, BasisShell};
pub use fcidump::{parse_fcidump, write_fcidump};
pub use gaussian::{ao_integrals, boys_f0, sgto_integrals, sto3g_integrals, AoIntegrals};
pub use geometry::{nuclear_repulsion, Atom, MolecularGeometry, ANGSTROM_TO_BOHR};

use nalgebra::DMatrix;
use thiserror::Error;

/// Absolute tolerance for the permutational-symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralsError {
    #[error("malformed FCIDUMP header: {0}")]
    MalformedHeader(String),
    #[error("line {line}: malformed record {text:?}")]
    MalformedRecord { line: usize, text: String },
    #[error("line {line}: non-numeric field {field:?}")]
    NonNumeric { line: usize, field: String },
    #[error("line {line}: orbital index {index} outside 1..={norb}")]
    IndexOutOfRange { line: usize, index: i64, norb: usize },
    #[error("line {line}: entry conflicts with an earlier symmetry-equivalent value ({previous} vs {value})")]
    ConflictingEntry { line: usize, previous: f64, value: f64 },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("coincident nuclei {0} and {1}")]
    CoincidentNuclei(usize, usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("overlap matrix is linearly dependent (eigenvalue ratio {0:e})")]
    LinearDependence(f64),
    #[error("invalid basis data: {0}")]
    InvalidBasis(String),
    #[error("invalid integral tensors: {0}")]
    InvalidTensors(String),
    #[error("occupation {n_alpha}α + {n_beta}β does not fit in {n_spin_orbitals} spin orbitals")]
    OccupationExceedsOrbitals { n_alpha: usize, n_beta: usize, n_spin_orbitals: usize },
}

/// Core energy plus one- and two-electron integrals over spin orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTensors {
    n_spin_orbitals: usize,
    core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
    n_alpha: usize,
    n_beta: usize,
}

impl IntegralTensors {
    /// Builds tensors from dense spin-orbital arrays (row-major, `h_pqrs`
    /// layout as documented at module level) and validates every invariant.
    pub fn new(
        n_spin_orbitals: usize,
        core_energy: f64,
        one_body: Vec<f64>,
        two_body: Vec<f64>,
        n_alpha: usize,
        n_beta: usize,
    ) -> Result<Self, IntegralsError> {
        let m = n_spin_orbitals;
        if m == 0 || !m.is_multiple_of(2) {
            return Err(IntegralsError::InvalidTensors(format!("spin-orbital count {m} must be even and positive")));
        }
        if one_body.len() != m * m || two_body.len() != m * m * m * m {
            return Err(IntegralsError::InvalidTensors("array sizes do not match orbital count".into()));
        }
        let t = IntegralTensors { n_spin_orbitals: m, core_energy, one_body, two_body, n_alpha, n_beta };
        t.check_occupation(n_alpha, n_beta)?;
        t.validate()?;
        Ok(t)
    }

    /// Expands spatial integrals (one-body `h[i][j]`, chemist-notation
    /// `(ij|kl)` as a flat `n^4` array) to blocked spin orbitals.
    pub fn from_spatial(
        core_energy: f64,
        h_spatial: &DMatrix<f64>,
        eri_chemist: &[f64],
        n_alpha: usize,
        n_beta: usize,
    ) -> Result<Self, IntegralsError> {
        let n = h_spatial.nrows();
        if h_spatial.ncols() != n || eri_chemist.len() != n.pow(4) {
            return Err(IntegralsError::InvalidTensors("spatial array sizes are inconsistent".into()));
        }
        let m = 2 * n;
        let mut one = vec![0.0; m * m];
        for p in 0..m {
            for q in 0..m {
                if p / n == q / n {
                    one[p * m + q] = h_spatial[(p % n, q % n)];
                }
            }
        }
        let mut two = vec![0.0; m.pow(4)];
        let chem = |i: usize, j: usize, k: usize, l: usize| eri_chemist[((i * n + j) * n + k) * n + l];
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    for s in 0..m {
                        // h_pqrs = (ps|qr): electron 1 in p,s and electron 2 in q,r.
                        if p / n == s / n && q / n == r / n {
                            two[((p * m + q) * m + r) * m + s] = chem(p % n, s % n, q % n, r % n);
                        }
                    }
                }
            }
        }
        Self::new(m, core_energy, one, two, n_alpha, n_beta)
    }

    pub fn n_spin_orbitals(&self) -> usize {
        self.n_spin_orbitals
    }

    pub fn n_spatial_orbitals(&self) -> usize {
        self.n_spin_orbitals / 2
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    pub fn n_electrons(&self) -> usize {
        self.n_alpha + self.n_beta
    }

    pub fn one_body(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_spin_orbitals + q]
    }

    /// Coefficient `h_pqrs` of `½ a†_p a†_q a_r a_s`.
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let m = self.n_spin_orbitals;
        self.two_body[((p * m + q) * m + r) * m + s]
    }

    /// Chemist-notation spin-orbital integral `(ij|kl)`.
    pub fn chemist(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.two_body(i, k, l, j)
    }

    /// Same integrals with a different occupation.
    pub fn with_occupation(&self, n_alpha: usize, n_beta: usize) -> Result<Self, IntegralsError> {
        self.check_occupation(n_alpha, n_beta)?;
        Ok(IntegralTensors { n_alpha, n_beta, ..self.clone() })
    }

    /// Spin orbitals of the reference determinant: the lowest `n_alpha`
    /// α orbitals and the lowest `n_beta` β orbitals.
    pub fn occupied_spin_orbitals(&self) -> Vec<usize> {
        let n = self.n_spatial_orbitals();
        (0..self.n_alpha).chain(n..n + self.n_beta).collect()
    }

    /// α and β blocks carry identical spatial integrals.
    pub fn is_spin_restricted(&self) -> bool {
        let n = self.n_spatial_orbitals();
        for i in 0..n {
            for j in 0..n {
                if (self.one_body(i, j) - self.one_body(i + n, j + n)).abs() > SYMMETRY_TOL {
                    return false;
                }
                for k in 0..n {
                    for l in 0..n {
                        let aa = self.chemist(i, j, k, l);
                        let others = [
                            self.chemist(i + n, j + n, k + n, l + n),
                            self.chemist(i, j, k + n, l + n),
                            self.chemist(i + n, j + n, k, l),
                        ];
                        if others.iter().any(|v| (v - aa).abs() > SYMMETRY_TOL) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn check_occupation(&self, n_alpha: usize, n_beta: usize) -> Result<(), IntegralsError> {
        let half = self.n_spin_orbitals / 2;
        if n_alpha > half || n_beta > half {
            return Err(IntegralsError::OccupationExceedsOrbitals {
                n_alpha,
                n_beta,
                n_spin_orbitals: self.n_spin_orbitals,
            });
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), IntegralsError> {
        let m = self.n_spin_orbitals;
        let n = m / 2;
        let spin = |p: usize| p / n;
        let bad = |msg: String| Err(IntegralsError::InvalidTensors(msg));
        if !self.core_energy.is_finite() {
            return bad("core energy is not finite".into());
        }
        for p in 0..m {
            for q in 0..m {
                let v = self.one_body(p, q);
                if !v.is_finite() {
                    return bad(format!("h[{p},{q}] is not finite"));
                }
                if spin(p) != spin(q) && v != 0.0 {
                    return bad(format!("spin-forbidden one-body entry h[{p},{q}] = {v}"));
                }
                if (v - self.one_body(q, p)).abs() > SYMMETRY_TOL {
                    return bad(format!("one-body integrals not symmetric at ({p},{q})"));
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let v = self.chemist(i, j, k, l);
                        if !v.is_finite() {
                            return bad(format!("({i}{j}|{k}{l}) is not finite"));
                        }
                        if (spin(i) != spin(j) || spin(k) != spin(l)) && v != 0.0 {
                            return bad(format!("spin-forbidden two-body entry ({i}{j}|{k}{l}) = {v}"));
                        }
                        let images = [self.chemist(j, i, k, l), self.chemist(i, j, l, k), self.chemist(k, l, i, j)];
                        if images.iter().any(|w| (w - v).abs() > SYMMETRY_TOL) {
                            return bad(format!("two-body integrals break 8-fold symmetry at ({i}{j}|{k}{l})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Energy of the reference determinant: `E_nuc + Σ h_ii + ½ Σ_ij [(ii|jj) − (ij|ji)]`
/// over the occupied spin orbitals.
pub fn reference_energy(tensors: &IntegralTensors) -> Result<f64, IntegralsError> {
    tensors.check_occupation(tensors.n_alpha(), tensors.n_beta())?;
    let occ = tensors.occupied_spin_orbitals();
    let mut e = tensors.core_energy();
    for &i in &occ {
        e += tensors.one_body(i, i);
    }
    let mut pair = 0.0;
    for &i in &occ {
        for &j in &occ {
            pair += tensors.chemist(i, i, j, j) - tensors.chemist(i, j, j, i);
        }
    }
    Ok(e + 0.5 * pair)
}
