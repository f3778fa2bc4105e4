//! Second-quantized operators: products of creation and annihilation
//! operators with complex weights, normal ordering by the canonical
//! anticommutation relations, and assembly of the electronic Hamiltonian.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::integrals::IntegralTensors;

/// Coefficients below this magnitude are dropped after simplification.
pub const COEFF_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FermionError {
    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LadderKind {
    // Declaration order makes creations sort before annihilations.
    Create,
    Annihilate,
}

/// A single `a†_p` or `a_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub kind: LadderKind,
    pub mode: usize,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Ladder { kind: LadderKind::Create, mode }
    }

    pub fn annihilate(mode: usize) -> Self {
        Ladder { kind: LadderKind::Annihilate, mode }
    }

    pub fn dagger(self) -> Self {
        let kind = match self.kind {
            LadderKind::Create => LadderKind::Annihilate,
            LadderKind::Annihilate => LadderKind::Create,
        };
        Ladder { kind, mode: self.mode }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LadderKind::Create => write!(f, "a+{}", self.mode),
            LadderKind::Annihilate => write!(f, "a{}", self.mode),
        }
    }
}

/// Weighted sum of ladder-operator products on `n_modes` fermionic modes.
/// An empty factor list is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: BTreeMap<Vec<Ladder>, Complex64>,
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        FermionOperator { n_modes, terms: BTreeMap::new() }
    }

    pub fn identity(n_modes: usize, coeff: Complex64) -> Self {
        let mut op = FermionOperator::zero(n_modes);
        op.terms.insert(Vec::new(), coeff);
        op
    }

    pub fn term(n_modes: usize, factors: &[Ladder], coeff: Complex64) -> Result<Self, FermionError> {
        let mut op = FermionOperator::zero(n_modes);
        op.add_term(factors.to_vec(), coeff)?;
        Ok(op)
    }

    pub fn create(n_modes: usize, mode: usize) -> Result<Self, FermionError> {
        Self::term(n_modes, &[Ladder::create(mode)], Complex64::new(1.0, 0.0))
    }

    pub fn annihilate(n_modes: usize, mode: usize) -> Result<Self, FermionError> {
        Self::term(n_modes, &[Ladder::annihilate(mode)], Complex64::new(1.0, 0.0))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Ladder], &Complex64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, factors: &[Ladder]) -> Complex64 {
        self.terms.get(factors).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, factors: Vec<Ladder>, coeff: Complex64) -> Result<(), FermionError> {
        if let Some(bad) = factors.iter().find(|l| l.mode >= self.n_modes) {
            return Err(FermionError::ModeOutOfRange { mode: bad.mode, n_modes: self.n_modes });
        }
        *self.terms.entry(factors).or_default() += coeff;
        Ok(())
    }

    pub fn add(&self, other: &FermionOperator) -> Result<FermionOperator, FermionError> {
        self.check_modes(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            *out.terms.entry(k.clone()).or_default() += v;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> FermionOperator {
        FermionOperator {
            n_modes: self.n_modes,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
        }
    }

    /// Distributive product; factor lists are concatenated, not reordered.
    pub fn multiply(&self, other: &FermionOperator) -> Result<FermionOperator, FermionError> {
        self.check_modes(other)?;
        let mut out = FermionOperator::zero(self.n_modes);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                *out.terms.entry(k).or_default() += va * vb;
            }
        }
        Ok(out)
    }

    /// Reverse factor order, swap creation and annihilation, conjugate.
    pub fn adjoint(&self) -> FermionOperator {
        FermionOperator {
            n_modes: self.n_modes,
            terms: self.terms.iter().map(|(k, v)| (k.iter().rev().map(|l| l.dagger()).collect(), v.conj())).collect(),
        }
    }

    /// Drops sub-threshold coefficients.
    pub fn simplify(&self) -> FermionOperator {
        FermionOperator {
            n_modes: self.n_modes,
            terms: self.terms.iter().filter(|(_, v)| v.norm() >= COEFF_CUTOFF).map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }

    /// Rewrites every term so creations precede annihilations and each group
    /// is strictly increasing in mode index, using `a_p a†_q = δ_pq − a†_q a_p`
    /// and antisymmetry. Repeated identical factors vanish.
    pub fn normal_order(&self) -> FermionOperator {
        let mut out: BTreeMap<Vec<Ladder>, Complex64> = BTreeMap::new();
        let mut stack: Vec<(Vec<Ladder>, Complex64)> = self.terms.iter().map(|(k, v)| (k.clone(), *v)).collect();
        while let Some((factors, coeff)) = stack.pop() {
            match first_disorder(&factors) {
                None => *out.entry(factors).or_default() += coeff,
                Some(i) => {
                    let (l, r) = (factors[i], factors[i + 1]);
                    if l.kind == r.kind && l.mode == r.mode {
                        continue;
                    }
                    let mut swapped = factors.clone();
                    swapped.swap(i, i + 1);
                    stack.push((swapped, -coeff));
                    if l.kind == LadderKind::Annihilate && r.kind == LadderKind::Create && l.mode == r.mode {
                        let mut contracted = factors;
                        contracted.drain(i..i + 2);
                        stack.push((contracted, coeff));
                    }
                }
            }
        }
        FermionOperator { n_modes: self.n_modes, terms: out }.simplify()
    }

    fn check_modes(&self, other: &FermionOperator) -> Result<(), FermionError> {
        if self.n_modes != other.n_modes {
            return Err(FermionError::ModeMismatch { left: self.n_modes, right: other.n_modes });
        }
        Ok(())
    }
}

/// Index of the first adjacent pair violating normal order, if any.
/// A pair of identical factors also counts, so the caller can annihilate it.
fn first_disorder(factors: &[Ladder]) -> Option<usize> {
    factors.windows(2).position(|w| {
        let (l, r) = (w[0], w[1]);
        match (l.kind, r.kind) {
            (LadderKind::Annihilate, LadderKind::Create) => true,
            (LadderKind::Create, LadderKind::Annihilate) => false,
            _ => l.mode >= r.mode,
        }
    })
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({}{:+}i)", v.re, v.im)?;
            for l in k {
                write!(f, " {l}")?;
            }
        }
        Ok(())
    }
}

/// `E_nuc + Σ h_pq a†_p a_q + ½ Σ h_pqrs a†_p a†_q a_r a_s`, normal-ordered.
///
/// `h_pqrs` follows the convention of [`IntegralTensors::two_body`], which
/// already accounts for the `a_r a_s` ordering of the annihilators.
pub fn assemble_hamiltonian(tensors: &IntegralTensors) -> FermionOperator {
    let m = tensors.n_spin_orbitals();
    let mut op = FermionOperator::zero(m);
    let real = |x: f64| Complex64::new(x, 0.0);
    if tensors.core_energy() != 0.0 {
        op.terms.insert(Vec::new(), real(tensors.core_energy()));
    }
    for p in 0..m {
        for q in 0..m {
            let h = tensors.one_body(p, q);
            if h.abs() >= COEFF_CUTOFF {
                *op.terms.entry(vec![Ladder::create(p), Ladder::annihilate(q)]).or_default() += real(h);
            }
        }
    }
    for p in 0..m {
        for q in 0..m {
            if p == q {
                continue;
            }
            for r in 0..m {
                for s in 0..m {
                    if r == s {
                        continue;
                    }
                    let h = tensors.two_body(p, q, r, s);
                    if h.abs() >= COEFF_CUTOFF {
                        let key =
                            vec![Ladder::create(p), Ladder::create(q), Ladder::annihilate(r), Ladder::annihilate(s)];
                        *op.terms.entry(key).or_default() += real(0.5 * h);
                    }
                }
            }
        }
    }
    op.normal_order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let x =
            FermionOperator::term(3, &[Ladder::create(2), Ladder::annihilate(0)], Complex64::new(0.5, 0.25)).unwrap();
        let id = FermionOperator::identity(3, one());
        assert_eq!(id.multiply(&x).unwrap(), x);
        assert_eq!(x.multiply(&id).unwrap(), x);
    }

    #[test]
    fn product_concatenates() {
        let c0 = FermionOperator::create(1, 0).unwrap();
        let a0 = FermionOperator::annihilate(1, 0).unwrap();
        let p = c0.multiply(&a0).unwrap();
        assert_eq!(p.coefficient(&[Ladder::create(0), Ladder::annihilate(0)]), one());
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn repeated_annihilator_vanishes() {
        let a0 = FermionOperator::annihilate(1, 0).unwrap();
        assert!(a0.multiply(&a0).unwrap().normal_order().is_empty());
    }

    #[test]
    fn anticommutator_contracts_to_identity() {
        let op = FermionOperator::term(1, &[Ladder::annihilate(0), Ladder::create(0)], one()).unwrap();
        let no = op.normal_order();
        assert_eq!(no.len(), 2);
        assert_eq!(no.coefficient(&[]), one());
        assert_eq!(no.coefficient(&[Ladder::create(0), Ladder::annihilate(0)]), -one());
    }

    #[test]
    fn creation_swap_flips_sign() {
        let op = FermionOperator::term(2, &[Ladder::create(1), Ladder::create(0)], one()).unwrap();
        let no = op.normal_order();
        assert_eq!(no.len(), 1);
        assert_eq!(no.coefficient(&[Ladder::create(0), Ladder::create(1)]), -one());
    }

    #[test]
    fn normal_order_is_idempotent() {
        let op = FermionOperator::term(
            3,
            &[Ladder::annihilate(2), Ladder::create(0), Ladder::create(2), Ladder::annihilate(1)],
            Complex64::new(0.3, -0.1),
        )
        .unwrap();
        let once = op.normal_order();
        assert_eq!(once.normal_order(), once);
    }

    #[test]
    fn adjoint_flips_and_reverses() {
        let op = FermionOperator::create(2, 0).unwrap();
        assert_eq!(op.adjoint(), FermionOperator::annihilate(2, 0).unwrap());
        let t =
            FermionOperator::term(3, &[Ladder::create(2), Ladder::annihilate(0)], Complex64::new(0.0, 2.0)).unwrap();
        assert_eq!(t.adjoint().coefficient(&[Ladder::create(0), Ladder::annihilate(2)]), Complex64::new(0.0, -2.0));
        assert_eq!(t.adjoint().adjoint(), t);
    }

    #[test]
    fn out_of_range_and_mismatch_rejected() {
        assert_eq!(FermionOperator::create(2, 2), Err(FermionError::ModeOutOfRange { mode: 2, n_modes: 2 }));
        let a = FermionOperator::zero(2);
        let b = FermionOperator::zero(3);
        assert_eq!(a.multiply(&b), Err(FermionError::ModeMismatch { left: 2, right: 3 }));
    }
}
