//! Exact ground-state energies of qubit Hamiltonians.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mapping::MappingKind;
use crate::pauli::{PauliError, PauliSum};

pub const MAX_DENSE_QUBITS: usize = 12;
pub const MAX_ITERATIVE_QUBITS: usize = 16;
const HERMITIAN_TOL: f64 = 1e-10;
const DENSE_SECTOR_LIMIT: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FciError {
    #[error("{n_qubits} qubits exceeds the {method} limit of {limit}")]
    TooManyQubits { n_qubits: usize, limit: usize, method: &'static str },
    #[error("Hamiltonian is not Hermitian")]
    NonHermitian,
    #[error("no basis states carry {n_alpha}α + {n_beta}β electrons")]
    EmptySector { n_alpha: usize, n_beta: usize },
    #[error("Lanczos stopped after {iterations} iterations with residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig { max_iterations: 300, tolerance: 1e-12, seed: 7 }
    }
}

fn check_hermitian(h: &PauliSum) -> Result<(), FciError> {
    if h.is_hermitian(HERMITIAN_TOL) {
        Ok(())
    } else {
        Err(FciError::NonHermitian)
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
fn eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    let real = m.iter().all(|z| z.im.abs() < 1e-14);
    let mut ev: Vec<f64> = if real {
        let re = m.map(|z| z.re);
        let re = (&re + re.transpose()) * 0.5;
        re.symmetric_eigenvalues().iter().copied().collect()
    } else {
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().collect()
    };
    ev.sort_by(f64::total_cmp);
    ev
}

fn lowest_eigenvalue(m: DMatrix<Complex64>) -> f64 {
    eigenvalues(m)[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    Dense,
    Iterative,
}

/// The `count` lowest eigenvalues of `operator`.
#[derive(Debug, Clone)]
pub struct SpectrumRequest<'a> {
    pub operator: &'a PauliSum,
    pub count: usize,
    pub method: SpectrumMethod,
}

/// Lowest eigenvalues in ascending order. The iterative method resolves
/// distinct eigenvalues; exact degeneracies appear once.
pub fn lowest_eigenvalues(request: &SpectrumRequest<'_>) -> Result<Vec<f64>, FciError> {
    let h = request.operator;
    let n = h.num_qubits();
    if request.count == 0 {
        return Ok(Vec::new());
    }
    match request.method {
        SpectrumMethod::Dense => {
            if n > MAX_DENSE_QUBITS {
                return Err(FciError::TooManyQubits { n_qubits: n, limit: MAX_DENSE_QUBITS, method: "dense" });
            }
            check_hermitian(h)?;
            let mut ev = eigenvalues(h.to_matrix()?.to_dense());
            ev.truncate(request.count);
            Ok(ev)
        }
        SpectrumMethod::Iterative => {
            if n > MAX_ITERATIVE_QUBITS {
                return Err(FciError::TooManyQubits { n_qubits: n, limit: MAX_ITERATIVE_QUBITS, method: "iterative" });
            }
            check_hermitian(h)?;
            lanczos_lowest(1usize << n, |v, out| h.apply(v, out), request.count, &LanczosConfig::default())
        }
    }
}

/// Eigenvalues of the lowest cluster closer together than `tol`, for
/// degeneracy diagnostics.
pub fn ground_degeneracy(spectrum: &[f64], tol: f64) -> usize {
    spectrum.iter().take_while(|&&e| e - spectrum[0] <= tol).count()
}

/// Lowest eigenvalue by dense diagonalization.
pub fn ground_energy_dense(h: &PauliSum) -> Result<f64, FciError> {
    let n = h.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(FciError::TooManyQubits { n_qubits: n, limit: MAX_DENSE_QUBITS, method: "dense" });
    }
    check_hermitian(h)?;
    Ok(lowest_eigenvalue(h.to_matrix()?.to_dense()))
}

/// Lowest eigenvalue by matrix-free Lanczos over the full register.
pub fn ground_energy_iterative(h: &PauliSum, config: &LanczosConfig) -> Result<f64, FciError> {
    let n = h.num_qubits();
    if n > MAX_ITERATIVE_QUBITS {
        return Err(FciError::TooManyQubits { n_qubits: n, limit: MAX_ITERATIVE_QUBITS, method: "iterative" });
    }
    check_hermitian(h)?;
    let dim = 1usize << n;
    lanczos(dim, |v, out| h.apply(v, out), config)
}

/// Lowest eigenvalue by Lanczos; see [`lanczos_lowest`].
pub fn lanczos<F>(dim: usize, apply: F, config: &LanczosConfig) -> Result<f64, FciError>
where
    F: Fn(&[Complex64], &mut [Complex64]),
{
    Ok(lanczos_lowest(dim, apply, 1, config)?[0])
}

fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Lanczos with full reorthogonalization on a Hermitian operator given as a
/// matrix-vector product. Returns up to `count` lowest Ritz values once each
/// has stopped moving and its residual is small.
pub fn lanczos_lowest<F>(dim: usize, apply: F, count: usize, config: &LanczosConfig) -> Result<Vec<f64>, FciError>
where
    F: Fn(&[Complex64], &mut [Complex64]),
{
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut q: Vec<Complex64> = (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
    let n0 = vnorm(&q);
    q.iter_mut().for_each(|z| *z /= n0);

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut previous: Vec<f64> = Vec::new();
    let mut residual = f64::INFINITY;
    let limit = config.max_iterations.min(dim);

    for k in 0..limit {
        apply(&q, &mut w);
        let a = vdot(&q, &w).re;
        basis.push(q.clone());
        alphas.push(a);
        // Full reorthogonalization, applied twice for stability.
        for _ in 0..2 {
            for b in &basis {
                let c = vdot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let beta = vnorm(&w);

        let m = alphas.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alphas[i]
            } else if i + 1 == j || j + 1 == i {
                betas[i.min(j)]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        order.truncate(count);
        let ritz: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        residual = order.iter().map(|&i| beta * eig.eigenvectors[(m - 1, i)].abs()).fold(0.0, f64::max);
        let scale = ritz[0].abs().max(1.0);
        if beta <= 1e-14 * scale || k + 1 == dim {
            // Invariant subspace reached; the Ritz values are exact.
            return Ok(ritz);
        }
        let settled = ritz.len() == count
            && previous.len() == count
            && ritz.iter().zip(&previous).all(|(a, b)| (a - b).abs() <= config.tolerance * scale);
        if settled && residual <= config.tolerance * scale * 1e2 {
            return Ok(ritz);
        }
        previous = ritz;
        betas.push(beta);
        q = w.iter().map(|z| z / beta).collect();
    }
    Err(FciError::NotConverged { iterations: limit, residual })
}

/// Qubit-register basis indices whose decoded occupation has the requested
/// electron counts per spin.
pub fn sector_indices(kind: MappingKind, n_qubits: usize, n_alpha: usize, n_beta: usize) -> Vec<usize> {
    let n_modes = n_qubits + if kind.reduction().is_some() { 2 } else { 0 };
    let half = n_modes / 2;
    (0..1usize << n_qubits)
        .filter(|&b| {
            let occ = kind.decode_basis_state(b, n_qubits);
            let bits = occ.bits();
            let na = bits[..half].iter().filter(|&&x| x).count();
            let nb = bits[half..].iter().filter(|&&x| x).count();
            na == n_alpha && nb == n_beta
        })
        .collect()
}

/// Lowest eigenvalue restricted to the fixed-particle-number sector.
pub fn sector_ground_energy(h: &PauliSum, kind: MappingKind, n_alpha: usize, n_beta: usize) -> Result<f64, FciError> {
    let n = h.num_qubits();
    if n > MAX_ITERATIVE_QUBITS {
        return Err(FciError::TooManyQubits { n_qubits: n, limit: MAX_ITERATIVE_QUBITS, method: "sector" });
    }
    check_hermitian(h)?;
    let idx = sector_indices(kind, n, n_alpha, n_beta);
    if idx.is_empty() {
        return Err(FciError::EmptySector { n_alpha, n_beta });
    }
    let dim_full = 1usize << n;
    let mut position = vec![usize::MAX; dim_full];
    for (k, &b) in idx.iter().enumerate() {
        position[b] = k;
    }
    if idx.len() <= DENSE_SECTOR_LIMIT {
        let d = idx.len();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for (col, &b) in idx.iter().enumerate() {
            for (p, &c) in h.iter() {
                let (b2, ph) = p.apply_to_basis(b);
                let row = position[b2];
                if row != usize::MAX {
                    m[(row, col)] += c * ph;
                }
            }
        }
        return Ok(lowest_eigenvalue(m));
    }
    let apply = |v: &[Complex64], out: &mut [Complex64]| {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (col, &b) in idx.iter().enumerate() {
            let amp = v[col];
            for (p, &c) in h.iter() {
                let (b2, ph) = p.apply_to_basis(b);
                let row = position[b2];
                if row != usize::MAX {
                    out[row] += c * ph * amp;
                }
            }
        }
    };
    lanczos(idx.len(), apply, &LanczosConfig::default())
}
