//! Closed-form integrals over contracted s-type Gaussians.
//!
//! Orbitals are obtained by symmetric orthogonalization followed by
//! diagonalization of the core Hamiltonian; no self-consistent field is run.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::geometry::distance;
use super::{nuclear_repulsion, BasisShell, IntegralTensors, IntegralsError, MolecularGeometry};

/// Smallest accepted ratio of overlap eigenvalues.
pub const OVERLAP_CONDITION_LIMIT: f64 = 1e-10;

/// Boys function of order zero, `F0(t) = ∫_0^1 exp(−t u²) du`.
pub fn boys_f0(t: f64) -> f64 {
    if t < 1e-6 {
        1.0 - t / 3.0 + t * t / 10.0
    } else {
        let s = t.sqrt();
        0.5 * (PI / t).sqrt() * libm::erf(s)
    }
}

/// Atomic-orbital integrals over the basis shells.
#[derive(Debug, Clone)]
pub struct AoIntegrals {
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    pub nuclear: DMatrix<f64>,
    /// Chemist-notation `(μν|λσ)`, flat row-major `n^4`.
    pub eri: Vec<f64>,
}

impl AoIntegrals {
    pub fn n_basis(&self) -> usize {
        self.overlap.nrows()
    }

    pub fn eri(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n_basis();
        self.eri[((i * n + j) * n + k) * n + l]
    }

    pub fn core_hamiltonian(&self) -> DMatrix<f64> {
        &self.kinetic + &self.nuclear
    }
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn product_center(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> [f64; 3] {
    let p = a + b;
    [0, 1, 2].map(|k| (a * ra[k] + b * rb[k]) / p)
}

/// Unnormalized primitive integrals.
mod primitive {
    use super::*;

    pub fn overlap(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> f64 {
        let p = a + b;
        (PI / p).powf(1.5) * (-a * b / p * dist2(ra, rb)).exp()
    }

    pub fn kinetic(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> f64 {
        let p = a + b;
        let mu = a * b / p;
        mu * (3.0 - 2.0 * mu * dist2(ra, rb)) * overlap(a, ra, b, rb)
    }

    /// Attraction to a unit point charge at `rc` (positive; sign applied by caller).
    pub fn coulomb(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3], rc: &[f64; 3]) -> f64 {
        let p = a + b;
        let rp = product_center(a, ra, b, rb);
        2.0 * PI / p * (-a * b / p * dist2(ra, rb)).exp() * boys_f0(p * dist2(&rp, rc))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn repulsion(
        a: f64,
        ra: &[f64; 3],
        b: f64,
        rb: &[f64; 3],
        c: f64,
        rc: &[f64; 3],
        d: f64,
        rd: &[f64; 3],
    ) -> f64 {
        let p = a + b;
        let q = c + d;
        let rp = product_center(a, ra, b, rb);
        let rq = product_center(c, rc, d, rd);
        let pref = 2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt());
        pref * (-a * b / p * dist2(ra, rb) - c * d / q * dist2(rc, rd)).exp()
            * boys_f0(p * q / (p + q) * dist2(&rp, &rq))
    }
}

fn contract2(s1: &BasisShell, s2: &BasisShell, f: impl Fn(f64, f64) -> f64) -> f64 {
    let (e1, w1, e2, w2) = (s1.exponents(), s1.weights(), s2.exponents(), s2.weights());
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += w1[i] * w2[j] * f(e1[i], e2[j]);
        }
    }
    acc
}

/// Overlap, kinetic, nuclear-attraction and repulsion integrals in the AO basis.
pub fn ao_integrals(geometry: &MolecularGeometry, basis: &[BasisShell]) -> AoIntegrals {
    let n = basis.len();
    let nuclei: Vec<(f64, [f64; 3])> = geometry.atoms().iter().map(|a| (a.charge as f64, a.position_bohr())).collect();
    let mut overlap = DMatrix::zeros(n, n);
    let mut kinetic = DMatrix::zeros(n, n);
    let mut nuclear = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let (ri, rj) = (basis[i].center(), basis[j].center());
            let s = contract2(&basis[i], &basis[j], |a, b| primitive::overlap(a, &ri, b, &rj));
            let t = contract2(&basis[i], &basis[j], |a, b| primitive::kinetic(a, &ri, b, &rj));
            let v = contract2(&basis[i], &basis[j], |a, b| {
                nuclei.iter().map(|(z, rc)| -z * primitive::coulomb(a, &ri, b, &rj, rc)).sum()
            });
            for (m, val) in [(&mut overlap, s), (&mut kinetic, t), (&mut nuclear, v)] {
                m[(i, j)] = val;
                m[(j, i)] = val;
            }
        }
    }
    let mut eri = vec![0.0; n.pow(4)];
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if i * (i + 1) / 2 + j < k * (k + 1) / 2 + l {
                        continue;
                    }
                    let v = shell_repulsion(&basis[i], &basis[j], &basis[k], &basis[l]);
                    for (a, b, c, d) in [
                        (i, j, k, l),
                        (j, i, k, l),
                        (i, j, l, k),
                        (j, i, l, k),
                        (k, l, i, j),
                        (l, k, i, j),
                        (k, l, j, i),
                        (l, k, j, i),
                    ] {
                        eri[idx(a, b, c, d)] = v;
                    }
                }
            }
        }
    }
    AoIntegrals { overlap, kinetic, nuclear, eri }
}

fn shell_repulsion(s1: &BasisShell, s2: &BasisShell, s3: &BasisShell, s4: &BasisShell) -> f64 {
    let (r1, r2, r3, r4) = (s1.center(), s2.center(), s3.center(), s4.center());
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let w = s1.weights()[i] * s2.weights()[j] * s3.weights()[k] * s4.weights()[l];
                    acc += w * primitive::repulsion(
                        s1.exponents()[i],
                        &r1,
                        s2.exponents()[j],
                        &r2,
                        s3.exponents()[k],
                        &r3,
                        s4.exponents()[l],
                        &r4,
                    );
                }
            }
        }
    }
    acc
}

/// Orthonormal orbitals diagonalizing the core Hamiltonian, columns sorted by
/// ascending orbital energy.
pub(crate) fn core_orbitals(ao: &AoIntegrals) -> Result<DMatrix<f64>, IntegralsError> {
    let eig = ao.overlap.clone().symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if !(min > 0.0) || min / max < OVERLAP_CONDITION_LIMIT {
        return Err(IntegralsError::LinearDependence(min / max));
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let x = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let h_orth = x.transpose() * ao.core_hamiltonian() * &x;
    let heig = h_orth.symmetric_eigen();
    let mut order: Vec<usize> = (0..heig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| heig.eigenvalues[a].total_cmp(&heig.eigenvalues[b]));
    let n = order.len();
    let mut u = DMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        // Fix the sign so the largest component is positive; keeps output deterministic.
        let v = heig.eigenvectors.column(src);
        let pivot = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        u.set_column(col, &(v * sign));
    }
    Ok(x * u)
}

fn transform_eri(ao: &[f64], c: &DMatrix<f64>) -> Vec<f64> {
    let n = c.nrows();
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let mut cur = ao.to_vec();
    // Quarter transformations, one index at a time.
    for pos in 0..4 {
        let mut next = vec![0.0; n.pow(4)];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = 0.0;
                        for mu in 0..n {
                            let (src, coef) = match pos {
                                0 => (idx(mu, j, k, l), c[(mu, i)]),
                                1 => (idx(i, mu, k, l), c[(mu, j)]),
                                2 => (idx(i, j, mu, l), c[(mu, k)]),
                                _ => (idx(i, j, k, mu), c[(mu, l)]),
                            };
                            acc += coef * cur[src];
                        }
                        next[idx(i, j, k, l)] = acc;
                    }
                }
            }
        }
        cur = next;
    }
    // Restore exact permutational symmetry lost to rounding.
    let mut sym = cur.clone();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let images = [
                        cur[idx(i, j, k, l)],
                        cur[idx(j, i, k, l)],
                        cur[idx(i, j, l, k)],
                        cur[idx(j, i, l, k)],
                        cur[idx(k, l, i, j)],
                        cur[idx(l, k, i, j)],
                        cur[idx(k, l, j, i)],
                        cur[idx(l, k, j, i)],
                    ];
                    sym[idx(i, j, k, l)] = images.iter().sum::<f64>() / 8.0;
                }
            }
        }
    }
    sym
}

/// Molecular-orbital integrals for hydrogen-like atoms carrying s shells.
pub fn sgto_integrals(geometry: &MolecularGeometry, basis: &[BasisShell]) -> Result<IntegralTensors, IntegralsError> {
    if let Some(a) = geometry.atoms().iter().find(|a| a.charge > 2) {
        return Err(IntegralsError::Unsupported(format!(
            "nuclear charge {} needs p-type functions; only s-shell atoms are supported",
            a.charge
        )));
    }
    if basis.is_empty() {
        return Err(IntegralsError::Unsupported("empty basis".into()));
    }
    for atom in geometry.atoms() {
        let r = atom.position_bohr();
        if !basis.iter().any(|s| distance(&s.center(), &r) < 1e-12) {
            return Err(IntegralsError::Unsupported("atom without a basis shell".into()));
        }
    }
    let ao = ao_integrals(geometry, basis);
    let c = core_orbitals(&ao)?;
    let mut h = c.transpose() * ao.core_hamiltonian() * &c;
    h = (&h + h.transpose()) * 0.5;
    let eri = transform_eri(&ao.eri, &c);
    IntegralTensors::from_spatial(nuclear_repulsion(geometry)?, &h, &eri, geometry.n_alpha(), geometry.n_beta())
}

/// [`sgto_integrals`] in the bundled STO-3G basis.
pub fn sto3g_integrals(geometry: &MolecularGeometry) -> Result<IntegralTensors, IntegralsError> {
    let shells = super::BasisSet::sto3g().shells_for(geometry)?;
    sgto_integrals(geometry, &shells)
}
