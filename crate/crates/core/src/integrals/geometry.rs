use super::IntegralsError;

/// Fixed conversion factor from Ångström to Bohr.
pub const ANGSTROM_TO_BOHR: f64 = 1.8897259886;

const MIN_SEPARATION_ANGSTROM: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// Nuclear charge.
    pub charge: u32,
    /// Position in Ångström.
    pub position: [f64; 3],
}

impl Atom {
    pub fn new(charge: u32, position: [f64; 3]) -> Self {
        Atom { charge, position }
    }

    pub fn position_bohr(&self) -> [f64; 3] {
        self.position.map(|x| x * ANGSTROM_TO_BOHR)
    }
}

/// Fixed nuclear framework with total charge and spin multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularGeometry {
    atoms: Vec<Atom>,
    charge: i32,
    multiplicity: u32,
}

impl MolecularGeometry {
    pub fn new(atoms: Vec<Atom>, charge: i32, multiplicity: u32) -> Result<Self, IntegralsError> {
        let invalid = |m: String| Err(IntegralsError::InvalidGeometry(m));
        if atoms.is_empty() {
            return invalid("no atoms".into());
        }
        if atoms.iter().any(|a| a.charge == 0) {
            return invalid("nuclear charges must be positive".into());
        }
        if atoms.iter().any(|a| a.position.iter().any(|x| !x.is_finite())) {
            return invalid("non-finite coordinate".into());
        }
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if distance(&atoms[i].position, &atoms[j].position) < MIN_SEPARATION_ANGSTROM {
                    return Err(IntegralsError::CoincidentNuclei(i, j));
                }
            }
        }
        let z: i64 = atoms.iter().map(|a| a.charge as i64).sum();
        let electrons = z - charge as i64;
        if electrons < 0 {
            return invalid(format!("charge {charge} leaves a negative electron count"));
        }
        if multiplicity == 0 {
            return invalid("multiplicity must be positive".into());
        }
        let unpaired = multiplicity as i64 - 1;
        if unpaired > electrons || (electrons - unpaired) % 2 != 0 {
            return invalid(format!("multiplicity {multiplicity} is impossible with {electrons} electrons"));
        }
        Ok(MolecularGeometry { atoms, charge, multiplicity })
    }

    /// Two atoms on the z axis separated by `bond` Å.
    pub fn diatomic(z1: u32, z2: u32, bond: f64, charge: i32, multiplicity: u32) -> Result<Self, IntegralsError> {
        Self::new(vec![Atom::new(z1, [0.0; 3]), Atom::new(z2, [0.0, 0.0, bond])], charge, multiplicity)
    }

    /// Equilateral H3+ with side `side` Å in the xy plane.
    pub fn trihydrogen_cation(side: f64) -> Result<Self, IntegralsError> {
        let r = side / 3f64.sqrt();
        let atoms = (0..3)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                Atom::new(1, [r * a.cos(), r * a.sin(), 0.0])
            })
            .collect();
        Self::new(atoms, 1, 1)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn charge(&self) -> i32 {
        self.charge
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn n_electrons(&self) -> usize {
        (self.atoms.iter().map(|a| a.charge as i64).sum::<i64>() - self.charge as i64) as usize
    }

    pub fn n_alpha(&self) -> usize {
        (self.n_electrons() + self.multiplicity as usize - 1) / 2
    }

    pub fn n_beta(&self) -> usize {
        self.n_electrons() - self.n_alpha()
    }
}

pub(crate) fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// `Σ_{i<j} Z_i Z_j / |R_i − R_j|` in Hartree.
pub fn nuclear_repulsion(geometry: &MolecularGeometry) -> Result<f64, IntegralsError> {
    let atoms = geometry.atoms();
    let mut e = 0.0;
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            let r = distance(&atoms[i].position_bohr(), &atoms[j].position_bohr());
            if r == 0.0 {
                return Err(IntegralsError::CoincidentNuclei(i, j));
            }
            e += (atoms[i].charge * atoms[j].charge) as f64 / r;
        }
    }
    Ok(e)
}
