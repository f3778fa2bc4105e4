"""Generate FCIDUMP fixtures and benchmark energies with PySCF.

Writes <label>_<bond>.fcidump files (bond length in Angstrom, 4 decimals)
plus benchmarks.csv holding the RHF and FCI energies for every file.

    python3 scripts/gen_fixtures.py crates/core/fixtures
"""
import math
import os
import sys

import numpy as np
from pyscf import fci, gto, scf
from pyscf.tools import fcidump


def h2(d):
    return [("H", (0, 0, 0)), ("H", (0, 0, d))], 0


def h3p(d):
    r = d / math.sqrt(3.0)
    atoms = [("H", (r * math.cos(a), r * math.sin(a), 0.0))
             for a in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)]
    return atoms, 1


def ohm(d):
    return [("O", (0, 0, 0)), ("H", (0, 0, d))], -1


def hf(d):
    return [("F", (0, 0, 0)), ("H", (0, 0, d))], 0


def bh3(d):
    atoms = [("B", (0, 0, 0))]
    for a in (0.0, 2 * math.pi / 3, 4 * math.pi / 3):
        atoms.append(("H", (d * math.cos(a), d * math.sin(a), 0.0)))
    return atoms, 0


SCANS = {
    "h2": (h2, [0.7414] + [round(0.5 + 0.1 * i, 4) for i in range(16)]),
    "h3p": (h3p, [round(0.6 + 0.1 * i, 4) for i in range(11)]),
    "ohm": (ohm, [round(0.7 + 0.1 * i, 4) for i in range(9)] + [0.9640]),
    "hf": (hf, [round(0.7 + 0.1 * i, 4) for i in range(9)] + [0.9170]),
    "bh3": (bh3, [round(0.9 + 0.1 * i, 4) for i in range(7)] + [1.1900]),
}


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for label, (builder, bonds) in SCANS.items():
        for d in sorted(set(bonds)):
            atoms, charge = builder(d)
            mol = gto.M(atom=atoms, basis="sto-3g", charge=charge, spin=0,
                        unit="Angstrom", verbose=0, symmetry=False)
            mf = scf.RHF(mol)
            mf.conv_tol = 1e-12
            mf.kernel()
            assert mf.converged, (label, d)
            path = os.path.join(out_dir, f"{label}_{d:.4f}.fcidump")
            fcidump.from_scf(mf, path, tol=1e-14)
            e_fci = fci.FCI(mf).kernel()[0]
            rows.append((label, d, mol.nao * 2, mol.nelectron, mf.e_tot, e_fci))
            print(label, d, mol.nao * 2, mf.e_tot, e_fci)
    with open(os.path.join(out_dir, "benchmarks.csv"), "w") as fh:
        fh.write("label,bond_length_angstrom,n_spin_orbitals,n_electrons,e_rhf_hartree,e_fci_hartree\n")
        for label, d, nso, ne, erhf, efci in rows:
            fh.write(f"{label},{d:.4f},{nso},{ne},{erhf:.12f},{efci:.12f}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/fixtures")
