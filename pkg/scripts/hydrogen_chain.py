"""Write qubit Hamiltonians of linear hydrogen chains for task C.

Needs the ``chemistry`` dependency group::

    uv run --group chemistry python scripts/hydrogen_chain.py data/chemistry

Each file holds the Jordan-Wigner Hamiltonian of H_m in STO-3G with 0.74 Å
spacing, and ``reference_energy`` is the lowest eigenvalue of that qubit
operator as computed by OpenFermion.
"""

from pathlib import Path
from typing import Annotated

import typer
from openfermion import (
    MolecularData,
    get_fermion_operator,
    get_ground_state,
    get_sparse_operator,
    jordan_wigner,
)
from openfermionpyscf import run_pyscf

from vqtransfer.hamiltonian_loader import dump_hamiltonian
from vqtransfer.pauli import PauliSum, PauliTerm

SPACING = 0.74
BASIS = "sto-3g"
# atoms -> (charge, multiplicity)
CHAINS = {2: (0, 1), 3: (0, 2)}


def chain_hamiltonian(atoms: int, charge: int, multiplicity: int) -> tuple[PauliSum, float]:
    geometry = [("H", (0.0, 0.0, SPACING * i)) for i in range(atoms)]
    molecule = MolecularData(geometry, BASIS, multiplicity, charge)
    molecule = run_pyscf(molecule, run_scf=True)
    qubit_op = jordan_wigner(get_fermion_operator(molecule.get_molecular_hamiltonian()))
    n = molecule.n_qubits
    terms = tuple(
        PauliTerm(float(complex(coefficient).real), tuple(factors))
        for factors, coefficient in qubit_op.terms.items()
    )
    energy, _ = get_ground_state(get_sparse_operator(qubit_op, n_qubits=n))
    return PauliSum(terms, n), float(energy)


def main(
    out_dir: Annotated[Path, typer.Argument(help="Directory for h2.txt and h3.txt")] = Path(
        "data/chemistry"
    ),
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for atoms, (charge, multiplicity) in CHAINS.items():
        hamiltonian, energy = chain_hamiltonian(atoms, charge, multiplicity)
        header = (
            f"# molecule: H{atoms} chain, {SPACING} angstrom, {BASIS}, jordan-wigner\n"
            f"# charge: {charge}\n"
            f"# multiplicity: {multiplicity}\n"
        )
        first, rest = dump_hamiltonian(hamiltonian, energy).split("\n", 1)
        path = out_dir / f"h{atoms}.txt"
        path.write_text(f"{first}\n{header}{rest}", encoding="utf-8")
        typer.echo(
            f"{path}: {hamiltonian.num_qubits} qubits, {len(hamiltonian)} terms, E0={energy!r}"
        )


if __name__ == "__main__":
    typer.run(main)
