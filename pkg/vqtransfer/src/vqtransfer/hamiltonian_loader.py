"""Hamiltonian loader: Pauli-word text ingestion, validation and canonical serialization.

File layout::

    # qubits: 4
    # reference_energy: -1.1372838344885
    -0.0970662681676 IIII
    0.171412826447 ZIII

Line 1 is the qubit header. Other ``#`` lines and blank lines are ignored.
Body lines are ``<coefficient> <word>`` where character ``k`` of ``word`` is the
axis on qubit ``k``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

from vqtransfer.errors import HamiltonianParseError, PauliTermError
from vqtransfer.logger import logger
from vqtransfer.pauli import PauliSum, PauliTerm

_QUBITS = re.compile(r"^#\s*qubits\s*:\s*(\S+)\s*$", re.IGNORECASE)
_REFERENCE = re.compile(r"^#\s*reference_energy\s*:\s*(\S+)\s*$", re.IGNORECASE)
_WORD = re.compile(r"^[IXYZ]+$")


@dataclass(frozen=True)
class HamiltonianFile:
    hamiltonian: PauliSum
    reference_energy: float | None = None


def _parse_float(token: str, what: str, line: int, path: Path | None) -> float:
    if "j" in token.lower():
        raise HamiltonianParseError(f"complex {what} {token!r} is not allowed", line, path)
    try:
        value = float(token)
    except ValueError:
        raise HamiltonianParseError(f"invalid {what} {token!r}", line, path) from None
    if not math.isfinite(value):
        raise HamiltonianParseError(f"non-finite {what} {token!r}", line, path)
    return value


def parse_hamiltonian(text: str, path: Path | None = None) -> HamiltonianFile:
    """Parse the text format; errors carry the 1-based line number."""
    lines = text.splitlines()
    if not lines:
        raise HamiltonianParseError("empty file, expected '# qubits: <n>' header", None, path)

    header = _QUBITS.match(lines[0].strip())
    if header is None:
        raise HamiltonianParseError("first line must be '# qubits: <n>'", 1, path)
    try:
        n = int(header.group(1))
    except ValueError:
        raise HamiltonianParseError(f"invalid qubit count {header.group(1)!r}", 1, path) from None
    if n < 1:
        raise HamiltonianParseError(f"qubit count must be >= 1, got {n}", 1, path)

    reference: float | None = None
    terms: list[PauliTerm] = []
    for number, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if match := _REFERENCE.match(line):
                reference = _parse_float(match.group(1), "reference energy", number, path)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise HamiltonianParseError(
                f"expected '<coefficient> <pauli-word>', got {line!r}", number, path
            )
        coefficient = _parse_float(parts[0], "coefficient", number, path)
        word = parts[1].upper()
        if not _WORD.match(word):
            raise HamiltonianParseError(f"invalid Pauli word {parts[1]!r}", number, path)
        if len(word) != n:
            raise HamiltonianParseError(
                f"Pauli word {parts[1]!r} has length {len(word)}, expected {n}", number, path
            )
        try:
            terms.append(PauliTerm.from_word(coefficient, word))
        except PauliTermError as exc:
            raise HamiltonianParseError(str(exc), number, path) from None

    hamiltonian = PauliSum(tuple(terms), n)
    logger.debug(
        "parsed hamiltonian",
        extra={"path": str(path) if path else None, "qubits": n, "terms": len(hamiltonian)},
    )
    return HamiltonianFile(hamiltonian, reference)


def load_hamiltonian_file(path: str | Path) -> HamiltonianFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        line = exc.object[: exc.start].count(b"\n") + 1
        raise HamiltonianParseError(f"not valid UTF-8 at byte {exc.start}", line, path) from None
    return parse_hamiltonian(text, path)



def dump_hamiltonian(h: PauliSum, reference_energy: float | None = None) -> str:
    """Canonical text form; parsing it back yields an identical ``PauliSum``."""
    lines = [f"# qubits: {h.num_qubits}"]
    if reference_energy is not None:
        lines.append(f"# reference_energy: {float(reference_energy)!r}")
    for term in h:
        lines.append(f"{term.coefficient!r} {term.word(h.num_qubits)}")
    return "\n".join(lines) + "\n"


def save_hamiltonian_file(
    path: str | Path, h: PauliSum, reference_energy: float | None = None
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_hamiltonian(h, reference_energy), encoding="utf-8")
