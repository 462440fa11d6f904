"""Exception hierarchy. Every error also derives from the closest builtin."""

from pathlib import Path


class VQTransferError(Exception):
    """Root of all vqtransfer errors."""


class InvalidSizeError(VQTransferError, ValueError):
    pass


class QubitIndexError(VQTransferError, IndexError):
    pass


class SizeLimitError(VQTransferError, ValueError):
    pass


class InvalidPairError(VQTransferError, ValueError):
    pass


class QubitMismatchError(VQTransferError, ValueError):
    pass


class ConsistencyError(VQTransferError, RuntimeError):
    pass


class NonCommutingPartError(VQTransferError, ValueError):
    pass


class AnsatzError(VQTransferError, ValueError):
    pass


class UnsupportedAnsatzError(AnsatzError):
    pass


class TransferError(VQTransferError, ValueError):
    pass


class PoolError(VQTransferError, ValueError):
    pass


class ConfigurationError(VQTransferError, ValueError):
    pass


class GradientMethodError(VQTransferError, ValueError):
    pass


class PauliTermError(VQTransferError, ValueError):
    pass


class HamiltonianParseError(VQTransferError, ValueError):
    """Malformed Hamiltonian text; ``line`` is 1-based, ``None`` for whole-file problems."""

    def __init__(self, message: str, line: int | None = None, path: Path | None = None):
        self.message = message
        self.line = line
        self.path = path
        where = str(path) if path is not None else "<text>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


class AnalysisError(VQTransferError, ValueError):
    pass
