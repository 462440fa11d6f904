"""Transfer-learning parameter initialization for variational quantum eigensolvers.

Train a small circuit, pool its solutions, and start a larger circuit from them::

    from vqtransfer import get_task, run_base, run_task

    task = get_task("D")
    _, pool = run_base(task, master_seed=1)
    records, summary = run_task(task, "TR", master_seed=2, pool=pool)
"""

try:
    # written by hatch-vcs at build time
    from ._version import __version__
except ImportError:  # pragma: no cover - source checkout without a build
    from importlib.metadata import PackageNotFoundError
    from importlib.metadata import version as _version

    try:
        __version__ = _version("vqtransfer")
    except PackageNotFoundError:
        __version__ = "0.0.0+unknown"

# __version__ must exist before these: records stamps it into every manifest.
from vqtransfer.ansatz import build_hea, build_hva, build_hva_variant, evaluate  # noqa: E402
from vqtransfer.errors import VQTransferError  # noqa: E402
from vqtransfer.initialization import InitPlan, network_transfer, structure_transfer  # noqa: E402
from vqtransfer.models import build_tfim, build_xxz  # noqa: E402
from vqtransfer.optimize import bfgs_minimize, value_and_gradient  # noqa: E402
from vqtransfer.pauli import PauliSum, PauliTerm, ground_energy  # noqa: E402
from vqtransfer.tasks import get_task, task_registry  # noqa: E402
from vqtransfer.trials import run_base, run_task  # noqa: E402

__all__ = [
    "InitPlan",
    "PauliSum",
    "PauliTerm",
    "VQTransferError",
    "__version__",
    "bfgs_minimize",
    "build_hea",
    "build_hva",
    "build_hva_variant",
    "build_tfim",
    "build_xxz",
    "evaluate",
    "get_task",
    "ground_energy",
    "network_transfer",
    "run_base",
    "run_task",
    "structure_transfer",
    "task_registry",
    "value_and_gradient",
]
