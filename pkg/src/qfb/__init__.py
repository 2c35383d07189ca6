"""Linear quantum network models of parametric oscillators with coherent
feedback, and the Gaussian entanglement analysis built on top of them."""

from .core import (
    LinearQuantumSystem,
    ModeParity,
    TransferMatrix,
    is_stable,
    poles,
    transfer_matrix,
)
from .feedback import (
    BeamsplitterController,
    ClosedLoopSystem,
    close_loop,
    closed_loop_poles,
    closed_loop_tf,
    closed_loop_transfer,
    controller_matrix,
)
from .gaussian import (
    CovarianceMatrix,
    QuadratureTransfer,
    entanglement_entropy,
    output_covariance,
    quadrature_transfer,
    symplectic_eigenvalue,
    tms_entropy_closed_form,
)
from .systems import (
    InteractionGraph,
    TOPOLOGIES,
    build_from_graph,
    build_topology,
    cluster_linear,
    cluster_square,
    cluster_tshape,
    detuning_rule,
    ndpo_tms,
)

__all__ = [
    "BeamsplitterController",
    "ClosedLoopSystem",
    "CovarianceMatrix",
    "InteractionGraph",
    "LinearQuantumSystem",
    "ModeParity",
    "QuadratureTransfer",
    "TOPOLOGIES",
    "TransferMatrix",
    "build_from_graph",
    "build_topology",
    "close_loop",
    "closed_loop_poles",
    "closed_loop_tf",
    "closed_loop_transfer",
    "cluster_linear",
    "cluster_square",
    "cluster_tshape",
    "controller_matrix",
    "detuning_rule",
    "entanglement_entropy",
    "is_stable",
    "ndpo_tms",
    "output_covariance",
    "poles",
    "quadrature_transfer",
    "symplectic_eigenvalue",
    "tms_entropy_closed_form",
    "transfer_matrix",
]

__version__ = "0.1.0"
