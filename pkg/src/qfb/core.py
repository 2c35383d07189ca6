"""Linear quantum systems in a doubled (annihilation/creation) basis.

A system of n cavity modes is represented by a complex drift matrix acting on
a port vector whose j-th entry is either the annihilation operator b_j or the
creation operator b_j^dag; which one is recorded by a per-mode parity sign.
The input-output behaviour is the n x n transfer matrix

    G(s) = I - sqrt(Gamma) (sI - A)^{-1} sqrt(Gamma),   Gamma = diag(kappa_j),

whose poles are the eigenvalues of the drift matrix A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from .errors import SingularAtPole

__all__ = [
    "ModeParity",
    "LinearQuantumSystem",
    "TransferMatrix",
    "transfer_matrix",
    "poles",
    "is_stable",
]


@dataclass(frozen=True)
class ModeParity:
    """Per-mode conjugation signs of the doubled-basis port vector.

    ``signs[j] == +1`` means entry j is the annihilation operator b_j;
    ``-1`` means the creation operator b_j^dag.
    """

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.signs:
            raise ValueError("parity must cover at least one mode")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"parity entries must be +1 or -1, got {self.signs}")

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def sigma(self) -> NDArray[np.float64]:
        """Sign vector as an array."""
        return np.array(self.signs, dtype=float)

    @property
    def matrix(self) -> NDArray[np.float64]:
        """Signature matrix Sigma = diag(signs) of the Bogoliubov identity."""
        return np.diag(self.sigma)


@dataclass(frozen=True)
class LinearQuantumSystem:
    """n-mode cavity network with two-mode-squeezing couplings.

    The drift matrix is determined by the parameters: its diagonal is
    ``-(sigma_j * 1j * detuning_j + damping_j / 2)`` and its off-diagonal
    part is the real symmetric coupling matrix.
    """

    parity: ModeParity
    damping: tuple[float, ...]
    detuning: tuple[float, ...]
    coupling: tuple[tuple[float, ...], ...] = field(repr=False)

    def __post_init__(self) -> None:
        n = self.parity.n
        if len(self.damping) != n or len(self.detuning) != n:
            raise ValueError("damping/detuning length must equal mode count")
        if any(k <= 0 for k in self.damping):
            raise ValueError("all damping rates must be positive")
        lam = np.asarray(self.coupling, dtype=float)
        if lam.shape != (n, n):
            raise ValueError(f"coupling must be {n}x{n}")
        if not np.allclose(lam, lam.T, atol=0.0):
            raise ValueError("coupling matrix must be symmetric")
        if np.any(np.diag(lam) != 0.0):
            raise ValueError("coupling matrix must have zero diagonal")
        sig = self.parity.sigma
        bad = (lam != 0.0) & (sig[:, None] * sig[None, :] > 0)
        if np.any(bad):
            raise ValueError("couplings may only connect modes of opposite parity")

    @property
    def n(self) -> int:
        return self.parity.n

    @cached_property
    def drift(self) -> NDArray[np.complex128]:
        """Drift matrix A of the doubled-basis Langevin equations."""
        sig = self.parity.sigma
        kappa = np.asarray(self.damping)
        delta = np.asarray(self.detuning)
        a = np.asarray(self.coupling, dtype=complex).copy()
        a[np.diag_indices(self.n)] = -(1j * sig * delta + kappa / 2.0)
        a.setflags(write=False)
        return a

    @cached_property
    def _sqrt_gamma(self) -> NDArray[np.float64]:
        g = np.diag(np.sqrt(np.asarray(self.damping)))
        g.setflags(write=False)
        return g


@dataclass(frozen=True)
class TransferMatrix:
    """n x n doubled-basis transfer matrix evaluated at one Laplace point."""

    matrix: NDArray[np.complex128]
    s: complex
    parity: ModeParity

    @property
    def n(self) -> int:
        return self.parity.n


def transfer_matrix(sys: LinearQuantumSystem, s: complex) -> TransferMatrix:
    """Evaluate G(s) = I - sqrt(Gamma) (sI - A)^{-1} sqrt(Gamma).

    Raises
    ------
    SingularAtPole
        If ``sI - A`` is singular to working precision, i.e. s sits at a
        pole of the system.
    """
    a = sys.drift
    m = s * np.eye(sys.n, dtype=complex) - a
    smin = np.linalg.svd(m, compute_uv=False)[-1]
    tol = 1e-12 * np.linalg.norm(a, 2)
    if smin <= tol:
        raise SingularAtPole(f"s={s} is within tolerance of a system pole")
    sq = sys._sqrt_gamma
    g = np.eye(sys.n, dtype=complex) - sq @ np.linalg.solve(m, sq)
    g.setflags(write=False)
    return TransferMatrix(matrix=g, s=complex(s), parity=sys.parity)


def poles(sys: LinearQuantumSystem) -> list[complex]:
    """Eigenvalues of the drift matrix, multiplicity included."""
    return [complex(z) for z in np.linalg.eigvals(sys.drift)]


def is_stable(sys: LinearQuantumSystem, margin: float | None = None) -> bool:
    """True iff every pole satisfies Re(pole) < -margin.

    The default margin ``1e-9 * max(kappa)`` guards against round-off in
    systems whose poles sit exactly on Re(s) = -kappa/2.
    """
    if margin is None:
        margin = 1e-9 * max(sys.damping)
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    return max(z.real for z in poles(sys)) < -margin
