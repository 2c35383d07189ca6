"""Quadrature-basis transfer, output covariance and entanglement entropy.

At a fixed frequency the doubled-basis transfer matrix is expanded to the
full 2n x 2n relation on (b_1, b_1^dag, ..., b_n, b_n^dag) and conjugated
into the quadrature ordering (q_1, p_1, ..., q_n, p_n) with
q = (b + b^dag)/sqrt(2), p = (b - b^dag)/(sqrt(2) i). For vacuum inputs the
output covariance is gamma = Re[Y R Y^T]/2 and the single-mode-vs-rest
entanglement entropy follows from the symplectic eigenvalue of each 2x2
diagonal block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .core import ModeParity, TransferMatrix
from .errors import NotBogoliubov, NotReal, Unphysical

__all__ = [
    "QuadratureTransfer",
    "CovarianceMatrix",
    "quadrature_transfer",
    "output_covariance",
    "symplectic_eigenvalue",
    "entanglement_entropy",
    "tms_entropy_closed_form",
]

# Per-mode change of basis (b, b^dag) -> (q, p) and its inverse.
_U = np.array([[1.0, 1.0], [-1.0j, 1.0j]]) / math.sqrt(2.0)
_U_INV = np.array([[1.0, 1.0j], [1.0, -1.0j]]) / math.sqrt(2.0)


@dataclass(frozen=True)
class QuadratureTransfer:
    """Real 2n x 2n quadrature-basis transfer matrix at one frequency."""

    y: NDArray[np.float64]
    omega: float

    @property
    def n(self) -> int:
        return self.y.shape[0] // 2


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric 2n x 2n covariance matrix; vacuum variance is 1/2."""

    gamma: NDArray[np.float64]

    def __post_init__(self) -> None:
        g = self.gamma
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
            raise ValueError("covariance must be 2n x 2n")
        if np.max(np.abs(g - g.T)) > 1e-12:
            raise ValueError("covariance must be symmetric")

    @property
    def n(self) -> int:
        return self.gamma.shape[0] // 2

    def block(self, j: int) -> NDArray[np.float64]:
        """2x2 diagonal block of mode j (0-based)."""
        return self.gamma[2 * j : 2 * j + 2, 2 * j : 2 * j + 2]


def _doubled_expansion(
    g: NDArray[np.complex128], parity: ModeParity
) -> NDArray[np.complex128]:
    """Expand the n x n doubled-basis relation to (b_1, b_1^dag, ...).

    Row j of G relates the port entry of mode j (b_j or b_j^dag per parity)
    to the port entries of all modes; the conjugate row supplies the
    missing operator of each pair.
    """
    n = parity.n
    t = np.zeros((2 * n, 2 * n), dtype=complex)
    # Position of mode k's port entry (0 = b, 1 = b^dag) in the pair basis.
    pos = [0 if s == 1 else 1 for s in parity.signs]
    for jj in range(n):
        for kk in range(n):
            t[2 * jj + pos[jj], 2 * kk + pos[kk]] = g[jj, kk]
            t[2 * jj + 1 - pos[jj], 2 * kk + 1 - pos[kk]] = np.conj(g[jj, kk])
    return t


def quadrature_transfer(
    g: TransferMatrix, parity: ModeParity | None = None
) -> QuadratureTransfer:
    """Convert an imaginary-axis transfer matrix to the quadrature basis.

    Raises NotReal if the result has residual imaginary part above 1e-10,
    which indicates an off-axis evaluation or a parity mismatch.
    """
    if parity is None:
        parity = g.parity
    if abs(g.s.real) > 1e-12 * (1.0 + abs(g.s)):
        raise NotReal(
            f"s = {g.s} is off the imaginary axis; the conjugate rows of the "
            "doubled relation are only valid at s = i omega"
        )
    n = parity.n
    t = _doubled_expansion(g.matrix, parity)
    u = np.kron(np.eye(n), _U)
    u_inv = np.kron(np.eye(n), _U_INV)
    y_complex = u @ t @ u_inv
    resid = np.max(np.abs(y_complex.imag))
    if resid > 1e-10:
        raise NotReal(f"imaginary residual {resid:.3e} exceeds 1e-10")
    y = np.ascontiguousarray(y_complex.real)
    y.setflags(write=False)
    return QuadratureTransfer(y=y, omega=float(g.s.imag))


def output_covariance(y: QuadratureTransfer) -> CovarianceMatrix:
    """Covariance of the output state for vacuum inputs: Re[Y R Y^T]/2."""
    r_block = np.array([[1.0, 1.0j], [-1.0j, 1.0]])
    r = np.kron(np.eye(y.n), r_block)
    gamma = 0.5 * np.real(y.y @ r @ y.y.T)
    gamma = 0.5 * (gamma + gamma.T)
    gamma.setflags(write=False)
    return CovarianceMatrix(gamma=gamma)


def symplectic_eigenvalue(cm: CovarianceMatrix, j: int) -> float:
    """Symplectic eigenvalue of mode j's reduced 2x2 block: sqrt(det)."""
    det = float(np.linalg.det(cm.block(j)))
    sigma = math.sqrt(max(det, 0.0))
    if sigma < 0.5 - 1e-8:
        raise Unphysical(f"symplectic eigenvalue {sigma} violates sigma >= 1/2")
    return sigma


def _entropy_from_sigma(sigma: float) -> float:
    # Clamp guards round-off at the vacuum boundary; the sigma -> 1/2 limit
    # of the second term is 0.
    sigma = max(sigma, 0.5)
    plus = sigma + 0.5
    minus = sigma - 0.5
    s = plus * math.log(plus)
    if minus > 0.0:
        s -= minus * math.log(minus)
    return s


def entanglement_entropy(cm: CovarianceMatrix, j: int) -> float:
    """Entropy (nats) between mode j and the remaining modes."""
    return _entropy_from_sigma(symplectic_eigenvalue(cm, j))


def tms_entropy_closed_form(g11: complex, g12: complex) -> float:
    """Two-mode entropy directly from the transfer entries.

    S = |G11|^2 ln|G11|^2 - |G12|^2 ln|G12|^2, valid when
    |G11|^2 - |G12|^2 = 1 (pure two-mode squeezed output).
    """
    a = abs(g11) ** 2
    b = abs(g12) ** 2
    if abs(a - b - 1.0) > 1e-6:
        raise NotBogoliubov(f"|G11|^2 - |G12|^2 = {a - b}, expected 1")
    s = a * math.log(a)
    if b > 0.0:
        s -= b * math.log(b)
    return s
