"""Passive beamsplitter controller and the mode-j coherent feedback loop.

The controller is the static unitary K = [[tau, -rho], [rho, tau]]. Feeding
output j back into input j through K yields a closed loop that is available
in two equivalent forms: the frequency-domain update of the open-loop
transfer matrix, and a closed state-space model whose drift eigenvalues are
the closed-loop poles.

Port wiring: with y the plant output at the fed mode and w the external
input, the controller relation is

    plant-input     = K21 * y + K22 * w,
    external-output = K11 * y + K12 * w.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import sqrt

import numpy as np
from numpy.typing import NDArray

from .core import LinearQuantumSystem, ModeParity, TransferMatrix
from .errors import IllPosedLoop, LoopSingular

__all__ = [
    "BeamsplitterController",
    "ClosedLoopSystem",
    "controller_matrix",
    "closed_loop_tf",
    "close_loop",
    "closed_loop_transfer",
    "closed_loop_poles",
]


@dataclass(frozen=True)
class BeamsplitterController:
    """Static beamsplitter with transmissivity tau and reflectivity rho."""

    tau: float
    rho: float

    def __post_init__(self) -> None:
        if abs(self.tau**2 + self.rho**2 - 1.0) > 1e-12:
            raise ValueError("tau^2 + rho^2 must equal 1")

    @classmethod
    def from_reflectivity(cls, rho: float) -> "BeamsplitterController":
        return cls(tau=sqrt(1.0 - rho * rho), rho=rho)


def controller_matrix(c: BeamsplitterController) -> NDArray[np.float64]:
    """The unitary 2x2 matrix [[tau, -rho], [rho, tau]]."""
    return np.array([[c.tau, -c.rho], [c.rho, c.tau]])


def closed_loop_tf(
    g: TransferMatrix, k: NDArray, j: int
) -> TransferMatrix:
    """Close the loop on mode j of an evaluated transfer matrix.

    ``k`` is the 2x2 controller matrix; ``j`` is 0-based. Raises
    LoopSingular when 1 - K21*G_jj vanishes at this evaluation point (the
    closed loop has a pole there).
    """
    gm = g.matrix
    n = g.n
    k11, k12, k21, k22 = k[0, 0], k[0, 1], k[1, 0], k[1, 1]
    det_k = k11 * k22 - k12 * k21
    denom = 1.0 - k21 * gm[j, j]
    if abs(denom) < 1e-12 * (1.0 + abs(k21 * gm[j, j])):
        raise LoopSingular(f"loop denominator vanishes at s={g.s}")
    out = np.empty((n, n), dtype=complex)
    for l in range(n):
        for m in range(n):
            if l == j and m == j:
                out[l, m] = k12 + gm[j, j] * det_k
            elif l == j:
                out[l, m] = gm[j, m] * k11
            elif m == j:
                out[l, m] = gm[l, j] * k22
            else:
                out[l, m] = gm[l, m] + k21 * (
                    gm[l, j] * gm[j, m] - gm[j, j] * gm[l, m]
                )
    out /= denom
    out.setflags(write=False)
    return TransferMatrix(matrix=out, s=g.s, parity=g.parity)


@dataclass(frozen=True)
class ClosedLoopSystem:
    """State-space model of the mode-j feedback interconnection.

    The external-to-external transfer matrix is D + C (sI - A_cl)^{-1} B,
    which coincides with `closed_loop_tf` applied to the open-loop transfer
    matrix at every non-pole s.
    """

    plant: LinearQuantumSystem
    controller: BeamsplitterController
    fed_mode: int

    def __post_init__(self) -> None:
        if not (0 <= self.fed_mode < self.plant.n):
            raise ValueError("fed mode index out of range")
        if abs(1.0 - self.controller.rho) < 1e-12:
            raise IllPosedLoop("rho = 1 leaves no transmission path")

    @property
    def parity(self) -> ModeParity:
        return self.plant.parity

    @cached_property
    def _state_space(self):
        """(A_cl, B, C, D) of the interconnection.

        Eliminating the algebraic loop through the plant's unit feedthrough
        gives u_j = (rho*sqrt(kappa_j)*x_j + tau*w_j)/(1 - rho); the
        external feedthrough D stays exactly the identity because
        tau^2 + rho^2 = 1.
        """
        plant = self.plant
        j = self.fed_mode
        rho, tau = self.controller.rho, self.controller.tau
        n = plant.n
        sqk = np.sqrt(np.asarray(plant.damping))
        gain = 1.0 / (1.0 - rho)

        a_cl = np.array(plant.drift, dtype=complex)
        a_cl[j, j] -= rho * plant.damping[j] * gain

        b = np.diag(-sqk).astype(complex)
        b[j, j] = -sqk[j] * tau * gain

        c = np.diag(sqk).astype(complex)
        c[j, j] = sqk[j] * tau * gain

        d = np.eye(n, dtype=complex)
        for m in (a_cl, b, c, d):
            m.setflags(write=False)
        return a_cl, b, c, d

    @property
    def drift(self) -> NDArray[np.complex128]:
        return self._state_space[0]


def close_loop(
    sys: LinearQuantumSystem, c: BeamsplitterController, j: int
) -> ClosedLoopSystem:
    """Connect output j back to input j through the beamsplitter."""
    return ClosedLoopSystem(plant=sys, controller=c, fed_mode=j)


def closed_loop_transfer(cl: ClosedLoopSystem, s: complex) -> TransferMatrix:
    """Evaluate the closed-loop transfer matrix from the state-space model."""
    a_cl, b, c, d = cl._state_space
    n = cl.plant.n
    m = s * np.eye(n, dtype=complex) - a_cl
    smin = np.linalg.svd(m, compute_uv=False)[-1]
    if smin <= 1e-12 * np.linalg.norm(a_cl, 2):
        raise LoopSingular(f"s={s} is within tolerance of a closed-loop pole")
    g = d + c @ np.linalg.solve(m, b)
    g.setflags(write=False)
    return TransferMatrix(matrix=g, s=complex(s), parity=cl.parity)


def closed_loop_poles(cl: ClosedLoopSystem) -> list[complex]:
    """Eigenvalues of the closed drift matrix."""
    return [complex(z) for z in np.linalg.eigvals(cl.drift)]
