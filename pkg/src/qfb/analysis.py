"""Entropy curves, sensitivity and deterministic fluctuation sweeps.

A scenario fixes a topology, nominal rates (lam0, kappa0), an optional
mode-j feedback loop, and a frequency grid in multiples of kappa0. The
coupling and damping fluctuate multiplicatively, lam = (1 + d1) lam0 and
kappa = (1 + d2) kappa0; the detuning rule tracks the perturbed coupling,
so the open-loop poles stay on Re(s) = -kappa/2 for every sample.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import LinearQuantumSystem, is_stable, poles, transfer_matrix
from .errors import ConfigError, UnstablePerturbation
from .feedback import (
    BeamsplitterController,
    ClosedLoopSystem,
    close_loop,
    closed_loop_poles,
    closed_loop_transfer,
)
from .gaussian import entanglement_entropy, output_covariance, quadrature_transfer
from .systems import build_topology

__all__ = [
    "ScenarioConfig",
    "SweepSpec",
    "SweepSample",
    "SweepResult",
    "CompareReport",
    "entropy_curve",
    "entropy_at",
    "sensitivity",
    "fluctuation_sweep",
    "compare_fixed_entropy",
]

_MODE_COUNT = {"tms": 2, "linear4": 4, "tshape4": 4, "square4": 4}


def _default_omegas() -> tuple[float, ...]:
    return tuple(np.linspace(0.0, 5.0, 200))


@dataclass(frozen=True)
class ScenarioConfig:
    """One experiment scenario. Mode numbers are 1-based as in the network
    diagrams.

    ``omega_grid`` is in multiples of ``kappa0``.
    """

    topology: str
    lam0: float
    kappa0: float = 1.0
    feedback_mode: int | None = None
    rho: float = 0.0
    omega_grid: tuple[float, ...] = field(default_factory=_default_omegas)
    ref_mode: int = 1
    lambdas: tuple[float, ...] | None = None
    kappas: tuple[float, ...] | None = None
    deltas: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.topology not in _MODE_COUNT:
            raise ConfigError(f"unknown topology {self.topology!r}")
        if self.lam0 < 0 or self.kappa0 <= 0:
            raise ConfigError("need lam0 >= 0 and kappa0 > 0")
        n = self.n
        if not (1 <= self.ref_mode <= n):
            raise ConfigError(f"ref_mode must be in 1..{n}")
        if self.feedback_mode is not None:
            if not (1 <= self.feedback_mode <= n):
                raise ConfigError(f"feedback mode must be in 1..{n}")
            if not (0.0 <= self.rho < 1.0):
                raise ConfigError("rho must satisfy 0 <= rho < 1")

    @property
    def n(self) -> int:
        return _MODE_COUNT[self.topology]

    @property
    def controller(self) -> BeamsplitterController | None:
        if self.feedback_mode is None:
            return None
        return BeamsplitterController.from_reflectivity(self.rho)


@dataclass(frozen=True)
class SweepSpec:
    """Deterministic (d1, d2) fluctuation grid.

    ``pairing='grid'`` takes a Cartesian product of 9 d1 values and 10 d2
    values (90 samples); ``'diagonal'`` pairs ``samples`` equal-length
    ramps of d1 and d2.
    """

    delta_range: float = 0.1
    samples: int = 90
    pairing: str = "grid"

    def __post_init__(self) -> None:
        if self.pairing not in ("grid", "diagonal"):
            raise ConfigError(f"unknown pairing {self.pairing!r}")
        if self.delta_range < 0 or self.samples < 1:
            raise ConfigError("need delta_range >= 0 and samples >= 1")

    def points(self) -> list[tuple[float, float]]:
        r = self.delta_range
        if self.pairing == "diagonal":
            ramp = np.linspace(-r, r, self.samples)
            return [(float(d), float(d)) for d in ramp]
        n1 = max(1, round(self.samples / 10))
        n2 = max(1, self.samples // n1)
        d1s = np.linspace(-r, r, n1) if n1 > 1 else np.array([0.0])
        d2s = np.linspace(-r, r, n2) if n2 > 1 else np.array([0.0])
        return [(float(d1), float(d2)) for d1 in d1s for d2 in d2s]


@dataclass(frozen=True)
class SweepSample:
    index: int
    delta1: float
    delta2: float
    entropies: tuple[float, ...] | None  # None when the sample is unstable

    @property
    def stable(self) -> bool:
        return self.entropies is not None


@dataclass(frozen=True)
class SweepResult:
    config: ScenarioConfig
    spec: SweepSpec
    samples: tuple[SweepSample, ...]
    spread: tuple[float, ...]  # max - min over stable samples, per omega

    @property
    def unstable_count(self) -> int:
        return sum(not s.stable for s in self.samples)


@dataclass(frozen=True)
class CompareReport:
    config_a: ScenarioConfig
    config_b: ScenarioConfig
    nominal_a: float
    nominal_b: float
    spread_a: float
    spread_b: float

    def nominals_match(self, band: float = 0.15) -> bool:
        ref = max(abs(self.nominal_a), abs(self.nominal_b))
        return abs(self.nominal_a - self.nominal_b) <= band * ref


def _scale(values: tuple[float, ...] | None, factor: float):
    if values is None:
        return None
    return tuple(v * factor for v in values)


def build_scenario(
    cfg: ScenarioConfig, delta1: float = 0.0, delta2: float = 0.0
) -> tuple[LinearQuantumSystem, ClosedLoopSystem | None]:
    """Perturbed plant and, when configured, its closed loop.

    Raises UnstablePerturbation if any (open- or closed-loop) pole has a
    nonnegative real part.
    """
    lam = cfg.lam0 * (1.0 + delta1)
    kap = cfg.kappa0 * (1.0 + delta2)
    sys = build_topology(
        cfg.topology,
        lam,
        kap,
        lambdas=_scale(cfg.lambdas, 1.0 + delta1),
        kappas=_scale(cfg.kappas, 1.0 + delta2),
        deltas=cfg.deltas,
    )
    if not is_stable(sys, margin=0.0):
        raise UnstablePerturbation(
            f"open-loop pole in the right half-plane at d=({delta1}, {delta2})"
        )
    cl = None
    ctrl = cfg.controller
    if ctrl is not None:
        cl = close_loop(sys, ctrl, cfg.feedback_mode - 1)
        if max(z.real for z in closed_loop_poles(cl)) >= 0.0:
            raise UnstablePerturbation(
                f"closed-loop pole in the right half-plane at d=({delta1}, {delta2})"
            )
    return sys, cl


def scenario_poles(cfg: ScenarioConfig) -> tuple[list[complex], list[complex] | None]:
    """Open- and (optionally) closed-loop poles at nominal parameters."""
    lam, kap = cfg.lam0, cfg.kappa0
    sys = build_topology(
        cfg.topology, lam, kap,
        lambdas=cfg.lambdas, kappas=cfg.kappas, deltas=cfg.deltas,
    )
    open_poles = poles(sys)
    closed: list[complex] | None = None
    ctrl = cfg.controller
    if ctrl is not None:
        closed = closed_loop_poles(close_loop(sys, ctrl, cfg.feedback_mode - 1))
    return open_poles, closed


def _transfer_at(
    sys: LinearQuantumSystem, cl: ClosedLoopSystem | None, s: complex
):
    if cl is not None:
        return closed_loop_transfer(cl, s)
    return transfer_matrix(sys, s)


def _entropies_at(
    sys: LinearQuantumSystem, cl: ClosedLoopSystem | None, omega: float
) -> tuple[float, ...]:
    tm = _transfer_at(sys, cl, 1j * omega)
    cm = output_covariance(quadrature_transfer(tm))
    return tuple(entanglement_entropy(cm, j) for j in range(tm.n))


def entropy_at(
    cfg: ScenarioConfig, omega: float, delta1: float = 0.0, delta2: float = 0.0
) -> float:
    """Reference-mode entropy at one absolute frequency."""
    sys, cl = build_scenario(cfg, delta1, delta2)
    return _entropies_at(sys, cl, omega)[cfg.ref_mode - 1]


def entropy_curve(
    cfg: ScenarioConfig, delta1: float = 0.0, delta2: float = 0.0
) -> list[tuple[float, float]]:
    """(omega, S_ref) along the configured grid; omega in absolute units."""
    sys, cl = build_scenario(cfg, delta1, delta2)
    out = []
    for w in cfg.omega_grid:
        omega = w * cfg.kappa0
        out.append((omega, _entropies_at(sys, cl, omega)[cfg.ref_mode - 1]))
    return out


def entropy_curve_all_modes(
    cfg: ScenarioConfig, delta1: float = 0.0, delta2: float = 0.0
) -> list[tuple[float, tuple[float, ...]]]:
    """(omega, (S_1, ..., S_n)) along the configured grid."""
    sys, cl = build_scenario(cfg, delta1, delta2)
    out = []
    for w in cfg.omega_grid:
        omega = w * cfg.kappa0
        out.append((omega, _entropies_at(sys, cl, omega)))
    return out


def sensitivity(cfg: ScenarioConfig, omega: float, step: float = 1e-5) -> float:
    """Central-difference derivative of S_ref with respect to the coupling.

    The step is relative: the coupling is evaluated at lam0*(1 +- step)
    with the damping held at its nominal value.
    """
    if cfg.lam0 == 0.0:
        return 0.0
    s_plus = entropy_at(cfg, omega, delta1=step)
    s_minus = entropy_at(cfg, omega, delta1=-step)
    return (s_plus - s_minus) / (2.0 * step * cfg.lam0)


def _max_workers() -> int:
    raw = os.environ.get("QFB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"QFB_THREADS must be an integer, got {raw!r}") from exc
    if n <= 0:
        n = min(8, os.cpu_count() or 1)
    return n


def fluctuation_sweep(cfg: ScenarioConfig, spec: SweepSpec) -> SweepResult:
    """Entropy curves over the deterministic (d1, d2) grid.

    Unstable samples are excluded from the spread statistics and reported
    via ``SweepResult.unstable_count``. Samples are independent; they are
    evaluated on a thread pool capped by QFB_THREADS and merged by index,
    so the result does not depend on the thread count.
    """
    points = spec.points()

    def run(item: tuple[int, tuple[float, float]]) -> SweepSample:
        idx, (d1, d2) = item
        try:
            curve = entropy_curve(cfg, d1, d2)
        except UnstablePerturbation:
            return SweepSample(idx, d1, d2, None)
        return SweepSample(idx, d1, d2, tuple(s for _, s in curve))

    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        samples = tuple(pool.map(run, enumerate(points)))

    stable = [s.entropies for s in samples if s.entropies is not None]
    if stable:
        arr = np.asarray(stable)
        spread = tuple(np.max(arr, axis=0) - np.min(arr, axis=0))
    else:
        spread = tuple(float("nan") for _ in cfg.omega_grid)
    return SweepResult(config=cfg, spec=spec, samples=samples, spread=spread)


def compare_fixed_entropy(
    cfg_a: ScenarioConfig, cfg_b: ScenarioConfig, spec: SweepSpec | None = None
) -> CompareReport:
    """Nominal entropy and omega=0 spread of two scenarios on one grid."""
    if spec is None:
        spec = SweepSpec()
    grid0 = replace(cfg_a, omega_grid=(0.0,))
    grid0_b = replace(cfg_b, omega_grid=(0.0,))
    res_a = fluctuation_sweep(grid0, spec)
    res_b = fluctuation_sweep(grid0_b, spec)
    return CompareReport(
        config_a=cfg_a,
        config_b=cfg_b,
        nominal_a=entropy_at(cfg_a, 0.0),
        nominal_b=entropy_at(cfg_b, 0.0),
        spread_a=res_a.spread[0],
        spread_b=res_b.spread[0],
    )
