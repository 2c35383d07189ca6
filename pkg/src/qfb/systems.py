"""Builders for the concrete cavity networks studied here.

Each two-mode-squeezing interaction couples a mode to a conjugated mode, so
the interaction graph must be bipartite; the two-coloring fixes the parity
of the doubled basis. Convenience builders cover the two-mode amplifier and
the three four-mode cluster generators (path, star, cycle), each with the
detuning choice that pins every pole to Re(s) = -kappa/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import LinearQuantumSystem, ModeParity
from .errors import NonBipartiteGraph

__all__ = [
    "InteractionGraph",
    "build_from_graph",
    "ndpo_tms",
    "cluster_linear",
    "cluster_tshape",
    "cluster_square",
    "TOPOLOGIES",
    "build_topology",
    "detuning_rule",
]

# Detuning multiples of the coupling strength that place all four poles of
# each cluster generator on Re(s) = -kappa/2 (the adjacency spectra of the
# path, star and cycle graphs are {+-(1+-sqrt5)/2}, {+-sqrt3, 0, 0} and
# {+-2, 0, 0}).
_DELTA_RULE = {
    "tms": 1.0,
    "linear4": math.sqrt((3.0 + math.sqrt(5.0)) / 2.0),
    "tshape4": math.sqrt(3.0),
    "square4": 2.0,
}

_EDGES = {
    "tms": ((0, 1),),
    "linear4": ((0, 1), (1, 2), (0, 3)),
    "tshape4": ((0, 1), (0, 2), (0, 3)),
    "square4": ((0, 1), (1, 2), (2, 3), (0, 3)),
}


@dataclass(frozen=True)
class InteractionGraph:
    """Two-mode-squeezing coupling graph with per-mode rates.

    Edges are 0-based ``(j, k, strength)`` triples; ``damping`` and
    ``detuning`` are per-mode.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    damping: tuple[float, ...]
    detuning: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.damping) != self.n or len(self.detuning) != self.n:
            raise ValueError("damping/detuning length must equal mode count")
        seen = set()
        for j, k, _ in self.edges:
            if j == k:
                raise ValueError(f"self-loop on mode {j}")
            if not (0 <= j < self.n and 0 <= k < self.n):
                raise ValueError(f"edge ({j}, {k}) out of range")
            key = frozenset((j, k))
            if key in seen:
                raise ValueError(f"duplicate edge ({j}, {k})")
            seen.add(key)


def _two_coloring(n: int, edges: Sequence[tuple[int, int, float]]) -> tuple[int, ...]:
    """Color the graph with +-1, anchoring the lowest mode of each component
    to +1. Raises NonBipartiteGraph on an odd cycle."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for j, k, _ in edges:
        adj[j].append(k)
        adj[k].append(j)
    color = [0] * n
    for start in range(n):
        if color[start]:
            continue
        color[start] = 1
        stack = [start]
        while stack:
            j = stack.pop()
            for k in adj[j]:
                if color[k] == 0:
                    color[k] = -color[j]
                    stack.append(k)
                elif color[k] == color[j]:
                    raise NonBipartiteGraph(
                        f"modes {j} and {k} are coupled but share a color"
                    )
    return tuple(color)


def build_from_graph(g: InteractionGraph) -> LinearQuantumSystem:
    """Assemble the doubled-basis system for an interaction graph."""
    parity = ModeParity(_two_coloring(g.n, g.edges))
    lam = np.zeros((g.n, g.n))
    for j, k, strength in g.edges:
        lam[j, k] = strength
        lam[k, j] = strength
    return LinearQuantumSystem(
        parity=parity,
        damping=g.damping,
        detuning=g.detuning,
        coupling=tuple(tuple(row) for row in lam),
    )


def ndpo_tms(
    lam: float, kappa: float, delta1: float, delta2: float
) -> LinearQuantumSystem:
    """Two-mode amplifier with coupling lam, damping kappa and detunings."""
    if lam < 0 or kappa <= 0:
        raise ValueError("need lam >= 0 and kappa > 0")
    g = InteractionGraph(
        n=2,
        edges=((0, 1, lam),),
        damping=(kappa, kappa),
        detuning=(delta1, delta2),
    )
    return build_from_graph(g)


def _cluster(
    name: str,
    lam: float,
    kappa: float,
    *,
    lambdas: Sequence[float] | None = None,
    kappas: Sequence[float] | None = None,
    deltas: Sequence[float] | None = None,
) -> LinearQuantumSystem:
    if lam < 0 or kappa <= 0:
        raise ValueError("need lam >= 0 and kappa > 0")
    edges = _EDGES[name]
    n = 4
    if lambdas is None:
        lambdas = [lam] * len(edges)
    if kappas is None:
        kappas = [kappa] * n
    if deltas is None:
        deltas = [_DELTA_RULE[name] * lam] * n
    g = InteractionGraph(
        n=n,
        edges=tuple((j, k, l) for (j, k), l in zip(edges, lambdas)),
        damping=tuple(kappas),
        detuning=tuple(deltas),
    )
    return build_from_graph(g)


def cluster_linear(lam: float, kappa: float, **overrides) -> LinearQuantumSystem:
    """Four-mode path-graph generator (edges 1-2, 2-3, 1-4).

    Per-parameter overrides ``lambdas``, ``kappas``, ``deltas`` replace the
    uniform values edge-by-edge / mode-by-mode.
    """
    return _cluster("linear4", lam, kappa, **overrides)


def cluster_tshape(lam: float, kappa: float, **overrides) -> LinearQuantumSystem:
    """Four-mode star-graph generator (edges 1-2, 1-3, 1-4)."""
    return _cluster("tshape4", lam, kappa, **overrides)


def cluster_square(lam: float, kappa: float, **overrides) -> LinearQuantumSystem:
    """Four-mode cycle-graph generator (edges 1-2, 2-3, 3-4, 1-4)."""
    return _cluster("square4", lam, kappa, **overrides)


def detuning_rule(topology: str, lam: float) -> float:
    """Detuning that keeps every pole on Re(s) = -kappa/2 for the topology."""
    return _DELTA_RULE[topology] * lam


def build_topology(
    topology: str,
    lam: float,
    kappa: float,
    *,
    lambdas: Sequence[float] | None = None,
    kappas: Sequence[float] | None = None,
    deltas: Sequence[float] | None = None,
) -> LinearQuantumSystem:
    """Build any of the canonical topologies by name.

    ``tms`` uses the detuning rule Delta_1 = Delta_2 = lam; the four-mode
    names use their cluster rules. Overrides behave as in the cluster
    builders.
    """
    if topology == "tms":
        if lambdas is not None:
            lam_eff = lambdas[0]
        else:
            lam_eff = lam
        kap = list(kappas) if kappas is not None else [kappa, kappa]
        det = list(deltas) if deltas is not None else [lam, lam]
        g = InteractionGraph(
            n=2,
            edges=((0, 1, lam_eff),),
            damping=tuple(kap),
            detuning=tuple(det),
        )
        return build_from_graph(g)
    if topology not in _EDGES:
        raise ValueError(f"unknown topology {topology!r}")
    return _cluster(
        topology, lam, kappa, lambdas=lambdas, kappas=kappas, deltas=deltas
    )


TOPOLOGIES = tuple(_EDGES)
