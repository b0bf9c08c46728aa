"""Initial agent placement: exact-count and per-node binomial models."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from .topology import Coord, Topology


class EmptyPlacementError(RuntimeError):
    """Binomial placement realized zero agents."""


@dataclass(frozen=True)
class PlacementModel:
    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in ("exact", "binomial"):
            raise ValueError(f"unknown placement kind: {self.kind!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError("agent budget m must be a positive integer")


@dataclass
class Placement:
    positions: list[Coord]
    source_index: int
    node_indices: np.ndarray  # same order as positions, row-major node ids

    @property
    def realized_m(self) -> int:
        return len(self.positions)


def place(topo: Topology, model: PlacementModel, stream) -> Placement:
    """Sample a placement; agent 0 is the broadcast source.

    exact: m iid uniform node draws in agent order (one randint(n) each).
    binomial: one uniform per node in row-major order, inverted through
    the B(m, 1/n) CDF; the position list expands counts in node order,
    so the source is the first agent of the lowest occupied node.
    """
    n = topo.n
    if model.kind == "exact":
        idxs = np.array([stream.randint(n) for _ in range(model.m)], dtype=np.int64)
    else:
        u = np.array([stream.uniform() for _ in range(n)], dtype=np.float64)
        cdf = binom.cdf(np.arange(model.m + 1), model.m, 1.0 / n)
        counts = np.minimum(np.searchsorted(cdf, u, side="right"), model.m)
        idxs = np.repeat(np.arange(n, dtype=np.int64), counts)
        if idxs.size == 0:
            raise EmptyPlacementError(
                f"binomial placement drew 0 agents (n={n}, m={model.m})")
    positions = [topo.coord_of(int(i)) for i in idxs]
    return Placement(positions=positions, source_index=0, node_indices=idxs)


@dataclass(frozen=True)
class ConcentrationReport:
    frequency: float
    hypothesis_ok: bool
    trials: int


def realized_count_concentration(topo: Topology, m: int, trials: int,
                                 seed: int = 0) -> ConcentrationReport:
    """Fraction of binomial placements with realized count in [m/2, 3m/2].

    The realized count is a sum of n iid B(m, 1/n) node counts, which is
    exactly B(n*m, 1/n); we sample that law directly through a windowed
    CDF inversion instead of materializing per-node draws.
    """
    if trials <= 0:
        raise ValueError("trials must be >= 1: frequency undefined on an empty sample")
    from .rng import Stream

    n = topo.n
    hypothesis_ok = m >= 17.0 * math.log(n)
    total = n * m
    p = 1.0 / n
    sigma = math.sqrt(m * (1.0 - p))
    lo = max(0, int(m - 12 * sigma - 12))
    hi = min(total, int(m + 12 * sigma + 12))
    support = np.arange(lo, hi + 1)
    cdf = binom.cdf(support, total, p)
    stream = Stream(seed)
    u = np.array([stream.uniform() for _ in range(trials)], dtype=np.float64)
    draws = support[np.minimum(np.searchsorted(cdf, u, side="right"), len(support) - 1)]
    ok = (draws >= m / 2.0) & (draws <= 1.5 * m)
    return ConcentrationReport(frequency=float(np.mean(ok)),
                               hypothesis_ok=bool(hypothesis_ok),
                               trials=trials)
