"""Exact finite-chain computations and Monte Carlo estimators.

The exact side evolves dense probability vectors under the one-step
transition of a single walk (or a product pair chain), which is ground
truth for the simulator at small n.  The MC side wraps numba kernels
that replay the same move rule at scale.

Capacity is deliberately capped: dense single-chain vectors up to
n = 2^16, pair chains up to n = 2^12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .rng import MASK64
from .topology import Coord, Topology

CAP_SINGLE = 1 << 16
CAP_PAIR = 1 << 12


class CapacityError(ValueError):
    """Requested n exceeds the dense-vector budget."""


@dataclass
class DistVector:
    topo: Topology
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.shape != (self.topo.n,):
            raise ValueError(f"probs must have shape ({self.topo.n},)")
        self.probs = p


def point_mass(topo: Topology, v: Coord) -> DistVector:
    p = np.zeros(topo.n)
    p[topo.node_index(v)] = 1.0
    return DistVector(topo, p)


def uniform_dist(topo: Topology) -> DistVector:
    return DistVector(topo, np.full(topo.n, 1.0 / topo.n))


def _check_capacity(topo: Topology, cap: int) -> None:
    if topo.n > cap:
        raise CapacityError(f"n={topo.n} exceeds dense capacity {cap}")


def _step_array(topo: Topology, P: np.ndarray) -> np.ndarray:
    """One transition applied to columns of P (shape (n,) or (n, B)).

    Mass flows along move slots: a self-loop slot keeps its share in
    place, which is what regularizes the boundary of the grid.
    """
    side = topo.side
    if topo.kind == "ring":
        moved = 0.5 * (np.roll(P, 1, axis=0) + np.roll(P, -1, axis=0))
    else:
        G = P.reshape(side, side, -1)
        if topo.kind == "torus":
            M = 0.25 * (np.roll(G, 1, 0) + np.roll(G, -1, 0)
                        + np.roll(G, 1, 1) + np.roll(G, -1, 1))
        else:
            M = np.zeros_like(G)
            M[:, 1:, :] += G[:, :-1, :]
            M[:, -1, :] += G[:, -1, :]
            M[:, :-1, :] += G[:, 1:, :]
            M[:, 0, :] += G[:, 0, :]
            M[1:, :, :] += G[:-1, :, :]
            M[-1, :, :] += G[-1, :, :]
            M[:-1, :, :] += G[1:, :, :]
            M[0, :, :] += G[0, :, :]
            M *= 0.25
        moved = M.reshape(P.shape)
    lazy = topo.lazy_prob
    if lazy > 0.0:
        return lazy * P + (1.0 - lazy) * moved
    return moved


def evolve(d: DistVector, steps: int = 1) -> DistVector:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    _check_capacity(d.topo, CAP_SINGLE)
    p = d.probs
    for _ in range(steps):
        p = _step_array(d.topo, p)
    return DistVector(d.topo, p)


def visit_probability_exact(topo: Topology, v0: Coord, v: Coord, T: int) -> float:
    """P(walk from v0 stands on v at some t <= T), t=0 included."""
    _check_capacity(topo, CAP_SINGLE)
    if T < 0:
        raise ValueError("T must be >= 0")
    vi = topo.node_index(v)
    p = point_mass(topo, v0).probs
    absorbed = p[vi]
    p[vi] = 0.0
    for _ in range(T):
        p = _step_array(topo, p)
        absorbed += p[vi]
        p[vi] = 0.0
    return float(absorbed)


@dataclass
class PairChainResult:
    meet_prob_by_t: np.ndarray
    horizon: int


def meeting_probability_exact(topo: Topology, a0: Coord, b0: Coord, T: int) -> PairChainResult:
    """First-meeting CDF of two independent walks, diagonal made absorbing."""
    _check_capacity(topo, CAP_PAIR)
    if T < 0:
        raise ValueError("T must be >= 0")
    n = topo.n
    M = np.zeros((n, n))
    M[topo.node_index(a0), topo.node_index(b0)] = 1.0
    cum = np.empty(T + 1)
    diag = np.einsum("ii->i", M)
    absorbed = float(diag.sum())
    diag[:] = 0.0
    cum[0] = absorbed
    for t in range(1, T + 1):
        M = _step_array(topo, M)
        M = np.ascontiguousarray(_step_array(topo, M.T).T)
        diag = np.einsum("ii->i", M)
        absorbed += float(diag.sum())
        diag[:] = 0.0
        cum[t] = absorbed
    return PairChainResult(meet_prob_by_t=np.minimum(cum, 1.0), horizon=T)


def collision_count_exact(topo: Topology, w: Coord, u: Coord, s: int) -> float:
    """R(w, u, s): expected co-locations of two independent walks over t = 0..s."""
    _check_capacity(topo, CAP_SINGLE)
    if s < 0:
        raise ValueError("s must be >= 0")
    pa = point_mass(topo, w).probs
    pb = point_mass(topo, u).probs
    total = float(pa @ pb)
    for _ in range(s):
        pa = _step_array(topo, pa)
        pb = _step_array(topo, pb)
        total += float(pa @ pb)
    return total


@dataclass
class MeetingEstimate:
    estimate: float
    stderr: float
    trials: int
    hits: int


def meeting_probability_mc(topo: Topology, a0: Coord, b0: Coord, T: int,
                           trials: int, seed: int) -> MeetingEstimate:
    """Frequency estimate of first meeting by T with binomial standard error."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    hits = int(K.pair_meet_mc(K.KIND_CODES[topo.kind], topo.side, topo.lazy_prob,
                              topo.node_index(a0), topo.node_index(b0),
                              T, trials, np.uint64(seed & MASK64)))
    p = hits / trials
    return MeetingEstimate(estimate=p,
                           stderr=math.sqrt(p * (1.0 - p) / trials),
                           trials=trials, hits=hits)


@dataclass
class WalkStats:
    ell: int
    trials: int
    lambdas: tuple[float, ...]
    exceed_freq: np.ndarray
    exceed_stderr: np.ndarray
    distinct: np.ndarray

    def distinct_quantiles(self, qs=(0.1, 0.25, 0.5, 0.75, 0.9)) -> dict[float, float]:
        return {q: float(np.quantile(self.distinct, q)) for q in qs}


def walk_statistics_mc(topo: Topology, v0: Coord, ell: int, trials: int, seed: int,
                       lambdas: tuple[float, ...] = (2.0, 3.0, 4.0)) -> WalkStats:
    """Deviation exceedance frequencies at distances lambda*sqrt(ell), plus
    distinct-node counts of an ell-step walk."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    thresholds = np.array([lam * math.sqrt(ell) for lam in lambdas])
    exceed = np.zeros(len(lambdas), np.int64)
    distinct = np.zeros(trials, np.int64)
    K.walk_stats_mc(K.KIND_CODES[topo.kind], topo.side, topo.n, topo.lazy_prob,
                    topo.node_index(v0), ell, trials, np.uint64(seed & MASK64),
                    thresholds, exceed, distinct)
    freq = exceed / trials
    return WalkStats(ell=ell, trials=trials, lambdas=tuple(lambdas),
                     exceed_freq=freq,
                     exceed_stderr=np.sqrt(freq * (1.0 - freq) / trials),
                     distinct=distinct)


@dataclass
class CoverTimes:
    times: np.ndarray  # -1 marks a censored trial
    cap: int

    @property
    def censored(self) -> int:
        return int(np.sum(self.times < 0))

    def quantiles(self, qs=(0.1, 0.25, 0.5, 0.75, 0.9)) -> dict[float, float]:
        ok = self.times[self.times >= 0]
        if ok.size == 0:
            raise ValueError("all cover trials censored")
        return {q: float(np.quantile(ok, q)) for q in qs}


def cover_time_mc(topo: Topology, trials: int, seed: int,
                  cap: int | None = None) -> CoverTimes:
    """Cover times of a single walk from a uniform start node."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = topo.n
    if cap is None:
        if topo.kind == "ring":
            cap = 64 * n * n
        else:
            cap = max(64, math.ceil(64.0 * n * math.log(max(n, 2)) ** 2))
    out = np.empty(trials, np.int64)
    K.cover_mc(K.KIND_CODES[topo.kind], topo.side, n, topo.lazy_prob,
               trials, np.uint64(seed & MASK64), cap, out)
    return CoverTimes(times=out, cap=cap)
