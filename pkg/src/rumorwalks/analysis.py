"""Instrumentation over placements and recorded traces.

Island decompositions, frontier advance statistics, initial spread
distances, and tessellation first-visit diagnostics.  Everything here
is a pure function of recorded data; nothing re-runs a simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import CellGrid, Trace
from .placement import Placement
from .topology import Coord, Topology, l1_distance


class UnsupportedTopologyError(ValueError):
    pass


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


@dataclass
class IslandDecomposition:
    gamma: float
    components: list[list[int]]
    max_size: int

    @property
    def num_islands(self) -> int:
        return len(self.components)


def _as_coords(positions, topo: Topology) -> list[Coord]:
    if isinstance(positions, np.ndarray):
        return [topo.coord_of(int(i)) for i in positions]
    return list(positions)


def islands(positions, topo: Topology, gamma: float) -> IslandDecomposition:
    """Connected components under pairwise L1 distance <= gamma (inclusive).

    Spatial bucketing with cell side ceil(gamma) keeps candidate pairs
    to the 3x3 neighborhood of each agent's cell; wraparound kinds wrap
    the cell lattice too.  A disjoint-set union merges candidates, so
    the result is exactly the proximity-graph components.
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    coords = _as_coords(positions, topo)
    k = len(coords)
    uf = UnionFind(k)
    c = max(1, math.ceil(gamma))
    side = topo.side
    wrap = topo.kind in ("torus", "ring")
    if wrap:
        # balanced cyclic partition: every cell spans >= c coordinates,
        # so a wrap seam never puts points within gamma two cells apart
        ncell = max(1, side // c)

        def cell_of(u):
            return u * ncell // side
    else:
        ncell = (side + c - 1) // c

        def cell_of(u):
            return u // c
    buckets: dict[tuple[int, int], list[int]] = {}
    keys = []
    for i, (x, y) in enumerate(coords):
        key = (cell_of(x - 1), cell_of(y - 1))
        keys.append(key)
        buckets.setdefault(key, []).append(i)
    for i, (x, y) in enumerate(coords):
        cx, cy = keys[i]
        seen: set[tuple[int, int]] = set()
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                nx, ny = cx + dx, cy + dy
                if wrap:
                    nx %= ncell
                    ny %= ncell
                elif not (0 <= nx < ncell and 0 <= ny < ncell):
                    continue
                if (nx, ny) in seen:
                    continue
                seen.add((nx, ny))
                for j in buckets.get((nx, ny), ()):
                    if j >= i:
                        continue
                    if l1_distance(topo, coords[i], coords[j]) <= gamma:
                        uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(uf.find(i), []).append(i)
    comps = sorted(groups.values(), key=lambda g: g[0])
    return IslandDecomposition(gamma=gamma, components=comps,
                               max_size=max((len(g) for g in comps), default=0))


@dataclass
class IslandSeries:
    gamma: float
    times: list[int]
    decompositions: list[IslandDecomposition]

    @property
    def max_sizes(self) -> list[int]:
        return [d.max_size for d in self.decompositions]

    @property
    def num_islands(self) -> list[int]:
        return [d.num_islands for d in self.decompositions]


def max_island_over_time(trace: Trace, gamma: float) -> IslandSeries:
    if not trace.positions:
        raise ValueError("trace has no recorded positions")
    decs = [islands(p, trace.topo, gamma) for p in trace.positions]
    return IslandSeries(gamma=gamma, times=list(trace.times), decompositions=decs)


@dataclass
class FrontierRecord:
    times: np.ndarray
    xbar: list[Coord]


def frontier_series(trace: Trace) -> FrontierRecord:
    """Per-step rightmost-informed-agent positions recorded by the engine."""
    if trace.topo.kind != "grid_selfloop":
        raise UnsupportedTopologyError("frontier is defined on grid_selfloop only")
    if trace.frontier_times is None:
        raise ValueError("trace was recorded without the frontier option")
    xbar = [(int(x), int(y)) for x, y in zip(trace.frontier_x, trace.frontier_y)]
    return FrontierRecord(times=trace.frontier_times.copy(), xbar=xbar)


@dataclass
class FrontierWindowStats:
    gamma: float
    window: int
    bound: float
    advances: np.ndarray
    max_advance: int

    @property
    def violation_fraction(self) -> float:
        if self.advances.size == 0:
            return 0.0
        return float(np.mean(self.advances > self.bound))


def frontier_window_stats(record: FrontierRecord, topo: Topology,
                          gamma: float) -> FrontierWindowStats:
    """Advance of the frontier over windows of gamma^2 / (36 ln n) steps.

    The window length rounds to at least one step; the reference bound
    per window is gamma * ln(n) / 2.
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    n = topo.n
    if n < 2:
        raise ValueError("window statistics need n >= 2")
    window = max(1, round(gamma * gamma / (36.0 * math.log(n))))
    bound = gamma * math.log(n) / 2.0
    xs = record.xbar
    adv = []
    for start in range(0, len(xs) - window, window):
        adv.append(l1_distance(topo, xs[start], xs[start + window]))
    advances = np.array(adv, dtype=np.int64)
    return FrontierWindowStats(gamma=gamma, window=window, bound=bound,
                               advances=advances,
                               max_advance=int(advances.max()) if advances.size else 0)


def initial_max_distance(placement: Placement, topo: Topology) -> int:
    """Max L1 distance from the source to any agent at t=0."""
    if not placement.positions:
        raise ValueError("placement has no agents")
    src = placement.positions[placement.source_index]
    return max(l1_distance(topo, src, p) for p in placement.positions)


def cell_diagnostics(trace: Trace, cell_side: int) -> CellGrid:
    """First-reached and first-conquered times per tessellation cell.

    Prefers the exact in-run record when the engine captured cells at
    this cell side; otherwise reconstructs both at snapshot resolution
    from recorded positions (conquered = every agent present in the
    cell at its first recorded reach is informed).
    """
    if trace.topo.kind == "ring":
        raise UnsupportedTopologyError("cells need a 2-D topology")
    if cell_side < 1:
        raise ValueError("cell_side must be >= 1")
    if trace.cells is not None and trace.cells.cell_side == cell_side:
        return trace.cells
    if not trace.positions:
        raise ValueError("trace has neither cell records nor position snapshots")
    side = trace.topo.side
    ncx = (side + cell_side - 1) // cell_side
    ncy = ncx
    ncells = ncx * ncy
    first_reached = np.full(ncells, -1, np.int64)
    first_conquered = np.full(ncells, -1, np.int64)
    members: dict[int, np.ndarray] = {}
    for t, pos, inf in zip(trace.times, trace.positions, trace.informed):
        x = pos % side
        y = pos // side
        cell = (y // cell_side) * ncx + (x // cell_side)
        for c in np.unique(cell[inf]):
            if first_reached[c] < 0:
                first_reached[c] = t
                members[int(c)] = np.flatnonzero(cell == c)
        for c, mem in members.items():
            if first_conquered[c] < 0 and inf[mem].all():
                first_conquered[c] = t
    return CellGrid(cell_side=cell_side, ncx=ncx, ncy=ncy,
                    first_reached=first_reached,
                    first_conquered=first_conquered, truncated=False)
