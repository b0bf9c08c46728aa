"""Synchronous-time simulation of the broadcast (frog) and gossip scenarios.

Broadcast: one rumor starts at agent 0; uninformed agents stand still
until an informed agent shares their node, then walk from the next step.
Gossip: every agent walks from t=0 and carries its own rumor; co-located
agents merge rumor sets.  Both scenarios close infections per node after
each synchronous move, and once at t=0 before any movement.

Trial state lives in flat numpy arrays and is advanced by numba kernels
in chunks, so per-step cost is O(realized agents) with no Python in the
loop.  A chunk of one step is exposed as step() for property tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .placement import PlacementModel, place
from .rng import MASK64, Stream
from .topology import Topology

U = np.uint64

RECORD_OPTIONS = frozenset({"positions", "islands", "frontier", "cells"})
DEFAULT_CHUNK = 1 << 14


def default_horizon(n: int) -> int:
    """8 n ln^2 n, the horizon after which a trial is declared TIMEOUT."""
    return max(1, math.ceil(8.0 * n * math.log(n) ** 2))


@dataclass(frozen=True)
class ScenarioConfig:
    topology: Topology
    placement: PlacementModel
    scenario: str
    max_steps: int | None = None
    record: frozenset = frozenset()
    record_stride: int = 1
    cell_side: int | None = None

    def __post_init__(self):
        if self.scenario not in ("broadcast", "gossip"):
            raise ValueError(f"unknown scenario: {self.scenario!r}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")
        rec = frozenset("positions" if r == "positions_every_k" else r
                        for r in self.record)
        object.__setattr__(self, "record", rec)
        unknown = rec - RECORD_OPTIONS
        if unknown:
            raise ValueError(f"unknown record options: {sorted(unknown)}")
        if "frontier" in rec and self.topology.kind != "grid_selfloop":
            raise ValueError("frontier recording is defined on grid_selfloop only")
        if "cells" in rec:
            if self.topology.kind == "ring":
                raise ValueError("cell recording needs a 2-D topology")
            if self.cell_side is None or self.cell_side < 1:
                raise ValueError("cell recording needs cell_side >= 1")

    @property
    def horizon(self) -> int:
        return self.max_steps if self.max_steps is not None else default_horizon(self.topology.n)


@dataclass
class CellGrid:
    cell_side: int
    ncx: int
    ncy: int
    first_reached: np.ndarray   # -1 where never reached
    first_conquered: np.ndarray  # -1 where never conquered
    truncated: bool


@dataclass
class Trace:
    topo: Topology
    times: list[int]
    positions: list[np.ndarray]
    informed: list[np.ndarray]
    frontier_times: np.ndarray | None = None
    frontier_x: np.ndarray | None = None
    frontier_y: np.ndarray | None = None
    cells: CellGrid | None = None


@dataclass
class TrialResult:
    completion_time: int | None
    timeout: bool
    realized_m: int
    seed: int
    per_rumor_times: list[int | None] | None = None
    trace: Trace | None = None


class SimState:
    """Mutable state of one trial; advanced in place by chunk kernels.

    Each agent owns RNG substream (1 + agent index) of the trial master
    seed; substream 0 covers placement, so trajectories are a function
    of (seed, agent index) alone.
    """

    def __init__(self, cfg: ScenarioConfig, seed: int):
        topo = cfg.topology
        self.cfg = cfg
        self.topo = topo
        self.seed = seed & MASK64
        self.kind = K.KIND_CODES[topo.kind]
        self.side = topo.side
        self.n = topo.n
        self.lazy = topo.lazy_prob
        self.max_steps = cfg.horizon
        self.scenario = cfg.scenario

        self.placement = place(topo, cfg.placement, Stream.substream(self.seed, 0))
        k = self.placement.realized_m
        self.k = k
        self.pos = self.placement.node_indices.astype(np.int64).copy()
        self.states = np.empty((k, 4), np.uint64)
        K.seed_states(self.states, U(self.seed), U(1))

        self.informed = np.zeros(k, np.bool_)
        self.informed_t = np.full(k, -1, np.int64)
        self.informed[0] = True
        self.informed_t[0] = 0

        self.stamp = np.full(self.n, -1, np.int64)
        self.head = np.empty(self.n, np.int64)
        self.nxt = np.empty(k, np.int64)
        self.occ = np.empty(k, np.int64)

        self.t = 0
        if self.scenario == "broadcast":
            self.mobile = np.zeros(k, np.bool_)
            self.informed_count = 1
            self.informed_count += K.closure_broadcast(
                0, self.pos, self.informed, self.informed_t,
                self.stamp, self.head, self.nxt, self.occ)
            np.copyto(self.mobile, self.informed)
        else:
            W = (k + 63) // 64
            self.rumors = np.zeros((k, W), np.uint64)
            for i in range(k):
                self.rumors[i, i >> 6] |= U(1) << U(i & 63)
            self.counts = np.ones(k, np.int64)
            self.per_rumor_time = np.full(k, -1, np.int64)
            self.uw = np.empty(W, np.uint64)
            self.total_pairs = k
            if k == 1:
                self.per_rumor_time[0] = 0
            self.total_pairs += K.closure_gossip(
                0, self.pos, self.rumors, self.counts, self.per_rumor_time,
                self.informed, self.informed_t,
                self.stamp, self.head, self.nxt, self.occ, self.uw)

        rec = cfg.record
        self.want_positions = "positions" in rec or "islands" in rec
        self.want_frontier = "frontier" in rec
        self.want_cells = "cells" in rec
        self.snap_times: list[int] = []
        self.snap_pos: list[np.ndarray] = []
        self.snap_informed: list[np.ndarray] = []
        self.frontier_chunks: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        if self.want_cells:
            ell = cfg.cell_side
            self.cell_side = ell
            self.ncx = (self.side + ell - 1) // ell
            self.ncy = (self.side + ell - 1) // ell
            ncells = self.ncx * self.ncy
            self.first_reached = np.full(ncells, -1, np.int64)
            self.memb_start = np.zeros(ncells, np.int64)
            self.memb_len = np.zeros(ncells, np.int64)
            self.memb_buf = np.empty(16 * k + 1024, np.int64)
            self.memb_used = 0
            self.cells_truncated = False
            used, ov = K.cells_scan(0, self.pos, self.informed, self.side,
                                    self.cell_side, self.ncx,
                                    self.first_reached, self.memb_start,
                                    self.memb_len, self.memb_buf, self.memb_used)
            self.memb_used = int(used)
            self.cells_truncated |= bool(ov)
        else:
            self.first_reached = np.empty(1, np.int64)
            self.memb_start = np.empty(1, np.int64)
            self.memb_len = np.empty(1, np.int64)
            self.memb_buf = np.empty(1, np.int64)
            self.memb_used = 0
            self.cells_truncated = False
            self.cell_side = 1
            self.ncx = 1
        if self.want_frontier:
            bx, by = K.frontier_scan(self.pos, self.informed, self.side)
            self.frontier_chunks.append((np.array([0], np.int64),
                                         np.array([bx], np.int64),
                                         np.array([by], np.int64)))
        if self.want_positions:
            self._snapshot()

    @property
    def informed_pairs(self) -> int:
        """Monotone progress counter: informed agents, or (agent, rumor) pairs."""
        if self.scenario == "broadcast":
            return self.informed_count
        return self.total_pairs

    @property
    def done(self) -> bool:
        if self.scenario == "broadcast":
            return self.informed_count == self.k
        return self.total_pairs == self.k * self.k

    def _snapshot(self):
        if self.snap_times and self.snap_times[-1] == self.t:
            return
        self.snap_times.append(self.t)
        self.snap_pos.append(self.pos.copy())
        self.snap_informed.append(self.informed.copy())

    def advance(self, chunk: int) -> int:
        """Run up to `chunk` steps; returns steps actually taken."""
        if self.done or self.t >= self.max_steps:
            return 0
        if self.want_frontier:
            fx = np.empty(chunk, np.int64)
            fy = np.empty(chunk, np.int64)
            do_f = 1
        else:
            fx = np.empty(1, np.int64)
            fy = np.empty(1, np.int64)
            do_f = 0
        do_c = 1 if self.want_cells else 0
        if self.scenario == "broadcast":
            t, cnt, steps, used, ov = K.broadcast_chunk(
                self.kind, self.side, self.lazy, self.max_steps, chunk,
                self.t, self.informed_count,
                self.pos, self.mobile, self.informed, self.informed_t, self.states,
                self.stamp, self.head, self.nxt, self.occ,
                do_f, fx, fy,
                do_c, self.cell_side, self.ncx,
                self.first_reached, self.memb_start, self.memb_len,
                self.memb_buf, self.memb_used)
            self.informed_count = int(cnt)
        else:
            t, tot, steps, used, ov = K.gossip_chunk(
                self.kind, self.side, self.lazy, self.max_steps, chunk,
                self.t, self.total_pairs,
                self.pos, self.rumors, self.counts, self.per_rumor_time,
                self.informed, self.informed_t, self.states,
                self.stamp, self.head, self.nxt, self.occ, self.uw,
                do_f, fx, fy,
                do_c, self.cell_side, self.ncx,
                self.first_reached, self.memb_start, self.memb_len,
                self.memb_buf, self.memb_used)
            self.total_pairs = int(tot)
        t0 = self.t
        self.t = int(t)
        steps = int(steps)
        self.memb_used = int(used)
        self.cells_truncated |= bool(ov)
        if self.want_frontier and steps > 0:
            times = np.arange(t0 + 1, t0 + steps + 1, dtype=np.int64)
            self.frontier_chunks.append((times, fx[:steps].copy(), fy[:steps].copy()))
        return steps

    def build_trace(self) -> Trace | None:
        rec = self.cfg.record
        if not rec:
            return None
        if self.want_positions:
            self._snapshot()
        trace = Trace(topo=self.topo, times=self.snap_times,
                      positions=self.snap_pos, informed=self.snap_informed)
        if self.want_frontier:
            trace.frontier_times = np.concatenate([c[0] for c in self.frontier_chunks])
            trace.frontier_x = np.concatenate([c[1] for c in self.frontier_chunks])
            trace.frontier_y = np.concatenate([c[2] for c in self.frontier_chunks])
        if self.want_cells:
            ncells = self.first_reached.shape[0]
            fc = np.full(ncells, -1, np.int64)
            for c in range(ncells):
                if self.first_reached[c] < 0:
                    continue
                lo = self.memb_start[c]
                members = self.memb_buf[lo:lo + self.memb_len[c]]
                ts = self.informed_t[members]
                if members.size == 0:
                    fc[c] = self.first_reached[c]
                elif (ts >= 0).all():
                    fc[c] = max(int(self.first_reached[c]), int(ts.max()))
            trace.cells = CellGrid(cell_side=self.cell_side, ncx=self.ncx,
                                   ncy=self.ncy, first_reached=self.first_reached.copy(),
                                   first_conquered=fc, truncated=self.cells_truncated)
        return trace

    def result(self) -> TrialResult:
        done = self.done
        # chunks stop at the step that completed, so t is the completion time
        completion = self.t if done else None
        per_rumor = None
        if self.scenario == "gossip":
            per_rumor = [int(x) if x >= 0 else None for x in self.per_rumor_time]
        return TrialResult(completion_time=completion,
                           timeout=not done,
                           realized_m=self.k,
                           seed=self.seed,
                           per_rumor_times=per_rumor,
                           trace=self.build_trace())


def init_state(cfg: ScenarioConfig, seed: int) -> SimState:
    return SimState(cfg, seed)


def step(state: SimState) -> SimState:
    """One synchronous move plus closure; no-op when done or timed out."""
    state.advance(1)
    return state


def closure_pass(state: SimState) -> int:
    """Re-run the closure at the current instant; returns newly informed count.

    Used by the idempotence property: a second pass must return 0 and
    leave all state untouched.
    """
    # the in-step closure already stamped this instant; reset so the
    # occupancy lists rebuild fresh instead of chaining onto themselves
    state.stamp.fill(-1)
    if state.scenario == "broadcast":
        newly = K.closure_broadcast(state.t, state.pos, state.informed,
                                    state.informed_t, state.stamp, state.head,
                                    state.nxt, state.occ)
        state.informed_count += int(newly)
        np.copyto(state.mobile, state.informed)
        return int(newly)
    newly = K.closure_gossip(state.t, state.pos, state.rumors, state.counts,
                             state.per_rumor_time, state.informed, state.informed_t,
                             state.stamp, state.head, state.nxt, state.occ, state.uw)
    state.total_pairs += int(newly)
    return int(newly)


def _run(cfg: ScenarioConfig, seed: int) -> TrialResult:
    state = SimState(cfg, seed)
    chunk = cfg.record_stride if state.want_positions else DEFAULT_CHUNK
    while not state.done and state.t < state.max_steps:
        steps = state.advance(chunk)
        if state.want_positions and steps > 0:
            state._snapshot()
    return state.result()


def run_broadcast(cfg: ScenarioConfig, seed: int) -> TrialResult:
    if cfg.scenario != "broadcast":
        raise ValueError("config scenario is not broadcast")
    return _run(cfg, seed)


def run_gossip(cfg: ScenarioConfig, seed: int) -> TrialResult:
    if cfg.scenario != "gossip":
        raise ValueError("config scenario is not gossip")
    return _run(cfg, seed)


def run_trial(cfg: ScenarioConfig, seed: int) -> TrialResult:
    if cfg.scenario == "broadcast":
        return run_broadcast(cfg, seed)
    return run_gossip(cfg, seed)
