"""Node sets, move rules and distances for the three supported graphs.

Kinds:
  grid_selfloop   sqrt(n) x sqrt(n) grid; boundary nodes padded with
                  self-loops up to degree 4, so a corner holds two
                  self-loop slots and the stationary law is uniform
  torus           same grid with wraparound edges instead of self-loops
  ring            cycle on n nodes (1-D)

Coordinates are 1-based pairs (x, y); the ring fixes y = 1.  Node
indices are row-major zero-based: idx = (y-1)*side + (x-1).
"""

from __future__ import annotations

from dataclasses import dataclass

Coord = tuple[int, int]

KINDS = ("grid_selfloop", "torus", "ring")


@dataclass(frozen=True)
class Topology:
    kind: str
    side: int
    lazy_prob: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown topology kind: {self.kind!r}")
        if not isinstance(self.side, int) or self.side < 1:
            raise ValueError("side must be a positive integer")
        if not (0.0 <= self.lazy_prob < 1.0):
            raise ValueError("lazy_prob must lie in [0, 1)")

    @property
    def n(self) -> int:
        return self.side if self.kind == "ring" else self.side * self.side

    @property
    def is_2d(self) -> bool:
        return self.kind != "ring"

    def check_coord(self, v: Coord) -> None:
        x, y = v
        if self.kind == "ring":
            if y != 1 or not (1 <= x <= self.side):
                raise ValueError(f"coordinate {v} out of range for ring side={self.side}")
        elif not (1 <= x <= self.side and 1 <= y <= self.side):
            raise ValueError(f"coordinate {v} out of range for side={self.side}")

    def node_index(self, v: Coord) -> int:
        self.check_coord(v)
        x, y = v
        return (y - 1) * self.side + (x - 1) if self.is_2d else (x - 1)

    def coord_of(self, idx: int) -> Coord:
        if not (0 <= idx < self.n):
            raise ValueError(f"node index {idx} out of range")
        if self.kind == "ring":
            return (idx + 1, 1)
        return (idx % self.side + 1, idx // self.side + 1)


def default_lazy_prob(kind: str, scenario: str) -> float:
    # On an even-side torus two synchronously moving walks keep the
    # parity of their coordinate-sum difference and can never meet;
    # a little laziness breaks that without changing the scaling.
    if kind == "torus" and scenario == "gossip":
        return 0.2
    return 0.0


def move_slots(topo: Topology, v: Coord) -> list[Coord]:
    """All move targets of v as a multiset (list) of size 4, or 2 on the ring.

    Self-loop padding shows up as repeated copies of v itself.
    """
    topo.check_coord(v)
    x, y = v
    side = topo.side
    if topo.kind == "ring":
        right = x + 1 if x < side else 1
        left = x - 1 if x > 1 else side
        return [(right, 1), (left, 1)]
    cands = [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
    if topo.kind == "torus":
        return [((cx - 1) % side + 1, (cy - 1) % side + 1) for cx, cy in cands]
    out = []
    for cx, cy in cands:
        if 1 <= cx <= side and 1 <= cy <= side:
            out.append((cx, cy))
        else:
            out.append(v)
    return out


def l1_distance(topo: Topology, u: Coord, v: Coord) -> int:
    topo.check_coord(u)
    topo.check_coord(v)
    side = topo.side
    dx = abs(u[0] - v[0])
    if topo.kind == "grid_selfloop":
        return dx + abs(u[1] - v[1])
    dx = min(dx, side - dx)
    if topo.kind == "ring":
        return dx
    dy = abs(u[1] - v[1])
    return dx + min(dy, side - dy)


def sample_move(topo: Topology, v: Coord, stream) -> Coord:
    """One move of a single walk.

    RNG consumption is fixed: when lazy_prob > 0 a uniform is drawn
    first and may end the move; otherwise exactly one direction draw is
    made (randint(4) on 2-D kinds, randint(2) on the ring, mapping
    0:+x 1:-x 2:+y 3:-y).  The numba kernels replicate this pattern
    draw for draw.
    """
    topo.check_coord(v)
    if topo.lazy_prob > 0.0 and stream.uniform() < topo.lazy_prob:
        return v
    x, y = v
    side = topo.side
    if topo.kind == "ring":
        d = stream.randint(2)
        if d == 0:
            return (x + 1 if x < side else 1, 1)
        return (x - 1 if x > 1 else side, 1)
    d = stream.randint(4)
    if d == 0:
        x2, y2 = x + 1, y
    elif d == 1:
        x2, y2 = x - 1, y
    elif d == 2:
        x2, y2 = x, y + 1
    else:
        x2, y2 = x, y - 1
    if topo.kind == "torus":
        return ((x2 - 1) % side + 1, (y2 - 1) % side + 1)
    if 1 <= x2 <= side and 1 <= y2 <= side:
        return (x2, y2)
    return v
