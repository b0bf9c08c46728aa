#!/usr/bin/env python3
"""Numerical checks of the single-walk and pair-walk lemmas.

Four short studies, printed as tables:
  visit/meet    P(visit) and P(meet) at T = d^2, rescaled by ln d
  collisions    R(x, x, T) / ln T on a torus, T = 2^6..2^12
  deviation     frequency of max L1 deviation >= lambda * sqrt(ell)
  islands       max island size at t=0 under binomial placement

All seeds fixed; --quick shrinks the expensive studies for a fast pass.
"""

from __future__ import annotations

import argparse
import math
import sys

from rumorwalks import analysis, oracles, placement
from rumorwalks.rng import Stream
from rumorwalks.topology import Topology


def visit_meet_table(quick: bool) -> None:
    side = 32 if quick else 48
    topo = Topology("grid_selfloop", side)
    c = side // 2
    ds = (2, 4, 8) if quick else (2, 4, 8, 16)
    print("d    T     P_visit   c1=P*ln d   P_meet    c3=P*ln d")
    for d in ds:
        T = d * d
        half = (d + 1) // 2
        targets = [(c + d, c), (c + half, c + d - half)]
        pv = min(oracles.visit_probability_exact(topo, (c, c), t, T)
                 for t in targets)
        pm = min(float(oracles.meeting_probability_exact(topo, (c, c), t, T)
                       .meet_prob_by_t[-1]) for t in targets)
        print(f"{d:<4} {T:<5} {pv:.5f}   {pv * math.log(d):.5f}     "
              f"{pm:.5f}   {pm * math.log(d):.5f}")


def collision_table(quick: bool) -> None:
    topo = Topology("torus", 64)
    x = (32, 32)
    print("T      R(x,x,T)   R/ln T")
    for k in range(6, 11 if quick else 13):
        T = 1 << k
        r = oracles.collision_count_exact(topo, x, x, T)
        print(f"{T:<6} {r:.4f}     {r / math.log(T):.4f}")


def deviation_table(quick: bool) -> None:
    topo = Topology("grid_selfloop", 512)
    trials = 2000 if quick else 10_000
    st = oracles.walk_statistics_mc(topo, (256, 256), ell=10_000,
                                    trials=trials, seed=1010)
    print(f"ell=10^4, {trials} trials")
    print("lambda   freq       bound 2e^(-l^2/2)")
    for lam, f in zip(st.lambdas, st.exceed_freq):
        print(f"{lam:<8.0f} {f:.5f}    {2 * math.exp(-lam ** 2 / 2):.5f}")


def island_table(quick: bool) -> None:
    n, m = 65536, 1024
    topo = Topology("grid_selfloop", 256)
    gamma = math.sqrt(n / (4.0 * math.e ** 3 * m))
    bound = 2.0 * math.log(n)
    trials = 20 if quick else 100
    model = placement.PlacementModel("binomial", m)
    sizes = []
    for s in range(trials):
        pl = placement.place(topo, model, Stream.substream(9000 + s, 0))
        sizes.append(analysis.islands(pl.node_indices, topo, gamma).max_size)
    within = sum(1 for s in sizes if s <= bound)
    print(f"n={n} m={m} gamma={gamma:.4f} bound 2 ln n = {bound:.2f}")
    print(f"max island: worst={max(sizes)}  within bound: {within}/{trials}")


STUDIES = {
    "visit-meet": visit_meet_table,
    "collisions": collision_table,
    "deviation": deviation_table,
    "islands": island_table,
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("study", nargs="*", choices=[[], *sorted(STUDIES)],
                    default=[], help="default: run all")
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)

    wanted = args.study or sorted(STUDIES)
    for name in wanted:
        print(f"== {name} ==")
        STUDIES[name](args.quick)
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
