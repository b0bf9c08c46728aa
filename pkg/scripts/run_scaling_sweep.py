#!/usr/bin/env python3
"""Reproduce the scaling sweeps behind the headline exponents.

Presets:
  broadcast   grid, n=2^16, m=2^4..2^12 (the refutation sweep)
  gossip      grid, n=2^16, m=2^4..2^10 (bit-vector widths cap m)
  ring        ring, n=2^12, m=2^3..2^9

Writes <scenario>_sweep.csv and <scenario>_fit.txt into --out-dir, prints
the fitted exponents and the sqrt-vs-log model comparison.  With --wide the
broadcast preset extends m to 2^13, far enough to watch the log-law fit
deteriorate while the sqrt law takes over.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from rumorwalks import experiments


PRESETS = {
    "broadcast": dict(kind="grid_selfloop", scenario="broadcast",
                      n=65536, m_powers=range(4, 13)),
    "gossip": dict(kind="grid_selfloop", scenario="gossip",
                   n=65536, m_powers=range(4, 11)),
    "ring": dict(kind="ring", scenario="broadcast",
                 n=4096, m_powers=range(3, 10)),
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("preset", choices=sorted(PRESETS))
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--base-seed", type=int, default=1001)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--wide", action="store_true",
                    help="extend the broadcast m-range to 2^13")
    ap.add_argument("--out-dir", default="artifacts")
    args = ap.parse_args(argv)

    p = PRESETS[args.preset]
    powers = p["m_powers"]
    if args.wide and args.preset == "broadcast":
        powers = range(4, 14)
    m_values = tuple(1 << k for k in powers)

    extra = {}
    if args.preset == "ring":
        # diffusive regime: the default horizon ~8n ln^2 n is too short
        # for small m on the ring, so scale it like n^2/m
        extra["max_steps"] = lambda n, m: 32 * n * n // m

    plan = experiments.SweepPlan(kind=p["kind"], n_values=(p["n"],),
                                 m_values=m_values, scenario=p["scenario"],
                                 trials=args.trials, base_seed=args.base_seed,
                                 **extra)
    t0 = time.time()
    rows = experiments.run_sweep(plan, workers=args.workers)
    elapsed = time.time() - t0

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{args.preset}_sweep.csv"
    fit_path = out / f"{args.preset}_fit.txt"
    experiments.write_sweep_csv(rows, csv_path)
    fit = experiments.fit_power_law(rows)
    experiments.write_fit_text(fit, fit_path)

    timeouts = sum(1 for r in rows if r.timeout)
    print(f"{args.preset}: n={p['n']} m={list(m_values)} "
          f"trials={args.trials} ({elapsed:.1f}s, {timeouts} timeouts)")
    for srow in sorted(experiments.summarize(rows), key=lambda s: s.key[3]):
        print(f"  m={srow.key[3]:>5}  median={srow.median}")
    print(f"fit: alpha={fit.alpha}  beta={fit.beta} (+-{fit.ci_beta})")
    if args.preset != "ring" and len(set(m_values)) >= 4:
        cmp = experiments.compare_models(rows)
        print(f"model comparison: preferred={cmp.preferred} "
              f"ratio={cmp.residual_ratio:.2f} "
              f"(sqrt ssr={cmp.residual_sqrt_model:.4f}, "
              f"log-law ssr={cmp.residual_wang_model:.4f})")
    print(f"wrote {csv_path} and {fit_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
