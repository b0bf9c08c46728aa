"""Command-line front end: simulate, sweep, oracle, analyze, fit.

All subcommands share one canonical flag set (each uses the relevant
subset), take their randomness from --seed, and write the documented
CSV schemas.  Exit codes: 0 success, 1 runtime failure, 2 usage error.
A plain key=value config file can supply defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import analysis, experiments, oracles
from .engine import ScenarioConfig, run_trial
from .placement import PlacementModel
from .topology import Topology, default_lazy_prob

KIND_BY_FLAG = {"grid": "grid_selfloop", "torus": "torus", "ring": "ring"}

CANONICAL_FLAGS = [
    (("--topology",), dict(choices=["grid", "torus", "ring"], default="grid",
                           help="graph family (grid has self-loop padded boundary)")),
    (("--n",), dict(type=str, default=None,
                    help="node count; perfect square for 2-D kinds; "
                         "sweep accepts a comma-separated list")),
    (("--m",), dict(type=str, default=None,
                    help="agent budget; sweep accepts a comma-separated list")),
    (("--scenario",), dict(choices=["broadcast", "gossip"], default="broadcast",
                           help="broadcast (frog dynamics) or gossip")),
    (("--placement",), dict(choices=["exact", "binomial"], default="exact",
                            help="initial placement model")),
    (("--lazy",), dict(type=float, default=None,
                       help="stay-put probability per step; default 0, or 1/5 "
                            "for gossip on a torus")),
    (("--seed",), dict(type=int, default=0, help="base RNG seed")),
    (("--max-steps",), dict(type=int, default=None, dest="max_steps",
                            help="horizon before TIMEOUT; default 8*n*ln(n)^2")),
    (("--trials",), dict(type=int, default=None,
                         help="trials per cell (sweep) or sample count (oracle)")),
    (("--record",), dict(type=str, default=None,
                         help="comma list of positions,islands,frontier,cells")),
    (("--stride",), dict(type=int, default=1,
                         help="steps between recorded snapshots")),
    (("--gamma",), dict(type=float, default=None,
                        help="island radius (L1, inclusive)")),
    (("--cell-side",), dict(type=int, default=None, dest="cell_side",
                            help="tessellation cell side for cell diagnostics")),
    (("--out",), dict(type=str, default=None, help="output file path")),
    (("--strict",), dict(action="store_true",
                         help="exit 1 on TIMEOUT results")),
    (("--config",), dict(type=str, default=None,
                         help="key=value file supplying flag defaults")),
]


def _parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    for names, kw in CANONICAL_FLAGS:
        p.add_argument(*names, **kw)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rumorwalks",
        description="Rumor spreading by mobile random walks: simulator, "
                    "exact oracles, sweeps and fits.")
    sub = parser.add_subparsers(dest="command", required=True)
    parent = _parent()

    sub.add_parser("simulate", parents=[parent],
                   help="run one seeded trial and print its completion time")

    sub.add_parser("sweep", parents=[parent],
                   help="run an (n, m) grid of trials and write sweep.csv")

    po = sub.add_parser("oracle", parents=[parent],
                        help="exact or Monte Carlo walk computations")
    po.add_argument("what", choices=["meet", "visit", "collision", "walkstats", "cover"])
    po.add_argument("--a", type=str, default=None, help="first coordinate, e.g. 3,4")
    po.add_argument("--b", type=str, default=None, help="second coordinate")
    po.add_argument("--T", type=int, default=None, help="horizon / step budget")
    po.add_argument("--ell", type=int, default=None, help="walk length for walkstats")

    pa = sub.add_parser("analyze", parents=[parent],
                        help="run one recorded trial and write a diagnostics CSV")
    pa.add_argument("what", choices=["islands", "frontier", "cells"])

    pf = sub.add_parser("fit", parents=[parent],
                        help="fit the power law on a sweep CSV and write fit.txt")
    pf.add_argument("--in", dest="in_path", type=str, default="sweep.csv",
                    help="input sweep CSV")
    pf.add_argument("--compare", action="store_true",
                    help="also compare the sqrt and wang scaling laws")
    return parser


def _expand_config(argv: list[str]) -> list[str]:
    """Splice config-file pairs in as flags right after the subcommand.

    Later occurrences win under argparse, so explicit flags override
    the file.
    """
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        return argv  # argparse will report the missing value
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    if not rest:
        return argv
    extra: list[str] = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition("=")
        flag = "--" + key.strip().replace("_", "-")
        val = val.strip()
        if val.lower() in ("true", "false"):
            if val.lower() == "true":
                extra.append(flag)
        else:
            extra.extend([flag, val])
    return [rest[0]] + extra + rest[1:]


def _parse_coord(parser, flag: str, text: str | None, topo: Topology):
    if text is None:
        parser.error(f"{flag} is required for this oracle")
    parts = text.split(",")
    try:
        if len(parts) == 1:
            v = (int(parts[0]), 1)
        else:
            v = (int(parts[0]), int(parts[1]))
    except ValueError:
        parser.error(f"{flag}: expected x,y integers, got {text!r}")
    try:
        topo.check_coord(v)
    except ValueError as e:
        parser.error(f"{flag}: {e}")
    return v


def _single_int(parser, flag: str, text: str | None, required=True) -> int | None:
    if text is None:
        if required:
            parser.error(f"{flag} is required")
        return None
    try:
        return int(text)
    except ValueError:
        parser.error(f"{flag}: expected an integer, got {text!r}")


def _int_list(parser, flag: str, text: str | None) -> list[int]:
    if text is None:
        parser.error(f"{flag} is required")
    try:
        return [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        parser.error(f"{flag}: expected comma-separated integers, got {text!r}")


def _topology_for(parser, args, n: int) -> Topology:
    kind = KIND_BY_FLAG[args.topology]
    if kind == "ring":
        side = n
    else:
        side = math.isqrt(n)
        if side * side != n:
            parser.error(f"--n: {n} is not a perfect square for topology {args.topology}")
    lazy = args.lazy if args.lazy is not None else default_lazy_prob(kind, args.scenario)
    try:
        return Topology(kind, side, lazy)
    except ValueError as e:
        parser.error(f"--lazy: {e}")


def _record_set(parser, args) -> frozenset:
    if not args.record:
        return frozenset()
    opts = frozenset(tok.strip() for tok in args.record.split(",") if tok.strip())
    bad = opts - {"positions", "islands", "frontier", "cells"}
    if bad:
        parser.error(f"--record: unknown options {sorted(bad)}")
    return opts


def _scenario_config(parser, args, n: int, record=frozenset()) -> ScenarioConfig:
    topo = _topology_for(parser, args, n)
    m = _single_int(parser, "--m", args.m)
    if m < 1:
        parser.error("--m must be >= 1")
    try:
        return ScenarioConfig(topology=topo,
                              placement=PlacementModel(args.placement, m),
                              scenario=args.scenario,
                              max_steps=args.max_steps,
                              record=record,
                              record_stride=args.stride,
                              cell_side=args.cell_side)
    except ValueError as e:
        parser.error(str(e))


def _summary(pairs) -> str:
    return " ".join(f"{k}={v}" for k, v in pairs)


def cmd_simulate(parser, args) -> int:
    n = _single_int(parser, "--n", args.n)
    cfg = _scenario_config(parser, args, n)
    import time as _time
    t0 = _time.perf_counter()
    res = run_trial(cfg, args.seed)
    wall_ms = (_time.perf_counter() - t0) * 1000.0
    ct = "TIMEOUT" if res.completion_time is None else res.completion_time
    print(_summary([("topology", args.topology), ("scenario", args.scenario),
                    ("n", n), ("m", args.m), ("seed", args.seed),
                    ("completion_time", ct), ("timeout", int(res.timeout)),
                    ("realized_m", res.realized_m),
                    ("wall_ms", f"{wall_ms:.3f}")]))
    if args.out:
        row = experiments.SweepRow(topology=KIND_BY_FLAG[args.topology],
                                   scenario=args.scenario, n=n,
                                   m=int(args.m), trial=0, seed=res.seed,
                                   completion_time=res.completion_time,
                                   timeout=res.timeout,
                                   realized_m=res.realized_m, wall_ms=wall_ms)
        experiments.write_sweep_csv([row], args.out)
    if res.timeout and args.strict:
        print("trial hit max_steps", file=sys.stderr)
        return 1
    return 0


def cmd_sweep(parser, args) -> int:
    ns = _int_list(parser, "--n", args.n)
    ms = _int_list(parser, "--m", args.m)
    kind = KIND_BY_FLAG[args.topology]
    trials = args.trials if args.trials is not None else 20
    try:
        plan = experiments.SweepPlan(kind=kind, n_values=tuple(ns),
                                     m_values=tuple(ms), scenario=args.scenario,
                                     trials=trials, base_seed=args.seed,
                                     placement=args.placement,
                                     lazy_prob=args.lazy,
                                     max_steps=args.max_steps)
    except ValueError as e:
        parser.error(str(e))
    rows = experiments.run_sweep(plan)
    out = args.out or "sweep.csv"
    experiments.write_sweep_csv(rows, out)
    timeouts = sum(1 for r in rows if r.timeout)
    print(_summary([("cells", len(ns) * len(ms)), ("trials", trials),
                    ("rows", len(rows)), ("timeouts", timeouts), ("out", out)]))
    if args.strict:
        for n in ns:
            for m in ms:
                cell = [r for r in rows if r.n == n and r.m == m]
                if cell and all(r.timeout for r in cell):
                    print(f"cell n={n} m={m}: every trial hit max_steps",
                          file=sys.stderr)
                    return 1
    return 0


def cmd_oracle(parser, args) -> int:
    n = _single_int(parser, "--n", args.n)
    topo = _topology_for(parser, args, n)
    if args.what == "meet":
        a = _parse_coord(parser, "--a", args.a, topo)
        b = _parse_coord(parser, "--b", args.b, topo)
        if args.T is None:
            parser.error("--T is required for oracle meet")
        pairs = []
        if topo.n <= oracles.CAP_PAIR:
            exact = oracles.meeting_probability_exact(topo, a, b, args.T)
            pairs.append(("exact", f"{exact.meet_prob_by_t[-1]:.10f}"))
        if args.trials:
            est = oracles.meeting_probability_mc(topo, a, b, args.T,
                                                 args.trials, args.seed)
            pairs.extend([("mc", f"{est.estimate:.10f}"),
                          ("stderr", f"{est.stderr:.2e}")])
        if not pairs:
            print(f"n={n} exceeds the exact pair-chain capacity "
                  f"{oracles.CAP_PAIR}; pass --trials for Monte Carlo",
                  file=sys.stderr)
            return 1
        print(_summary([("T", args.T)] + pairs))
        return 0
    if args.what == "visit":
        a = _parse_coord(parser, "--a", args.a, topo)
        b = _parse_coord(parser, "--b", args.b, topo)
        if args.T is None:
            parser.error("--T is required for oracle visit")
        p = oracles.visit_probability_exact(topo, a, b, args.T)
        print(_summary([("T", args.T), ("visit_prob", f"{p:.10f}")]))
        return 0
    if args.what == "collision":
        a = _parse_coord(parser, "--a", args.a, topo)
        b = _parse_coord(parser, "--b", args.b, topo)
        if args.T is None:
            parser.error("--T is required for oracle collision")
        r = oracles.collision_count_exact(topo, a, b, args.T)
        print(_summary([("T", args.T), ("collisions", f"{r:.10f}")]))
        return 0
    if args.what == "walkstats":
        a = _parse_coord(parser, "--a", args.a or "1,1", topo)
        ell = args.ell or 10000
        trials = args.trials or 1000
        st = oracles.walk_statistics_mc(topo, a, ell, trials, args.seed)
        items = [("ell", ell), ("trials", trials)]
        for lam, f in zip(st.lambdas, st.exceed_freq):
            items.append((f"exceed_l{lam:g}", f"{f:.6f}"))
        med = st.distinct_quantiles((0.5,))[0.5]
        items.append(("distinct_median", f"{med:.1f}"))
        print(_summary(items))
        return 0
    # cover
    trials = args.trials or 100
    ct = oracles.cover_time_mc(topo, trials, args.seed)
    qs = ct.quantiles((0.25, 0.5, 0.75))
    print(_summary([("trials", trials), ("censored", ct.censored)]
                   + [(f"q{int(q * 100)}", f"{v:.0f}") for q, v in qs.items()]))
    return 0


def cmd_analyze(parser, args) -> int:
    n = _single_int(parser, "--n", args.n)
    what = args.what
    record = {"islands": frozenset({"islands"}),
              "frontier": frozenset({"frontier"}),
              "cells": frozenset({"cells"})}[what]
    if what == "islands" and args.gamma is None:
        parser.error("--gamma is required for analyze islands")
    if what == "cells" and args.cell_side is None:
        parser.error("--cell-side is required for analyze cells")
    cfg = _scenario_config(parser, args, n, record=record)
    res = run_trial(cfg, args.seed)
    trace = res.trace
    m = int(args.m)
    if what == "islands":
        series = analysis.max_island_over_time(trace, args.gamma)
        out = args.out or "islands.csv"
        experiments.write_islands_csv(out, n, m, series)
        print(_summary([("instants", len(series.times)),
                        ("max_island", max(series.max_sizes)), ("out", out)]))
    elif what == "frontier":
        rec = analysis.frontier_series(trace)
        out = args.out or "frontier.csv"
        experiments.write_frontier_csv(out, n, m, rec)
        items = [("points", len(rec.xbar)), ("out", out)]
        if args.gamma is not None:
            ws = analysis.frontier_window_stats(rec, cfg.topology, args.gamma)
            items.extend([("window", ws.window),
                          ("max_advance", ws.max_advance),
                          ("violations", f"{ws.violation_fraction:.4f}")])
        print(_summary(items))
    else:
        grid = analysis.cell_diagnostics(trace, args.cell_side)
        out = args.out or "cells.csv"
        experiments.write_cells_csv(out, n, m, grid)
        reached = int((grid.first_reached >= 0).sum())
        conquered = int((grid.first_conquered >= 0).sum())
        print(_summary([("cells", grid.ncx * grid.ncy), ("reached", reached),
                        ("conquered", conquered), ("out", out)]))
    if res.timeout and args.strict:
        print("trial hit max_steps", file=sys.stderr)
        return 1
    return 0


def cmd_fit(parser, args) -> int:
    rows = experiments.read_sweep_csv(args.in_path)
    kept = [r for r in rows if not r.timeout]
    dropped = len(rows) - len(kept)
    if dropped:
        print(f"dropping {dropped} TIMEOUT rows before fitting", file=sys.stderr)
    fit = experiments.fit_power_law(kept)
    out = args.out or "fit.txt"
    experiments.write_fit_text(fit, out)
    print(_summary([("alpha", f"{fit.alpha:.4f}"), ("beta", f"{fit.beta:.4f}"),
                    ("intercept", f"{fit.intercept:.4f}"),
                    ("residual", f"{fit.residual_sum:.6f}"),
                    ("points", fit.points), ("out", out)]))
    if args.compare:
        cmp_ = experiments.compare_models(kept)
        print(_summary([("residual_sqrt", f"{cmp_.residual_sqrt_model:.6f}"),
                        ("residual_wang", f"{cmp_.residual_wang_model:.6f}"),
                        ("preferred", cmp_.preferred),
                        ("ratio", f"{cmp_.residual_ratio:.2f}")]))
    return 0


COMMANDS = {"simulate": cmd_simulate, "sweep": cmd_sweep, "oracle": cmd_oracle,
            "analyze": cmd_analyze, "fit": cmd_fit}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
    except OSError as e:
        print(f"--config: {e}", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else e.code
    try:
        return COMMANDS[args.command](parser, args)
    except SystemExit as e:
        return 0 if e.code in (0, None) else e.code
    except (ValueError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
