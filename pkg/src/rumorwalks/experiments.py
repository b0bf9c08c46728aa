"""Sweep orchestration, aggregation, power-law fitting, model comparison.

A sweep is a grid of (n, m) cells times a trial count.  Per-trial seeds
are derived from the base seed and the cell coordinates alone, so the
row table is reproducible regardless of execution order or worker
count.  Completion times are fitted as ln(median T) against ln n and
ln m by ordinary least squares.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy import stats

from .engine import ScenarioConfig, run_trial
from .placement import PlacementModel
from .rng import trial_seed
from .topology import Topology, default_lazy_prob


class FitError(ValueError):
    pass


class ComparisonError(ValueError):
    pass


@dataclass(frozen=True)
class SweepPlan:
    kind: str
    n_values: tuple[int, ...]
    m_values: tuple[int, ...]
    scenario: str
    trials: int
    base_seed: int
    placement: str = "exact"
    lazy_prob: float | None = None  # None picks the scenario default
    max_steps: int | Callable[[int, int], int] | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_values or not self.m_values:
            raise ValueError("n_values and m_values must be non-empty")
        if self.kind != "ring":
            for n in self.n_values:
                if math.isqrt(n) ** 2 != n:
                    raise ValueError(f"n={n} is not a perfect square for a 2-D topology")
        object.__setattr__(self, "n_values", tuple(self.n_values))
        object.__setattr__(self, "m_values", tuple(self.m_values))

    def cell_max_steps(self, n: int, m: int) -> int | None:
        if callable(self.max_steps):
            return self.max_steps(n, m)
        return self.max_steps

    def lazy_for(self) -> float:
        if self.lazy_prob is not None:
            return self.lazy_prob
        return default_lazy_prob(self.kind, self.scenario)


@dataclass(frozen=True)
class SweepRow:
    topology: str
    scenario: str
    n: int
    m: int
    trial: int
    seed: int
    completion_time: int | None
    timeout: bool
    realized_m: int
    wall_ms: float


def _run_one(plan: SweepPlan, n: int, m: int, trial: int) -> SweepRow:
    side = n if plan.kind == "ring" else math.isqrt(n)
    topo = Topology(plan.kind, side, plan.lazy_for())
    cfg = ScenarioConfig(topology=topo,
                         placement=PlacementModel(plan.placement, m),
                         scenario=plan.scenario,
                         max_steps=plan.cell_max_steps(n, m))
    seed = trial_seed(plan.base_seed, n, m, trial)
    t0 = time.perf_counter()
    res = run_trial(cfg, seed)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return SweepRow(topology=plan.kind, scenario=plan.scenario, n=n, m=m,
                    trial=trial, seed=seed,
                    completion_time=res.completion_time,
                    timeout=res.timeout, realized_m=res.realized_m,
                    wall_ms=wall_ms)


def run_sweep(plan: SweepPlan, workers: int = 1) -> list[SweepRow]:
    """All (n, m, trial) rows in deterministic (n, m, trial) order.

    Every field except wall_ms is a pure function of the plan, so the
    table is reproducible across reruns and worker counts; wall_ms is
    measurement, excluded from the determinism contract.
    """
    jobs = [(n, m, t) for n in plan.n_values for m in plan.m_values
            for t in range(plan.trials)]
    if workers <= 1:
        rows = [_run_one(plan, *job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda j: _run_one(plan, *j), jobs))
    rows.sort(key=lambda r: (r.n, r.m, r.trial))
    return rows


def _cell_medians(rows: Iterable[SweepRow], response: str) -> dict[tuple[int, int], float]:
    cells: dict[tuple[int, int], list[int]] = {}
    for r in rows:
        if r.timeout:
            raise FitError("TIMEOUT rows in the fitted subset; filter or raise max_steps")
        cells.setdefault((r.n, r.m), []).append(r.completion_time)
    if response == "median":
        agg = {k: float(np.median(v)) for k, v in cells.items()}
    elif response == "mean":
        agg = {k: float(np.mean(v)) for k, v in cells.items()}
    else:
        raise ValueError(f"unknown response: {response!r}")
    for k, v in agg.items():
        if v <= 0:
            raise FitError(f"cell {k} has nonpositive {response} completion time; "
                           "log fit undefined")
    return agg


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float       # exponent of n (nan when n did not vary)
    beta: float        # exponent of m (nan when m did not vary)
    intercept: float
    residual_sum: float
    ci_alpha: float    # 95% half-widths (nan when the exponent is nan)
    ci_beta: float
    points: int


def fit_power_law(rows: Iterable[SweepRow], response: str = "median") -> PowerLawFit:
    """OLS of ln(median T) = intercept + alpha ln n + beta ln m.

    A parameter axis that never varies is dropped from the design and
    reported as nan.  CIs are 95% from the usual t-based OLS formulas.
    """
    cells = _cell_medians(rows, response)
    if len(cells) < 2:
        raise FitError("need at least 2 (n, m) cells to fit")
    keys = sorted(cells)
    ln_n = np.array([math.log(n) for n, _ in keys])
    ln_m = np.array([math.log(m) for _, m in keys])
    y = np.array([math.log(cells[k]) for k in keys])
    cols = [np.ones_like(y)]
    names = ["intercept"]
    if np.ptp(ln_n) > 1e-12:
        cols.append(ln_n)
        names.append("alpha")
    if np.ptp(ln_m) > 1e-12:
        cols.append(ln_m)
        names.append("beta")
    if len(cols) == 1:
        raise FitError("neither n nor m varies; nothing to fit")
    X = np.column_stack(cols)
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise FitError("degenerate design matrix")
    coef, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    ssr = float(resid @ resid)
    dof = len(y) - X.shape[1]
    if dof > 0:
        sigma2 = ssr / dof
        cov = sigma2 * np.linalg.inv(X.T @ X)
        half = stats.t.ppf(0.975, dof) * np.sqrt(np.diag(cov))
    else:
        half = np.full(X.shape[1], float("nan"))
    out = {"alpha": float("nan"), "beta": float("nan"),
           "ci_alpha": float("nan"), "ci_beta": float("nan")}
    for i, name in enumerate(names):
        if name == "intercept":
            intercept = float(coef[i])
        else:
            out[name] = float(coef[i])
            out["ci_" + name] = float(half[i])
    return PowerLawFit(alpha=out["alpha"], beta=out["beta"], intercept=intercept,
                       residual_sum=ssr, ci_alpha=out["ci_alpha"],
                       ci_beta=out["ci_beta"], points=len(y))


@dataclass(frozen=True)
class ModelComparison:
    residual_sqrt_model: float
    residual_wang_model: float
    preferred: str  # "sqrt" or "wang"

    @property
    def residual_ratio(self) -> float:
        """Residual of the rejected model over the preferred one."""
        lo = min(self.residual_sqrt_model, self.residual_wang_model)
        hi = max(self.residual_sqrt_model, self.residual_wang_model)
        if lo == 0:
            return float("inf")
        return hi / lo


def compare_models(rows: Iterable[SweepRow]) -> ModelComparison:
    """Intercept-only fits of ln(median T) against the two candidate laws.

    sqrt law: T ~ n / sqrt(m).  wang law: T ~ n ln n ln m / m.  The
    sweep must vary m at a single n with at least 4 values; m >= 2
    throughout so ln ln m is defined.
    """
    cells = _cell_medians(rows, "median")
    ns = {n for n, _ in cells}
    if len(ns) != 1:
        raise ComparisonError("model comparison needs a single fixed n")
    n = ns.pop()
    ms = sorted(m for _, m in cells)
    if len(ms) < 4:
        raise ComparisonError("model comparison needs at least 4 m values")
    if min(ms) < 2:
        raise ComparisonError("model comparison needs m >= 2")
    y = np.array([math.log(cells[(n, m)]) for m in ms])
    pred_sqrt = np.array([math.log(n / math.sqrt(m)) for m in ms])
    pred_wang = np.array([math.log(n * math.log(n) * math.log(m) / m) for m in ms])

    def ssr(pred):
        d = y - pred
        d -= d.mean()
        return float(d @ d)

    r_sqrt = ssr(pred_sqrt)
    r_wang = ssr(pred_wang)
    return ModelComparison(residual_sqrt_model=r_sqrt, residual_wang_model=r_wang,
                           preferred="sqrt" if r_sqrt <= r_wang else "wang")


@dataclass(frozen=True)
class SummaryRow:
    key: tuple
    count: int
    timeout_count: int
    min: float | None
    q25: float | None
    median: float | None
    q75: float | None
    max: float | None


def summarize(rows: Iterable[SweepRow],
              group_keys: tuple[str, ...] = ("topology", "scenario", "n", "m")
              ) -> list[SummaryRow]:
    groups: dict[tuple, list[SweepRow]] = {}
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to summarize")
    for r in rows:
        key = tuple(getattr(r, k) for k in group_keys)
        groups.setdefault(key, []).append(r)
    out = []
    for key in sorted(groups, key=lambda k: tuple(str(x) for x in k)):
        grp = groups[key]
        done = [r.completion_time for r in grp if not r.timeout]
        tcount = sum(1 for r in grp if r.timeout)
        if done:
            arr = np.array(done, dtype=np.float64)
            out.append(SummaryRow(key=key, count=len(grp), timeout_count=tcount,
                                  min=float(arr.min()),
                                  q25=float(np.quantile(arr, 0.25)),
                                  median=float(np.quantile(arr, 0.5)),
                                  q75=float(np.quantile(arr, 0.75)),
                                  max=float(arr.max())))
        else:
            out.append(SummaryRow(key=key, count=len(grp), timeout_count=tcount,
                                  min=None, q25=None, median=None, q75=None,
                                  max=None))
    return out


# ---------------------------------------------------------------------------
# CSV and flat-text IO

SWEEP_HEADER = ["topology", "scenario", "n", "m", "trial", "seed",
                "completion_time", "timeout", "realized_m", "wall_ms"]


def write_sweep_csv(rows: Iterable[SweepRow], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(SWEEP_HEADER)
        for r in rows:
            w.writerow([r.topology, r.scenario, r.n, r.m, r.trial, r.seed,
                        "" if r.completion_time is None else r.completion_time,
                        int(r.timeout), r.realized_m, f"{r.wall_ms:.3f}"])


def read_sweep_csv(path) -> list[SweepRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != SWEEP_HEADER:
            raise ValueError(f"unexpected sweep header: {reader.fieldnames}")
        for rec in reader:
            ct = rec["completion_time"]
            rows.append(SweepRow(topology=rec["topology"], scenario=rec["scenario"],
                                 n=int(rec["n"]), m=int(rec["m"]),
                                 trial=int(rec["trial"]), seed=int(rec["seed"]),
                                 completion_time=None if ct == "" else int(ct),
                                 timeout=bool(int(rec["timeout"])),
                                 realized_m=int(rec["realized_m"]),
                                 wall_ms=float(rec["wall_ms"])))
    return rows


def write_islands_csv(path, n: int, m: int, series) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["n", "m", "gamma", "t", "max_island", "num_islands"])
        for t, mx, ni in zip(series.times, series.max_sizes, series.num_islands):
            w.writerow([n, m, repr(series.gamma), t, mx, ni])


def write_frontier_csv(path, n: int, m: int, record) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["n", "m", "t", "xbar_x", "xbar_y"])
        for t, (x, y) in zip(record.times, record.xbar):
            w.writerow([n, m, int(t), x, y])


def write_cells_csv(path, n: int, m: int, grid) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["n", "m", "cell_side", "cell_x", "cell_y",
                    "first_reached", "first_conquered"])
        for cy in range(grid.ncy):
            for cx in range(grid.ncx):
                c = cy * grid.ncx + cx
                fr = grid.first_reached[c]
                fc = grid.first_conquered[c]
                w.writerow([n, m, grid.cell_side, cx, cy,
                            "" if fr < 0 else int(fr),
                            "" if fc < 0 else int(fc)])


FIT_FIELDS = ["alpha", "beta", "intercept", "residual", "ci_alpha", "ci_beta"]


def write_fit_text(fit: PowerLawFit, path) -> None:
    vals = {"alpha": fit.alpha, "beta": fit.beta, "intercept": fit.intercept,
            "residual": fit.residual_sum, "ci_alpha": fit.ci_alpha,
            "ci_beta": fit.ci_beta}
    with open(path, "w", encoding="utf-8") as f:
        for k in FIT_FIELDS:
            f.write(f"{k}={vals[k]!r}\n")


def read_fit_text(path) -> dict[str, float]:
    out = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            k, _, v = line.partition("=")
            out[k] = float(v)
    return out
