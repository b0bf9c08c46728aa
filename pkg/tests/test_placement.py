"""Placement model checks: exactness, uniformity, binomial law, concentration."""

import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from rumorwalks.placement import (
    EmptyPlacementError,
    PlacementModel,
    place,
    realized_count_concentration,
)
from rumorwalks.rng import Stream
from rumorwalks.topology import Topology


def test_model_validation():
    with pytest.raises(ValueError):
        PlacementModel("poisson", 4)
    with pytest.raises(ValueError):
        PlacementModel("exact", 0)


def test_exact_count_always_m():
    topo = Topology("torus", 8)
    for seed in range(20):
        p = place(topo, PlacementModel("exact", 5), Stream(seed))
        assert len(p.positions) == 5
        assert p.realized_m == 5
        assert p.source_index == 0


def test_positions_in_range():
    for topo in (Topology("grid_selfloop", 4), Topology("ring", 9)):
        p = place(topo, PlacementModel("exact", 50), Stream(3))
        for v in p.positions:
            topo.check_coord(v)


def test_determinism():
    topo = Topology("grid_selfloop", 16)
    a = place(topo, PlacementModel("binomial", 40), Stream(99))
    b = place(topo, PlacementModel("binomial", 40), Stream(99))
    assert a.positions == b.positions
    assert np.array_equal(a.node_indices, b.node_indices)


def test_exact_uniform_chi_square():
    # marginal occupancy uniform at alpha=0.001
    topo = Topology("grid_selfloop", 8)
    n = topo.n
    counts = np.zeros(n)
    s = Stream(2718)
    draws = 10 ** 5
    batch = place(topo, PlacementModel("exact", draws), s)
    for i in batch.node_indices:
        counts[i] += 1
    chi2 = ((counts - draws / n) ** 2 / (draws / n)).sum()
    assert chi2 < stats.chi2.ppf(0.999, df=n - 1)


def test_binomial_counts_match_binomial_law():
    # n=16, m=64: per-node mean 4 within 3 stderr; chi-square vs B(64, 1/16)
    topo = Topology("grid_selfloop", 4)
    n, m, reps = 16, 64, 10 ** 4
    s = Stream(31415)
    per_node = Counter()
    all_counts = []
    for _ in range(reps):
        p = place(topo, PlacementModel("binomial", m), s)
        node_counts = np.bincount(p.node_indices, minlength=n)
        all_counts.extend(node_counts.tolist())
        for i, c in enumerate(node_counts):
            per_node[i] += c
    mean = sum(per_node.values()) / (n * reps)
    stderr = math.sqrt(m * (1 / n) * (1 - 1 / n) / (n * reps))
    assert abs(mean - 4.0) < 3 * stderr

    # bin tail so expected counts stay >= 5
    obs = Counter(all_counts)
    kmax = 12
    probs = [stats.binom.pmf(k, m, 1 / n) for k in range(kmax)]
    probs.append(1.0 - sum(probs))
    expected = [p * len(all_counts) for p in probs]
    observed = [obs.get(k, 0) for k in range(kmax)]
    observed.append(sum(v for k, v in obs.items() if k >= kmax))
    chi2 = sum((o - e) ** 2 / e for o, e in zip(observed, expected))
    assert chi2 < stats.chi2.ppf(0.999, df=kmax)


def test_binomial_row_major_order():
    # expansion is by node index, so node_indices is sorted
    topo = Topology("grid_selfloop", 8)
    s = Stream(17)
    for _ in range(10):
        p = place(topo, PlacementModel("binomial", 30), s)
        assert list(p.node_indices) == sorted(p.node_indices)


def test_binomial_n1_m1():
    topo = Topology("ring", 1)
    p = place(topo, PlacementModel("binomial", 1), Stream(0))
    assert p.positions == [(1, 1)]


def test_binomial_empty_raises():
    # n large, m=1: a zero draw happens quickly
    topo = Topology("grid_selfloop", 64)
    hit = False
    for seed in range(50):
        try:
            place(topo, PlacementModel("binomial", 1), Stream(seed))
        except EmptyPlacementError:
            hit = True
            break
    assert hit


def test_binomial_realized_mean():
    topo = Topology("torus", 8)
    s = Stream(555)
    total = 0
    reps = 2000
    for _ in range(reps):
        try:
            total += place(topo, PlacementModel("binomial", 20), s).realized_m
        except EmptyPlacementError:
            pass
    assert abs(total / reps - 20) < 3 * math.sqrt(20 / reps)


def test_concentration_report():
    n = 1024
    topo = Topology("grid_selfloop", 32)
    m = math.ceil(17 * math.log(n))
    rep = realized_count_concentration(topo, m, trials=10 ** 4, seed=4)
    assert rep.hypothesis_ok
    assert rep.trials == 10 ** 4
    assert rep.frequency >= 1 - 1 / n ** 2


def test_concentration_hypothesis_flag():
    topo = Topology("grid_selfloop", 32)
    rep = realized_count_concentration(topo, 3, trials=100, seed=1)
    assert not rep.hypothesis_ok


def test_concentration_huge_m():
    topo = Topology("grid_selfloop", 2)
    rep = realized_count_concentration(topo, 10 ** 6, trials=200, seed=9)
    assert rep.frequency == 1.0


def test_concentration_zero_trials():
    topo = Topology("grid_selfloop", 4)
    with pytest.raises(ValueError):
        realized_count_concentration(topo, 100, trials=0)
