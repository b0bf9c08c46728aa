"""Oracle checks against matrix-power references frozen from an independent code path."""

import math

import numpy as np
import pytest

from rumorwalks import oracles as oc
from rumorwalks.topology import Topology


def test_point_mass_and_uniform():
    topo = Topology("grid_selfloop", 4)
    d = oc.point_mass(topo, (2, 3))
    assert d.probs.sum() == 1.0
    assert d.probs[topo.node_index((2, 3))] == 1.0
    u = oc.uniform_dist(topo)
    assert np.allclose(u.probs, 1 / 16)


def test_evolve_zero_steps_identity():
    topo = Topology("torus", 5)
    d = oc.point_mass(topo, (1, 1))
    e = oc.evolve(d, 0)
    assert np.array_equal(d.probs, e.probs)


def test_evolve_corner_2x2():
    # two self-loops keep half the mass in place
    topo = Topology("grid_selfloop", 2)
    d = oc.evolve(oc.point_mass(topo, (1, 1)), 1)
    want = np.zeros(4)
    want[topo.node_index((1, 1))] = 0.5
    want[topo.node_index((2, 1))] = 0.25
    want[topo.node_index((1, 2))] = 0.25
    assert np.allclose(d.probs, want, atol=1e-15)


def test_evolve_grid3_center_two_steps():
    # frozen from a dense-transition-matrix power computation
    topo = Topology("grid_selfloop", 3)
    d = oc.evolve(oc.point_mass(topo, (2, 2)), 2)
    want = [0.125, 0.0625, 0.125, 0.0625, 0.25, 0.0625, 0.125, 0.0625, 0.125]
    assert np.allclose(d.probs, want, atol=1e-15)


def test_uniform_stationary_all_kinds():
    for topo in (Topology("grid_selfloop", 6), Topology("torus", 6),
                 Topology("ring", 7), Topology("torus", 4, 0.2)):
        u = oc.uniform_dist(topo)
        e = oc.evolve(u, 1)
        assert np.abs(e.probs - 1 / topo.n).max() <= 1e-12


def test_normalization_drift_many_steps():
    for topo in (Topology("grid_selfloop", 8), Topology("ring", 16)):
        d = oc.evolve(oc.point_mass(topo, (1, 1)), 10 ** 4)
        assert abs(d.probs.sum() - 1.0) <= 1e-12
        assert (d.probs >= 0).all()


def test_visit_probability_trivial_cases():
    topo = Topology("grid_selfloop", 8)
    assert oc.visit_probability_exact(topo, (3, 3), (3, 3), 0) == 1.0
    assert oc.visit_probability_exact(topo, (3, 3), (3, 3), 17) == 1.0
    assert oc.visit_probability_exact(topo, (1, 1), (5, 5), 0) == 0.0


def test_visit_probability_adjacent_2x2():
    topo = Topology("grid_selfloop", 2)
    assert oc.visit_probability_exact(topo, (1, 1), (2, 1), 1) == pytest.approx(0.25)


def test_visit_probability_frozen_values():
    # references computed by absorbing-chain matrix powers
    g8 = Topology("grid_selfloop", 8)
    assert oc.visit_probability_exact(g8, (1, 1), (4, 5), 40) == pytest.approx(
        0.24581984632595713, rel=1e-12)
    t8 = Topology("torus", 8)
    assert oc.visit_probability_exact(t8, (1, 1), (4, 5), 40) == pytest.approx(
        0.2504277674713718, rel=1e-12)
    r9 = Topology("ring", 9)
    assert oc.visit_probability_exact(r9, (1, 1), (5, 1), 30) == pytest.approx(
        0.807968009263277, rel=1e-12)


def test_visit_probability_monotone_in_T():
    topo = Topology("torus", 6)
    vals = [oc.visit_probability_exact(topo, (1, 1), (4, 3), T) for T in range(0, 40, 4)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert 0.0 <= vals[-1] <= 1.0


def test_meeting_probability_same_start():
    topo = Topology("grid_selfloop", 4)
    r = oc.meeting_probability_exact(topo, (2, 2), (2, 2), 5)
    assert r.meet_prob_by_t[0] == 1.0
    assert all(v == 1.0 for v in r.meet_prob_by_t)


def test_meeting_probability_ring2_parity():
    topo = Topology("ring", 2)
    r = oc.meeting_probability_exact(topo, (1, 1), (2, 1), 32)
    assert all(v == 0.0 for v in r.meet_prob_by_t)


def test_meeting_probability_frozen_values():
    g16 = Topology("grid_selfloop", 16)
    r = oc.meeting_probability_exact(g16, (3, 3), (7, 7), 16)
    assert r.meet_prob_by_t[8] == pytest.approx(0.01353885605931282, rel=1e-12)
    assert r.meet_prob_by_t[16] == pytest.approx(0.04681944422331969, rel=1e-12)
    t8 = Topology("torus", 8, 0.2)
    r2 = oc.meeting_probability_exact(t8, (1, 1), (5, 5), 12)
    assert r2.meet_prob_by_t[12] == pytest.approx(0.05116959958443022, rel=1e-12)


def test_meeting_probability_monotone_and_bounded():
    topo = Topology("torus", 6)
    r = oc.meeting_probability_exact(topo, (1, 1), (3, 4), 30)
    v = r.meet_prob_by_t
    assert len(v) == 31
    assert all(0.0 <= x <= 1.0 for x in v)
    assert all(b >= a for a, b in zip(v, v[1:]))


def test_collision_count_trivial():
    topo = Topology("grid_selfloop", 8)
    assert oc.collision_count_exact(topo, (2, 2), (2, 2), 0) == pytest.approx(1.0)
    assert oc.collision_count_exact(topo, (2, 2), (5, 5), 0) == 0.0


def test_collision_count_frozen_values():
    t16 = Topology("torus", 16)
    assert oc.collision_count_exact(t16, (3, 3), (5, 7), 50) == pytest.approx(
        0.44658389811723825, rel=1e-12)
    g8 = Topology("grid_selfloop", 8)
    assert oc.collision_count_exact(g8, (2, 2), (2, 2), 20) == pytest.approx(
        2.2366787759840925, rel=1e-12)
    r7 = Topology("ring", 7)
    assert oc.collision_count_exact(r7, (1, 1), (4, 1), 25) == pytest.approx(
        3.1443480990531256, rel=1e-12)


def test_collision_count_symmetry():
    topo = Topology("torus", 8)
    for (w, u) in (((1, 1), (5, 3)), ((2, 7), (8, 8)), ((4, 4), (4, 5))):
        assert oc.collision_count_exact(topo, w, u, 30) == oc.collision_count_exact(
            topo, u, w, 30)


def test_meeting_mc_trivial():
    topo = Topology("grid_selfloop", 4)
    est = oc.meeting_probability_mc(topo, (2, 2), (2, 2), 10, trials=50, seed=0)
    assert est.estimate == 1.0
    one = oc.meeting_probability_mc(topo, (1, 1), (4, 4), 10, trials=1, seed=3)
    assert one.estimate in (0.0, 1.0)


def test_meeting_mc_matches_exact():
    topo = Topology("grid_selfloop", 16)
    exact = oc.meeting_probability_exact(topo, (4, 4), (8, 8), 16).meet_prob_by_t[16]
    est = oc.meeting_probability_mc(topo, (4, 4), (8, 8), 16, trials=10 ** 5, seed=5)
    assert abs(est.estimate - exact) <= 3 * est.stderr


def test_capacity_errors():
    big = Topology("ring", (1 << 16) + 2)
    with pytest.raises(oc.CapacityError):
        oc.visit_probability_exact(big, (1, 1), (2, 1), 1)
    pair_big = Topology("ring", (1 << 12) + 2)
    with pytest.raises(oc.CapacityError):
        oc.meeting_probability_exact(pair_big, (1, 1), (2, 1), 1)


def test_walk_statistics_unreachable_distance():
    topo = Topology("grid_selfloop", 8)  # diameter 14
    st = oc.walk_statistics_mc(topo, (4, 4), ell=100, trials=200, seed=1,
                               lambdas=(10.0,))
    assert st.exceed_freq[0] == 0.0


def test_walk_statistics_distinct_bounds():
    topo = Topology("torus", 16)
    st = oc.walk_statistics_mc(topo, (1, 1), ell=500, trials=300, seed=2)
    qs = st.distinct_quantiles((0.0, 0.5, 1.0))
    assert 1 <= qs[0.0] <= qs[0.5] <= qs[1.0] <= 501
    assert qs[1.0] <= topo.n


def test_walk_statistics_deviation_bound():
    # tail bound with slack for MC noise
    topo = Topology("grid_selfloop", 64)
    st = oc.walk_statistics_mc(topo, (32, 32), ell=400, trials=4000, seed=3)
    for lam, f, se in zip(st.lambdas, st.exceed_freq, st.exceed_stderr):
        assert f <= 2 * math.exp(-lam ** 2 / 2) + 3 * max(se, 1e-4)


def test_distinct_nodes_constant_stable():
    # median distinct-node count tracks ell/ln(ell) with a stable constant
    topo = Topology("grid_selfloop", 256)
    c2 = []
    for ell, trials in ((10 ** 3, 2000), (10 ** 4, 1000), (10 ** 5, 200)):
        st = oc.walk_statistics_mc(topo, (128, 128), ell, trials, seed=42)
        med = st.distinct_quantiles((0.5,))[0.5]
        c2.append(med * math.log(ell) / ell)
    mean = sum(c2) / len(c2)
    assert all(c > 0 for c in c2)
    assert all(abs(c - mean) <= 0.25 * mean for c in c2)


def test_cover_single_node():
    topo = Topology("ring", 1)
    ct = oc.cover_time_mc(topo, trials=10, seed=0)
    assert ct.quantiles((1.0,))[1.0] == 0.0


def test_cover_two_node_ring():
    topo = Topology("ring", 2)
    ct = oc.cover_time_mc(topo, trials=500, seed=1)
    assert ct.times.mean() == 1.0  # first step always covers


def test_cover_scaling_band():
    meds = []
    for side in (32, 64, 128):
        topo = Topology("grid_selfloop", side)
        ct = oc.cover_time_mc(topo, trials=20, seed=7)
        assert ct.censored == 0
        n = topo.n
        meds.append(ct.quantiles((0.5,))[0.5] / (n * math.log(n) ** 2))
    assert max(meds) / min(meds) <= 2.0


def test_walkstats_requires_ell_two():
    with pytest.raises(ValueError):
        oc.walk_statistics_mc(Topology("ring", 4), (1, 1), ell=1, trials=10, seed=0)
