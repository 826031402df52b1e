import io
import math

import numpy as np
import pytest

from codedaloha.degree import CodeParams, finite_node_dist
from codedaloha.frame import (
    FrameConfig, FrameGraph, build_frame, burst_slots, empirical_degree_dist,
)

SPC32 = CodeParams(3, 2)


def test_single_user_has_no_collision():
    for code in (CodeParams(2, 1), SPC32, CodeParams(7, 4)):
        f = build_frame(FrameConfig(10, code, 1), seed=5)
        assert sorted(np.unique(f.slot_degree)) == [0, 1]
        assert f.slot_degree.sum() == code.n


def test_edge_conservation_fig2_size():
    # N_CSA = 7 with k = 2 is not k * N_SA; build through explicit assignments
    rng = np.random.default_rng(0)
    a = [rng.choice(7, 3, replace=False) for _ in range(3)]
    f = FrameGraph.from_assignments(a, 7, SPC32)
    assert f.slot_degree.sum() == 9
    f = build_frame(FrameConfig(4, SPC32, 3), seed=11)
    assert f.slot_degree.sum() == 9


def test_config_validation():
    assert FrameConfig(2, CodeParams(7, 4), 1).n_csa == 8
    with pytest.raises(ValueError):
        FrameConfig(1, CodeParams(7, 4), 1)
    with pytest.raises(ValueError):
        FrameConfig(1, CodeParams(3, 1), 1)
    with pytest.raises(ValueError):
        FrameConfig(0, SPC32, 1)
    with pytest.raises(ValueError):
        FrameConfig(5, SPC32, -1)
    assert FrameConfig.from_load(400, CodeParams(7, 4), 0.6).m_users == 240


def test_distinct_slots_and_degree_reconstruction():
    cfg = FrameConfig(50, CodeParams(7, 4), 120)
    for seed in range(20):
        f = build_frame(cfg, seed)
        assert f.assignments.shape == (120, 7)
        for row in f.assignments:
            assert len(set(row.tolist())) == 7
        np.testing.assert_array_equal(np.bincount(f.assignments.ravel(), minlength=f.n_csa), f.slot_degree)


def test_determinism_and_seed_sensitivity():
    cfg = FrameConfig(100, CodeParams(4, 2), 60)
    assert build_frame(cfg, 42) == build_frame(cfg, 42)
    assert build_frame(cfg, 42) != build_frame(cfg, 43)


def test_per_burst_substream():
    cfg = FrameConfig(100, CodeParams(7, 4), 30)
    f = build_frame(cfg, 99)
    for b in (0, 1, 17, 29):
        np.testing.assert_array_equal(burst_slots(cfg, 99, b), f.assignments[b])


def test_golden_dump():
    f = build_frame(FrameConfig(4, SPC32, 3), 2024)
    buf = io.StringIO()
    f.dump(buf)
    assert buf.getvalue() == "6 4 5\n6 3 5\n3 2 0\n"
    buf.seek(0)
    assert FrameGraph.load(buf, 8, SPC32) == f


def test_uniform_slot_choice():
    # each slot is hit by burst 0 with probability n / N_CSA
    cfg = FrameConfig(6, SPC32, 1)   # 12 slots
    trials = 6000
    hits = np.zeros(cfg.n_csa)
    for seed in range(trials):
        hits[build_frame(cfg, seed).assignments[0]] += 1
    p = 3 / 12
    sigma = math.sqrt(trials * p * (1 - p))
    assert np.all(np.abs(hits - trials * p) < 3.5 * sigma)


def test_position_uniform_within_burst():
    # the first-drawn slot of a burst is itself uniform
    cfg = FrameConfig(5, CodeParams(4, 1), 1)
    first = np.array([build_frame(cfg, s).assignments[0, 0] for s in range(4000)])
    counts = np.bincount(first, minlength=5)
    sigma = math.sqrt(4000 * 0.2 * 0.8)
    assert np.all(np.abs(counts - 800) < 3.5 * sigma)


def test_degree_one_fraction_large_frame():
    cfg = FrameConfig.from_load(10**4, CodeParams(2, 1), 0.5)
    f = build_frame(cfg, 7)
    frac = np.mean(f.slot_degree == 1)
    assert frac == pytest.approx(math.exp(-1), abs=0.01)


def test_empirical_degree_dist():
    f = build_frame(FrameConfig(5, SPC32, 0), 1)
    np.testing.assert_array_equal(empirical_degree_dist(f).coeffs, [1.0])
    f = FrameGraph.from_assignments([[0, 2, 4]], 6, SPC32)
    np.testing.assert_allclose(empirical_degree_dist(f).coeffs, [0.5, 0.5])


def test_empirical_matches_binomial_prediction():
    code = CodeParams(2, 1)
    cfg = FrameConfig.from_load(10**4, code, 0.5)
    emp = empirical_degree_dist(build_frame(cfg, 3)).coeffs
    pred = finite_node_dist(cfg.m_users, cfg.g, code).coeffs
    size = max(emp.size, pred.size)
    tv = 0.5 * np.abs(np.pad(emp, (0, size - emp.size)) - np.pad(pred, (0, size - pred.size))).sum()
    assert tv < 0.01


def test_from_assignments_validation():
    with pytest.raises(ValueError):
        FrameGraph.from_assignments([[0, 0, 1]], 4, SPC32)
    with pytest.raises(ValueError):
        FrameGraph.from_assignments([[0, 1, 9]], 4, SPC32)
