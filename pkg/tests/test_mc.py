import math

import numpy as np
import pytest

from codedaloha import de, mc
from codedaloha.degree import CodeParams

C74 = CodeParams(7, 4)


def test_empty_grid_point():
    (s,) = mc.sweep("CSA", C74, 100, [0.0], frames=5)
    assert s.t_mean == 0.0 and s.plr_mean == 0.0


def test_input_validation():
    with pytest.raises(ValueError):
        mc.sweep("CSA", C74, 100, [])
    with pytest.raises(ValueError):
        mc.sweep("CSA", C74, 100, [0.2, -0.1])
    with pytest.raises(ValueError):
        mc.simulate_point("SA", C74, 100, 0.5)
    with pytest.raises(ValueError):
        mc.simulate_point("ALOHA", C74, 100, 0.5)
    with pytest.raises(ValueError):
        mc.simulate_point("CSA", C74, 100, 0.5, frames=0)


def test_reproducible_and_seed_dependent():
    a = mc.sweep("CSA", C74, 100, [0.3, 0.6], frames=50, master_seed=9)
    b = mc.sweep("CSA", C74, 100, [0.3, 0.6], frames=50, master_seed=9)
    c = mc.sweep("CSA", C74, 100, [0.3, 0.6], frames=50, master_seed=10)
    assert a == b
    assert a != c


def test_jobs_do_not_change_results():
    a = mc.sweep("CSA", C74, 100, [0.55, 0.7], frames=40, master_seed=3, jobs=1)
    b = mc.sweep("CSA", C74, 100, [0.55, 0.7], frames=40, master_seed=3, jobs=3)
    assert a == b


def test_point_rerunnable_from_its_own_seed():
    pts = mc.sweep("THMA", C74, 100, [0.1, 0.4], frames=30, master_seed=77)
    again = mc.simulate_point("THMA", C74, 100, 0.4, frames=30, master_seed=pts[1].master_seed)
    assert again == pts[1]


def test_consistency_throughput_vs_plr():
    for s in mc.sweep("CSA", C74, 100, [0.123, 0.5, 0.9], frames=50, master_seed=1):
        assert s.t_mean == pytest.approx(s.g_realized * (1 - s.plr_mean), abs=1e-12)
        assert 0 <= s.t_mean <= s.g_realized + 3 * s.t_stderr
        assert abs(s.g_realized - s.g) <= 0.5 / s.n_sa


def test_dominance_same_seed_family():
    grid = [0.2, 0.5, 0.6, 0.8]
    csa = mc.sweep("CSA", C74, 100, grid, frames=100, master_seed=5)
    thma = mc.sweep("THMA", C74, 100, grid, frames=100, master_seed=5)
    for c, t in zip(csa, thma):
        assert c.t_mean >= t.t_mean - 2 * math.hypot(c.t_stderr, t.t_stderr)


def test_sa_matches_g_exp_minus_g():
    grid = [0.25, 0.5, 1.0, 1.5]
    for s in mc.sweep("SA", CodeParams.uncoded(), 1000, grid, frames=400, master_seed=2):
        assert abs(s.t_mean - s.g * math.exp(-s.g)) < 3 * s.t_stderr


def test_sa_peak_example():
    s = mc.simulate_point("SA", CodeParams.uncoded(), 1000, 1.0, frames=1000, master_seed=0)
    assert s.t_mean == pytest.approx(0.368, abs=0.01)


def test_csa_low_loss_at_half_load():
    s = mc.simulate_point("CSA", C74, 400, 0.5, frames=300, master_seed=0)
    assert s.plr_mean < 1e-2
    assert s.t_mean == pytest.approx(0.5, abs=0.01)


@pytest.mark.slow
def test_asymptotic_agreement_large_frame():
    grid = [0.1, 0.3, 0.5, 0.55, 0.8, 1.0, 1.3]
    for s in mc.sweep("CSA", C74, 4000, grid, frames=60, master_seed=4):
        _, t_inf = de.asymptotic_throughput(s.g, C74, 20)
        assert abs(s.t_mean - t_inf) < 0.02, s.g


def test_as_row_shape():
    s = mc.simulate_point("CSA", C74, 50, 0.3, frames=3)
    row = s.as_row()
    assert row["n"] == 7 and row["k"] == 4 and "code" not in row
    assert np.isfinite(row["t_stderr"])
