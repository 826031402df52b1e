"""Monte Carlo throughput estimates for SA, THMA and CSA.

Seeding: frame ``f`` of a point with master seed ``s`` is built from the
64-bit seed ``SeedSequence(s, spawn_key=(f,)).generate_state(1, uint64)[0]``.
Point ``j`` of a sweep gets its master seed the same way from
``(sweep_seed, j)``.  Per-frame results are integers reduced in frame order,
so statistics do not depend on ``jobs``.
"""

from __future__ import annotations

import math
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import decode as _decode
from .degree import CodeParams
from .frame import FrameConfig, build_frame

PROTOCOLS = ("SA", "THMA", "CSA")
DEFAULT_FRAMES = 1000


def derive_seed(master_seed: int, index: int) -> int:
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ThroughputStats:
    protocol: str
    code: CodeParams
    n_sa: int
    g: float
    g_realized: float
    frames: int
    i_max: int
    master_seed: int
    t_mean: float
    t_stderr: float
    plr_mean: float
    plr_stderr: float

    def as_row(self) -> dict:
        d = asdict(self)
        code = d.pop("code")
        d["n"], d["k"] = code["n"], code["k"]
        return d


def _check_protocol(protocol: str, code: CodeParams):
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    if protocol == "SA" and not code.is_uncoded:
        raise ValueError("SA runs on uncoded frames; use CodeParams.uncoded()")


def _run_frames(protocol, config, i_max, master_seed, start, stop):
    out = np.empty(stop - start, dtype=np.int64)
    for i, f in enumerate(range(start, stop)):
        frame = build_frame(config, derive_seed(master_seed, f))
        out[i] = _decode.decode(protocol, frame, config.code, i_max).n_recovered
    return out


def _mean_stderr(x: np.ndarray) -> tuple[float, float]:
    mean = float(x.mean())
    if x.size < 2:
        return mean, 0.0
    return mean, float(x.std(ddof=1) / math.sqrt(x.size))


def recovered_counts(protocol: str, config: FrameConfig, frames: int, i_max: int,
                     master_seed: int, jobs: int = 1, pool: Executor | None = None) -> np.ndarray:
    """Recovered bursts per frame, ordered by frame index."""
    if jobs <= 1 or frames < 2 * jobs:
        return _run_frames(protocol, config, i_max, master_seed, 0, frames)
    if pool is None:
        with ProcessPoolExecutor(max_workers=jobs) as own:
            return recovered_counts(protocol, config, frames, i_max, master_seed, jobs, own)
    bounds = np.linspace(0, frames, jobs + 1).astype(int)
    parts = pool.map(_run_frames, *zip(*[
        (protocol, config, i_max, master_seed, lo, hi)
        for lo, hi in zip(bounds[:-1], bounds[1:])
    ]))
    return np.concatenate(list(parts))


def simulate_point(protocol: str, code: CodeParams, n_sa: int, g: float,
                   frames: int = DEFAULT_FRAMES, i_max: int = _decode.DEFAULT_I_MAX,
                   master_seed: int = 0, jobs: int = 1, pool: Executor | None = None) -> ThroughputStats:
    _check_protocol(protocol, code)
    if frames < 1:
        raise ValueError("frames must be >= 1")
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    config = FrameConfig.from_load(n_sa, code, g)
    rec = recovered_counts(protocol, config, frames, i_max, master_seed, jobs, pool)
    t_mean, t_se = _mean_stderr(rec / n_sa)
    m = config.m_users
    plr = 1.0 - rec / m if m else np.zeros(frames)
    plr_mean, plr_se = _mean_stderr(plr)
    return ThroughputStats(protocol, code, n_sa, g, config.g, frames, i_max, int(master_seed),
                           t_mean, t_se, plr_mean, plr_se)


def sweep(protocol: str, code: CodeParams, n_sa: int, g_grid, frames: int = DEFAULT_FRAMES,
          i_max: int = _decode.DEFAULT_I_MAX, master_seed: int = 0, jobs: int = 1,
          pool: Executor | None = None) -> list[ThroughputStats]:
    g_grid = list(g_grid)
    if not g_grid:
        raise ValueError("empty load grid")
    bad = [g for g in g_grid if not g >= 0]
    if bad:
        raise ValueError(f"offered loads must be >= 0, got {bad}")
    _check_protocol(protocol, code)
    FrameConfig.from_load(n_sa, code, max(g_grid))
    if jobs > 1 and pool is None:
        with ProcessPoolExecutor(max_workers=jobs) as own:
            return sweep(protocol, code, n_sa, g_grid, frames, i_max, master_seed, jobs, own)
    return [
        simulate_point(protocol, code, n_sa, g, frames, i_max, derive_seed(master_seed, j), jobs, pool)
        for j, g in enumerate(g_grid)
    ]
