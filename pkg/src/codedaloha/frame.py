"""Random MAC frames as burst/slot bipartite graphs.

Randomness
----------
A frame seed is a 64-bit integer used as the key of a Philox counter-based
generator.  Burst ``b`` consumes exactly ``n`` doubles, positions
``b*n .. b*n + n - 1`` of that stream, so every burst's slots are a fixed
function of ``(seed, b)`` and can be regenerated in isolation (see
:func:`burst_slots`).  Slot ``j`` of a burst is drawn as
``floor(u_j * (N_CSA - j))`` and mapped onto the slots not yet taken by the
same burst, which is a partial Fisher-Yates draw of an ordered ``n``-subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .degree import CodeParams, DegreeDistribution, Perspective

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class FrameConfig:
    n_sa: int
    code: CodeParams
    m_users: int

    def __post_init__(self):
        if self.n_sa < 1:
            raise ValueError("n_sa must be >= 1")
        if self.m_users < 0:
            raise ValueError("m_users must be >= 0")
        if self.code.n > self.n_csa:
            raise ValueError(f"code length n={self.code.n} exceeds frame size N_CSA={self.n_csa}")

    @classmethod
    def from_load(cls, n_sa: int, code: CodeParams, g: float) -> "FrameConfig":
        if g < 0:
            raise ValueError("offered load must be >= 0")
        return cls(n_sa, code, int(round(g * n_sa)))

    @property
    def n_csa(self) -> int:
        return self.code.k * self.n_sa

    @property
    def g(self) -> float:
        return self.m_users / self.n_sa


@dataclass(frozen=True, eq=False)
class FrameGraph:
    """One frame: ``assignments[b]`` lists the ``n`` distinct slots of burst ``b``."""

    assignments: np.ndarray
    slot_degree: np.ndarray
    code: CodeParams

    @property
    def m_users(self) -> int:
        return self.assignments.shape[0]

    @property
    def n_csa(self) -> int:
        return self.slot_degree.size

    @classmethod
    def from_assignments(cls, assignments, n_csa: int, code: CodeParams) -> "FrameGraph":
        a = np.asarray(assignments, dtype=np.int64).reshape(-1, code.n)
        if a.size and (a.min() < 0 or a.max() >= n_csa):
            raise ValueError("slot index out of range")
        srt = np.sort(a, axis=1)
        if np.any(srt[:, 1:] == srt[:, :-1]):
            raise ValueError("a burst uses the same slot twice")
        deg = np.bincount(a.ravel(), minlength=n_csa)
        a.setflags(write=False)
        deg.setflags(write=False)
        return cls(a, deg, code)

    def __eq__(self, other):
        if not isinstance(other, FrameGraph):
            return NotImplemented
        return (self.code == other.code
                and np.array_equal(self.assignments, other.assignments)
                and np.array_equal(self.slot_degree, other.slot_degree))

    def without_burst(self, b: int) -> "FrameGraph":
        return FrameGraph.from_assignments(np.delete(self.assignments, b, axis=0), self.n_csa, self.code)

    def dump(self, fh: TextIO) -> None:
        """One line per burst, space-separated slot indices."""
        for row in self.assignments:
            fh.write(" ".join(str(int(s)) for s in row) + "\n")

    @classmethod
    def load(cls, fh: TextIO, n_csa: int, code: CodeParams) -> "FrameGraph":
        rows = [[int(t) for t in line.split()] for line in fh if line.strip()]
        return cls.from_assignments(np.array(rows, dtype=np.int64).reshape(-1, code.n), n_csa, code)


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & SEED_MASK))


def _select(u: np.ndarray, n_csa: int) -> np.ndarray:
    """Map uniforms ``u`` of shape (M, n) to ordered distinct slot indices."""
    m, n = u.shape
    out = np.empty((m, n), dtype=np.int64)
    for j in range(n):
        x = np.minimum((u[:, j] * (n_csa - j)).astype(np.int64), n_csa - j - 1)
        # skip over slots already taken, smallest first
        taken = np.sort(out[:, :j], axis=1)
        for t in range(j):
            x += taken[:, t] <= x
        out[:, j] = x
    return out


def build_frame(config: FrameConfig, seed: int) -> FrameGraph:
    """Draw every burst's ``n`` slots uniformly without replacement."""
    n = config.code.n
    u = _generator(seed).random((config.m_users, n))
    return FrameGraph.from_assignments(_select(u, config.n_csa), config.n_csa, config.code)


def burst_slots(config: FrameConfig, seed: int, b: int) -> np.ndarray:
    """Slots of burst ``b`` alone, by skipping ``b * n`` draws of the stream."""
    n = config.code.n
    gen = _generator(seed)
    if b:
        gen.random(b * n)
    return _select(gen.random((1, n)), config.n_csa)[0]


def empirical_degree_dist(frame: FrameGraph) -> DegreeDistribution:
    counts = np.bincount(frame.slot_degree, minlength=1)
    return DegreeDistribution(counts / frame.n_csa, Perspective.NODE)
