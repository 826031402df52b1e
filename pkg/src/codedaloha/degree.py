"""Packet-level codes and sum-node (slot) degree distributions.

A slot of a CSA frame is a sum node whose degree is the number of units that
landed in it.  With ``M`` users each sending ``n`` units into ``k * N_SA``
slots, the node-perspective degree is Binomial(M, lambda / M) where
``lambda = G * n / k`` is the mean number of units per slot; as ``M`` grows it
tends to Poisson(lambda).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

NORM_TOL = 1e-9


def power_penalty_db(n: int, k: int) -> float:
    """Average transmit-power increase over slotted ALOHA, ``10 log10(n/k)``."""
    return 10.0 * math.log10(n / k)


@dataclass(frozen=True)
class CodeParams:
    """An ``(n, k)`` MDS packet-level code shared by all users.

    ``1 <= k < n`` for a real code.  The uncoded case ``n == k == 1`` is also
    accepted so that plain slotted ALOHA runs through the same machinery.
    """

    n: int
    k: int

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and isinstance(self.k, (int, np.integer))):
            raise TypeError(f"code parameters must be integers, got ({self.n!r}, {self.k!r})")
        if self.n == 1 and self.k == 1:
            return
        if not 1 <= self.k < self.n:
            raise ValueError(f"invalid code ({self.n},{self.k}): need 1 <= k < n")

    @classmethod
    def uncoded(cls) -> "CodeParams":
        return cls(1, 1)

    @property
    def is_uncoded(self) -> bool:
        return self.n == 1

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def power_penalty_db(self) -> float:
        return power_penalty_db(self.n, self.k)

    def mean_slot_degree(self, g: float) -> float:
        """Units per slot, ``G * n / k``."""
        return g * self.n / self.k

    def __str__(self):
        return f"({self.n},{self.k})"


class Perspective(enum.Enum):
    NODE = "node"
    EDGE = "edge"


@dataclass(frozen=True)
class DegreeDistribution:
    """Finite coefficient vector of a sum-node degree distribution.

    ``coeffs[d]`` is the probability of degree ``d``.  For the node
    perspective the polynomial is ``sum_d coeffs[d] x**d``; for the edge
    perspective it is ``sum_d coeffs[d] x**(d-1)`` and ``coeffs[0]`` is zero.
    """

    coeffs: np.ndarray
    perspective: Perspective

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if np.any(c < -NORM_TOL) or np.any(c > 1 + NORM_TOL):
            raise ValueError("coefficients must lie in [0, 1]")
        if abs(c.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"coefficients sum to {c.sum()!r}, not 1")
        if self.perspective is Perspective.EDGE and c[0] != 0.0:
            raise ValueError("edge-perspective distribution has mass at degree 0")
        c = np.clip(c, 0.0, 1.0)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def truncation_degree(self) -> int:
        return self.coeffs.size - 1

    def mean_degree(self) -> float:
        """Average degree of the distribution, ``sum_d d * coeffs[d]``."""
        return float(np.dot(np.arange(self.coeffs.size), self.coeffs))

    def __call__(self, x: float) -> float:
        return eval_poly(self, x)


def _normalized(c: np.ndarray) -> np.ndarray:
    return c / c.sum()


def default_truncation(lam: float) -> int:
    """Degree beyond which Poisson(lam) tail mass is far below 1e-12."""
    return int(math.ceil(lam + 12.0 * math.sqrt(lam) + 20.0))


def finite_node_dist(m_users: int, g: float, code: CodeParams, d_max: int | None = None) -> DegreeDistribution:
    """Binomial slot-degree distribution for a frame of ``m_users`` users.

    Each slot receives ``Binomial(M, lambda/M)`` units, ``lambda = G n / k``.
    Coefficients above ``d_max`` are dropped and the rest renormalized.
    """
    if m_users < 1:
        raise ValueError("m_users must be >= 1")
    if not g > 0:
        raise ValueError("offered load must be positive")
    lam = code.mean_slot_degree(g)
    if lam > m_users:
        raise ValueError(
            f"mean slot degree {lam:g} exceeds user count {m_users}: "
            "more units per slot than users"
        )
    if d_max is None:
        d_max = default_truncation(lam)
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    top = min(m_users, d_max)
    # binom.pmf works in log space; safe for large M
    pmf = stats.binom.pmf(np.arange(top + 1), m_users, lam / m_users)
    return DegreeDistribution(_normalized(pmf), Perspective.NODE)


def poisson_node_dist(lam: float, d_max: int | None = None) -> DegreeDistribution:
    if not lam > 0:
        raise ValueError("mean degree must be positive")
    if d_max is None:
        d_max = default_truncation(lam)
    pmf = stats.poisson.pmf(np.arange(d_max + 1), lam)
    return DegreeDistribution(_normalized(pmf), Perspective.NODE)


def poisson_edge_dist(g: float, code: CodeParams, d_max: int | None = None) -> DegreeDistribution:
    """Edge-perspective limit ``rho(x) = exp(-G (1-x) n / k)``.

    ``rho_d = e^-lam lam^(d-1) / (d-1)!`` for ``d = 1..d_max``.
    """
    if not g > 0:
        raise ValueError("offered load must be positive")
    lam = code.mean_slot_degree(g)
    if d_max is None:
        d_max = default_truncation(lam) + 1
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    c = np.zeros(d_max + 1)
    c[1:] = stats.poisson.pmf(np.arange(d_max), lam)
    return DegreeDistribution(_normalized(c), Perspective.EDGE)


def node_to_edge(node_dist: DegreeDistribution) -> DegreeDistribution:
    """Convert ``Psi`` to ``rho`` via ``rho_d = d Psi_d / sum_d d Psi_d``."""
    if node_dist.perspective is not Perspective.NODE:
        raise ValueError("expected a node-perspective distribution")
    weighted = node_dist.coeffs * np.arange(node_dist.coeffs.size)
    total = weighted.sum()
    if total <= 0:
        raise ValueError("distribution has zero mean degree")
    return DegreeDistribution(weighted / total, Perspective.EDGE)


def normalize(dist: DegreeDistribution) -> DegreeDistribution:
    return DegreeDistribution(_normalized(np.array(dist.coeffs)), dist.perspective)


def eval_poly(dist: DegreeDistribution, x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x!r} outside [0, 1]")
    c = dist.coeffs if dist.perspective is Perspective.NODE else dist.coeffs[1:]
    return float(np.polynomial.polynomial.polyval(x, c))


def edge_poisson_closed_form(x: float, g: float, code: CodeParams) -> float:
    """``rho(x)`` of the Poisson limit without truncation."""
    return math.exp(-code.mean_slot_degree(g) * (1.0 - x))
