"""Asymptotic density evolution of iterative interference cancellation.

Messages on the burst/slot graph are erasure probabilities.  ``p`` is the
probability that a slot-to-burst edge is still unknown and ``q`` the
probability that a burst-to-slot edge is still unknown.  Starting from
``p = q = 1`` the two updates are alternated until ``p`` vanishes (the frame
is cleared) or gets stuck on a nonzero fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .degree import CodeParams

DEFAULT_EPSILON = 1e-10
DEFAULT_MAX_ITER = 5000
STUCK_STEP = 1e-14
BRACKET = (0.01, 2.0)
BISECTION_TOL = 1e-4


@dataclass(frozen=True)
class DeSettings:
    epsilon: float = DEFAULT_EPSILON
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must be in (0, 1)")


@dataclass(frozen=True)
class DeTrace:
    """Sequence of ``(i, p_i, q_i)`` from ``p_0 = q_0 = 1``."""

    steps: list[tuple[int, float, float]] = field(repr=False)
    converged: bool

    @property
    def final_p(self) -> float:
        return self.steps[-1][1]

    @property
    def final_q(self) -> float:
        return self.steps[-1][2]

    @property
    def iterations_used(self) -> int:
        return self.steps[-1][0]


@dataclass(frozen=True)
class ThresholdResult:
    code: CodeParams
    g_star: float
    tol: float
    de_settings: DeSettings


class BracketError(ValueError):
    """Bisection bracket does not straddle the threshold."""


def _check_prob(x, name):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name}={x!r} outside [0, 1]")


def burst_update(p: float, code: CodeParams) -> float:
    """Erasure probability of a burst-to-slot edge given incoming erasure ``p``.

    The edge is recovered when at least ``k`` of the other ``n - 1`` edges are
    known, so it stays erased when ``n - k`` or more of them are erased.
    """
    _check_prob(p, "p")
    n, k = code.n, code.k
    return math.fsum(
        math.comb(n - 1, e) * p**e * (1.0 - p) ** (n - 1 - e)
        for e in range(n - k, n)
    )


def slot_update(q: float, g: float, code: CodeParams) -> float:
    """``p = 1 - rho(1 - q)`` with the Poisson edge distribution in closed form."""
    _check_prob(q, "q")
    if not g > 0:
        raise ValueError("offered load must be positive")
    return -math.expm1(-code.mean_slot_degree(g) * q)


def de_run(g: float, code: CodeParams, max_iter: int = DEFAULT_MAX_ITER,
           epsilon: float = DEFAULT_EPSILON) -> DeTrace:
    DeSettings(epsilon, max_iter)
    if not g > 0:
        raise ValueError("offered load must be positive")
    p = q = 1.0
    steps = [(0, p, q)]
    converged = False
    for i in range(1, max_iter + 1):
        q = burst_update(p, code)
        p_next = slot_update(q, g, code)
        steps.append((i, p_next, q))
        if p_next < epsilon:
            converged = True
            break
        if abs(p_next - p) < STUCK_STEP:
            break
        p = p_next
    return DeTrace(steps, converged)


def converges(g: float, code: CodeParams, settings: DeSettings = DeSettings()) -> bool:
    return de_run(g, code, settings.max_iter, settings.epsilon).converged


def threshold(code: CodeParams, bracket_lo: float = BRACKET[0], bracket_hi: float = BRACKET[1],
              tol: float = BISECTION_TOL, de_settings: DeSettings = DeSettings()) -> ThresholdResult:
    """Locate the load threshold ``G*`` of ``code`` by bisection.

    Raises BracketError if DE fails at ``bracket_lo`` or succeeds at
    ``bracket_hi``.
    """
    if not 0 < bracket_lo < bracket_hi:
        raise ValueError("need 0 < bracket_lo < bracket_hi")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not converges(bracket_lo, code, de_settings):
        raise BracketError(f"DE fails at lower bracket G={bracket_lo} for code {code}")
    if converges(bracket_hi, code, de_settings):
        raise BracketError(f"DE succeeds at upper bracket G={bracket_hi} for code {code}")
    lo, hi = bracket_lo, bracket_hi
    while (hi - lo) / 2 > tol:
        mid = 0.5 * (lo + hi)
        if converges(mid, code, de_settings):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(code, 0.5 * (lo + hi), tol, de_settings)


def spc_bound(k: int) -> float:
    """Upper bound ``1/(k+1)`` on the threshold of a ``(k+1, k)`` SPC code.

    Near ``p = 0`` the burst update behaves like ``k p`` and the inverse slot
    update like ``p k / (G (k+1))``; keeping the first slope below the second
    gives ``G <= 1/(k+1)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return 1.0 / (k + 1)


def power_penalty(code: CodeParams) -> float:
    return code.power_penalty_db


def burst_loss(p: float, code: CodeParams) -> float:
    """Probability that fewer than ``k`` of the ``n`` edges of a burst are known."""
    _check_prob(p, "p")
    n, k = code.n, code.k
    return math.fsum(
        math.comb(n, e) * p**e * (1.0 - p) ** (n - e)
        for e in range(n - k + 1, n + 1)
    )


def asymptotic_throughput(g: float, code: CodeParams, i_max: int = 20,
                          epsilon: float = DEFAULT_EPSILON) -> tuple[float, float]:
    """Packet loss rate and throughput of an infinite frame after ``i_max`` iterations.

    Returns ``(plr, throughput)`` with ``throughput = G (1 - plr)``.
    """
    if g == 0:
        return 0.0, 0.0
    trace = de_run(g, code, i_max, epsilon)
    plr = burst_loss(trace.final_p, code)
    return plr, g * (1.0 - plr)
