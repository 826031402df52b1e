"""Receivers for a frame: CSA with iterative IC, THMA and slotted ALOHA.

Decoding is genie-aided threshold logic.  A unit is *clean* when its slot
holds exactly one unit of a not-yet-recovered burst.  A burst with at least
``k`` clean units is recovered (MDS), after which all ``n`` of its units are
cancelled from their slots.

One IC iteration recovers, in parallel, every burst that is decodable given
the cancellations of the previous iterations.  Iteration 1 therefore equals
THMA decoding, and iteration ``i`` lines up with step ``i`` of density
evolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .degree import CodeParams
from .frame import FrameGraph

DEFAULT_I_MAX = 20


@dataclass
class DecodeResult:
    recovered: frozenset[int]
    iterations_used: int
    per_iteration_recovered: list[int]
    # (iteration, burst, triggering slot) in recovery order
    trace: list[tuple[int, int, int]] = field(default_factory=list, repr=False)

    @property
    def n_recovered(self) -> int:
        return len(self.recovered)

    def write_trace(self, fh: TextIO) -> None:
        for it, b, s in self.trace:
            fh.write(f"iteration {it}: burst {b} recovered via slot {s}\n")


def _check_code(frame: FrameGraph, code: CodeParams):
    if frame.code != code:
        raise ValueError(f"frame was built for code {frame.code}, decoder asked for {code}")


def ic_decode(frame: FrameGraph, code: CodeParams, i_max: int | None = DEFAULT_I_MAX,
              keep_trace: bool = False) -> DecodeResult:
    """Iterative IC.  ``i_max=None`` runs to the fixed point."""
    _check_code(frame, code)
    if i_max is not None and i_max < 1:
        raise ValueError("i_max must be >= 1")
    a = frame.assignments
    occ = np.array(frame.slot_degree, dtype=np.int64)
    resolved = np.zeros(frame.m_users, dtype=bool)
    counts: list[int] = []
    trace: list[tuple[int, int, int]] = []
    it = 0
    while i_max is None or it < i_max:
        clean = occ[a] == 1
        new = ~resolved & (clean.sum(axis=1) >= code.k)
        if not new.any():
            break
        it += 1
        idx = np.flatnonzero(new)
        counts.append(idx.size)
        if keep_trace:
            first = clean[idx].argmax(axis=1)
            trace.extend((it, int(b), int(a[b, j])) for b, j in zip(idx, first))
        resolved[idx] = True
        occ -= np.bincount(a[idx].ravel(), minlength=occ.size)
    return DecodeResult(frozenset(np.flatnonzero(resolved).tolist()), it, counts, trace)


def thma_decode(frame: FrameGraph, code: CodeParams) -> DecodeResult:
    """Single pass on the original frame, no cancellation."""
    _check_code(frame, code)
    clean = frame.slot_degree[frame.assignments] == 1
    rec = np.flatnonzero(clean.sum(axis=1) >= code.k)
    return DecodeResult(frozenset(rec.tolist()), 1, [rec.size])


def sa_decode(frame: FrameGraph) -> DecodeResult:
    if not frame.code.is_uncoded:
        raise ValueError(f"slotted ALOHA needs an uncoded frame, got code {frame.code}")
    rec = np.flatnonzero(frame.slot_degree[frame.assignments[:, 0]] == 1)
    return DecodeResult(frozenset(rec.tolist()), 1, [rec.size])


def peel(frame: FrameGraph, code: CodeParams, rng: np.random.Generator | None = None) -> DecodeResult:
    """Sequential peeling to the fixed point, one burst at a time.

    Whenever several bursts are decodable the next one is picked with
    ``rng`` (lowest index if ``rng`` is None).  Every schedule ends in the
    same recovered set as :func:`ic_decode` with ``i_max=None``.
    """
    _check_code(frame, code)
    a = frame.assignments
    occ = np.array(frame.slot_degree, dtype=np.int64)
    clean = (occ[a] == 1).sum(axis=1)
    resolved = np.zeros(frame.m_users, dtype=bool)
    slot_bursts: list[list[int]] = [[] for _ in range(frame.n_csa)]
    for b, row in enumerate(a):
        for s in row:
            slot_bursts[s].append(b)
    ready = {b for b in range(frame.m_users) if clean[b] >= code.k}
    order: list[tuple[int, int, int]] = []
    while ready:
        pool = sorted(ready)
        b = pool[rng.integers(len(pool))] if rng is not None else pool[0]
        ready.discard(b)
        resolved[b] = True
        trigger = next(int(s) for s in a[b] if occ[s] == 1)
        order.append((len(order) + 1, b, trigger))
        for s in a[b]:
            occ[s] -= 1
            if occ[s] == 1:
                for other in slot_bursts[s]:
                    if not resolved[other]:
                        clean[other] += 1
                        if clean[other] >= code.k:
                            ready.add(other)
    rec = frozenset(np.flatnonzero(resolved).tolist())
    return DecodeResult(rec, len(order), [1] * len(order), order)


def decode(protocol: str, frame: FrameGraph, code: CodeParams, i_max: int | None = DEFAULT_I_MAX) -> DecodeResult:
    if protocol == "SA":
        return sa_decode(frame)
    if protocol == "THMA":
        return thma_decode(frame, code)
    if protocol == "CSA":
        return ic_decode(frame, code, i_max)
    raise ValueError(f"unknown protocol {protocol!r}")
