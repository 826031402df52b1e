"""Brute-force references for the peeling decoder."""

import itertools


def closure_sets(assignments, k):
    """Every terminal recovered set reachable by applying the peeling rules in any order."""
    bursts = [frozenset(s) for s in assignments]

    def decodable(done):
        out = []
        for b, slots in enumerate(bursts):
            if b in done:
                continue
            clean = sum(
                1 for s in slots
                if sum(1 for o, os in enumerate(bursts) if o not in done and s in os) == 1
            )
            if clean >= k:
                out.append(b)
        return out

    seen, terminals, stack = set(), set(), [frozenset()]
    while stack:
        done = stack.pop()
        if done in seen:
            continue
        seen.add(done)
        nxt = decodable(done)
        if not nxt:
            terminals.add(done)
        stack.extend(done | {b} for b in nxt)
    return terminals


def canonical_frames(m_max, n, n_max_slots):
    """Frames up to slot relabelling: new slots are numbered in order of first use."""
    def rec(prefix, used):
        yield prefix
        if len(prefix) == m_max:
            return
        for j in range(n + 1):           # j fresh slots, n - j reused
            if used + j > n_max_slots or n - j > used:
                continue
            fresh = list(range(used, used + j))
            for old in itertools.combinations(range(used), n - j):
                yield from rec(prefix + [list(old) + fresh], used + j)
    yield from (f for f in rec([], 0) if f)
