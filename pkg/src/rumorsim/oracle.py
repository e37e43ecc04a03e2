"""Exact broadcast-time distributions on small instances.

These are independent reference computations: no code is shared with the
Monte Carlo engine beyond the topology/list types, so agreement between the
two is meaningful evidence.

The fully random oracle works on the complete graph's informed-count chain.
Its per-round transition law comes from processing the m senders one at a
time: each sender's target is uniform over its n-1 others, so given that w
fresh vertices have been hit so far this round, the next sender informs a new
vertex with probability p (u - w) / (n - 1).  Sender identity never matters,
which is what makes the count a Markov chain.

The quasirandom oracle cannot use that symmetry (lists break it) and instead
enumerates the full probability tree over initial positions and coins, with
one crucial collapse: when an attempt targets an already-informed vertex the
delivery coin changes nothing (cursors advance regardless), so those two
branches merge.  That keeps tiny instances tractable and stays exact.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .topology import ListAssignment

_CONSERVATION_TOL = 1e-12


@dataclass(frozen=True)
class ExactDistribution:
    """P(T = t) for t = 0..horizon plus the truncated tail P(T > horizon)."""

    horizon: int
    mass: np.ndarray = field(repr=False)
    tail: float

    def __post_init__(self):
        total = float(self.mass.sum()) + self.tail
        if abs(total - 1.0) > _CONSERVATION_TOL:
            raise ValueError(f"probability mass sums to {total}, not 1")

    def prob(self, t: int) -> float:
        return float(self.mass[t]) if 0 <= t <= self.horizon else 0.0

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.mass)

    def mean(self) -> float:
        """Mean over the covered horizon; meaningful only for small tail."""
        return float(np.arange(self.horizon + 1) @ self.mass)


def _fully_random_round_dist(n: int, p: float, m: int) -> np.ndarray:
    """P(w new vertices informed in one round | m informed), w = 0..n-m."""
    u = n - m
    hit = p * (u - np.arange(u + 1)) / (n - 1)
    f = np.zeros(u + 1)
    f[0] = 1.0
    for _ in range(m):
        nxt = f * (1.0 - hit)
        nxt[1:] += f[:-1] * hit[:-1]
        f = nxt
    return f


def exact_fully_random(n: int, p: float, horizon: int) -> ExactDistribution:
    """Exact broadcast-time law of the fully random push on the complete graph."""
    if not 1 <= n <= 64:
        raise ValueError(f"supported range is 1 <= n <= 64, got n={n}")
    if not 0 <= horizon <= 10_000:
        raise ValueError(f"supported horizon range is 0..10000, got {horizon}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"success probability must lie in (0, 1], got p={p}")
    mass = np.zeros(horizon + 1)
    if n == 1:
        mass[0] = 1.0
        return ExactDistribution(horizon=horizon, mass=mass, tail=0.0)

    transition = np.zeros((n + 1, n + 1))
    for m in range(1, n):
        transition[m, m : n + 1] = _fully_random_round_dist(n, p, m)
    transition[n, n] = 1.0

    pi = np.zeros(n + 1)
    pi[1] = 1.0
    absorbed = 0.0
    for t in range(1, horizon + 1):
        pi = pi @ transition
        mass[t] = pi[n] - absorbed
        absorbed = pi[n]
    return ExactDistribution(horizon=horizon, mass=mass, tail=max(0.0, 1.0 - absorbed))


def exact_quasirandom(
    n: int,
    lists: ListAssignment,
    p: float,
    horizon: int,
    start_vertex: int = 0,
) -> ExactDistribution:
    """Exact broadcast-time law of the list-based protocol, by enumeration.

    State = (informed bitmask, per-vertex cursor), cursor -1 before the
    initial position is drawn.  Exponential in n, hence the tight caps.
    """
    if not 2 <= n <= 5:
        raise ValueError(f"supported range is 2 <= n <= 5, got n={n}")
    if not 0 <= horizon <= 8:
        raise ValueError(f"supported horizon range is 0..8, got {horizon}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"success probability must lie in (0, 1], got p={p}")
    if lists.topology.n != n:
        raise ValueError(f"lists are for n={lists.topology.n}, oracle asked n={n}")
    lists.topology.check_vertex(start_vertex)

    rows = [lists.row(v) for v in range(n)]
    degs = [len(r) for r in rows]
    full = (1 << n) - 1

    states: dict[tuple[int, tuple], float] = {
        (1 << start_vertex, (-1,) * n): 1.0
    }
    mass = np.zeros(horizon + 1)
    for t in range(1, horizon + 1):
        nxt: dict[tuple[int, tuple], float] = defaultdict(float)
        for (mask, cursors), prob in states.items():
            # senders are the vertices informed at the start of the round
            partial = {(mask, cursors): prob}
            for v in range(n):
                if not (mask >> v) & 1 or degs[v] == 0:
                    continue
                folded: dict[tuple[int, tuple], float] = defaultdict(float)
                for (pmask, pcur), q in partial.items():
                    if pcur[v] < 0:
                        options = [(pos, q / degs[v]) for pos in range(degs[v])]
                    else:
                        options = [(pcur[v], q)]
                    for pos, q_opt in options:
                        target = int(rows[v][pos])
                        cur2 = list(pcur)
                        cur2[v] = (pos + 1) % degs[v]
                        key_base = tuple(cur2)
                        if (pmask >> target) & 1:
                            # delivery coin is irrelevant: target already knows
                            folded[(pmask, key_base)] += q_opt
                        else:
                            folded[(pmask | (1 << target), key_base)] += q_opt * p
                            if p < 1.0:
                                folded[(pmask, key_base)] += q_opt * (1.0 - p)
                partial = folded
            for s, q in partial.items():
                nxt[s] += q
        states = {}
        done = 0.0
        for (smask, scur), q in nxt.items():
            if smask == full:
                done += q
            else:
                states[(smask, scur)] = q
        mass[t] = done
    return ExactDistribution(horizon=horizon, mass=mass, tail=float(sum(states.values())))


def star_fully_random_expectation(n: int) -> float:
    """E[T] for fully random push on the star at p = 1, starting from a leaf.

    One round to reach the center, then the center collects the other n-2
    leaves coupon-style at rate j/(n-1) when j remain: 1 + (n-1) H_{n-2}.

    The center is the only effective sender after round 1: informed leaves
    keep transmitting to the center, which changes nothing.
    """
    if n < 3:
        raise ValueError(f"needs n >= 3, got n={n}")
    harmonic = sum(1.0 / j for j in range(1, n - 1))
    return 1.0 + (n - 1) * harmonic


def tv_distance(dist: ExactDistribution, rounds: np.ndarray, completed: np.ndarray) -> float:
    """Total variation between an exact law and empirical broadcast times.

    Trials that did not complete, or completed beyond the horizon, land in
    the tail bucket, mirroring the oracle's truncation.
    """
    rounds = np.asarray(rounds)
    completed = np.asarray(completed, dtype=bool)
    trials = len(rounds)
    in_range = completed & (rounds <= dist.horizon)
    counts = np.bincount(rounds[in_range], minlength=dist.horizon + 1)
    emp = counts / trials
    emp_tail = 1.0 - in_range.sum() / trials
    return 0.5 * (np.abs(emp - dist.mass).sum() + abs(emp_tail - dist.tail))
