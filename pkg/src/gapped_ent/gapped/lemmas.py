"""Combinatorial and entropy lemmas used by the area-law argument."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from functools import lru_cache

import numpy as np

from .. import qlinalg
from ..errors import ConstraintViolated

CONSTRAINT_TOL = 1e-12


@lru_cache(maxsize=None)
def sphere_count(n: int, d: int) -> int:
    """Points of Z^d at l1 distance n from the origin, by the equator-insertion recursion."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if d == 1:
        return 2
    if n == 1:
        return 2 * d
    return sphere_count(n - 1, d) + sphere_count(n, d - 1) + sphere_count(n - 1, d - 1)


def lattice_sphere_count(n: int, d: int) -> int:
    """Brute-force enumeration of {x in Z^d : |x|_1 = n}."""
    rng = range(-n, n + 1)
    return sum(1 for x in itertools.product(rng, repeat=d) if sum(abs(c) for c in x) == n)


def sphere_bound(n: int, d: int) -> int:
    return 2**d * n ** (d - 1)


def binary_entropy(p: float) -> float:
    return qlinalg.shannon_entropy(np.array([p, 1.0 - p]))


def _check_schedule(schedule: Sequence[int], c: float, R: float) -> np.ndarray:
    s = np.asarray(schedule, dtype=np.int64)
    if not 0.0 < c < 1.0:
        raise ValueError("c must lie in (0, 1)")
    if s.ndim != 1 or s.size == 0 or s[0] <= 1 or (np.diff(s) <= 0).any():
        raise ValueError("schedule must be increasing with s_1 > 1")
    if (s[1:] > R * s[:-1] * (1 + 1e-12)).any():
        raise ValueError("schedule ratio s_{n+1}/s_n exceeds R")
    return s


def entropy_bound(s1: int, c: float, R: float) -> float:
    """ln s_1 + c ln R / (1 - c) + H_2(1 - c) / (1 - c)."""
    return float(np.log(s1) + c / (1 - c) * np.log(R) + binary_entropy(1 - c) / (1 - c))


def entropy_bound_eval(sigma: Sequence[float], schedule: Sequence[int], c: float, R: float) -> tuple[float, float]:
    """Entropy of a distribution and the tail-constraint bound.

    The constraint is checked on the eigenvalues in descending order. The
    schedule must reach the support size, so that every later tail
    vanishes and the finite list stands in for the infinite sequence.
    Raises ConstraintViolated when sum_{a > s_n} sigma(a) > c^n for some n.
    """
    sig = np.asarray(sigma, dtype=float)
    s = _check_schedule(schedule, c, R)
    if (sig < -CONSTRAINT_TOL).any() or abs(sig.sum() - 1.0) > 1e-10:
        raise ValueError("sigma must be a probability vector")
    sig = np.sort(sig)[::-1]  # descending order gives the smallest tails
    support = int(np.flatnonzero(sig > 0)[-1]) + 1 if (sig > 0).any() else 0
    if s[-1] < support:
        raise ValueError(f"schedule ends at {s[-1]} but the support has {support} entries")
    tail = np.concatenate([np.cumsum(sig[::-1])[::-1], [0.0]])
    for n, sn in enumerate(s, start=1):
        excess = tail[min(sn, sig.size)]
        if excess > c**n + CONSTRAINT_TOL:
            raise ConstraintViolated(f"tail beyond s_{n} = {sn} is {excess:.6g} > c^{n} = {c**n:.6g}")
    return qlinalg.shannon_entropy(sig), entropy_bound(int(s[0]), c, R)


def extremal_distribution(schedule: Sequence[int], c: float) -> np.ndarray:
    """Blockwise-uniform distribution saturating every tail constraint.

    Block 0 (entries 1..s_1) carries 1 - c, block n carries c^n - c^(n+1);
    the last block absorbs the remaining c^(N-1) so the vector sums to one.
    """
    s = np.asarray(schedule, dtype=np.int64)
    edges = np.concatenate([[0], s])
    out = np.empty(int(s[-1]))
    last = len(s) - 1
    for n in range(len(s)):
        mass = c**n if n == last else c**n - c ** (n + 1)
        out[edges[n] : edges[n + 1]] = mass / (edges[n + 1] - edges[n])
    return out


def extremal_entropy(schedule: Sequence[int], c: float) -> float:
    """Closed sum of the entropy of ``extremal_distribution``, block by block."""
    s = np.asarray(schedule, dtype=float)
    widths = np.diff(np.concatenate([[0.0], s]))
    last = len(s) - 1
    total = 0.0
    for n, width in enumerate(widths):
        mass = c**n if n == last else (1 - c) * c**n
        total -= mass * np.log(mass / width)
    return float(total)
