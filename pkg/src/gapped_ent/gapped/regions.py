"""Interior / boundary / exterior bookkeeping for a region of the chain.

Sites are zero-based and the distance is |x - y|. For a region Y:

* boundary(Y): sites of Y with a neighbour (distance 1) outside Y
* I = {x in Y : d(x, boundary) > l}
* B = {x in V : d(x, boundary) <= l}
* E = {x not in Y : d(x, boundary) > l}
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .. import qlinalg
from ..errors import InvalidRegion
from .models import SpinChainModel, Term, hamiltonian, local_operator


def boundary(sites: Iterable[int], n: int) -> frozenset[int]:
    s = set(sites)
    return frozenset(x for x in s if any(0 <= y < n and y not in s for y in (x - 1, x + 1)))


def _dist(x: int, sset: frozenset[int]) -> float:
    return min((abs(x - y) for y in sset), default=np.inf)


@dataclass(frozen=True)
class RegionSplit:
    n: int
    region: tuple[int, ...]
    ell: int
    edge: frozenset[int]
    interior: frozenset[int]
    band: frozenset[int]
    exterior: frozenset[int]

    @property
    def band_inner(self) -> frozenset[int]:
        return self.band & frozenset(self.region)

    @property
    def band_outer(self) -> frozenset[int]:
        return self.band - frozenset(self.region)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if x not in self.region)

    def ball(self, radius: int) -> tuple[int, ...]:
        """B(A; radius): sites within ``radius`` of the region's boundary."""
        return tuple(x for x in range(self.n) if _dist(x, self.edge) <= radius)


def region_split(n: int, region: Iterable[int], ell: int) -> RegionSplit:
    """Split the chain of ``n`` sites around a contiguous ``region`` at width ``ell``."""
    reg = sorted(set(int(x) for x in region))
    if not reg:
        raise InvalidRegion("region is empty")
    if reg != list(range(reg[0], reg[-1] + 1)) or reg[0] < 0 or reg[-1] >= n:
        raise InvalidRegion(f"region {reg} is not a contiguous interval of [0, {n - 1}]")
    if ell < 1:
        raise InvalidRegion("ell must be >= 1")
    edge = boundary(reg, n)
    rset = set(reg)
    interior = frozenset(x for x in reg if _dist(x, edge) > ell)
    band = frozenset(x for x in range(n) if _dist(x, edge) <= ell)
    exterior = frozenset(x for x in range(n) if x not in rset and _dist(x, edge) > ell)
    assert interior | band | exterior == frozenset(range(n))
    assert not (interior & band or interior & exterior or band & exterior)
    return RegionSplit(n, tuple(reg), int(ell), edge, interior, band, exterior)


@dataclass(frozen=True)
class HamiltonianSplit:
    terms: dict  # label -> list[Term]
    parts: dict  # label -> full matrix
    commutator_norms: dict
    commutator_bounds: dict

    @property
    def bounds_hold(self) -> bool:
        return all(self.commutator_norms[k] <= self.commutator_bounds[k] + 1e-9 for k in self.parts)


def assign_terms(model: SpinChainModel, split: RegionSplit) -> dict[str, list[Term]]:
    """I gets terms touching the interior, E terms touching the exterior, B the rest."""
    out = {"I": [], "B": [], "E": []}
    for t in model.terms:
        s = set(t.support)
        hits_i, hits_e = bool(s & split.interior), bool(s & split.exterior)
        if hits_i and hits_e:
            raise InvalidRegion(f"term {t.support} touches both interior and exterior")
        out["I" if hits_i else "E" if hits_e else "B"].append(t)
    return out


def hamiltonian_split(model: SpinChainModel, split: RegionSplit, h_full: np.ndarray | None = None) -> HamiltonianSplit:
    """H_V = H_I + H_B + H_E with the commutator norms and their boundary-count bounds."""
    h = hamiltonian(model) if h_full is None else h_full
    assigned = assign_terms(model, split)
    all_sites = range(model.n_sites)
    parts = {k: local_operator(model, all_sites, v) for k, v in assigned.items()}
    j2 = 8 * model.J**2  # 8 d^2 J^2 with lattice dimension 1
    n_i = len(boundary(split.interior, split.n))
    n_e = len(boundary(split.exterior, split.n))
    bounds = {"I": j2 * n_i, "E": j2 * n_e, "B": j2 * (n_i + n_e)}
    norms = {k: commutator_norm(h, m) for k, m in parts.items()}
    return HamiltonianSplit(assigned, parts, norms, bounds)


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    """Operator norm of [a, b] for Hermitian a, b (i[a, b] is Hermitian)."""
    return qlinalg.op_norm(1j * (a @ b - b @ a))
