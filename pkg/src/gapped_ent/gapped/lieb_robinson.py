"""Commutator growth ||[tau_t(A), B]|| under exact Heisenberg evolution."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .. import qlinalg
from ..errors import InvalidRegion
from .models import SpectralData, SpinChainModel, embed

ARRIVAL_THRESHOLD = 0.1
LR_MU = 0.25


@dataclass(frozen=True)
class LrRow:
    distance: int
    t: float
    norm: float
    bound: float
    in_window: bool


@dataclass(frozen=True)
class LrProbeResult:
    rows: list
    arrival_times: dict  # distance -> first t with norm > threshold (None if never)
    velocity_fit: float  # slope of distance against arrival time
    velocity_bound: float  # 4 (2d - 1) J with d = 1

    @property
    def arrival_monotone(self) -> bool:
        """Non-decreasing arrival times in distance (plateaus allowed)."""
        times = [self.arrival_times[k] for k in sorted(self.arrival_times)]
        times = [t for t in times if t is not None]
        return all(b >= a for a, b in zip(times, times[1:]))

    @property
    def bound_holds(self) -> bool:
        return all(r.norm <= r.bound + 1e-10 for r in self.rows if r.in_window)


def lr_probe(
    model: SpinChainModel,
    spec: SpectralData,
    op_a: np.ndarray,
    site_a: int,
    op_b: np.ndarray,
    sites_b: Sequence[int],
    t_grid: Sequence[float],
    mu: float = LR_MU,
) -> LrProbeResult:
    """Sweep ||[tau_t(A), B_y]|| over t and the sites y of ``sites_b``.

    The bound 2 ||A|| ||B|| |dX| exp(-mu d) exp(v |t|) is flagged as applicable
    for |t| <= exp(-(1 + mu)) d / v, with X the single site of A (|dX| = 1).
    """
    dims = model.local_dims
    if any(y == site_a for y in sites_b):
        raise InvalidRegion("A and B must sit on different sites")
    norm_a, norm_b = qlinalg.op_norm(op_a), qlinalg.op_norm(op_b)
    if norm_a > 1 + 1e-12 or norm_b > 1 + 1e-12:
        raise ValueError("probe operators must have norm at most 1")
    v = 4.0 * model.J
    vecs, energies = spec.vectors, spec.energies
    a_eig = vecs.conj().T @ embed(op_a, [site_a], dims) @ vecs
    b_full = {y: _sparse_site_operator(op_b, y, dims) for y in sites_b}
    rows, arrivals = [], {}
    for t in t_grid:
        phase = np.exp(1j * energies * t)
        a_t = vecs @ (phase[:, None] * a_eig * phase.conj()[None, :]) @ vecs.conj().T
        for y in sites_b:
            dist = abs(y - site_a)
            value = _commutator_norm(a_t, b_full[y])
            bound = 2 * norm_a * norm_b * np.exp(-mu * dist) * np.exp(v * abs(t))
            window = abs(t) <= np.exp(-(1 + mu)) * dist / v
            rows.append(LrRow(dist, float(t), value, float(bound), bool(window)))
            if value > ARRIVAL_THRESHOLD and dist not in arrivals:
                arrivals[dist] = float(t)
    for y in sites_b:
        arrivals.setdefault(abs(y - site_a), None)
    known = sorted((d, t) for d, t in arrivals.items() if t is not None and t > 0)
    if len(known) >= 2:
        ds, ts = np.array(known, dtype=float).T
        slope = float(np.polyfit(ts, ds, 1)[0])
    else:
        slope = float("nan")
    return LrProbeResult(rows, arrivals, slope, v)


def _sparse_site_operator(op: np.ndarray, site: int, dims: Sequence[int]) -> sp.csr_matrix:
    left = int(np.prod(dims[:site]))
    right = int(np.prod(dims[site + 1 :]))
    return sp.kron(sp.kron(sp.identity(left), sp.csr_matrix(op)), sp.identity(right), format="csr")


def _commutator_norm(a: np.ndarray, b: sp.csr_matrix) -> float:
    """||[a, b]|| for Hermitian a, b via Lanczos on the Hermitian i[a, b].

    The commutator is applied as a matrix-free product; a dense
    eigensolver is used when Lanczos does not converge or the matrix is tiny.
    """
    dim = a.shape[0]

    def matvec(x):
        x = np.asarray(x).reshape(-1)
        return 1j * (a @ (b @ x) - b @ (a @ x))

    if dim <= 64:
        return qlinalg.op_norm(1j * (a @ b.toarray() - b.toarray() @ a))
    start = np.random.Generator(np.random.Philox(0)).standard_normal(dim) + 0j
    start /= np.linalg.norm(start)
    if np.linalg.norm(matvec(start)) < 1e-13:
        # a random vector is annihilated only by a (numerically) zero commutator
        return float(np.linalg.norm(matvec(start)))
    op = spla.LinearOperator((dim, dim), matvec=matvec, dtype=complex)
    try:
        vals = spla.eigsh(op, k=2, which="LM", v0=start, tol=1e-12, return_eigenvectors=False)
    except spla.ArpackNoConvergence:
        dense = b.toarray()
        return qlinalg.op_norm(1j * (a @ dense - dense @ a))
    return float(np.abs(vals).max())
