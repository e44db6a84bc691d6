"""Finite spin chains with range-1 interactions and their exact spectra."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .. import qlinalg
from ..errors import DegenerateGroundState, ShapeMismatch, UnknownName

DEGENERACY_TOL = 1e-8

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Y = np.array([[0.0, -1j], [1j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def _real_if_possible(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if np.iscomplexobj(m) and np.abs(m.imag).max(initial=0.0) == 0.0:
        return np.ascontiguousarray(m.real)
    return m


def spin_matrices(dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin operators (Sx, Sy, Sz) for spin (dim - 1) / 2, in the Sz-descending basis."""
    s = (dim - 1) / 2
    m = s - np.arange(dim)
    sp_ = np.zeros((dim, dim))
    for k in range(1, dim):
        sp_[k - 1, k] = np.sqrt(s * (s + 1) - m[k] * (m[k] + 1))
    sx = (sp_ + sp_.T) / 2
    sy = (sp_ - sp_.T) / 2j
    return sx, sy, np.diag(m)


@dataclass(frozen=True)
class Term:
    support: tuple[int, ...]
    matrix: np.ndarray

    @property
    def diameter(self) -> int:
        return max(self.support) - min(self.support)


@dataclass(frozen=True)
class SpinChainModel:
    name: str
    n_sites: int
    local_dims: tuple[int, ...]
    terms: tuple[Term, ...]
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for t in self.terms:
            if t.diameter > 1:
                raise ShapeMismatch(f"term on {t.support} has diameter > 1")
            if list(t.support) != sorted(set(t.support)) or not all(0 <= s < self.n_sites for s in t.support):
                raise ShapeMismatch(f"bad support {t.support}")
            size = int(np.prod([self.local_dims[s] for s in t.support]))
            if t.matrix.shape != (size, size):
                raise ShapeMismatch(f"term on {t.support} has shape {t.matrix.shape}, expected {size}")
            if not qlinalg.is_hermitian(t.matrix):
                raise ShapeMismatch(f"term on {t.support} is not Hermitian")

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.local_dims))

    @cached_property
    def J(self) -> float:
        """Largest operator norm among the interaction terms."""
        return max((qlinalg.op_norm(t.matrix) for t in self.terms), default=0.0)

    def terms_within(self, sites) -> list[Term]:
        s = set(sites)
        return [t for t in self.terms if set(t.support) <= s]


def _bond(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def build_model(name: str, n: int, params: dict | None = None) -> SpinChainModel:
    """Model zoo on an open chain of ``n`` sites.

    ``tfim``: ``-sum Z_i Z_{i+1} - h sum X_i`` (param ``h``, default 1).
    ``heisenberg``: ``coupling * sum S_i . S_{i+1}`` for spin 1/2.
    ``aklt``: spin-1 chain, each bond the projector onto total spin 2.
    ``field``: ``-h sum Z_i`` only (product ground state).
    ``ising``: classical ``-sum Z_i Z_{i+1} - h sum Z_i`` (diagonal, commuting).
    """
    params = dict(params or {})
    if n < 2:
        raise ShapeMismatch("need at least two sites")
    key = name.lower()
    terms: list[Term] = []
    if key == "tfim":
        h = float(params.setdefault("h", 1.0))
        terms += [Term((i,), -h * PAULI_X) for i in range(n)]
        terms += [Term((i, i + 1), -_bond(PAULI_Z, PAULI_Z)) for i in range(n - 1)]
        dims = (2,) * n
    elif key == "heisenberg":
        j = float(params.setdefault("coupling", 1.0))
        sx, sy, sz = spin_matrices(2)
        bond = _real_if_possible(j * (np.kron(sx, sx) + np.kron(sy, sy) + np.kron(sz, sz)))
        terms += [Term((i, i + 1), bond) for i in range(n - 1)]
        dims = (2,) * n
    elif key == "aklt":
        sx, sy, sz = spin_matrices(3)
        ss = np.kron(sx, sx) + np.kron(sy, sy) + np.kron(sz, sz)
        proj = _real_if_possible(ss / 2 + ss @ ss / 6 + np.eye(9) / 3)
        terms += [Term((i, i + 1), proj) for i in range(n - 1)]
        dims = (3,) * n
    elif key == "field":
        h = float(params.setdefault("h", 1.0))
        terms += [Term((i,), -h * PAULI_Z) for i in range(n)]
        dims = (2,) * n
    elif key == "ising":
        h = float(params.setdefault("h", 0.5))
        terms += [Term((i,), -h * PAULI_Z) for i in range(n)]
        terms += [Term((i, i + 1), -_bond(PAULI_Z, PAULI_Z)) for i in range(n - 1)]
        dims = (2,) * n
    else:
        raise UnknownName(f"unknown model {name!r}")
    qlinalg.check_dim(int(np.prod(dims)), "chain")
    return SpinChainModel(key, n, dims, tuple(terms), params)


def local_operator(model: SpinChainModel, sites: Sequence[int], terms: Sequence[Term] | None = None) -> np.ndarray:
    """Sum of ``terms`` (default: all terms inside ``sites``) as a matrix on the ascending ``sites``."""
    order = sorted(set(int(s) for s in sites))
    pos = {s: k for k, s in enumerate(order)}
    dims = [model.local_dims[s] for s in order]
    total = int(np.prod(dims)) if dims else 1
    qlinalg.check_dim(total, "region")
    terms = model.terms_within(order) if terms is None else terms
    out = sp.csr_matrix((total, total), dtype=complex)
    for t in terms:
        idx = [pos[s] for s in t.support]
        if idx != list(range(idx[0], idx[0] + len(idx))):
            raise ShapeMismatch(f"term {t.support} is not contiguous inside region {order}")
        left = int(np.prod(dims[: idx[0]]))
        right = int(np.prod(dims[idx[-1] + 1 :]))
        out = out + sp.kron(sp.kron(sp.identity(left), sp.csr_matrix(t.matrix)), sp.identity(right), format="csr")
    return _real_if_possible(out.toarray())


def hamiltonian(model: SpinChainModel) -> np.ndarray:
    return local_operator(model, range(model.n_sites))


def embed(op: np.ndarray, sites: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Extend an operator on ``sites`` (in the operator's own factor order) by identities."""
    sites = [int(s) for s in sites]
    dims = [int(x) for x in dims]
    n = len(dims)
    rest = [k for k in range(n) if k not in sites]
    d_rest = int(np.prod([dims[k] for k in rest])) if rest else 1
    full = np.kron(op, np.eye(d_rest, dtype=op.dtype))
    order = sites + rest
    if order == list(range(n)):
        return full
    shape = [dims[k] for k in order]
    inv = np.argsort(order)
    t = full.reshape(shape + shape).transpose(list(inv) + [n + k for k in inv])
    return t.reshape(full.shape)


@dataclass(frozen=True)
class SpectralData:
    energies: np.ndarray  # ascending, ground energy shifted to 0
    vectors: np.ndarray  # columns
    gap: float
    e0: float
    dims: tuple[int, ...]

    @property
    def ground_state(self) -> np.ndarray:
        return self.vectors[:, 0]

    @cached_property
    def P0(self) -> np.ndarray:
        g = self.ground_state
        return np.outer(g, g.conj())

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        """Shifted Hamiltonian H_V - E_0 rebuilt from the spectrum."""
        v = self.vectors
        return (v * self.energies) @ v.conj().T


def spectral_data(h: np.ndarray, dims: Sequence[int], allow_degenerate: bool = False) -> SpectralData:
    w, v = scipy.linalg.eigh(h)
    gap = float(w[1] - w[0]) if len(w) > 1 else np.inf
    if gap < DEGENERACY_TOL and not allow_degenerate:
        raise DegenerateGroundState(f"E1 - E0 = {gap:.3e} below {DEGENERACY_TOL}")
    out = SpectralData(w - w[0], v, gap, float(w[0]), tuple(int(x) for x in dims))
    for arr in (out.energies, out.vectors):
        arr.setflags(write=False)
    return out


def diagonalize(model: SpinChainModel) -> SpectralData:
    """Dense diagonalization of H_V with the ground energy shifted to zero."""
    return spectral_data(hamiltonian(model), model.local_dims)


def entropy_profile(spec: SpectralData, model: SpinChainModel) -> list[tuple[int, float]]:
    """Entropy of the ground state's reduced density on sites 1..M, for M = 1..n-1."""
    psi = spec.ground_state
    dims = model.local_dims
    out = []
    for m in range(1, model.n_sites):
        left = int(np.prod(dims[:m]))
        s = np.linalg.svd(psi.reshape(left, -1), compute_uv=False)
        out.append((m, qlinalg.shannon_entropy(s**2)))
    return out
