"""Dense linear algebra on tensor-product Hilbert spaces.

Operators are plain square ``numpy`` arrays. A tensor shape is a sequence of
factor dimensions, leftmost factor first and zero-based, matching
``numpy.kron`` ordering. Entropies are in nats.
"""

from __future__ import annotations

import functools
import os
from collections.abc import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import DimensionCap, EmptyCut, FactorIndexError, NonHermitian, ShapeMismatch

HERMITIAN_TOL = 1e-10
CLAMP_TOL = 1e-10
DEFAULT_MAX_DIM = 2**14
MAX_DIM_ENV = "GAPPED_ENT_MAX_DIM"


def max_dim() -> int:
    """Hilbert-dimension cap, overridable through ``GAPPED_ENT_MAX_DIM``."""
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_DIM
    return int(raw)


def check_dim(dim: int, what: str = "operator") -> None:
    cap = max_dim()
    if dim > cap:
        raise DimensionCap(f"{what} dimension {dim} exceeds cap {cap} (set {MAX_DIM_ENV} to raise it)")


def kron(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of matrices (or vectors)."""
    if not mats:
        return np.ones((1, 1))
    return functools.reduce(np.kron, mats)


def _prod(dims: Iterable[int]) -> int:
    out = 1
    for x in dims:
        out *= int(x)
    return out


def _check_square(m: np.ndarray, dims: Sequence[int]) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {m.shape}")
    if any(int(x) < 1 for x in dims):
        raise ShapeMismatch(f"factor dimensions must be >= 1, got {list(dims)}")
    if _prod(dims) != m.shape[0]:
        raise ShapeMismatch(f"factor dims {list(dims)} do not multiply to {m.shape[0]}")


def _check_factors(factors: Iterable[int], n: int) -> list[int]:
    out = []
    for f in factors:
        f = int(f)
        if not 0 <= f < n:
            raise FactorIndexError(f"factor index {f} out of range for {n} factors")
        out.append(f)
    if len(set(out)) != len(out):
        raise FactorIndexError(f"repeated factor index in {out}")
    return out


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    Kept factors stay in their original (ascending) order.
    """
    m = np.asarray(m)
    dims = [int(x) for x in dims]
    _check_square(m, dims)
    n = len(dims)
    keep = sorted(_check_factors(keep, n))
    traced = [k for k in range(n) if k not in keep]
    dk = _prod(dims[k] for k in keep)
    dt = _prod(dims[k] for k in traced)
    t = m.reshape(dims + dims)
    perm = keep + traced + [n + k for k in keep] + [n + k for k in traced]
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    return np.einsum("ijkj->ik", t)


def partial_transpose(m: np.ndarray, dims: Sequence[int], factor: int) -> np.ndarray:
    """Transpose (in the computational basis) the single tensor factor ``factor``."""
    m = np.asarray(m)
    dims = [int(x) for x in dims]
    _check_square(m, dims)
    n = len(dims)
    (f,) = _check_factors([factor], n)
    axes = list(range(2 * n))
    axes[f], axes[n + f] = axes[n + f], axes[f]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    return float(np.abs(m - m.conj().T).max(initial=0.0)) <= tol * scale


def eig_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""
    m = np.asarray(m)
    if not is_hermitian(m, tol):
        raise NonHermitian("matrix is not Hermitian within tolerance")
    h = (m + m.conj().T) / 2
    return scipy.linalg.eigh(h)


def clamp_spectrum(w: np.ndarray, tol: float = CLAMP_TOL) -> np.ndarray:
    """Zero out eigenvalues in [-tol, 0); larger negatives are left in place."""
    w = np.array(w, dtype=float)
    w[(w < 0) & (w >= -tol)] = 0.0
    return w


def psd_eigvals(m: np.ndarray) -> np.ndarray:
    w = scipy.linalg.eigvalsh((m + m.conj().T) / 2)
    return np.clip(clamp_spectrum(w), 0.0, None)


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = scipy.linalg.eigh((m + m.conj().T) / 2)
    w = np.sqrt(np.clip(clamp_spectrum(w), 0.0, None))
    return (v * w) @ v.conj().T


def check_density(rho: np.ndarray, dims: Sequence[int] | None = None, tol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    rho = np.atleast_2d(np.asarray(rho, dtype=complex))
    _check_square(rho, [rho.shape[0]] if dims is None else dims)
    if not is_hermitian(rho, tol):
        raise NonHermitian("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ShapeMismatch(f"density matrix has trace {np.trace(rho).real!r}")
    if scipy.linalg.eigvalsh((rho + rho.conj().T) / 2)[0] < -tol:
        raise ShapeMismatch("density matrix has a negative eigenvalue")
    return rho


def schmidt_decompose(
    psi: np.ndarray, dims: Sequence[int], cut: Iterable[int]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt decomposition of a pure state across ``cut | rest``.

    Returns
    -------
    coeffs : ndarray
        Nonzero Schmidt coefficients (square roots of the reduced spectrum),
        descending.
    left, right : ndarray
        Columns are the orthonormal Schmidt vectors on the ``cut`` factors and
        on the remaining factors, each in ascending factor order.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    dims = [int(x) for x in dims]
    if _prod(dims) != psi.size:
        raise ShapeMismatch(f"factor dims {dims} do not multiply to {psi.size}")
    n = len(dims)
    left_f = sorted(_check_factors(cut, n))
    right_f = [k for k in range(n) if k not in left_f]
    if not left_f or not right_f:
        raise EmptyCut("both sides of the cut must be nonempty")
    dl = _prod(dims[k] for k in left_f)
    dr = _prod(dims[k] for k in right_f)
    mat = psi.reshape(dims).transpose(left_f + right_f).reshape(dl, dr)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    nz = s > 1e-12 * max(1.0, s[0])
    u, s, vh = u[:, nz], s[nz], vh[nz]
    # ties broken by the left vector, compared lexically on rounded entries
    keys = [(-round(float(x), 12), tuple(np.round(np.concatenate([u[:, k].real, u[:, k].imag]), 12)))
            for k, x in enumerate(s)]
    order = sorted(range(len(s)), key=lambda k: keys[k])
    return s[order], u[:, order], vh[order].T


def norms(m: np.ndarray) -> tuple[float, float, float]:
    """(trace norm, Hilbert-Schmidt norm, operator norm)."""
    s = np.linalg.svd(np.atleast_2d(m), compute_uv=False)
    return float(s.sum()), float(np.sqrt((s**2).sum())), float(s.max(initial=0.0))


def trace_norm(m: np.ndarray) -> float:
    """Trace norm; uses the Hermitian spectrum when available."""
    m = np.asarray(m)
    if is_hermitian(m, 1e-12):
        return float(np.abs(scipy.linalg.eigvalsh((m + m.conj().T) / 2)).sum())
    return float(np.linalg.svd(m, compute_uv=False).sum())


def op_norm(m: np.ndarray) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    if is_hermitian(m, 1e-12):
        return float(np.abs(scipy.linalg.eigvalsh((m + m.conj().T) / 2)).max())
    return float(np.linalg.svd(m, compute_uv=False)[0])


def shannon_entropy(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def vn_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy in nats (0 ln 0 = 0)."""
    return max(0.0, shannon_entropy(psd_eigvals(np.asarray(rho))))


def fidelity_bures(rho: np.ndarray, sigma: np.ndarray) -> tuple[float, float, float]:
    """Fidelity F = Tr sqrt(sqrt(rho) sigma sqrt(rho)), Bures distance 2 sqrt(1 - F), and T = |rho - sigma|_1 / 2."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ShapeMismatch(f"shapes differ: {rho.shape} vs {sigma.shape}")
    r = psd_sqrt(rho)
    fid = float(np.sqrt(psd_eigvals(r @ sigma @ r)).sum())
    fid = min(fid, 1.0)
    bures = 2.0 * np.sqrt(max(0.0, 1.0 - fid))
    return fid, float(bures), 0.5 * trace_norm(rho - sigma)


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
