"""Depolarized Werner-Holevo channels and their output 2-norms.

``W(rho) = lam rho + (1 - lam) (Tr(rho) 1 - rho^T) / (d - 1)``, with the
transpose in the computational basis. The map is applied linearly, so it is
also defined on non-density operators such as matrix units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qlinalg
from .errors import BasisNotOrthonormal, ShapeMismatch

EP_TOL = -1e-12


@dataclass(frozen=True)
class DwhChannel:
    lam: float
    d: int

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")

    @property
    def q(self) -> float:
        return (1.0 - self.lam) / (self.d - 1)

    @property
    def r(self) -> float:
        return self.lam - self.q

    @property
    def s(self) -> float:
        return 2.0 * self.lam * self.q

    @property
    def p_sq(self) -> float:
        q, r, s, d = self.q, self.r, self.s, self.d
        return (q**2 + (d - 2) * r**2) * s + (d - 2) * q**2 * r**2


@dataclass(frozen=True)
class MultGapRecord:
    state: np.ndarray
    gap: float
    tensor_norm_sq: float
    single_norm_sq: float


def apply(ch: DwhChannel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (ch.d, ch.d):
        raise ShapeMismatch(f"expected a {ch.d}x{ch.d} operator, got {rho.shape}")
    return ch.lam * rho + ch.q * (np.trace(rho) * np.eye(ch.d) - rho.T)


def max_output_2norm_sq(ch: DwhChannel) -> float:
    """Largest squared HS norm of a single output; attained at (|0> + i|1>)/sqrt 2."""
    return ((ch.d - 2) * ch.lam**2 + 1.0) / (ch.d - 1)


def single_output_2norm_sq(ch: DwhChannel, psi: np.ndarray) -> float:
    """Squared HS norm of W(|psi><psi|), via the overlap <psi|conj(psi)>."""
    overlap = abs(np.sum(np.conj(psi) ** 2)) ** 2
    lam, d = ch.lam, ch.d
    return lam**2 + 2 * lam * (1 - lam) * (1 - overlap) / (d - 1) + (1 - lam) ** 2 / (d - 1)


def max_norm_state(d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[0], v[1] = 1 / np.sqrt(2), 1j / np.sqrt(2)
    return v


def _check_pair(ch: DwhChannel, psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != ch.d**2:
        raise ShapeMismatch(f"expected a state on C^{ch.d} (x) C^{ch.d}, got length {psi.size}")
    return psi


def tensor_output_2norm_sq(ch: DwhChannel, psi: np.ndarray) -> float:
    """Closed form of ||(W (x) W)(|psi><psi|)||_2^2 for a pure state on d (x) d."""
    psi = _check_pair(ch, psi)
    m = psi.reshape(ch.d, ch.d)
    rho1 = m @ m.conj().T
    rho2 = m.T @ m.conj()
    purity = float(np.sum(np.abs(rho1) ** 2))
    overlap = abs(np.sum(np.conj(psi) ** 2)) ** 2
    cross = float(np.sum(rho1 * rho1).real + np.sum(rho2 * rho2).real)  # Tr(rho rho^T)
    q, r, s, d = ch.q, ch.r, ch.s, ch.d
    w = max_output_2norm_sq(ch)
    return float(
        w**2
        + s**2 * overlap
        - 2 * (s + r**2) * (s + (d - 2) * q**2) * (1 - purity)
        - s * w * cross
    )


def tensor_output_2norm_sq_batch(ch: DwhChannel, psis: np.ndarray) -> np.ndarray:
    """Vectorized closed form over rows of ``psis`` (shape (k, d*d))."""
    d = ch.d
    m = psis.reshape(-1, d, d)
    rho1 = m @ np.conj(m).transpose(0, 2, 1)
    rho2 = m.transpose(0, 2, 1) @ np.conj(m)
    purity = np.sum(np.abs(rho1) ** 2, axis=(1, 2))
    overlap = np.abs(np.sum(np.conj(psis) ** 2, axis=1)) ** 2
    cross = np.sum(rho1 * rho1, axis=(1, 2)).real + np.sum(rho2 * rho2, axis=(1, 2)).real
    q, r, s = ch.q, ch.r, ch.s
    w = max_output_2norm_sq(ch)
    return w**2 + s**2 * overlap - 2 * (s + r**2) * (s + (d - 2) * q**2) * (1 - purity) - s * w * cross


def tensor_output(ch: DwhChannel, psi: np.ndarray) -> np.ndarray:
    """(W (x) W)(|psi><psi|) as a d^2 x d^2 matrix, from the five-operator expansion.

    The marginal terms carry weight ``lam Q`` on ``rho_k`` and ``-Q^2`` on
    ``rho_k^T``; they only merge into a single ``Q R`` term when the
    marginals are real.
    """
    psi = _check_pair(ch, psi)
    d = ch.d
    proj = np.outer(psi, psi.conj())
    m = psi.reshape(d, d)
    rho1 = m @ m.conj().T
    rho2 = m.T @ m.conj()
    eye = np.eye(d)
    conj_proj = np.outer(psi.conj(), psi)
    pt1 = qlinalg.partial_transpose(proj, [d, d], 0)
    pt2 = qlinalg.partial_transpose(proj, [d, d], 1)
    q, s, lam = ch.q, ch.s, ch.lam
    return (
        lam**2 * proj
        + lam * q * (np.kron(rho1, eye) + np.kron(eye, rho2))
        - q**2 * (np.kron(rho1.T, eye) + np.kron(eye, rho2.T))
        + q**2 * (np.kron(eye, eye) + conj_proj)
        - 0.5 * s * pt1
        - 0.5 * s * pt2
    )


def mult_gap(ch: DwhChannel, psi: np.ndarray) -> MultGapRecord:
    psi = _check_pair(ch, psi)
    single = max_output_2norm_sq(ch)
    tensor = tensor_output_2norm_sq(ch, psi)
    return MultGapRecord(psi, single**2 - tensor, tensor, single)


def mult_search(
    ch: DwhChannel,
    restarts: int,
    steps: int,
    rng: np.random.Generator,
    init_scale: float = 0.3,
    min_scale: float = 1e-9,
) -> tuple[float, np.ndarray]:
    """Hill climbing on the tensor output norm over pure states on d (x) d.

    Each restart starts from a Haar-random state and proposes normalized
    complex-Gaussian perturbations, keeping a proposal only if it increases
    the norm. The perturbation scale grows on acceptance and shrinks on
    rejection; a restart ends once the scale drops below ``min_scale``.
    All restarts advance together as one batch.
    """
    dim = ch.d**2
    states = np.array([qlinalg.random_state(dim, rng) for _ in range(restarts)])
    vals = tensor_output_2norm_sq_batch(ch, states)
    scale = np.full(restarts, init_scale)
    for _ in range(steps):
        live = scale >= min_scale
        if not live.any():
            break
        noise = rng.standard_normal((restarts, dim)) + 1j * rng.standard_normal((restarts, dim))
        prop = states + scale[:, None] * noise / np.sqrt(2 * dim)
        prop /= np.linalg.norm(prop, axis=1, keepdims=True)
        new = tensor_output_2norm_sq_batch(ch, prop)
        accept = live & (new > vals)
        states[accept] = prop[accept]
        vals[accept] = new[accept]
        scale = np.where(accept, np.minimum(scale * 1.5, 1.0), np.where(live, scale * 0.9, scale))
    k = int(np.argmax(vals))
    return float(vals[k]), states[k]


def conjugate_pair_norm(ch: DwhChannel, sigma: np.ndarray) -> float:
    """Tensor output norm on sum_i sqrt(sigma_i) |i>|i> (standard basis paired with its conjugate)."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (ch.d,) or (sigma < -1e-12).any() or abs(sigma.sum() - 1) > 1e-10:
        raise ShapeMismatch("sigma must be a probability vector of length d")
    psi = np.diag(np.sqrt(np.clip(sigma, 0, None))).reshape(-1).astype(complex)
    return tensor_output_2norm_sq(ch, psi)


def ep_entries(ch: DwhChannel, basis: np.ndarray) -> np.ndarray:
    """Tensor T[i,j,k,l] = Tr W(|e_l><e_i|) W(|e_j><e_k|), basis vectors as columns."""
    e = np.asarray(basis, dtype=complex)
    d, lam, q = ch.d, ch.lam, ch.q
    delta = np.eye(d)
    # g[i,k] = <e_i|conj(e_k)>; the other factor <conj(e_l)|e_j> is conj(g[l,j])
    g = e.conj().T @ e.conj()
    return (
        (lam**2 + q**2) * np.einsum("ij,kl->ijkl", delta, delta)
        + (2 * lam * q + (d - 2) * q**2) * np.einsum("il,jk->ijkl", delta, delta)
        - 2 * lam * q * np.einsum("ik,lj->ijkl", g, g.conj())
    )


def ep_check(ch: DwhChannel, basis: np.ndarray) -> tuple[bool, float, tuple[int, int, int, int]]:
    """Entrywise-positivity test in the basis given by the columns of ``basis``.

    An entry counts as nonnegative when its real part is at least -1e-12 and
    its imaginary part is within 1e-12 of zero. Returns the flag, the
    smallest real part, and the index quadruple (i, j, k, l) where it sits.
    """
    e = np.asarray(basis, dtype=complex)
    if e.shape != (ch.d, ch.d) or np.abs(e.conj().T @ e - np.eye(ch.d)).max() > 1e-10:
        raise BasisNotOrthonormal("basis columns must be orthonormal vectors of C^d")
    t = ep_entries(ch, e)
    flat = int(np.argmin(t.real))
    witness = tuple(int(x) for x in np.unravel_index(flat, t.shape))
    min_entry = float(t.real.reshape(-1)[flat])
    ok = min_entry >= EP_TOL and float(np.abs(t.imag).max()) <= abs(EP_TOL)
    return ok, min_entry, witness
