"""Entanglement functionals and the finitely-correlated-state experiments.

Entanglement of formation is computed as a convex roof. By the isometric
freedom of ensembles, every decomposition of ``rho = sum_j e_j |e_j><e_j|``
into L pure states has the form ``psi_l = sum_j U[l, j] sqrt(e_j) |e_j>``
with ``U`` an L x r isometry. The average entanglement is minimized over that
Stiefel manifold by Riemannian gradient descent with a polar retraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fcs, qlinalg
from .errors import EmptyCut, FactorIndexError, OutOfRegime, ShapeMismatch

PAULI_Y = np.array([[0, -1j], [1j, 0]])
RANK_TOL = 1e-12
PPT_TOL = -1e-10


@dataclass(frozen=True)
class Ensemble:
    weights: np.ndarray
    states: np.ndarray  # rows are normalized pure states
    dims: tuple[int, ...]

    def density(self) -> np.ndarray:
        return np.einsum("l,la,lb->ab", self.weights, self.states, self.states.conj())


@dataclass(frozen=True)
class EofResult:
    value: float
    ensemble: Ensemble
    restarts_used: int
    converged: bool
    gap_estimate: float
    restart_values: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class EofOptions:
    restarts: int = 32
    max_steps: int = 5000
    tol: float = 1e-9
    window: int = 50
    seed: int = 0
    initial_step: float = 0.5


def _binary_entropy(x: float) -> float:
    return qlinalg.shannon_entropy(np.array([x, 1.0 - x]))


def _check_two_qubit(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ShapeMismatch(f"expected a 4x4 two-qubit density, got {rho.shape}")
    return rho


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density."""
    rho = _check_two_qubit(rho)
    yy = np.kron(PAULI_Y, PAULI_Y)
    tilde = yy @ rho.conj() @ yy
    root = qlinalg.psd_sqrt(rho)
    # eigenvalues of rho tilde(rho) equal those of sqrt(rho) tilde(rho) sqrt(rho)
    lam = np.sort(np.sqrt(qlinalg.psd_eigvals(root @ tilde @ root)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_two_qubit(rho: np.ndarray) -> float:
    c = concurrence(rho)
    return _binary_entropy((1.0 + np.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def ppt_check(rho: np.ndarray, dims, factor: int = 1) -> tuple[bool, float]:
    """Peres-Horodecki test: transpose ``factor`` and inspect the smallest eigenvalue."""
    pt = qlinalg.partial_transpose(rho, dims, factor)
    low = float(qlinalg.eig_hermitian(pt)[0][0])
    return low >= PPT_TOL, low


def _bipartition(rho: np.ndarray, dims, cut) -> tuple[np.ndarray, int, int]:
    """Reorder factors to (cut, rest) and return the matrix with both side dimensions."""
    dims = [int(x) for x in dims]
    n = len(dims)
    left = sorted(int(c) for c in cut)
    right = [k for k in range(n) if k not in left]
    if not left or not right:
        raise EmptyCut("both sides of the cut must be nonempty")
    if any(not 0 <= k < n for k in left):
        raise FactorIndexError(f"cut {left} out of range for {n} factors")
    d1 = int(np.prod([dims[k] for k in left]))
    d2 = int(np.prod([dims[k] for k in right]))
    perm = left + right
    t = np.asarray(rho).reshape(dims + dims).transpose(perm + [n + k for k in perm])
    return t.reshape(d1 * d2, d1 * d2), d1, d2


def _ensemble_cost(u: np.ndarray, w: np.ndarray, want_grad: bool):
    """Average reduced entropy for a batch of isometries and its Euclidean gradient.

    ``u`` has shape (R, L, r); ``w`` has shape (r, d1, d2) holding the scaled
    eigenvectors. Returns per-restart costs (R,) and gradients (R, L, r).
    """
    psi = np.einsum("Rlj,jab->Rlab", u, w)
    sig = psi @ np.conj(psi).swapaxes(-1, -2)
    ev, vec = np.linalg.eigh(sig)
    ev = np.clip(ev, 0.0, None)
    p = ev.sum(axis=-1)
    ent = -np.sum(np.where(ev > 0, ev * np.log(np.where(ev > 0, ev, 1.0)), 0.0), axis=-1)
    ent = ent + np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)
    cost = ent.sum(axis=-1)
    if not want_grad:
        return cost, None
    floor = 1e-14 * np.maximum(p, 1e-300)[..., None]
    logs = np.log(np.maximum(ev, floor)) - np.log(np.maximum(p, 1e-300))[..., None]
    g = -(vec * logs[..., None, :]) @ np.conj(vec).swapaxes(-1, -2)
    grad = 2.0 * np.einsum("jab,Rlab->Rlj", np.conj(w), g @ psi)
    return cost, grad


def _polar(y: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(y, full_matrices=False)
    return u @ vh


def _random_isometries(count: int, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, rows, cols)) + 1j * rng.standard_normal((count, rows, cols))
    return _polar(g)


def eof_optimize(rho: np.ndarray, dims, cut, options: EofOptions | None = None) -> EofResult:
    """Entanglement of formation across ``cut | rest`` (entropy of the ``cut`` side).

    Parameters
    ----------
    rho : ndarray
        Density matrix over the factor dimensions ``dims``.
    cut : iterable of int
        Factors forming the first side of the bipartition.
    options : EofOptions
        Restart count, step budget and stopping rule. Restart 0 starts from
        the eigen-ensemble, so the result never exceeds its average entropy.
    """
    opts = EofOptions() if options is None else options
    mat, d1, d2 = _bipartition(rho, dims, cut)
    evals, evecs = qlinalg.eig_hermitian(mat)
    keep = evals > RANK_TOL * max(1.0, evals[-1])
    evals, evecs = evals[keep][::-1], evecs[:, keep][:, ::-1]
    r = len(evals)
    w = (evecs * np.sqrt(evals)).T.reshape(r, d1, d2)
    if r == 1:
        state = evecs[:, 0]
        value = qlinalg.vn_entropy(qlinalg.partial_trace(np.outer(state, state.conj()), [d1, d2], [0]))
        ens = Ensemble(np.array([1.0]), state[None, :], (d1, d2))
        return EofResult(value, ens, 1, True, 0.0, np.array([value]))

    n_ens = r * r
    rng = np.random.Generator(np.random.Philox(opts.seed))
    u = _random_isometries(opts.restarts, n_ens, r, rng)
    u[0] = np.eye(n_ens, r)
    cost, grad = _ensemble_cost(u, w, True)
    step = np.full(opts.restarts, opts.initial_step)
    history = [cost.copy()]
    active = np.ones(opts.restarts, dtype=bool)
    done_by_tol = np.zeros(opts.restarts, dtype=bool)
    for it in range(1, opts.max_steps + 1):
        if not active.any():
            break
        herm = np.conj(u).swapaxes(-1, -2) @ grad
        rgrad = grad - u @ ((herm + np.conj(herm).swapaxes(-1, -2)) / 2)
        trial = _polar(u - step[:, None, None] * rgrad)
        tcost, tgrad = _ensemble_cost(trial, w, True)
        better = active & (tcost < cost)
        u[better], cost[better], grad[better] = trial[better], tcost[better], tgrad[better]
        step = np.where(better, step * 1.2, np.where(active, step * 0.5, step))
        history.append(cost.copy())
        if it >= opts.window:
            stalled = history[-opts.window - 1] - cost < opts.tol
            done_by_tol |= active & stalled
            active &= ~stalled
        # a vanishing step means no descent direction left at this precision
        active &= step > 1e-14
    best = int(np.argmin(cost))
    psi = np.einsum("lj,jab->lab", u[best], w).reshape(n_ens, d1 * d2)
    weights = np.sum(np.abs(psi) ** 2, axis=1)
    nz = weights > 1e-15
    states = psi[nz] / np.sqrt(weights[nz])[:, None]
    weights = weights[nz] / weights[nz].sum()
    ens = Ensemble(weights, states, (d1, d2))
    converged = bool(done_by_tol[best] or step[best] <= 1e-14)
    value = max(0.0, float(cost[best]))
    return EofResult(value, ens, opts.restarts, converged, float(cost.max() - cost.min()), cost.copy())


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    eof_chain: float
    eof_ab: float
    gap: float


def _fit_slope(ns: np.ndarray, gaps: np.ndarray) -> float:
    """Least-squares slope of ln gap over the longest run of consecutive n with gap > 1e-6."""
    good = gaps > 1e-6
    best_lo, best_len, lo = 0, 0, None
    for k, g in enumerate(list(good) + [False]):
        if g and lo is None:
            lo = k
        elif not g and lo is not None:
            if k - lo > best_len:
                best_lo, best_len = lo, k - lo
            lo = None
    if best_len < 2:
        return float("nan")
    sel = slice(best_lo, best_lo + best_len)
    return float(np.polyfit(ns[sel], np.log(gaps[sel]), 1)[0])


def convergence_experiment(
    spec: fcs.FcsSpec, n_max: int, options: EofOptions | None = None
) -> tuple[list[ConvergenceRow], float]:
    """EoF of the memory state against EoF of site 1 versus sites 2..n, for n = 2..n_max.

    Returns the table and the fitted log-slope of the gap.
    """
    td = fcs.transfer(spec)
    qlinalg.check_dim(spec.d ** (n_max + 1), "FCS block")
    eof_ab = eof_optimize(fcs.rho_ab(spec, td), [spec.d, spec.b], [0], options).value
    rows = []
    for n in range(2, n_max + 1):
        chain = fcs.rho_chain(spec, n, td)
        e = eof_optimize(chain, [spec.d, spec.d ** (n - 1)], [0], options).value
        rows.append(ConvergenceRow(n, e, eof_ab, eof_ab - e))
    ns = np.array([r.n for r in rows], dtype=float)
    gaps = np.array([r.gap for r in rows])
    return rows, _fit_slope(ns, gaps)


@dataclass(frozen=True)
class DecayRow:
    p: int
    trace_distance: float
    bound: float
    within_bound: bool
    # ||.||_1 / 2, the distance as measured by a single optimal projector
    half_trace_distance: float


def distant_decay_experiment(spec: fcs.FcsSpec, n: int, p_range) -> list[DecayRow]:
    """Trace distance between rho_{1,[p,n]} and rho_1 (x) rho_{[p,n]} against c lam^(p-2)."""
    td = fcs.transfer(spec)
    full = fcs.rho_chain(spec, n, td)
    dims = [spec.d] * n
    rows = []
    for p in p_range:
        if not 2 <= p <= n:
            raise ValueError(f"p={p} outside [2, {n}]")
        block = qlinalg.partial_trace(full, dims, [0] + list(range(p - 1, n)))
        bdims = [spec.d, spec.d ** (n - p + 1)]
        site = qlinalg.partial_trace(block, bdims, [0])
        tail = qlinalg.partial_trace(block, bdims, [1])
        dist = qlinalg.trace_norm(block - np.kron(site, tail))
        bound = td.c * td.lam ** (p - 2)
        rows.append(DecayRow(p, dist, bound, dist <= bound, dist / 2))
    return rows


def fannes_gap(rho: np.ndarray, sigma: np.ndarray) -> tuple[float, float, bool]:
    """|S(rho) - S(sigma)| against (ln d + 2) T + eta(T), with T the trace-norm distance."""
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ShapeMismatch(f"shapes differ: {rho.shape} vs {sigma.shape}")
    t = qlinalg.trace_norm(rho - sigma)
    if t > 1 / np.e:
        raise OutOfRegime(f"trace distance {t:.4f} exceeds 1/e")
    eta = -t * np.log(t) if t > 0 else 0.0
    lhs = abs(qlinalg.vn_entropy(rho) - qlinalg.vn_entropy(sigma))
    rhs = (np.log(rho.shape[0]) + 2) * t + eta
    return lhs, float(rhs), lhs <= rhs
