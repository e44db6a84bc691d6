"""Gaussian-filtered observables and the local approximation of the ground-state projector.

For a Hamiltonian with spectral data (E_m, |m>) the filtered observable

    (O)_alpha = sqrt(alpha/pi) int tau_t(O) exp(-alpha t^2) dt

has matrix elements O_mn exp(-(E_m - E_n)^2 / (4 alpha)) in the eigenbasis,
which is how it is computed here. The boundary operator P_B(alpha) mixes two
non-commuting generators and is integrated with Gauss-Hermite quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .. import qlinalg
from ..errors import EmptyProjector, QuadratureUnconverged
from .models import SpectralData, SpinChainModel, embed, local_operator, spectral_data
from .regions import RegionSplit, assign_terms, commutator_norm

LATTICE_DIM = 1
QUADRATURE_NODES = 80
QUADRATURE_TOL = 1e-6


def gaussian_kernel(e_left: np.ndarray, e_right: np.ndarray, alpha: float) -> np.ndarray:
    diff = np.subtract.outer(np.asarray(e_left), np.asarray(e_right))
    return np.exp(-(diff**2) / (4.0 * alpha))


def filter_in_basis(energies: np.ndarray, vectors: np.ndarray, op: np.ndarray, alpha: float) -> np.ndarray:
    """Gaussian filter of ``op`` under the Hamiltonian with the given spectral data."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    v = vectors
    inner = v.conj().T @ op @ v
    return v @ (inner * gaussian_kernel(energies, energies, alpha)) @ v.conj().T


def gaussian_filter(spec: SpectralData, op: np.ndarray, alpha: float) -> np.ndarray:
    return filter_in_basis(spec.energies, spec.vectors, op, alpha)


def large_op_norm(m: np.ndarray) -> float:
    """Operator norm through the top eigenvalue of m^dag m.

    Cheaper than a full SVD for the 4096-dimensional matrices used here; the
    absolute error is about 1e-8 times the norm, ample for norms of order one.
    """
    m = np.asarray(m)
    if m.shape[0] <= 1024:
        return qlinalg.norms(m)[2]
    gram = m.conj().T @ m
    top = scipy.linalg.eigh(gram, eigvals_only=True, subset_by_index=[gram.shape[0] - 1] * 2)
    return float(np.sqrt(max(top[0], 0.0)))


@dataclass(frozen=True)
class FilterBound:
    lhs: float
    rhs: float
    commutator_norm: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-9) + 1e-12


def filtered_energy_bound(spec: SpectralData, h_x: np.ndarray, alpha: float) -> FilterBound:
    """||(H~_X)_alpha Psi_0|| against ||[H_V, H_X]|| exp(-gap^2 / 4 alpha) / gap."""
    psi = spec.ground_state
    shifted_col = spec.vectors.conj().T @ (h_x @ psi)
    shifted_col[0] -= np.vdot(psi, h_x @ psi)
    lhs = float(np.linalg.norm(shifted_col * np.exp(-(spec.energies**2) / (4 * alpha))))
    comm = commutator_norm(spec.hamiltonian, h_x)
    rhs = comm * np.exp(-spec.gap**2 / (4 * alpha)) / spec.gap
    return FilterBound(lhs, float(rhs), comm)


def approx_projector_error(spec: SpectralData, alpha: float) -> tuple[float, float, float]:
    """||P~_alpha - P_0|| from the assembled operator, from the spectrum, and the bound exp(-gap^2/4 alpha)."""
    weights = np.exp(-(spec.energies**2) / (4 * alpha))
    v = spec.vectors
    p_tilde = (v * weights) @ v.conj().T
    by_matrix = qlinalg.op_norm(p_tilde - spec.P0)
    by_spectrum = float(weights[1:].max()) if len(weights) > 1 else 0.0
    return by_matrix, by_spectrum, float(np.exp(-spec.gap**2 / (4 * alpha)))


@dataclass(frozen=True)
class BoundConstants:
    J: float
    gap: float
    v: float
    xi_prime: float
    mu: float
    D: float
    C1: float

    def alpha(self, ell: int) -> float:
        return self.gap**2 * self.xi_prime / (4.0 * ell)

    def cutoff(self, boundary_size: int, ell: int) -> float:
        return self.C1 * boundary_size * ell ** (self.D + 0.5) * np.exp(-ell / (2 * self.xi_prime))

    def overlap_bound(self, ell: int) -> float:
        return 1.0 - np.exp(-ell / (2 * self.xi_prime))


def bound_constants(J: float, gap: float, d: int = LATTICE_DIM) -> BoundConstants:
    """Lieb-Robinson velocity, correlation scale and C1 for a d-dimensional lattice."""
    v = 4.0 * (2 * d - 1) * J
    xi_prime = 4.0 * (1.0 + (v / gap) ** 2)
    D = max(0.5, 2.0 * (d - 1))
    c1 = (
        2 ** (d + 2) / (np.sqrt(np.pi) * np.sqrt(gap**2 + v**2))
        + 2 * v / gap
        + 3 ** (d + 2) * 4 ** (2 * d) * d ** (d - 1)
    ) * (2 * d * J) ** 2 / v
    return BoundConstants(J, gap, v, xi_prime, 0.25, D, float(c1))


def reduced_density(psi: np.ndarray, dims, sites) -> np.ndarray:
    sites = sorted(sites)
    n = len(dims)
    rest = [k for k in range(n) if k not in sites]
    d_s = int(np.prod([dims[k] for k in sites])) if sites else 1
    m = psi.reshape(dims).transpose(sites + rest).reshape(d_s, -1)
    return m @ m.conj().T


@dataclass(frozen=True)
class LocalSurrogates:
    """M_I, M_B, M_E as operators on their own supports (ascending site order)."""

    ops: dict
    supports: dict
    shifts: dict
    residual: float  # ||(H_V - E_0) - (M_I + M_B + M_E)||
    full: dict = field(repr=False)


def local_surrogates(
    model: SpinChainModel, split: RegionSplit, alpha: float, spec: SpectralData
) -> LocalSurrogates:
    """Filter each shifted piece H~_X under the Hamiltonian of its own region.

    The regions are A for X = I, B(A; 2l) for X = B and V \\ A for X = E.
    """
    assigned = assign_terms(model, split)
    regions = {"I": split.region, "B": split.ball(2 * split.ell), "E": split.complement}
    everything = tuple(range(model.n_sites))
    ops, shifts, full = {}, {}, {}
    total = np.zeros((model.total_dim, model.total_dim))
    for x in ("I", "B", "E"):
        sites = tuple(sorted(regions[x]))
        dims = [model.local_dims[s] for s in sites]
        if not sites:
            ops[x] = np.zeros((1, 1))
            shifts[x] = 0.0
            full[x] = np.zeros_like(total)
            continue
        h_x = local_operator(model, sites, assigned[x])
        shift = float(np.real(np.trace(reduced_density(spec.ground_state, model.local_dims, sites) @ h_x)))
        shifted = h_x - shift * np.eye(h_x.shape[0])
        if sites == everything:
            local = filter_in_basis(spec.energies, spec.vectors, shifted, alpha)
        else:
            w, v = scipy.linalg.eigh(local_operator(model, sites))
            local = filter_in_basis(w, v, shifted, alpha)
        local = (local + local.conj().T) / 2
        ops[x], shifts[x] = local, shift
        full[x] = embed(local, list(sites), model.local_dims)
        total = total + full[x]
        del dims
    residual = large_op_norm(spec.hamiltonian - total)
    return LocalSurrogates(ops, {k: tuple(sorted(v)) for k, v in regions.items()}, shifts, residual, full)


def _hermite_rule(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.hermite.hermgauss(nodes)
    return x, w / np.sqrt(np.pi)


def quadrature_kernel(diff: np.ndarray, alpha: float, nodes: int) -> np.ndarray:
    """Gauss-Hermite estimate of sqrt(alpha/pi) int exp(i diff t - alpha t^2) dt.

    The rule is symmetric, so only cosines of the nonnegative nodes are summed.
    """
    x, w = _hermite_rule(nodes)
    out = np.zeros(diff.shape)
    scale = 1.0 / np.sqrt(alpha)
    for xk, wk in zip(x, w):
        if xk < 0:
            continue
        weight = wk if xk == 0 else 2 * wk
        out += weight * np.cos(diff * (xk * scale))
    return out


def _projector_below(op: np.ndarray, cutoff: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w, v = scipy.linalg.eigh(op)
    sel = v[:, w < cutoff]
    return sel @ sel.conj().T, w, v


def normalized_partial_trace(op: np.ndarray, dims, keep) -> np.ndarray:
    """Average of ``op`` over unitaries on the complement of ``keep``: Tr_rest(op) / d_rest, as a matrix on ``keep``."""
    keep = sorted(keep)
    rest = [k for k in range(len(dims)) if k not in keep]
    d_rest = int(np.prod([dims[k] for k in rest])) if rest else 1
    return qlinalg.partial_trace(op, dims, keep) / d_rest


@dataclass(frozen=True)
class GsApproxResult:
    P_A: np.ndarray  # on the region, local
    P_E: np.ndarray  # on the complement, local
    P_B: np.ndarray  # on B(A; 3l), local
    error: float
    overlap_pa: float
    overlap_pe: float
    pb_norm: float
    diagnostics: dict


def boundary_operator(
    m_total: np.ndarray, n_vals: np.ndarray, n_vecs: np.ndarray, alpha: float, nodes: int = QUADRATURE_NODES
) -> tuple[np.ndarray, float]:
    """P_B(alpha) = sqrt(alpha/pi) int exp(i M t) exp(-i N t) exp(-alpha t^2) dt.

    ``M`` is given as a matrix, ``N`` by its spectral data. In the two
    eigenbases the integrand is diagonal up to the overlap matrix, so the
    quadrature acts on the scalar kernel of eigenvalue differences. Returns
    the operator and the Frobenius-norm change when the node count doubles
    (an upper bound on the operator-norm change).
    """
    m_vals, m_vecs = scipy.linalg.eigh(m_total)
    overlap = m_vecs.conj().T @ n_vecs
    diff = np.subtract.outer(m_vals, n_vals)
    coarse = quadrature_kernel(diff, alpha, nodes)
    fine = quadrature_kernel(diff, alpha, 2 * nodes)
    change = float(np.linalg.norm((fine - coarse) * overlap))
    del diff, fine
    return m_vecs @ (coarse * overlap) @ n_vecs.conj().T, change


def gs_projector_approx(
    model: SpinChainModel,
    split: RegionSplit,
    alpha: float | None = None,
    cutoff: float | None = None,
    nodes: int = QUADRATURE_NODES,
    spec: SpectralData | None = None,
) -> GsApproxResult:
    """Approximate P_0 by P_B P_A P_E with P_A, P_E, P_B supported on A, V \\ A and B(A; 3l).

    ``alpha`` and ``cutoff`` default to gap^2 xi' / (4 l) and
    C1 |dA| l^(D + 1/2) exp(-l / 2 xi').
    """
    spec = spectral_data_of(model) if spec is None else spec
    consts = bound_constants(model.J, spec.gap)
    ell = split.ell
    alpha = consts.alpha(ell) if alpha is None else float(alpha)
    cutoff = consts.cutoff(len(split.edge), ell) if cutoff is None else float(cutoff)
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    dims = model.local_dims
    sur = local_surrogates(model, split, alpha, spec)
    region, comp = list(split.region), list(split.complement)

    p_a, a_vals, a_vecs = _projector_below(sur.ops["I"], cutoff)
    if comp:
        p_e, e_vals, e_vecs = _projector_below(sur.ops["E"], cutoff)
    else:
        p_e, e_vals, e_vecs = np.ones((1, 1)), np.zeros(1), np.ones((1, 1))
    if np.trace(p_a).real < 0.5 or np.trace(p_e).real < 0.5:
        raise EmptyProjector(f"no eigenvalue of M_I or M_E lies below the cutoff {cutoff:.4g}")

    # N = M_I + M_E acts on A (x) (V \ A); its eigenvectors are products
    n_vals = np.add.outer(a_vals, e_vals).reshape(-1)
    n_vecs = embed(np.kron(a_vecs, e_vecs), region + comp, dims)
    m_total = sur.full["I"] + sur.full["B"] + sur.full["E"]
    pb_alpha, change = boundary_operator(m_total, n_vals, n_vecs, alpha, nodes)
    if change > QUADRATURE_TOL:
        raise QuadratureUnconverged(f"doubling the node count moved P_B(alpha) by {change:.3e}")
    del m_total, n_vecs

    ball = list(split.ball(3 * ell))
    p_b = normalized_partial_trace(pb_alpha, dims, ball)
    p_b_full = embed(p_b, ball, dims)
    pape = embed(np.kron(p_a, p_e), region + comp, dims)
    psi = spec.ground_state
    error = large_op_norm(p_b_full @ pape - spec.P0)
    diagnostics = {
        "alpha": alpha,
        "cutoff": cutoff,
        "xi_prime": consts.xi_prime,
        "C1": consts.C1,
        "velocity": consts.v,
        "gap": spec.gap,
        "surrogate_residual": sur.residual,
        "quadrature_change": change,
        "rank_pa": int(round(np.trace(p_a).real)),
        "rank_pe": int(round(np.trace(p_e).real)),
        "unlocalized_error": large_op_norm(pb_alpha @ pape - spec.P0),
        "overlap_bound": consts.overlap_bound(ell),
    }
    overlap_pa = float(np.real(np.vdot(psi, embed(p_a, region, dims) @ psi)))
    overlap_pe = float(np.real(np.vdot(psi, embed(p_e, comp, dims) @ psi))) if comp else 1.0
    return GsApproxResult(p_a, p_e, p_b, error, overlap_pa, overlap_pe, large_op_norm(p_b), diagnostics)


def spectral_data_of(model: SpinChainModel) -> SpectralData:
    return spectral_data(local_operator(model, range(model.n_sites)), model.local_dims)
