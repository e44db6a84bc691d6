"""Pure translation-invariant finitely correlated states (FCS).

An FCS is fixed by an isometry ``V : C^d (x) C^b -> C^b`` with ``V V^dag = 1``.
Writing the columns of ``V`` in spin-major order, ``V[:, s*b:(s+1)*b]`` is the
Kraus matrix ``K_s`` and

* ``E(A (x) B) = V (A (x) B) V^dag = sum_{s,t} A[s,t] K_s B K_t^dag``
* ``Ehat(B) = E(1 (x) B) = sum_s K_s B K_s^dag`` (unital)
* ``rho`` is the state on the memory with ``Tr rho Ehat(B) = Tr rho B``.

Matrices on the memory are vectorized row-major (``B.reshape(-1)``), so the
transfer matrix acting on vectors is ``sum_s K_s (x) conj(K_s)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import qlinalg
from .errors import IsometryViolation, PeripheralSpectrum, ShapeMismatch, UnknownName

ISOMETRY_TOL = 1e-10
PERIPHERAL_TOL = 1e-8
C_MAX_POWER = 30
# powers with lambda^n below this are rounding noise and are skipped in the c estimate
C_NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class FcsSpec:
    d: int
    b: int
    V: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        v = np.asarray(self.V, dtype=complex)
        if v.shape != (self.b, self.d * self.b):
            raise ShapeMismatch(f"V must have shape ({self.b}, {self.d * self.b}), got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "V", v)

    @property
    def kraus(self) -> np.ndarray:
        """Array of shape (d, b, b) holding K_s."""
        return self.V.reshape(self.b, self.d, self.b).transpose(1, 0, 2)

    def expect_map(self, a: np.ndarray, bmat: np.ndarray) -> np.ndarray:
        """E(A (x) B) as a b x b matrix."""
        return self.V @ np.kron(a, bmat) @ self.V.conj().T


@dataclass(frozen=True)
class ValidationReport:
    isometry_residual: float
    transfer_eigenvalues: np.ndarray
    peripheral_count: int


@dataclass(frozen=True)
class TransferData:
    ehat: np.ndarray
    fixed_point: np.ndarray
    lam: float
    c: float
    eigenvalues: np.ndarray
    fixed_point_residual: float
    c_profile: np.ndarray = field(repr=False)

    @property
    def ehat_inf(self) -> np.ndarray:
        """Matrix of B -> Tr(rho B) 1."""
        b = self.fixed_point.shape[0]
        return np.outer(np.eye(b).reshape(-1), self.fixed_point.T.reshape(-1))


def transfer_matrix(spec: FcsSpec) -> np.ndarray:
    k = spec.kraus
    return sum(np.kron(k[s], k[s].conj()) for s in range(spec.d))


def _dual_transfer_matrix(spec: FcsSpec) -> np.ndarray:
    # rho -> sum_s K_s^dag rho K_s
    k = spec.kraus
    return sum(np.kron(k[s].conj().T, k[s].T) for s in range(spec.d))


def validate(spec: FcsSpec) -> ValidationReport:
    """Check the isometry condition and triviality of the peripheral spectrum."""
    res = float(np.abs(spec.V @ spec.V.conj().T - np.eye(spec.b)).max())
    if res > ISOMETRY_TOL:
        raise IsometryViolation(f"|V V^dag - 1| = {res:.3e} exceeds {ISOMETRY_TOL}")
    ev = scipy.linalg.eigvals(transfer_matrix(spec))
    peripheral = ev[np.abs(ev) >= 1 - PERIPHERAL_TOL]
    if len(peripheral) != 1 or abs(peripheral[0] - 1) > PERIPHERAL_TOL:
        raise PeripheralSpectrum(
            f"expected a single peripheral eigenvalue 1, found {np.round(peripheral, 10).tolist()}"
        )
    return ValidationReport(res, ev[np.argsort(-np.abs(ev), kind="stable")], len(peripheral))


def _fixed_point(spec: FcsSpec) -> np.ndarray:
    b = spec.b
    w, vecs = scipy.linalg.eig(_dual_transfer_matrix(spec))
    k = int(np.argmin(np.abs(w - 1)))
    x = vecs[:, k].reshape(b, b)
    x = x / np.trace(x)
    x = (x + x.conj().T) / 2
    return x / np.trace(x).real


def transfer(spec: FcsSpec) -> TransferData:
    """Transfer matrix, fixed point, subleading modulus and decay prefactor.

    ``c`` is the smallest constant with ``|Ehat^n - Ehat^inf| <= c lam^n`` for
    ``1 <= n <= 30``, the norm being the largest trace norm of the image of a
    matrix unit. Powers whose ``lam^n`` falls below 1e-12 are skipped. When
    ``lam`` is zero (``b == 1`` or nilpotent transfer), ``c`` is the largest
    norm over those powers.
    """
    report = validate(spec)
    b = spec.b
    ehat = transfer_matrix(spec)
    rho = _fixed_point(spec)
    # residual of Tr rho Ehat(B) = Tr rho B over matrix units
    dual = _dual_transfer_matrix(spec)
    fp_res = float(np.abs((dual @ rho.reshape(-1)).reshape(b, b) - rho).max())
    ev = report.transfer_eigenvalues
    others = np.delete(ev, int(np.argmin(np.abs(ev - 1))))
    lam = float(np.abs(others).max()) if others.size else 0.0
    if lam < 1e-14:
        lam = 0.0
    einf = np.outer(np.eye(b).reshape(-1), rho.T.reshape(-1))
    diff = ehat - einf
    power = np.eye(b * b, dtype=complex)
    profile = []
    for n in range(1, C_MAX_POWER + 1):
        power = diff @ power
        if lam > 0 and lam**n < C_NOISE_FLOOR:
            break
        nrm = _unit_input_norm(power, b)
        profile.append((n, nrm, nrm / lam**n if lam > 0 else nrm))
    profile = np.array(profile, dtype=float).reshape(-1, 3)
    c = float(profile[:, 2].max()) if len(profile) else 0.0
    for arr in (ehat, rho, ev, profile):
        arr.setflags(write=False)
    return TransferData(ehat, rho, lam, c, ev, fp_res, profile)


def _unit_input_norm(mat: np.ndarray, b: int) -> float:
    """max over matrix units E_ij of the trace norm of mat applied to vec(E_ij)."""
    best = 0.0
    for col in range(b * b):
        best = max(best, qlinalg.norms(mat[:, col].reshape(b, b))[0])
    return best


def rho_ab(spec: FcsSpec, td: TransferData | None = None) -> np.ndarray:
    """Memory state V^dag rho V on C^d (x) C^b."""
    td = transfer(spec) if td is None else td
    out = spec.V.conj().T @ td.fixed_point @ spec.V
    return (out + out.conj().T) / 2


def _kraus_words(spec: FcsSpec, n: int) -> np.ndarray:
    """Products K_{s1} K_{s2} ... K_{sn}, shape (d^n, b, b), s1 most significant."""
    k = spec.kraus
    words = k
    for _ in range(n - 1):
        words = np.einsum("xab,sbc->xsac", words, k).reshape(-1, spec.b, spec.b)
    return words


def rho_chain(spec: FcsSpec, n: int, td: TransferData | None = None) -> np.ndarray:
    """Block density on sites 1..n.

    Evaluates ``Tr_B(V_n^dag rho_AB V_n)``: contracting the chain of
    isometries leaves ``<s|rho_n|t> = Tr(K_s^dag rho K_t)`` for Kraus words
    ``K_s``, i.e. a Gram matrix of the vectors ``sqrt(rho) K_s``. The rank is
    therefore at most ``b^2``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    qlinalg.check_dim(spec.d**n * spec.b, "FCS block")
    td = transfer(spec) if td is None else td
    root = qlinalg.psd_sqrt(td.fixed_point)
    gram = np.einsum("ab,xbc->xac", root, _kraus_words(spec, n)).reshape(spec.d**n, -1)
    out = gram.conj() @ gram.T
    return (out + out.conj().T) / 2


def rho_spin_block(spec: FcsSpec, p: int, n: int, td: TransferData | None = None) -> np.ndarray:
    """Density of site 1 together with sites p..n (1-based), sites 2..p-1 traced out."""
    if not 2 <= p <= n:
        raise ValueError(f"need 2 <= p <= n, got p={p}, n={n}")
    full = rho_chain(spec, n, td)
    keep = [0] + list(range(p - 1, n))
    return qlinalg.partial_trace(full, [spec.d] * n, keep)


def aklt_spec() -> FcsSpec:
    sp = np.array([[0, 1], [0, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    kraus = [np.sqrt(2 / 3) * sp, -np.sqrt(1 / 3) * sz, -np.sqrt(2 / 3) * sp.T]
    return _from_kraus(kraus, "aklt")


def random_spec(d: int, b: int, seed: int) -> FcsSpec:
    """Rows of a complex Gaussian b x (d b) matrix, orthonormalized."""
    rng = np.random.Generator(np.random.Philox(seed))
    g = rng.standard_normal((b, d * b)) + 1j * rng.standard_normal((b, d * b))
    q, _ = np.linalg.qr(g.conj().T)
    return FcsSpec(d, b, q.conj().T, f"random({d},{b},seed={seed})")


def _from_kraus(kraus, name: str) -> FcsSpec:
    k = np.asarray(kraus, dtype=complex)
    d, b, _ = k.shape
    return FcsSpec(d, b, k.transpose(1, 0, 2).reshape(b, d * b), name)


def _product_spec(d: int) -> FcsSpec:
    row = np.zeros((1, d), dtype=complex)
    row[0, 0] = 1.0
    return FcsSpec(d, 1, row, f"product({d})")


def _classical_spec() -> FcsSpec:
    # K_s = |s><phi_s| with phi = |+>, |->: separable, PPT memory state
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    e = np.eye(2)
    return _from_kraus([np.outer(e[0], plus), np.outer(e[1], minus)], "classical")


def _ghz_spec() -> FcsSpec:
    e = np.eye(2)
    return _from_kraus([np.outer(e[0], e[0]), np.outer(e[1], e[1])], "ghz")


def _neel_spec() -> FcsSpec:
    e = np.eye(2)
    return _from_kraus([np.outer(e[0], e[1]), np.outer(e[1], e[0])], "neel")


def _identity_spec(d: int, b: int) -> FcsSpec:
    v = np.zeros((b, d * b), dtype=complex)
    v[:, :b] = np.eye(b)
    return FcsSpec(d, b, v, f"identity({d},{b})")


_INTS = r"\s*(\d+)\s*"


def builtin_specs(name: str) -> FcsSpec:
    """Named specs.

    ``aklt``; ``random(d,b,seed=s)`` (``seed=`` optional); ``product`` or
    ``product(d)``; ``classical`` (separable memory). Diagnostics that fail
    validation on purpose: ``ghz``, ``neel``, ``identity(d,b)``.
    """
    key = name.strip().lower()
    if key == "aklt":
        return aklt_spec()
    if key == "classical":
        return _classical_spec()
    if key == "ghz":
        return _ghz_spec()
    if key == "neel":
        return _neel_spec()
    if key == "product":
        return _product_spec(2)
    m = re.fullmatch(rf"product\({_INTS}\)", key)
    if m:
        return _product_spec(int(m.group(1)))
    m = re.fullmatch(rf"random\({_INTS},{_INTS},\s*(?:seed\s*=)?{_INTS}\)", key)
    if m:
        d, b, seed = (int(g) for g in m.groups())
        return random_spec(d, b, seed)
    m = re.fullmatch(rf"identity\({_INTS},{_INTS}\)", key)
    if m:
        return _identity_spec(int(m.group(1)), int(m.group(2)))
    raise UnknownName(f"unknown FCS spec {name!r}")
