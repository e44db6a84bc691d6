import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapped_ent import channels as ch_mod
from gapped_ent import qlinalg
from gapped_ent.errors import BasisNotOrthonormal, ShapeMismatch

DwhChannel = ch_mod.DwhChannel


def superoperator(ch):
    """Matrix of W on row-major vectorized operators, assembled from matrix units."""
    d = ch.d
    mat = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d * d):
        unit = np.zeros(d * d)
        unit[k] = 1.0
        mat[:, k] = ch_mod.apply(ch, unit.reshape(d, d)).reshape(-1)
    return mat


def direct_tensor_output(ch, psi):
    """(W (x) W)(|psi><psi|) by contracting the 4-index tensor with W on each factor."""
    d = ch.d
    s = superoperator(ch).reshape(d, d, d, d)  # out_i, out_j, in_k, in_l
    t = np.outer(psi, psi.conj()).reshape(d, d, d, d)  # (a b), (a' b')
    out = np.einsum("ikac,jlbd,abcd->ijkl", s, s, t)
    return out.reshape(d * d, d * d)


def test_apply_examples():
    rho = np.diag([1.0, 0.0])
    np.testing.assert_allclose(ch_mod.apply(DwhChannel(1.0, 2), rho), rho)
    np.testing.assert_allclose(ch_mod.apply(DwhChannel(0.0, 2), rho), np.diag([0.0, 1.0]))
    with pytest.raises(ShapeMismatch):
        ch_mod.apply(DwhChannel(0.5, 3), rho)
    with pytest.raises(ValueError):
        DwhChannel(1.5, 2)
    with pytest.raises(ValueError):
        DwhChannel(0.5, 1)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(2, 5), lam=st.floats(0, 1))
def test_apply_preserves_states_and_is_self_conjugate(seed, d, lam):
    rng = np.random.Generator(np.random.Philox(seed))
    ch = DwhChannel(lam, d)
    rho = qlinalg.random_density(d, rng)
    out = ch_mod.apply(ch, rho)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(out).min() >= -1e-10
    np.testing.assert_allclose(ch_mod.apply(ch, rho.conj()), out.conj(), atol=1e-14)
    assert ch.p_sq >= -1e-15


def test_max_output_norm_examples():
    for d in (2, 3, 5):
        assert ch_mod.max_output_2norm_sq(DwhChannel(1.0, d)) == pytest.approx(1.0)
    for lam in (0.0, 0.3, 1.0):
        assert ch_mod.max_output_2norm_sq(DwhChannel(lam, 2)) == pytest.approx(1.0)
    ch = DwhChannel(0.5, 3)
    assert ch_mod.max_output_2norm_sq(ch) == pytest.approx(5 / 8)
    out = ch_mod.apply(ch, np.outer(ch_mod.max_norm_state(3), ch_mod.max_norm_state(3).conj()))
    assert np.sum(np.abs(out) ** 2) == pytest.approx(5 / 8, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(2, 4), lam=st.floats(0, 1))
def test_single_output_norm_never_exceeds_maximum(seed, d, lam):
    ch = DwhChannel(lam, d)
    psi = qlinalg.random_state(d, np.random.Generator(np.random.Philox(seed)))
    direct = np.sum(np.abs(ch_mod.apply(ch, np.outer(psi, psi.conj()))) ** 2)
    assert ch_mod.single_output_2norm_sq(ch, psi) == pytest.approx(direct, abs=1e-12)
    assert direct <= ch_mod.max_output_2norm_sq(ch) + 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("lam", [0.0, 0.3, 0.5, 1.0])
def test_closed_form_and_expansion_match_direct_tensor(d, lam, rng):
    ch = DwhChannel(lam, d)
    for _ in range(20):
        psi = qlinalg.random_state(d * d, rng)
        direct = direct_tensor_output(ch, psi)
        np.testing.assert_allclose(ch_mod.tensor_output(ch, psi), direct, atol=1e-12)
        assert ch_mod.tensor_output_2norm_sq(ch, psi) == pytest.approx(np.sum(np.abs(direct) ** 2), abs=1e-10)


def test_maximally_entangled_input_at_lambda_zero():
    ch = DwhChannel(0.0, 3)
    psi = np.eye(3).reshape(-1) / np.sqrt(3)
    direct = np.sum(np.abs(direct_tensor_output(ch, psi)) ** 2)
    assert ch_mod.tensor_output_2norm_sq(ch, psi) == pytest.approx(direct, abs=1e-12)


def test_batch_closed_form_matches_scalar(rng):
    ch = DwhChannel(0.4, 3)
    psis = np.array([qlinalg.random_state(9, rng) for _ in range(10)])
    batch = ch_mod.tensor_output_2norm_sq_batch(ch, psis)
    np.testing.assert_allclose(batch, [ch_mod.tensor_output_2norm_sq(ch, p) for p in psis], atol=1e-14)


def test_identity_channel_gives_unit_norm(rng):
    for d in (2, 3):
        psi = qlinalg.random_state(d * d, rng)
        assert ch_mod.tensor_output_2norm_sq(DwhChannel(1.0, d), psi) == pytest.approx(1.0)


def test_mult_gap_examples(rng):
    product = np.kron(qlinalg.random_state(2, rng), qlinalg.random_state(2, rng))
    assert ch_mod.mult_gap(DwhChannel(1.0, 2), product).gap == pytest.approx(0.0, abs=1e-12)
    bell = np.eye(2).reshape(-1) / np.sqrt(2)
    assert ch_mod.mult_gap(DwhChannel(0.5, 2), bell).gap >= -1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_gap_nonnegative_on_samples(d, rng):
    for lam in np.linspace(0, 1, 11):
        ch = DwhChannel(lam, d)
        g = rng.standard_normal((1000, d * d)) + 1j * rng.standard_normal((1000, d * d))
        psis = g / np.linalg.norm(g, axis=1, keepdims=True)
        gaps = ch_mod.max_output_2norm_sq(ch) ** 2 - ch_mod.tensor_output_2norm_sq_batch(ch, psis)
        assert gaps.min() >= -1e-10


def test_mult_search_reaches_but_never_exceeds_ceiling(rng):
    for d, lam in [(2, 0.3), (3, 0.0), (3, 0.7)]:
        ch = DwhChannel(lam, d)
        best, state = ch_mod.mult_search(ch, 10, 2000, rng)
        ceiling = ch_mod.max_output_2norm_sq(ch) ** 2
        assert best <= ceiling + 1e-8
        assert best == pytest.approx(ch_mod.tensor_output_2norm_sq(ch, state))
        if d == 2:
            assert best == pytest.approx(1.0, abs=1e-8)
    best, _ = ch_mod.mult_search(DwhChannel(1.0, 3), 2, 10, rng)
    assert best == pytest.approx(1.0)


def test_conjugate_pair_norm_examples(rng):
    ch = DwhChannel(0.5, 3)
    e0 = np.zeros(9, dtype=complex)
    e0[0] = 1.0
    assert ch_mod.conjugate_pair_norm(ch, np.array([1.0, 0, 0])) == pytest.approx(
        ch_mod.tensor_output_2norm_sq(ch, e0)
    )
    sigma = np.ones(3) / 3
    reference = ch_mod.conjugate_pair_norm(ch, sigma)
    for _ in range(50):
        u, v = qlinalg.random_unitary(3, rng), qlinalg.random_unitary(3, rng)
        psi = (u @ np.diag(np.sqrt(sigma)) @ v.T).reshape(-1)  # same Schmidt coefficients, generic bases
        assert ch_mod.tensor_output_2norm_sq(ch, psi) <= reference + 1e-10
    assert ch_mod.conjugate_pair_norm(DwhChannel(0.3, 2), np.array([0.5, 0.5])) <= 1 + 1e-10
    with pytest.raises(ShapeMismatch):
        ch_mod.conjugate_pair_norm(ch, np.array([0.5, 0.6, 0.0]))


def conjugate_pair_basis():
    return np.array([[1, 1], [1j, -1j]]) / np.sqrt(2)


def test_ep_entries_match_direct_traces(rng):
    ch = DwhChannel(0.5, 3)
    e = qlinalg.random_unitary(3, rng)
    t = ch_mod.ep_entries(ch, e)
    for i, j, k, l in [(0, 1, 2, 0), (1, 1, 0, 0), (2, 0, 1, 2)]:
        a = ch_mod.apply(ch, np.outer(e[:, l], e[:, i].conj()))
        b = ch_mod.apply(ch, np.outer(e[:, j], e[:, k].conj()))
        assert t[i, j, k, l] == pytest.approx(np.trace(a @ b), abs=1e-12)


def test_ep_examples(rng):
    ok, low, _ = ch_mod.ep_check(DwhChannel(0.5, 2), conjugate_pair_basis())
    assert ok and low >= -1e-12
    ok, low, witness = ch_mod.ep_check(DwhChannel(0.5, 3), np.eye(3))
    assert not ok and low < -1e-12 and len(witness) == 4
    for _ in range(100):
        ok, low, _ = ch_mod.ep_check(DwhChannel(0.5, 3), qlinalg.random_unitary(3, rng))
        assert not ok
    assert ch_mod.ep_check(DwhChannel(1.0, 3), qlinalg.random_unitary(3, rng))[1] >= -1e-12
    with pytest.raises(BasisNotOrthonormal):
        ch_mod.ep_check(DwhChannel(0.5, 2), np.array([[1, 1], [0, 1]]))
