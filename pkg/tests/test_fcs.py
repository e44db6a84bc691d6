import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapped_ent import fcs, qlinalg
from gapped_ent.errors import IsometryViolation, PeripheralSpectrum, ShapeMismatch, UnknownName


def nested_expectation(spec, ops):
    """omega(A_1 (x) ... (x) A_n) = Tr rho E(A_1 (x) E(A_2 (x) ... E(A_n (x) 1)))."""
    td = fcs.transfer(spec)
    inner = np.eye(spec.b, dtype=complex)
    for a in reversed(ops):
        inner = spec.expect_map(a, inner)
    return np.trace(td.fixed_point @ inner)


def chain_by_nested_expectation(spec, n):
    d = spec.d
    out = np.zeros((d**n, d**n), dtype=complex)
    for s in itertools.product(range(d), repeat=n):
        for t in itertools.product(range(d), repeat=n):
            units = []
            for a, b in zip(s, t):
                u = np.zeros((d, d))
                u[b, a] = 1.0  # rho[s, t] = omega(|t><s|)
                units.append(u)
            out[np.ravel_multi_index(s, (d,) * n), np.ravel_multi_index(t, (d,) * n)] = nested_expectation(
                spec, units
            )
    return out


@pytest.mark.parametrize("name", ["aklt", "random(2,2,seed=7)", "random(3,2,seed=1)", "classical"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_rho_chain_matches_nested_expectations(name, n):
    spec = fcs.builtin_specs(name)
    np.testing.assert_allclose(fcs.rho_chain(spec, n), chain_by_nested_expectation(spec, n), atol=1e-12)


def test_rho_chain_four_sites_matches_oracle():
    spec = fcs.builtin_specs("random(2,2,seed=3)")
    np.testing.assert_allclose(fcs.rho_chain(spec, 4), chain_by_nested_expectation(spec, 4), atol=1e-12)


def test_aklt_transfer_data():
    td = fcs.transfer(fcs.aklt_spec())
    assert td.lam == pytest.approx(1 / 3, abs=1e-12)
    assert td.c == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(td.fixed_point, np.eye(2) / 2, atol=1e-12)
    np.testing.assert_allclose(fcs.rho_chain(fcs.aklt_spec(), 1), np.eye(3) / 3, atol=1e-12)


def test_aklt_two_site_correlation():
    # <Sz Sz> at distance one is -4/9 for the AKLT state
    rho2 = fcs.rho_chain(fcs.aklt_spec(), 2)
    sz = np.diag([1.0, 0.0, -1.0])
    assert np.trace(rho2 @ np.kron(sz, sz)).real == pytest.approx(-4 / 9, abs=1e-12)


def test_fixed_point_is_invariant():
    spec = fcs.builtin_specs("random(3,3,seed=5)")
    td = fcs.transfer(spec)
    rho = td.fixed_point
    np.testing.assert_allclose(sum(k.conj().T @ rho @ k for k in spec.kraus), rho, atol=1e-12)
    assert td.fixed_point_residual < 1e-12
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_ehat_power_converges_to_projection():
    spec = fcs.builtin_specs("random(2,2,seed=7)")
    td = fcs.transfer(spec)
    np.testing.assert_allclose(np.linalg.matrix_power(td.ehat, 200), td.ehat_inf, atol=1e-12)


def test_c_bounds_every_power():
    spec = fcs.builtin_specs("random(2,3,seed=2)")
    td = fcs.transfer(spec)
    diff = td.ehat - td.ehat_inf
    power = np.eye(diff.shape[0])
    b = spec.b
    for n in range(1, 20):
        power = diff @ power
        worst = max(qlinalg.trace_norm(power[:, k].reshape(b, b)) for k in range(b * b))
        assert worst <= td.c * td.lam**n * (1 + 1e-9) + 1e-13


def test_product_spec_has_no_correlations():
    td = fcs.transfer(fcs.builtin_specs("product(3)"))
    assert td.lam == 0.0
    spec = fcs.builtin_specs("product(3)")
    np.testing.assert_allclose(fcs.rho_chain(spec, 2), np.kron(fcs.rho_chain(spec, 1), fcs.rho_chain(spec, 1)))


@pytest.mark.parametrize("name", ["ghz", "neel", "identity(2,2)"])
def test_peripheral_spectrum_rejected(name):
    with pytest.raises(PeripheralSpectrum):
        fcs.transfer(fcs.builtin_specs(name))


def test_non_isometry_rejected():
    with pytest.raises(IsometryViolation):
        fcs.validate(fcs.FcsSpec(2, 1, np.array([[1.0, 1.0]])))
    with pytest.raises(ShapeMismatch):
        fcs.FcsSpec(2, 2, np.eye(2))


def test_unknown_spec_name():
    with pytest.raises(UnknownName):
        fcs.builtin_specs("mps-of-doom")


def test_rho_spin_block_marginal_is_product_for_product_state():
    spec = fcs.builtin_specs("product(2)")
    block = fcs.rho_spin_block(spec, 3, 4)
    assert block.shape == (8, 8)
    with pytest.raises(ValueError):
        fcs.rho_spin_block(spec, 1, 4)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(2, 3), b=st.integers(1, 3), n=st.integers(1, 4))
def test_rho_chain_is_consistent_density(seed, d, b, n):
    spec = fcs.random_spec(d, b, seed)
    rho_n = fcs.rho_chain(spec, n)
    assert np.trace(rho_n).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho_n).min() > -1e-12
    assert np.linalg.matrix_rank(rho_n, tol=1e-10) <= b * b
    if n > 1:
        # translation invariance: both marginals of length n-1 agree
        left = qlinalg.partial_trace(rho_n, [d] * n, range(n - 1))
        right = qlinalg.partial_trace(rho_n, [d] * n, range(1, n))
        np.testing.assert_allclose(left, fcs.rho_chain(spec, n - 1), atol=1e-12)
        np.testing.assert_allclose(right, fcs.rho_chain(spec, n - 1), atol=1e-12)
