import numpy as np
import pytest

from gapped_ent import qlinalg
from gapped_ent.errors import DegenerateGroundState, DimensionCap, InvalidRegion, ShapeMismatch, UnknownName
from gapped_ent.gapped import models, regions
from gapped_ent.gapped.models import PAULI_X, PAULI_Y, PAULI_Z, Term


def site_op(op, site, n):
    mats = [np.eye(2)] * n
    mats[site] = op
    return qlinalg.kron(*mats)


def hand_heisenberg(n):
    h = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n - 1):
        for p in (PAULI_X, PAULI_Y, PAULI_Z):
            h += site_op(p, i, n) @ site_op(p, i + 1, n) / 4
    return h


def test_tfim_construction():
    m = models.build_model("tfim", 8, {"h": 2.0})
    assert len(m.terms) == 15  # 8 fields and 7 bonds on an open chain
    assert all(t.diameter <= 1 for t in m.terms)
    assert m.J == pytest.approx(2.0)
    h = sum(-site_op(PAULI_Z, i, 8) @ site_op(PAULI_Z, i + 1, 8) for i in range(7))
    h = h - 2.0 * sum(site_op(PAULI_X, i, 8) for i in range(8))
    np.testing.assert_allclose(models.hamiltonian(m), h, atol=1e-12)


def test_heisenberg_matches_hand_built_matrix():
    m = models.build_model("heisenberg", 4)
    np.testing.assert_allclose(models.hamiltonian(m), hand_heisenberg(4), atol=1e-12)
    e_hand = np.linalg.eigvalsh(hand_heisenberg(4))[0]
    assert models.diagonalize(m).e0 == pytest.approx(e_hand)


def test_single_bond_heisenberg_is_singlet():
    spec = models.diagonalize(models.build_model("heisenberg", 2))
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    assert abs(np.vdot(singlet, spec.ground_state)) == pytest.approx(1.0)
    assert spec.gap == pytest.approx(1.0)
    assert spec.energies[0] == 0.0


def test_aklt_bond_is_spin_two_projector():
    m = models.build_model("aklt", 6)
    for t in m.terms:
        assert qlinalg.is_hermitian(t.matrix)
        np.testing.assert_allclose(t.matrix @ t.matrix, t.matrix, atol=1e-12)
        assert np.trace(t.matrix).real == pytest.approx(5.0)


def test_open_aklt_chain_is_degenerate():
    # four edge-spin states share the ground energy on an open chain
    with pytest.raises(DegenerateGroundState):
        models.diagonalize(models.build_model("aklt", 4))
    spec = models.spectral_data(models.hamiltonian(models.build_model("aklt", 4)), (3,) * 4, allow_degenerate=True)
    assert spec.energies[3] == pytest.approx(0.0, abs=1e-10)


def test_gap_shrinks_towards_critical_field():
    g2 = models.diagonalize(models.build_model("tfim", 8, {"h": 2.0})).gap
    g1 = models.diagonalize(models.build_model("tfim", 8, {"h": 1.0})).gap
    assert g2 > g1 > 0


def test_model_errors(monkeypatch):
    with pytest.raises(UnknownName):
        models.build_model("potts", 4)
    with pytest.raises(ShapeMismatch):
        models.build_model("tfim", 1)
    with pytest.raises(ShapeMismatch):
        models.SpinChainModel("bad", 3, (2, 2, 2), (Term((0, 2), np.eye(4)),))
    with pytest.raises(ShapeMismatch):
        models.SpinChainModel("bad", 2, (2, 2), (Term((0,), np.array([[0, 1], [0, 0]])),))
    monkeypatch.setenv("GAPPED_ENT_MAX_DIM", "64")
    with pytest.raises(DimensionCap):
        models.build_model("tfim", 7)


def test_embed_permutes_factors(rng):
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3))
    np.testing.assert_allclose(models.embed(np.kron(a, b), [2, 0], [3, 2, 2]),
                               qlinalg.kron(b, np.eye(2), a), atol=1e-12)


def test_entropy_profile_strong_field_is_product():
    m = models.build_model("tfim", 8, {"h": 50.0})
    profile = models.entropy_profile(models.diagonalize(m), m)
    assert max(s for _, s in profile) <= 0.02


def test_entropy_profile_reflection_symmetry():
    m = models.build_model("tfim", 8, {"h": 1.5})
    s = [v for _, v in models.entropy_profile(models.diagonalize(m), m)]
    np.testing.assert_allclose(s, s[::-1], atol=1e-8)


def test_entropy_profile_matches_partial_trace():
    m = models.build_model("heisenberg", 6)
    spec = models.diagonalize(m)
    rho = spec.P0
    for cut, s in models.entropy_profile(spec, m):
        red = qlinalg.partial_trace(rho, [2] * 6, range(cut))
        assert s == pytest.approx(qlinalg.vn_entropy(red), abs=1e-9)


def test_region_split_example():
    split = regions.region_split(10, range(1, 6), 1)
    assert split.edge == {1, 5}
    assert split.band_inner == {1, 2, 4, 5}
    assert split.interior == {3}
    assert split.band == {0, 1, 2, 4, 5, 6}
    assert split.interior | split.band | split.exterior == set(range(10))


def test_region_split_wide_band_empties_interior():
    split = regions.region_split(12, range(2, 6), 3)
    assert split.interior == frozenset()


def test_region_split_reflection():
    n, ell = 12, 2
    a = regions.region_split(n, range(1, 6), ell)
    b = regions.region_split(n, [n - 1 - x for x in range(1, 6)], ell)
    reflect = lambda s: {n - 1 - x for x in s}  # noqa: E731
    assert reflect(a.interior) == b.interior
    assert reflect(a.exterior) == b.exterior
    assert reflect(a.band) == b.band


def test_region_split_errors():
    with pytest.raises(InvalidRegion):
        regions.region_split(8, [], 1)
    with pytest.raises(InvalidRegion):
        regions.region_split(8, [1, 3], 1)
    with pytest.raises(InvalidRegion):
        regions.region_split(8, [1, 2], 0)


@pytest.mark.parametrize("name,params", [("tfim", {"h": 1.0}), ("heisenberg", {}), ("ising", {})])
def test_hamiltonian_split_is_exact_and_bounded(name, params):
    m = models.build_model(name, 10, params)
    split = regions.region_split(10, range(2, 7), 1)
    hs = regions.hamiltonian_split(m, split)
    np.testing.assert_allclose(sum(hs.parts.values()), models.hamiltonian(m), atol=1e-12)
    assert hs.bounds_hold
    if name == "ising":
        assert max(hs.commutator_norms.values()) == pytest.approx(0.0, abs=1e-12)
