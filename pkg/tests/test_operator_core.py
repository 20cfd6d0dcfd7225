from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leolab.operators import (
    OperatorSum,
    PauliString,
    anticommutator,
    as_operator,
    collective,
    commutator,
    exchange,
    expm_hermitian,
    frob,
    hs_inner,
    kron,
    pauli,
    pauli_strings,
    single,
    total_spin_squared,
)

from conftest import basis_ket, random_hermitian, random_operator, swap_by_permutation

SX = np.array([[0, 1], [1, 0]])
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1, -1])


def test_kron_identities():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(kron(SX, SX) @ basis_ket("00"), basis_ket("11"))


def test_kron_mixed_product(rng):
    a, b, c, d = (random_operator(rng, 2) for _ in range(4))
    np.testing.assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)


def test_kron_needs_input():
    with pytest.raises(ValueError):
        kron()


def test_pauli_examples():
    np.testing.assert_array_equal(pauli(1, "Z"), np.diag([1, -1]))
    np.testing.assert_array_equal(pauli(3, "XII") @ basis_ket("000"), basis_ket("100"))


def test_pauli_length_mismatch():
    with pytest.raises(ValueError):
        pauli(2, "XYZ")
    with pytest.raises(ValueError):
        PauliString("XQ")


def test_pauli_strings_orthogonal_n2():
    labels = list(pauli_strings(2))
    assert len(labels) == 16
    for s, t in itertools.product(labels, repeat=2):
        want = 4.0 if s == t else 0.0
        assert abs(hs_inner(pauli(2, s), pauli(2, t)) - want) < 1e-12


def test_pauli_gram_n3():
    mats = np.array([pauli(3, s).reshape(-1) for s in pauli_strings(3)])
    np.testing.assert_allclose(mats.conj() @ mats.T, 8 * np.eye(64), atol=1e-12)


def test_pauli_hermitian_and_traceless():
    for s in pauli_strings(2):
        m = pauli(2, s)
        assert frob(m - m.conj().T) == 0
        if s != "II":
            assert abs(np.trace(m)) < 1e-12


def test_operator_sum():
    s = OperatorSum().add(0.5, "XX").add(0.5, "YY")
    np.testing.assert_allclose(s.matrix(), 0.5 * (kron(SX, SX) + kron(SY, SY)))
    with pytest.raises(ValueError):
        s.add(1.0, "X")
    with pytest.raises(ValueError):
        OperatorSum([PauliString("X"), PauliString("XX")])
    with pytest.raises(ValueError):
        OperatorSum().matrix()


def test_single_embedding():
    np.testing.assert_array_equal(single(3, 2, SX), kron(np.eye(2), SX, np.eye(2)))
    with pytest.raises(ValueError):
        single(3, 4, SX)


def test_exchange_swaps_states():
    e = exchange(2, 1, 2)
    np.testing.assert_allclose(e @ basis_ket("01"), basis_ket("10"))
    np.testing.assert_allclose(e @ basis_ket("00"), basis_ket("00"))
    np.testing.assert_allclose(e @ e, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exchange_matches_permutation(n):
    for i, j in itertools.combinations(range(1, n + 1), 2):
        e = exchange(n, i, j)
        np.testing.assert_allclose(e, swap_by_permutation(n, i, j), atol=1e-12)
        assert frob(e - e.conj().T) < 1e-12
        assert frob(e.conj().T @ e - np.eye(2**n)) < 1e-12


@pytest.mark.parametrize("i,j", [(0, 1), (2, 2), (2, 1), (1, 4)])
def test_exchange_bad_indices(i, j):
    with pytest.raises(ValueError):
        exchange(3, i, j)


def test_collective():
    np.testing.assert_array_equal(collective(1, "z"), SZ)
    np.testing.assert_allclose(collective(3, "z") @ basis_ket("000"), 3 * basis_ket("000"))
    sx, sy, sz = (collective(3, a) for a in "xyz")
    np.testing.assert_allclose(commutator(sx, sy), 2j * sz, atol=1e-12)
    with pytest.raises(ValueError):
        collective(2, "w")


def test_total_spin_squared():
    np.testing.assert_allclose(total_spin_squared(1), 0.75 * np.eye(2))
    singlet = (basis_ket("01") - basis_ket("10")) / np.sqrt(2)
    np.testing.assert_allclose(total_spin_squared(2) @ singlet, 0, atol=1e-12)
    ev = np.round(np.linalg.eigvalsh(total_spin_squared(4)), 10)
    vals, counts = np.unique(ev, return_counts=True)
    assert dict(zip(vals, counts)) == {0.0: 2, 2.0: 9, 6.0: 5}


@pytest.mark.parametrize("n", [3, 4])
def test_total_spin_commutes(n):
    s2 = total_spin_squared(n)
    for i, j in itertools.combinations(range(1, n + 1), 2):
        assert frob(commutator(s2, exchange(n, i, j))) < 1e-12
    for a in "xyz":
        assert frob(commutator(s2, collective(n, a))) < 1e-12


def test_expm_examples(rng):
    h = random_hermitian(rng, 8)
    np.testing.assert_allclose(expm_hermitian(h, 0.0), np.eye(8), atol=1e-12)
    np.testing.assert_allclose(expm_hermitian(np.diag([1.0, 0.0]), np.pi), np.diag([-1, 1]), atol=1e-12)
    u = expm_hermitian(h, 0.7)
    assert frob(u.conj().T @ u - np.eye(8)) < 1e-12


def test_expm_matches_series():
    # 2x2 closed form: exp(-i s n.sigma) = cos s I - i sin s n.sigma
    n = np.array([1.0, 2.0, 2.0]) / 3
    h = n[0] * SX + n[1] * SY + n[2] * SZ
    s = 0.37
    want = np.cos(s) * np.eye(2) - 1j * np.sin(s) * h
    np.testing.assert_allclose(expm_hermitian(h, s), want, atol=1e-14)


def test_expm_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        expm_hermitian(np.array([[0, 1], [0, 0]]), 1.0)


@settings(max_examples=30, deadline=None)
@given(s=st.floats(-3, 3), t=st.floats(-3, 3), seed=st.integers(0, 2**16))
def test_expm_group_property(s, t, seed):
    h = random_hermitian(np.random.default_rng(seed), 4)
    lhs = expm_hermitian(h, s) @ expm_hermitian(h, t)
    assert frob(lhs - expm_hermitian(h, s + t)) < 1e-10


def test_hs_inner_examples():
    assert hs_inner(np.eye(2), SZ) == 0
    assert hs_inner(SX, SX) == 2
    with pytest.raises(ValueError):
        hs_inner(np.eye(2), np.eye(4))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**16))
def test_hs_inner_positive(seed):
    a = random_operator(np.random.default_rng(seed), 4)
    assert hs_inner(a, a).real > 0


def test_commutator_examples():
    assert frob(commutator(SZ, SZ)) == 0
    assert frob(anticommutator(SX, SZ)) == 0
    np.testing.assert_allclose(commutator(SX, SY), 2j * SZ)
    with pytest.raises(ValueError):
        commutator(np.eye(2), np.eye(3))


def test_as_operator_validation():
    with pytest.raises(ValueError):
        as_operator(np.ones((2, 3)))
    with pytest.raises(ValueError):
        as_operator(np.array([[np.nan, 0], [0, 1]]))
