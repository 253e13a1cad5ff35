import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mubkit.errors import DimensionMismatch, NotCommuting, NotNormal
from mubkit.linalg import (
    Subspace,
    commutator,
    equal_up_to_phase,
    fourier_matrix,
    is_normal,
    is_traceless,
    is_unitary,
    simultaneous_eigenbasis,
    subspace_contains,
    subspace_rank,
    trace_inner,
)
from mubkit.monomial import pauli

# sl_2 triple with [X, Y] = 2Z, [X, Z] = 2Y, [Y, Z] = 2X
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)


def same_columns_up_to_phase(A, B, tol=1e-8):
    overlap = np.abs(A.conj().T @ B)
    return np.allclose(np.sort(overlap.max(axis=1)), 1, atol=tol) and np.allclose(overlap.sum(axis=1), 1, atol=1e-6)


def test_trace_inner_examples():
    assert trace_inner(np.eye(4), np.eye(4)) == 4
    assert trace_inner(X, Z) == 0
    X3 = pauli(3, 1, ((1,), (0,)))
    assert abs(trace_inner(X3, X3) - 3) < 1e-12
    with pytest.raises(DimensionMismatch):
        trace_inner(np.eye(2), np.eye(3))


def test_commutator_brackets():
    np.testing.assert_array_equal(commutator(X, Y), 2 * Z)
    np.testing.assert_array_equal(commutator(X, Z), 2 * Y)
    np.testing.assert_array_equal(commutator(Y, Z), 2 * X)
    np.testing.assert_array_equal(commutator(X, X), 0)


def test_predicates():
    assert is_unitary(fourier_matrix(3) / np.sqrt(3))
    assert not is_unitary(np.diag([1, 2]))
    assert not is_normal(np.array([[0, 1], [0, 0]]))
    assert is_normal(Y)
    assert is_traceless(Z) and not is_traceless(np.eye(2))


def test_equal_up_to_phase():
    c = equal_up_to_phase(1j * X, X)
    assert c is not None and abs(c - 1j) < 1e-12
    assert equal_up_to_phase(X, Z) is None


def test_eigenbasis_of_diagonal():
    V = simultaneous_eigenbasis([np.diag([3.0, 1.0, 2.0])])
    assert same_columns_up_to_phase(V, np.eye(3))


def test_eigenbasis_of_x():
    V = simultaneous_eigenbasis([np.eye(2), X])
    expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert same_columns_up_to_phase(V, expected)


def test_eigenbasis_of_qutrit_shift_is_fourier():
    X3 = pauli(3, 1, ((1,), (0,))).to_dense()
    V = simultaneous_eigenbasis([X3, X3 @ X3])
    assert same_columns_up_to_phase(V, fourier_matrix(3) / np.sqrt(3))


def test_eigenbasis_errors():
    with pytest.raises(NotCommuting):
        simultaneous_eigenbasis([X, Z])
    with pytest.raises(NotNormal):
        simultaneous_eigenbasis([np.array([[0, 1], [0, 0]])])


def test_eigenbasis_scalar_family():
    V = simultaneous_eigenbasis([np.eye(3)])
    np.testing.assert_allclose(V.conj().T @ V, np.eye(3), atol=1e-12)


def test_eigenbasis_is_deterministic():
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    mats = [Q @ np.diag(d) @ Q.conj().T for d in ([1, 1, 2, 2, 3, 3], [1, 2, 1, 2, 1, 2])]
    a = simultaneous_eigenbasis(mats, seed=5)
    b = simultaneous_eigenbasis(mats, seed=5)
    assert np.array_equal(a, b)


@st.composite
def commuting_normal_families(draw):
    n = draw(st.integers(1, 7))
    k = draw(st.integers(1, 3))
    seed = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    mats = []
    for _ in range(k):
        # small integer spectra force repeated eigenvalues and cluster recursion
        d = rng.integers(-2, 3, n) + 1j * rng.integers(-1, 2, n)
        mats.append(Q @ np.diag(d) @ Q.conj().T)
    return mats


@settings(max_examples=60, deadline=None)
@given(commuting_normal_families(), st.integers(0, 100))
def test_simultaneous_diagonalization_property(mats, seed):
    V = simultaneous_eigenbasis(mats, seed=seed)
    n = V.shape[0]
    np.testing.assert_allclose(V.conj().T @ V, np.eye(n), atol=1e-9)
    for M in mats:
        D = V.conj().T @ M @ V
        off = D - np.diag(np.diag(D))
        assert np.max(np.abs(off), initial=0) <= 1e-8 * max(1.0, np.linalg.norm(M, 2))
        np.testing.assert_allclose(V @ np.diag(np.diag(D)) @ V.conj().T, M, atol=1e-8 * max(1, np.linalg.norm(M)))


def test_subspace_examples():
    e1, e2 = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    S = Subspace.span([e1])
    assert subspace_contains(S, e1)
    assert not subspace_contains(S, e2)
    assert subspace_rank([e1, e1 + e2, e2]) == 2
    assert Subspace.zero(3).rank == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 1000))
def test_subspace_projection(k, seed):
    rng = np.random.default_rng(seed)
    vecs = rng.normal(size=(k, 8)) + 1j * rng.normal(size=(k, 8))
    S = Subspace.span(list(vecs))
    assert S.rank == k
    combo = rng.normal(size=k) @ vecs
    assert subspace_contains(S, combo)
    np.testing.assert_allclose(S.project(combo), combo, atol=1e-9)


def test_fourier_matrix():
    F = fourier_matrix(4)
    np.testing.assert_allclose(F @ F.conj().T, 4 * np.eye(4), atol=1e-12)
    np.testing.assert_allclose(F[1], [1, 1j, -1, -1j], atol=1e-12)
