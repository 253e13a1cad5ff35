import itertools

import numpy as np
import pytest

from mubkit.errorbases import (
    UnitaryErrorBasis,
    check_nice,
    composite_basis,
    nice_bound,
    pauli_basis,
    verify_nice,
    verify_ueb,
)
from mubkit.errors import NonPrime, NotIndexed, NotNice, WrongCount
from mubkit.fields import factorize
from mubkit.linalg import equal_up_to_phase
from mubkit.monomial import mono_trace

PRIME_POWERS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


def test_pauli_basis_sizes():
    E = pauli_basis(2, 1)
    assert len(E.elements) == 4 and E.index_group.factors == (2, 2)
    dense = [U.to_dense() for U in E.elements]
    X, Z = np.array([[0, 1], [1, 0]]), np.diag([1, -1])
    for ref in (np.eye(2), X, Z, X @ Z):
        assert any(np.allclose(D, ref) for D in dense)
    E3 = pauli_basis(3, 1)
    assert len(E3.elements) == 9
    assert sum(not mono_trace(U).is_zero() for U in E3.elements) == 1
    assert len(pauli_basis(2, 2).elements) == 16
    with pytest.raises(NonPrime):
        pauli_basis(4, 1)


@pytest.mark.parametrize("p,e", PRIME_POWERS)
def test_pauli_basis_is_ueb(p, e):
    rep = verify_ueb(pauli_basis(p, e))
    assert rep.ok and rep.metrics["mode"] == "exact"


@pytest.mark.parametrize("n", [2, 4, 6, 10])
def test_composite_basis_is_ueb(n):
    assert verify_ueb(composite_basis(n)).ok


def test_numeric_path_agrees_with_exact():
    E = composite_basis(6)
    rep = verify_ueb([U.to_dense() for U in E.elements])
    assert rep.ok and rep.metrics["mode"] == "numeric"


def test_ueb_failures():
    X, Z = np.array([[0, 1], [1, 0]]), np.diag([1, -1])
    rep = verify_ueb([np.eye(2), X, Z, X])
    assert not rep.ok and any("pair (1, 3)" in f for f in rep.failures)
    rep = verify_ueb([np.eye(2), X, Z, np.diag([1, 2])])
    assert any("not unitary" in f for f in rep.failures)
    with pytest.raises(WrongCount):
        verify_ueb([np.eye(2), X])


def test_composite_2_matches_pauli_up_to_phase():
    A, B = composite_basis(2), pauli_basis(2, 1)
    for U, V in zip(A.elements, B.elements):
        assert equal_up_to_phase(U.to_dense(), V.to_dense()) is not None


def test_composite_4_differs_from_pauli_22():
    assert composite_basis(4).index_group.canonical() == (4, 4)
    assert pauli_basis(2, 2).index_group.canonical() == (2, 2, 2, 2)


def _cocycle_oracle(E):
    """Phases w(g, h) from dense products, compared by global phase."""
    G = E.index_group
    out = {}
    for g, h in itertools.product(E.labels, repeat=2):
        lhs = E.element(g).to_dense() @ E.element(h).to_dense()
        out[g, h] = equal_up_to_phase(lhs, E.element(G.add(g, h)).to_dense(), 1e-9)
    return out


@pytest.mark.parametrize("p,e", PRIME_POWERS)
def test_verify_nice_pauli(p, e):
    E = pauli_basis(p, e)
    c = verify_nice(E)
    _, rep = check_nice(E)
    assert rep.metrics["cocycle_triples"] == len(E.elements) ** 3
    if p**e <= 4:
        oracle = _cocycle_oracle(E)
        for (g, h), w in oracle.items():
            assert abs(c.value(g, h) - w) < 1e-9


def test_qubit_cocycle_ratio():
    c = verify_nice(pauli_basis(2, 1))
    ratio = c.value((1, 0), (0, 1)) / c.value((0, 1), (1, 0))
    assert abs(ratio + 1) < 1e-12


def test_verify_nice_composite_6():
    E = composite_basis(6)
    c = verify_nice(E)
    assert 6 % c.order == 0 or c.order % 6 == 0
    oracle = _cocycle_oracle(E)
    for (g, h), w in oracle.items():
        assert abs(c.value(g, h) - w) < 1e-9
        assert abs(w**6 - 1) < 1e-9


def test_commutation_matrix_matches_dense():
    E = composite_basis(6)
    C = verify_nice(E).commutation_matrix()
    D = [U.to_dense() for U in E.elements]
    for a, b in itertools.product(range(36), repeat=2):
        assert C[a, b] == np.allclose(D[a] @ D[b], D[b] @ D[a])


def test_nice_failures():
    E = pauli_basis(2, 1)
    X = E.element((1, 0))
    bad = UnitaryErrorBasis(2, [X] + E.elements[1:], E.labels, E.index_group)
    _, rep = check_nice(bad)
    assert any("property 1" in f for f in rep.failures)
    with pytest.raises(NotNice):
        verify_nice(bad)
    with pytest.raises(NotIndexed):
        check_nice(UnitaryErrorBasis(2, E.elements))


def test_nice_numeric_path():
    E = pauli_basis(3, 1)
    dense = UnitaryErrorBasis(3, [U.to_dense() for U in E.elements], E.labels, E.index_group)
    c = verify_nice(dense)
    assert c.order is None
    exact = verify_nice(E)
    for g, h in itertools.product(E.labels, repeat=2):
        assert abs(c.value(g, h) - exact.value(g, h)) < 1e-9


def _bound_oracle(n):
    return min(p**v for p, v in factorize(n).items()) + 1


def test_nice_bound():
    assert nice_bound(6) == 3
    assert nice_bound(12) == 4
    assert nice_bound(7) == 8
    for n in range(2, 200):
        assert nice_bound(n) == _bound_oracle(n)
