import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mubkit.errors import NonPrime, NotOrthogonal, NotPrimePower, NotUnimodular, SingularGram, SizeCapExceeded
from mubkit.fields import (
    AbelianGroupSpec,
    LatinSquare,
    are_orthogonal,
    character_table,
    dephase,
    ff_dual_basis,
    ff_make,
    ff_trace,
    is_character_table,
    mols_from_field,
    net_parallel_classes,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (7, 1)]


def _polymul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def _reducible_by_brute_force(poly, p):
    """Oracle: poly is reducible iff it equals a product of two monic polys of lower degree."""
    e = len(poly) - 1
    for d in range(1, e // 2 + 1):
        for a in itertools.product(range(p), repeat=d):
            for b in itertools.product(range(p), repeat=e - d):
                if _polymul(a + (1,), b + (1,), p) == tuple(poly):
                    return True
    return False


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_modulus_is_irreducible(p, e):
    F = ff_make(p, e)
    assert len(F.modulus) == e + 1 and F.modulus[-1] == 1
    if e > 1:
        assert not _reducible_by_brute_force(F.modulus, p)


def test_modulus_examples():
    assert ff_make(2, 1).modulus == (0, 1)
    assert ff_make(3, 2).modulus == (1, 0, 1)  # x^2 + 1
    assert ff_make(2, 2).modulus == (1, 1, 1)  # x^2 + x + 1


@pytest.mark.parametrize("p,e", [(2, 2), (3, 2), (2, 3)])
def test_modulus_is_lexicographically_smallest(p, e):
    F = ff_make(p, e)
    for low in itertools.product(range(p), repeat=e):
        cand = tuple(low) + (1,)
        if tuple(reversed(cand)) < tuple(reversed(F.modulus)):
            assert _reducible_by_brute_force(cand, p)


def test_bad_inputs():
    with pytest.raises(NonPrime):
        ff_make(4, 1)
    with pytest.raises(SizeCapExceeded):
        ff_make(2, 21)
    with pytest.raises(NotPrimePower):
        mols_from_field(6)


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_generator_has_full_order(p, e):
    F = ff_make(p, e)
    g = F.generator
    assert F.multiplicative_order(g) == F.q - 1
    powers = {F.pow(g, k) for k in range(F.q - 1)}
    assert len(powers) == F.q - 1 and F.zero not in powers


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_frobenius_automorphism_fixes_prime_field(p, e):
    F = ff_make(p, e)
    elems = list(F.elements())
    images = [F.frobenius(a) for a in elems]
    assert len(set(images)) == F.q
    fixed = [a for a, b in zip(elems, images) if a == b]
    assert sorted(fixed) == sorted(F.from_int(k) for k in range(p))
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = (elems[i] for i in rng.integers(0, F.q, 2))
        assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
        assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))


def test_trace_examples():
    F2 = ff_make(2, 1)
    assert ff_trace(F2, F2.one) == 1
    F4 = ff_make(2, 2)
    w = (0, 1)
    assert ff_trace(F4, w) == 1
    # oracle: w + w^2 computed by hand in F_4 = F_2[x]/(x^2+x+1) is 1
    assert F4.add(w, F4.mul(w, w)) == F4.one
    F9 = ff_make(3, 2)
    assert ff_trace(F9, F9.zero) == 0


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_trace_linear_and_nonzero(p, e):
    F = ff_make(p, e)
    elems = list(F.elements())
    tr = {a: ff_trace(F, a) for a in elems}
    assert any(tr.values())
    for a, b in itertools.islice(itertools.product(elems, elems), 400):
        assert tr[F.add(a, b)] == (tr[a] + tr[b]) % p


@pytest.mark.parametrize("p,e", SMALL_FIELDS)
def test_dual_basis(p, e):
    F = ff_make(p, e)
    basis = F.polynomial_basis()
    dual = ff_dual_basis(F, basis)
    for i, b in enumerate(basis):
        for j, d in enumerate(dual):
            assert ff_trace(F, F.mul(b, d)) == int(i == j)


def test_dual_basis_examples():
    F1 = ff_make(5, 1)
    assert ff_dual_basis(F1, [F1.one]) == [F1.one]
    F4 = ff_make(2, 2)
    # Tr(1) = 0, Tr(w) = 1, Tr(w^2) = 1 in F_4, so the dual of {1, w} is {w^2, 1}
    assert ff_dual_basis(F4, [(1, 0), (0, 1)]) == [(1, 1), (1, 0)]
    with pytest.raises(SingularGram):
        ff_dual_basis(F4, [(1, 0), (1, 0)])


@pytest.mark.parametrize("s", [2, 3, 4, 5, 7, 8, 9])
def test_mols(s):
    mols = mols_from_field(s)
    assert len(mols) == s - 1
    for A, B in itertools.combinations(mols, 2):
        pairs = {(A.cells[i][j], B.cells[i][j]) for i in range(s) for j in range(s)}
        assert len(pairs) == s * s
        assert are_orthogonal(A, B)


def test_mols_s2_is_addition_table():
    (L,) = mols_from_field(2)
    assert L.to_json() == [[0, 1], [1, 0]]


def test_latin_square_validation():
    with pytest.raises(ValueError):
        LatinSquare.from_rows([[0, 1], [0, 1]])


@pytest.mark.parametrize("s", [2, 3, 4, 5])
def test_net_parallel_classes(s):
    mols = mols_from_field(s)
    classes = net_parallel_classes(mols, s)
    assert len(classes) == s + 1
    for pc in classes:
        assert np.all(pc.incidence().sum(axis=1) == 1)
    for a, b in itertools.combinations(classes, 2):
        for x in a.blocks:
            for y in b.blocks:
                assert len(set(x) & set(y)) == 1


def test_net_examples():
    classes = net_parallel_classes(mols_from_field(2), 2)
    assert [pc.to_json() for pc in classes] == [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]]
    assert len(net_parallel_classes([], 4)) == 2
    L = mols_from_field(3)[0]
    with pytest.raises(NotOrthogonal):
        net_parallel_classes([L, L])


def test_character_table_examples():
    np.testing.assert_allclose(character_table(AbelianGroupSpec((2,))), [[1, 1], [1, -1]], atol=1e-15)
    n = 5
    w = np.exp(2j * np.pi / n)
    F = np.array([[w ** (j * k) for k in range(n)] for j in range(n)])
    np.testing.assert_allclose(character_table(AbelianGroupSpec((n,))), F, atol=1e-12)
    H = character_table(AbelianGroupSpec((2, 2)))
    np.testing.assert_allclose(H.imag, 0, atol=1e-15)
    np.testing.assert_allclose(H * H, np.ones((4, 4)), atol=1e-15)


GROUPS_UP_TO_16 = [
    f
    for k in range(1, 4)
    for f in itertools.product(range(2, 17), repeat=k)
    if np.prod(f) <= 16 and list(f) == sorted(f)
]


@pytest.mark.parametrize("factors", GROUPS_UP_TO_16)
def test_character_table_recovers_group(factors):
    G = AbelianGroupSpec(factors)
    H = character_table(G)
    np.testing.assert_allclose(H @ H.conj().T, G.order * np.eye(G.order), atol=1e-9 * G.order)
    found = is_character_table(H)
    assert found is not None and found.isomorphic(G)


def test_character_table_oracle_tensor():
    F2 = character_table(AbelianGroupSpec((2,)))
    F3 = character_table(AbelianGroupSpec((3,)))
    found = is_character_table(np.kron(F2, F3))
    assert found is not None and found.isomorphic(AbelianGroupSpec((2, 3)))
    assert found.isomorphic(AbelianGroupSpec((6,)))


def _hadamard4(theta):
    t = np.exp(1j * theta)
    return np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, t, -t], [1, -1, -t, t]])


def test_one_parameter_hadamard_family():
    for theta in (0.3, 1.0, 2.2):
        H = _hadamard4(theta)
        np.testing.assert_allclose(H @ H.conj().T, 4 * np.eye(4), atol=1e-12)
        assert is_character_table(H) is None
    assert is_character_table(_hadamard4(0.0)).canonical() == (2, 2)
    assert is_character_table(_hadamard4(np.pi / 2)).canonical() == (4,)


def test_is_character_table_rejects_non_unimodular():
    with pytest.raises(NotUnimodular):
        is_character_table(np.array([[1, 1], [1, 0.5]]))


def test_dephase_makes_first_row_and_column_ones():
    rng = np.random.default_rng(3)
    H = np.exp(2j * np.pi * rng.random((5, 5)))
    D = dephase(H)
    np.testing.assert_allclose(D[0], 1, atol=1e-12)
    np.testing.assert_allclose(D[:, 0], 1, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=3).filter(lambda f: np.prod(f) <= 36))
def test_character_table_invariant_under_permutation(factors):
    G = AbelianGroupSpec(tuple(factors))
    H = character_table(G)
    rng = np.random.default_rng(sum(factors))
    r = np.concatenate([[0], 1 + rng.permutation(G.order - 1)])
    c = np.concatenate([[0], 1 + rng.permutation(G.order - 1)])
    found = is_character_table(H[np.ix_(r, c)])
    assert found is not None and found.isomorphic(G)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_field_axioms(pe, data):
    F = ff_make(*pe)
    pick = st.integers(0, F.q - 1).map(F.from_int)
    a, b, c = data.draw(pick), data.draw(pick), data.draw(pick)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    if a != F.zero:
        assert F.mul(a, F.inv(a)) == F.one
