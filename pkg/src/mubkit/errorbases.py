"""Unitary error bases, nice error bases and their cocycles."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonPrime, NotIndexed, NotNice, Report, WrongCount
from .fields import AbelianGroupSpec, factorize, is_prime
from .linalg import dense, equal_up_to_phase
from .monomial import (
    MonomialMatrix,
    composite_pauli,
    exact_trace_gram,
    mono_trace,
    pauli,
    stack_monomials,
)

EXHAUSTIVE_TRIPLES_MAX = 81**3
RANDOM_TRIPLES = 10_000


@dataclass
class UnitaryErrorBasis:
    """n^2 unitaries, optionally indexed by an abelian group of order n^2.

    ``labels[k]`` is the group element (residue tuple) indexing
    ``elements[k]``.
    """

    n: int
    elements: list
    labels: list[tuple[int, ...]] | None = None
    index_group: AbelianGroupSpec | None = None
    _pos: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if self.labels is not None:
            self.labels = [tuple(int(v) for v in g) for g in self.labels]
            self._pos = {g: k for k, g in enumerate(self.labels)}

    @property
    def indexed(self) -> bool:
        return self.labels is not None and self.index_group is not None

    @property
    def exact(self) -> bool:
        return all(isinstance(U, MonomialMatrix) for U in self.elements)

    def position(self, label) -> int:
        return self._pos[tuple(label)]

    def element(self, label):
        return self.elements[self.position(label)]


def pauli_basis(p: int, e: int = 1) -> UnitaryErrorBasis:
    """All X^x Z^z tensor products, indexed by Z_p^e x Z_p^e as (x, z)."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    G = AbelianGroupSpec((p,) * (2 * e))
    labels = G.elements()
    elems = [pauli(p, e, (g[:e], g[e:])) for g in labels]
    return UnitaryErrorBasis(p**e, elems, labels, G)


def composite_basis(n: int) -> UnitaryErrorBasis:
    """X^x Z^z over Z_n x Z_n with w = exp(2 pi i / n)."""
    G = AbelianGroupSpec((n, n))
    labels = G.elements()
    return UnitaryErrorBasis(n, [composite_pauli(n, x, z) for x, z in labels], labels, G)


def verify_ueb(E, tol: float = 1e-9) -> Report:
    """Check n^2 unitaries with tr(U_k^dagger U_l) = n delta_kl.

    Monomial inputs are checked exactly; anything else numerically, with a
    pair failing when its trace inner product is off by more than tol * n.
    """
    mats = list(E.elements if isinstance(E, UnitaryErrorBasis) else E)
    if not mats:
        raise WrongCount("empty basis")
    n = dense(mats[0]).shape[0]
    if len(mats) != n * n:
        raise WrongCount(f"expected {n * n} matrices of size {n}, got {len(mats)}")
    rep = Report("unitary error basis")
    if all(isinstance(U, MonomialMatrix) for U in mats):
        _, R = exact_trace_gram(mats)
        target = np.zeros_like(R)
        target[..., 0] = n * np.eye(len(mats), dtype=np.int64)
        bad = np.any(R != target, axis=2)
        rep.metrics["mode"] = "exact"
        rep.metrics["bad_pairs"] = int(np.sum(np.triu(bad)))
        for k, l in zip(*np.nonzero(np.triu(bad))):
            rep.fail(f"pair ({k}, {l}) is not trace-orthogonal")
        return rep
    V = np.stack([dense(U).reshape(-1) for U in mats])
    for k, U in enumerate(mats):
        U = dense(U)
        dev = float(np.max(np.abs(U.conj().T @ U - np.eye(n))))
        if dev > tol:
            rep.fail(f"element {k} is not unitary (deviation {dev:.3g})")
    G = V.conj() @ V.T
    dev = np.abs(G - n * np.eye(len(mats)))
    rep.metrics["mode"] = "numeric"
    rep.metrics["max_gram_deviation"] = float(dev.max())
    for k, l in zip(*np.nonzero(np.triu(dev > tol * n, 1))):
        rep.fail(f"pair ({k}, {l}) has |tr| = {abs(G[k, l]):.3g}")
    return rep


@dataclass
class Cocycle:
    """Phases w(g, h) with U_g U_h = w(g, h) U_gh.

    For exact bases ``table[g, h]`` is an exponent of exp(2 pi i / order);
    otherwise ``order`` is None and ``table`` holds the complex values.
    Rows and columns follow ``labels``.
    """

    group: AbelianGroupSpec
    labels: list[tuple[int, ...]]
    table: np.ndarray
    order: int | None

    def value(self, g, h) -> complex:
        k, l = self.labels.index(tuple(g)), self.labels.index(tuple(h))
        if self.order is None:
            return complex(self.table[k, l])
        return complex(np.exp(2j * np.pi * self.table[k, l] / self.order))

    def commutation_matrix(self) -> np.ndarray:
        """C[g, h] is True iff U_g and U_h commute (index group is abelian)."""
        if self.order is None:
            return np.abs(self.table - self.table.T) < 1e-9
        return self.table == self.table.T


def _mult_table(E: UnitaryErrorBasis) -> np.ndarray:
    G = E.index_group
    N = len(E.labels)
    mult = np.empty((N, N), dtype=np.int64)
    for a, g in enumerate(E.labels):
        for b, h in enumerate(E.labels):
            mult[a, b] = E.position(G.add(g, h))
    return mult


def _check_product_law(W: np.ndarray, mult: np.ndarray, m: int | None, rep: Report, seed: int = 0) -> None:
    """w(g,h) w(gh,k) = w(h,k) w(g,hk), exhaustively for small groups."""
    N = W.shape[0]
    if N**3 <= EXHAUSTIVE_TRIPLES_MAX:
        g, h, k = np.meshgrid(np.arange(N), np.arange(N), np.arange(N), indexing="ij")
        rep.metrics["cocycle_triples"] = N**3
    else:
        rng = np.random.default_rng(seed)
        g, h, k = rng.integers(0, N, size=(3, RANDOM_TRIPLES))
        rep.metrics["cocycle_triples"] = RANDOM_TRIPLES
    if m is None:
        lhs = W[g, h] * W[mult[g, h], k]
        rhs = W[h, k] * W[g, mult[h, k]]
        bad = np.abs(lhs - rhs) > 1e-9
    else:
        lhs = W[g, h] + W[mult[g, h], k]
        rhs = W[h, k] + W[g, mult[h, k]]
        bad = (lhs - rhs) % m != 0
    if np.any(bad):
        rep.fail(f"cocycle identity violated on {int(np.sum(bad))} triples")


def check_nice(E: UnitaryErrorBasis, tol: float = 1e-9) -> tuple[Cocycle | None, Report]:
    """Run the three niceness properties; returns the cocycle when they hold."""
    if not E.indexed:
        raise NotIndexed("error basis carries no index group")
    G = E.index_group
    rep = Report("nice error basis")
    N = len(E.elements)
    if G.order != N or N != E.n**2:
        rep.fail(f"index group order {G.order} does not match {N} elements of size {E.n}")
        return None, rep
    e_pos = E.position(G.identity)
    mult = _mult_table(E)
    if E.exact:
        if not E.elements[e_pos].is_identity():
            rep.fail("property 1: element at the group identity is not I")
        for k, U in enumerate(E.elements):
            if k != e_pos and not mono_trace(U).is_zero():
                rep.fail(f"property 2: element {E.labels[k]} has nonzero trace")
        m, P, X = stack_monomials(E.elements)
        prodP = P[:, P]  # [a, b, j] = P[a, P[b, j]]
        prodX = X[None, :, :] + X[:, P]
        same_perm = np.all(prodP == P[mult], axis=2)
        diff = (prodX - X[mult]) % m
        constant = np.all(diff == diff[..., :1], axis=2)
        for a, b in zip(*np.nonzero(~(same_perm & constant))):
            rep.fail(f"property 3: U_{E.labels[a]} U_{E.labels[b]} is not a multiple of U_gh")
        W = diff[..., 0]
        rep.metrics["mode"] = "exact"
        rep.metrics["cocycle_order"] = m
    else:
        mats = [dense(U) for U in E.elements]
        if np.max(np.abs(mats[e_pos] - np.eye(E.n))) > tol:
            rep.fail("property 1: element at the group identity is not I")
        for k, U in enumerate(mats):
            if k != e_pos and abs(np.trace(U)) > tol * E.n:
                rep.fail(f"property 2: element {E.labels[k]} has nonzero trace")
        W = np.zeros((N, N), dtype=complex)
        for a in range(N):
            for b in range(N):
                c = equal_up_to_phase(mats[a] @ mats[b], mats[mult[a, b]], tol * E.n)
                if c is None:
                    rep.fail(f"property 3: U_{E.labels[a]} U_{E.labels[b]} is not a multiple of U_gh")
                else:
                    W[a, b] = c
        m = None
        rep.metrics["mode"] = "numeric"
    if not rep.ok:
        return None, rep
    _check_product_law(W, mult, m, rep)
    if not rep.ok:
        return None, rep
    return Cocycle(G, list(E.labels), W, m), rep


def verify_nice(E: UnitaryErrorBasis, tol: float = 1e-9) -> Cocycle:
    """Return the cocycle of a nice error basis or raise NotNice with the report."""
    cocycle, rep = check_nice(E, tol)
    if cocycle is None:
        err = NotNice("; ".join(rep.failures[:5]))
        err.report = rep
        raise err
    return cocycle


def nice_bound(n: int) -> int:
    """min over primes p | n of (largest power of p dividing n), plus 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return min(p**v for p, v in factorize(n).items()) + 1
