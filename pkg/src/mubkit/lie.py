"""Cartan subalgebras of sl_n(C), the Killing form and orthogonal decompositions.

Also the two directions between MUB collections and families of pairwise
Killing-orthogonal, adjoint-closed Cartan subalgebras.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    NotDaggerClosed,
    NotOrthogonal,
    NotTraceless,
    NotUnitary,
    Report,
    VerificationRequired,
)
from .linalg import (
    TOL_RANK,
    Subspace,
    dense,
    fourier_matrix,
    is_unitary,
    simultaneous_eigenbasis,
    subspace_contains,
    subspace_rank,
)
from .monomial import MonomialMatrix, mono_mul, mono_trace
from .mub import MubCollection, verify_mubs


@lru_cache(maxsize=None)
def sl_basis(n: int) -> tuple[np.ndarray, ...]:
    """E_ij for i != j (row-major order), then E_ii - E_(i+1)(i+1)."""
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                E = np.zeros((n, n), dtype=complex)
                E[i, j] = 1
                out.append(E)
    for i in range(n - 1):
        D = np.zeros((n, n), dtype=complex)
        D[i, i], D[i + 1, i + 1] = 1, -1
        out.append(D)
    return tuple(out)


def _require_traceless(A, tol: float) -> None:
    if isinstance(A, MonomialMatrix):
        if not mono_trace(A).is_zero():
            raise NotTraceless("matrix has nonzero trace")
        return
    A = dense(A)
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    if abs(np.trace(A)) > tol * scale * A.shape[0]:
        raise NotTraceless(f"trace {np.trace(A):.3g} is not zero")


def killing(A, B, tol: float = 1e-9) -> complex:
    """Killing form on sl_n as 2n tr(AB); exact when both inputs are monomial."""
    _require_traceless(A, tol)
    _require_traceless(B, tol)
    if isinstance(A, MonomialMatrix) and isinstance(B, MonomialMatrix):
        t = mono_trace(mono_mul(A, B))
        return complex(2 * A.n * t.value)
    A, B = dense(A), dense(B)
    return complex(2 * A.shape[0] * np.trace(A @ B))


def ad_matrix(A, basis=None) -> np.ndarray:
    """Matrix of C -> [A, C] in the coordinates of ``basis`` (default ``sl_basis``)."""
    A = dense(A)
    n = A.shape[0]
    basis = sl_basis(n) if basis is None else [dense(b) for b in basis]
    T = np.stack([b.reshape(-1) for b in basis], axis=1)
    I = np.eye(n)
    # row-major vec: vec(AC) = (A kron I) vec(C), vec(CA) = (I kron A^T) vec(C)
    L = np.kron(A, I) - np.kron(I, A.T)
    coords, *_ = np.linalg.lstsq(T, L @ T, rcond=None)
    return coords


def killing_ad(A, B, tol: float = 1e-9) -> complex:
    """tr(ad A ad B) computed from the adjoint representation itself."""
    _require_traceless(A, tol)
    _require_traceless(B, tol)
    return complex(np.trace(ad_matrix(A) @ ad_matrix(B)))


@dataclass
class CartanSubalgebra:
    """Span of traceless n x n matrices (dense or exact monomial)."""

    n: int
    basis: list

    @property
    def subspace(self) -> Subspace:
        return Subspace.span(self.basis)

    def dense_basis(self) -> list[np.ndarray]:
        return [dense(h) for h in self.basis]


@dataclass
class OrthogonalDecomposition:
    n: int
    cartans: list[CartanSubalgebra]


def cartan_from_basis(B, tol: float = 1e-9) -> CartanSubalgebra:
    """Traceless matrices diagonal in the orthonormal basis given by B's columns."""
    B = dense(B)
    if not is_unitary(B, tol):
        raise NotUnitary("basis matrix is not unitary")
    n = B.shape[0]
    out = []
    for k in range(n - 1):
        d = np.zeros(n)
        d[k], d[k + 1] = 1, -1
        out.append((B * d[None, :]) @ B.conj().T)
    return CartanSubalgebra(n, out)


def _normalizer_dimension(mats: list[np.ndarray], n: int, tol_rank: float) -> tuple[int, np.ndarray]:
    """Dimension and basis (as coefficient columns over sl_basis) of {A : [A, h] in S}."""
    T = np.stack([b.reshape(-1) for b in sl_basis(n)], axis=1)
    Q = Subspace.span(mats).q
    proj = np.eye(n * n) - Q @ Q.conj().T
    I = np.eye(n)
    blocks = [proj @ (np.kron(I, h.T) - np.kron(h, I)) @ T for h in mats]
    M = np.vstack(blocks)
    _, s, Vh = np.linalg.svd(M)
    cutoff = tol_rank * max(1.0, s[0] if s.size else 0.0)
    r = int(np.sum(s > cutoff))
    null = Vh[r:].conj().T
    return T.shape[1] - r, T @ null


def is_cartan(S, tol: float = 1e-9, tol_rank: float = TOL_RANK) -> Report:
    """Traceless, abelian, (n-1)-dimensional and self-normalizing in sl_n."""
    basis = S.basis if isinstance(S, CartanSubalgebra) else list(S)
    mats = [dense(h) for h in basis]
    n = mats[0].shape[0]
    rep = Report("cartan subalgebra")
    scale = max(1.0, max(float(np.max(np.abs(h))) for h in mats))
    for k, h in enumerate(mats):
        if abs(np.trace(h)) > tol * scale * n:
            rep.fail(f"basis element {k} is not traceless")
    worst = 0.0
    for a, b in itertools.combinations(range(len(mats)), 2):
        c = float(np.max(np.abs(mats[a] @ mats[b] - mats[b] @ mats[a])))
        worst = max(worst, c)
        if c > tol * scale * scale * n:
            rep.fail(f"basis elements {a} and {b} do not commute")
    rep.metrics["max_commutator"] = worst
    dim = subspace_rank(mats, tol_rank)
    rep.metrics["dimension"] = dim
    if dim != n - 1:
        rep.fail(f"dimension {dim} != n - 1 = {n - 1}")
    ndim, null = _normalizer_dimension(mats, n, tol_rank)
    rep.metrics["normalizer_dimension"] = ndim
    if ndim != dim:
        rep.fail(f"not self-normalizing: normalizer has dimension {ndim} > {dim}")
    else:
        sub = Subspace.span(mats, tol_rank)
        for k in range(null.shape[1]):
            if not subspace_contains(sub, null[:, k], 1e-6):
                rep.fail("normalizer is not contained in the subspace")
                break
    return rep


def is_dagger_closed(S, tol: float = 1e-9) -> bool:
    basis = S.basis if isinstance(S, CartanSubalgebra) else list(S)
    mats = [dense(h) for h in basis]
    sub = Subspace.span(mats)
    return all(subspace_contains(sub, h.conj().T, max(tol, 1e-8)) for h in mats)


def mubs_to_cartans(M: MubCollection, tol: float = 1e-9) -> list[CartanSubalgebra]:
    return [cartan_from_basis(B, tol) for B in M.bases]


def max_killing_pairing(C1: CartanSubalgebra, C2: CartanSubalgebra) -> float:
    return max(abs(killing(a, b)) for a in C1.basis for b in C2.basis)


def _hermitian_family(C: CartanSubalgebra) -> list[np.ndarray]:
    fam = []
    for h in C.dense_basis():
        for part in ((h + h.conj().T) / 2, (h - h.conj().T) / 2j):
            if np.max(np.abs(part)) > 1e-12:
                fam.append(part)
    return fam


def cartans_to_mubs(cartans: list[CartanSubalgebra], seed: int = 0, tol: float = 1e-9) -> MubCollection:
    """Common eigenbases of adjoint-closed, pairwise Killing-orthogonal Cartans."""
    if not cartans:
        raise ValueError("need at least one Cartan subalgebra")
    n = cartans[0].n
    for k, C in enumerate(cartans):
        if not is_dagger_closed(C, tol):
            raise NotDaggerClosed(f"component {k} is not closed under the adjoint")
        rep = is_cartan(C, tol)
        if not rep.ok:
            raise VerificationRequired(f"component {k}: {rep.failures[0]}")
    for a, b in itertools.combinations(range(len(cartans)), 2):
        k = max_killing_pairing(cartans[a], cartans[b])
        if k > 1e-8 * n:
            raise NotOrthogonal(f"components {a} and {b} have Killing pairing {k:.3g}")
    bases = [simultaneous_eigenbasis(_hermitian_family(C), seed=(seed, k), tol=tol) for k, C in enumerate(cartans)]
    return MubCollection(n, bases, "from-cartans")


def unitary_basis_of_cartan(C: CartanSubalgebra, seed: int = 0, tol: float = 1e-9) -> list[np.ndarray]:
    """n-1 traceless unitaries spanning an adjoint-closed Cartan subalgebra.

    In the common eigenbasis V these are the diagonal matrices built from the
    non-trivial rows of the order-n Fourier character table.
    """
    if not is_dagger_closed(C, tol):
        raise NotDaggerClosed("Cartan subalgebra is not closed under the adjoint")
    V = simultaneous_eigenbasis(_hermitian_family(C), seed=seed, tol=tol)
    F = fourier_matrix(C.n)
    return [(V * F[k][None, :]) @ V.conj().T for k in range(1, C.n)]


def verify_od(D: OrthogonalDecomposition, tol: float = 1e-8) -> Report:
    """n+1 Cartan components, pairwise Killing-orthogonal, spanning sl_n.

    A pairing counts as zero when |K(h, h')| <= tol * n over basis pairs.
    """
    n = D.n
    rep = Report("orthogonal decomposition")
    rep.metrics["components"] = len(D.cartans)
    if len(D.cartans) != n + 1:
        rep.fail(f"{len(D.cartans)} components, expected n + 1 = {n + 1}")
    for k, C in enumerate(D.cartans):
        rep.merge(is_cartan(C), prefix=f"component {k}: ")
    worst = 0.0
    for a, b in itertools.combinations(range(len(D.cartans)), 2):
        try:
            k = max_killing_pairing(D.cartans[a], D.cartans[b])
        except NotTraceless as exc:
            rep.fail(f"components {a}, {b}: {exc}")
            continue
        worst = max(worst, k)
        if k > tol * n:
            rep.fail(f"components {a} and {b} are not Killing-orthogonal ({k:.3g})")
    rep.metrics["max_killing_pairing"] = worst
    everything = [h for C in D.cartans for h in C.basis]
    r = subspace_rank(everything) if everything else 0
    rep.metrics["combined_rank"] = r
    if r != n * n - 1:
        rep.fail(f"combined rank {r} != n^2 - 1 = {n * n - 1}")
    return rep


def od_from_mubs(M: MubCollection) -> OrthogonalDecomposition:
    rep = verify_mubs(M)
    if not rep.ok:
        raise VerificationRequired("MUB collection does not verify")
    return OrthogonalDecomposition(M.n, mubs_to_cartans(M))
