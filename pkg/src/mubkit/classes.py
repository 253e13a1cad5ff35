"""Maximal commuting classes of trace-orthogonal unitaries.

Covers the standard partition of the Pauli basis for prime powers (one class
per line of the desarguesian spread) and an exhaustive search for the largest
partial partition of any nice error basis with abelian index group.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errorbases import UnitaryErrorBasis, _mult_table, pauli_basis, verify_nice
from .errors import Report, VerificationRequired
from .fields import ff_dual_basis, ff_make
from .linalg import commutator, dense, is_unitary
from .monomial import MonomialMatrix, exact_trace_gram, mono_trace, pauli


@dataclass(frozen=True)
class CommutingClass:
    n: int
    members: tuple
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(tuple(g) for g in self.labels))

    @property
    def exact(self) -> bool:
        return all(isinstance(U, MonomialMatrix) for U in self.members)


@dataclass(frozen=True)
class ClassPartition:
    n: int
    classes: tuple[CommutingClass, ...]
    verified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def mu(self) -> int:
        return len(self.classes)

    def verify(self, ambient: UnitaryErrorBasis | None = None, tol: float = 1e-9) -> "ClassPartition":
        """Return a copy marked verified, or raise VerificationRequired."""
        rep = verify_partition(self, ambient, tol)
        if not rep.ok:
            err = VerificationRequired("; ".join(rep.failures[:5]))
            err.report = rep
            raise err
        return replace(self, verified=True)


def _is_identity(U, tol: float) -> bool:
    if isinstance(U, MonomialMatrix):
        return U.is_identity()
    U = dense(U)
    return float(np.max(np.abs(U - np.eye(U.shape[0])))) <= tol


def _gram_ok(mats: Sequence, n: int, tol: float) -> np.ndarray:
    """Boolean matrix: pair (k, l) satisfies tr(U_k^dagger U_l) = n delta_kl."""
    if all(isinstance(U, MonomialMatrix) for U in mats):
        _, R = exact_trace_gram(mats)
        target = np.zeros_like(R)
        target[..., 0] = n * np.eye(len(mats), dtype=np.int64)
        return np.all(R == target, axis=2)
    V = np.stack([dense(U).reshape(-1) for U in mats])
    G = V.conj() @ V.T
    return np.abs(G - n * np.eye(len(mats))) <= tol * n


def _commute(A, B, tol: float) -> bool:
    if isinstance(A, MonomialMatrix) and isinstance(B, MonomialMatrix):
        return A @ B == B @ A
    return float(np.max(np.abs(commutator(A, B)))) <= tol


def verify_class(C: CommutingClass, ambient: UnitaryErrorBasis | None = None, tol: float = 1e-9) -> Report:
    rep = Report("commuting class")
    members = list(C.members)
    if len(members) != C.n:
        rep.fail(f"size {len(members)} != n = {C.n}")
    if not any(_is_identity(U, tol) for U in members):
        rep.fail("identity is not a member")
    for k, U in enumerate(members):
        if not isinstance(U, MonomialMatrix) and not is_unitary(U, tol):
            rep.fail(f"member {k} is not unitary")
    for a, b in itertools.combinations(range(len(members)), 2):
        if not _commute(members[a], members[b], tol):
            rep.fail(f"members {a} and {b} do not commute")
    bad = ~_gram_ok(members, C.n, tol)
    for a, b in zip(*np.nonzero(np.triu(bad))):
        rep.fail(f"members {a} and {b} are not trace-orthogonal")
    if ambient is not None and rep.ok:
        inside = set()
        for U in members:
            for k, V in enumerate(ambient.elements):
                if _same_up_to_phase(U, V, tol):
                    inside.add(k)
        for k, V in enumerate(ambient.elements):
            if k in inside:
                continue
            if all(_commute(V, U, tol) for U in members):
                rep.fail(f"not maximal: ambient element {k} commutes with the whole class")
    return rep


def _same_up_to_phase(A, B, tol: float) -> bool:
    if isinstance(A, MonomialMatrix) and isinstance(B, MonomialMatrix):
        return A.phase_relative_to(B) is not None
    A, B = dense(A), dense(B)
    n = A.shape[0]
    return abs(abs(np.vdot(A, B)) - n) <= tol * n


def verify_partition(P: ClassPartition, ambient: UnitaryErrorBasis | None = None, tol: float = 1e-9) -> Report:
    """Every class verifies, and the union (I once) is trace-orthogonal."""
    rep = Report("class partition")
    for i, C in enumerate(P.classes):
        if C.n != P.n:
            rep.fail(f"class {i} has dimension {C.n} != {P.n}")
            continue
        rep.merge(verify_class(C, ambient, tol), prefix=f"class {i}: ")
    union = []
    origin = []
    for i, C in enumerate(P.classes):
        for U in C.members:
            if not _is_identity(U, tol):
                union.append(U)
                origin.append(i)
    expected = P.mu * (P.n - 1)
    rep.metrics["mu"] = P.mu
    if len(union) != expected:
        rep.fail(f"{len(union)} non-identity members, expected mu(n-1) = {expected}")
    if union:
        ok = _gram_ok(union, P.n, tol)
        for a, b in zip(*np.nonzero(~ok)):
            if a < b and origin[a] != origin[b]:
                rep.fail(f"classes {origin[a]} and {origin[b]} share or overlap members")
    return rep


def standard_partition(p: int, e: int = 1) -> ClassPartition:
    """The n+1 classes of the Pauli basis indexed by the desarguesian spread.

    With q = n = p^e, class m (for m in GF(q)) is {U(x(a), z(m a)) : a in GF(q)}
    and class infinity is {U(0, z(b))}.  x() takes coordinates in the
    polynomial basis, z() in its trace-dual basis, so that the symplectic
    pairing of two members of a class is Tr(m a a') - Tr(m a' a) = 0.
    Class infinity comes first, then m in field-enumeration order.
    """
    F = ff_make(p, e)
    basis = F.polynomial_basis()
    dual = ff_dual_basis(F, basis)
    dual_coords = {}
    for y in itertools.product(range(p), repeat=e):
        c = F.zero
        for yj, dj in zip(y, dual):
            c = F.add(c, F.mul((yj,) + (0,) * (e - 1), dj))
        dual_coords[c] = y
    elems = list(F.elements())

    def member(x, z):
        return (tuple(x) + tuple(z)), pauli(p, e, (x, z))

    spread = [[member((0,) * e, dual_coords[b]) for b in elems]]
    for m in elems:
        spread.append([member(a, dual_coords[F.mul(m, a)]) for a in elems])
    n = p**e
    classes = [CommutingClass(n, [U for _, U in line], [g for g, _ in line]) for line in spread]
    return ClassPartition(n, classes).verify(pauli_basis(p, e))


@dataclass
class SearchResult:
    mu: int
    witness: ClassPartition | None
    exhausted: bool
    nodes: int
    candidates: int
    elapsed: float


class _Deadline(Exception):
    pass


def _isotropic_subgroups(mult: np.ndarray, commute: np.ndarray, n: int, identity: int, deadline: float | None) -> list[int]:
    """All order-n subgroups whose elements pairwise commute, as bitmasks."""
    N = mult.shape[0]
    start = 1 << identity
    seen = {start}
    frontier = [start]
    found = set()
    while frontier:
        nxt = []
        for K in frontier:
            if deadline is not None and time.monotonic() > deadline:
                raise _Deadline
            members = [i for i in range(N) if K >> i & 1]
            allowed = np.all(commute[:, members], axis=1)
            for g in np.nonzero(allowed)[0]:
                g = int(g)
                if K >> g & 1:
                    continue
                # close K under multiplication by g
                H = set(members)
                cur = list(members)
                while cur:
                    cur = [int(mult[h, g]) for h in cur if int(mult[h, g]) not in H]
                    H.update(cur)
                    if len(H) > n:
                        break
                if len(H) > n or n % len(H):
                    continue
                mask = sum(1 << h for h in H)
                if mask in seen:
                    continue
                seen.add(mask)
                if len(H) == n:
                    found.add(mask)
                else:
                    nxt.append(mask)
        frontier = nxt
    return sorted(found, key=lambda m: [i for i in range(N) if m >> i & 1])


def partition_search(basis: UnitaryErrorBasis, time_cap: float | None = None) -> SearchResult:
    """Largest family of isotropic order-n subgroups meeting pairwise in {e}.

    Each such subgroup lifts to a maximal commuting class of the nice basis.
    The clique search runs over candidates in canonical order, so the witness
    is the lexicographically least maximum family.  ``exhausted`` is True iff
    the whole tree was explored (or the n+1 ceiling was reached), in which
    case ``mu`` is the proven maximum for this basis.
    """
    t0 = time.monotonic()
    deadline = None if time_cap is None else t0 + time_cap
    cocycle = verify_nice(basis)
    n = basis.n
    N = len(basis.elements)
    identity = basis.position(basis.index_group.identity)
    commute = cocycle.commutation_matrix()
    mult = _mult_table(basis)
    id_bit = 1 << identity
    try:
        cands = _isotropic_subgroups(mult, commute, n, identity, deadline)
    except _Deadline:
        return SearchResult(0, None, False, 0, 0, time.monotonic() - t0)

    C = len(cands)
    compat = [[(cands[i] & cands[j]) == id_bit for j in range(C)] for i in range(C)]
    best: list[int] = []
    nodes = 0
    ceiling = n + 1
    exhausted = True

    def extend(chosen: list[int], pool: list[int]) -> bool:
        nonlocal best, nodes
        nodes += 1
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) >= ceiling:
                return True
        if deadline is not None and nodes % 256 == 0 and time.monotonic() > deadline:
            raise _Deadline
        for k, c in enumerate(pool):
            if len(chosen) + len(pool) - k <= len(best):
                return False
            rest = [d for d in pool[k + 1:] if compat[c][d]]
            if extend(chosen + [c], rest):
                return True
        return False

    try:
        extend([], list(range(C)))
    except _Deadline:
        exhausted = False

    classes = []
    for c in best:
        idx = [i for i in range(N) if cands[c] >> i & 1]
        classes.append(CommutingClass(n, [basis.elements[i] for i in idx], [basis.labels[i] for i in idx]))
    witness = ClassPartition(n, classes).verify(basis) if classes else None
    return SearchResult(len(best), witness, exhausted, nodes, C, time.monotonic() - t0)


def classes_to_cartan_bases(P: ClassPartition) -> list[list]:
    """Per class, n-1 traceless matrices spanning the class minus the identity.

    Traceless non-identity members are returned unchanged; any other member
    is replaced by its traceless part U - tr(U)/n I.
    """
    if not P.verified:
        raise VerificationRequired("partition must be verified first")
    out = []
    for C in P.classes:
        span = []
        for U in C.members:
            if _is_identity(U, 1e-9):
                continue
            if isinstance(U, MonomialMatrix) and mono_trace(U).is_zero():
                span.append(U)
                continue
            D = dense(U)
            tr = np.trace(D)
            span.append(U if abs(tr) == 0 else D - tr / P.n * np.eye(P.n))
        out.append(span)
    return out
