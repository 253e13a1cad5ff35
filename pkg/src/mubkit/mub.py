"""Mutually unbiased bases: construction, verification, Latin MUBs and monomiality."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classes import ClassPartition
from .errors import BadNet, NotHadamard, Report, VerificationRequired, ZeroEntry
from .fields import AbelianGroupSpec, ParallelClass, dephase, is_character_table
from .linalg import dense, is_unitary, simultaneous_eigenbasis

PROVENANCES = ("pauli", "latin", "imported", "from-cartans")


@dataclass
class MubCollection:
    """Bases of C^n stored as unitaries whose columns are the basis vectors."""

    n: int
    bases: list[np.ndarray]
    provenance: str = "imported"

    def __post_init__(self):
        self.bases = [np.asarray(B, dtype=complex) for B in self.bases]
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def mu(self) -> int:
        return len(self.bases)


def mubs_from_classes(P: ClassPartition, seed: int = 0) -> MubCollection:
    """Common eigenbases of the classes of a verified partition."""
    if not P.verified:
        raise VerificationRequired("partition must be verified first")
    bases = [simultaneous_eigenbasis(C.members, seed=(seed, k)) for k, C in enumerate(P.classes)]
    return MubCollection(P.n, bases, "pauli")


def verify_mubs(M: MubCollection, tol: float = 1e-9) -> Report:
    rep = Report("mutually unbiased bases")
    n = M.n
    rep.metrics["mu"] = M.mu
    if M.mu > n + 1:
        rep.fail(f"{M.mu} bases exceed the n+1 = {n + 1} ceiling")
    for i, B in enumerate(M.bases):
        if B.shape != (n, n):
            rep.fail(f"basis {i} has shape {B.shape}, expected ({n}, {n})")
            return rep
        if not is_unitary(B, tol):
            rep.fail(f"basis {i} is not unitary")
    worst = 0.0
    worst_pair = None
    for i, j in itertools.combinations(range(M.mu), 2):
        G = M.bases[i].conj().T @ M.bases[j]
        dev = float(np.max(np.abs(np.abs(G) ** 2 - 1.0 / n)))
        if dev > worst or worst_pair is None:
            worst, worst_pair = dev, (i, j)
        if dev > tol:
            rep.fail(f"bases {i} and {j} are biased (deviation {dev:.3g})")
    rep.metrics["max_deviation"] = worst
    rep.metrics["worst_pair"] = worst_pair
    return rep


def _check_net(classes: Sequence[ParallelClass]) -> None:
    s = classes[0].s
    for c in classes:
        if c.s != s:
            raise BadNet("parallel classes have different orders")
    for a, b in itertools.combinations(classes, 2):
        for x in a.blocks:
            for y in b.blocks:
                if len(set(x) & set(y)) != 1:
                    raise BadNet("blocks from distinct classes must meet in exactly one point")


def latin_mubs(classes: Sequence[ParallelClass], H: np.ndarray, tol: float = 1e-9) -> MubCollection:
    """One basis of C^(s^2) per parallel class of a net.

    Column (b, c) of the basis for a class is supported on block b: its entry
    at the k-th point of the block (points in increasing order) is
    H[k, c] / sqrt(s).  Blocks keep the order they have in the class.
    """
    if not classes:
        raise BadNet("need at least one parallel class")
    H = np.asarray(H, dtype=complex)
    s = classes[0].s
    if H.shape != (s, s) or not is_unitary(H / np.sqrt(s), tol):
        raise NotHadamard("H / sqrt(s) is not unitary")
    _check_net(classes)
    n = s * s
    bases = []
    for pc in classes:
        B = np.zeros((n, n), dtype=complex)
        for b, block in enumerate(pc.blocks):
            pts = sorted(block)
            for c in range(s):
                B[pts, b * s + c] = H[:, c] / np.sqrt(s)
        bases.append(B)
    return MubCollection(n, bases, "latin")


@dataclass
class StandardizedHadamard:
    n: int
    matrix: np.ndarray


def standardized_hadamard(Bi: np.ndarray, Bj: np.ndarray, tol: float = 1e-8) -> StandardizedHadamard:
    """sqrt(n) Bi^dagger Bj, dephased column-first so row 0 and column 0 are ones."""
    Bi, Bj = dense(Bi), dense(Bj)
    n = Bi.shape[0]
    S = np.sqrt(n) * (Bi.conj().T @ Bj)
    dev = float(np.max(np.abs(np.abs(S) - 1)))
    if dev > tol:
        raise ZeroEntry(f"entries are not unimodular (deviation {dev:.3g}); bases are not unbiased")
    return StandardizedHadamard(n, dephase(S))


@dataclass
class MonomialityResult:
    monomial: bool
    groups: dict[tuple[int, int], AbelianGroupSpec | None] = field(default_factory=dict)

    def __bool__(self):
        return self.monomial


def is_monomial_collection(M: MubCollection, tol: float = 1e-8) -> MonomialityResult:
    """Every pairwise standardized Hadamard must be an abelian character table."""
    groups = {}
    for i, j in itertools.combinations(range(M.mu), 2):
        H = standardized_hadamard(M.bases[i], M.bases[j], tol).matrix
        groups[(i, j)] = is_character_table(H, tol)
    return MonomialityResult(all(g is not None for g in groups.values()), groups)


def basis_match_score(A: np.ndarray, B: np.ndarray, tol: float = 1e-8) -> float:
    """Fraction of columns of A matched one-to-one to a column of B up to phase."""
    A, B = dense(A), dense(B)
    overlap = np.abs(A.conj().T @ B)
    hits = overlap >= 1 - tol
    n = A.shape[1]
    matched = 0
    used = set()
    for r in range(n):
        cols = [c for c in np.nonzero(hits[r])[0] if c not in used]
        if len(cols) == 1 and hits[r].sum() == 1:
            used.add(int(cols[0]))
            matched += 1
    return matched / n


def same_basis(A: np.ndarray, B: np.ndarray, tol: float = 1e-8) -> bool:
    return A.shape == B.shape and basis_match_score(A, B, tol) == 1.0
