"""Dense complex linear algebra for verification and eigenbasis extraction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateAfterRetries,
    DimensionMismatch,
    NotCommuting,
    NotNormal,
)

TOL = 1e-9
TOL_RANK = 1e-8
GAP_MIN = 1e-6
MAX_REDRAWS = 32


def dense(M) -> np.ndarray:
    """Complex ndarray view of a dense or exact matrix."""
    if hasattr(M, "to_dense"):
        return M.to_dense()
    return np.asarray(M, dtype=complex)


def _square_pair(A, B) -> tuple[np.ndarray, np.ndarray]:
    A, B = dense(A), dense(B)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape}")
    return A, B


def trace_inner(A, B) -> complex:
    """tr(A^dagger B), conjugate-linear in A."""
    A, B = _square_pair(A, B)
    return complex(np.vdot(A, B))


def commutator(A, B) -> np.ndarray:
    A, B = _square_pair(A, B)
    return A @ B - B @ A


def _maxabs(M: np.ndarray) -> float:
    return float(np.max(np.abs(M))) if M.size else 0.0


def is_unitary(M, tol: float = TOL) -> bool:
    M = dense(M)
    return _maxabs(M.conj().T @ M - np.eye(M.shape[0])) <= tol


def is_traceless(M, tol: float = TOL) -> bool:
    return abs(np.trace(dense(M))) <= tol


def is_normal(M, tol: float = TOL) -> bool:
    M = dense(M)
    H = M.conj().T
    return _maxabs(M @ H - H @ M) <= tol


def is_hermitian(M, tol: float = TOL) -> bool:
    M = dense(M)
    return _maxabs(M - M.conj().T) <= tol


def equal_up_to_phase(A, B, tol: float = TOL) -> complex | None:
    """Return c with |c| = 1 and A = c B (within tol), or None.

    c is estimated as tr(B^dagger A) / n, which is exact for unitary B.
    """
    A, B = _square_pair(A, B)
    n = A.shape[0]
    G = B.conj().T @ A
    c = np.trace(G) / n
    if abs(abs(c) - 1) > tol:
        return None
    if _maxabs(A - c * B) > tol:
        return None
    return complex(c)


def _normalize_columns(V: np.ndarray) -> np.ndarray:
    """Fix each column's phase: the first entry of maximal modulus is made real positive."""
    V = V.copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        mags = np.abs(col)
        k = int(np.argmax(mags >= mags.max() - 1e-9))
        V[:, j] = col * (abs(col[k]) / col[k])
    return V


def _clusters(w: np.ndarray, gap: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] < gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _random_hermitian(mats: Sequence[np.ndarray], rng: np.random.Generator) -> np.ndarray:
    n = mats[0].shape[0]
    H = np.zeros((n, n), dtype=complex)
    for M in mats:
        c, d = rng.standard_normal(2)
        Mh = M.conj().T
        H += c * (M + Mh) + d * 1j * (M - Mh)
    return (H + H.conj().T) / 2


def _diagonalize(mats: list[np.ndarray], rng: np.random.Generator, tol: float, depth: int) -> np.ndarray:
    n = mats[0].shape[0]
    best = None
    for _ in range(MAX_REDRAWS + 1):
        w, V = np.linalg.eigh(_random_hermitian(mats, rng))
        g = float(np.min(np.diff(w))) if n > 1 else np.inf
        if best is None or g > best[0]:
            best = (g, w, V)
        if g >= GAP_MIN:
            return V
    _, w, V = best
    out = V.copy()
    for idx in _clusters(w, GAP_MIN):
        if len(idx) == 1:
            continue
        W = V[:, idx]
        sub = [W.conj().T @ M @ W for M in mats]
        scalar = all(_maxabs(S - np.trace(S) / len(idx) * np.eye(len(idx))) <= 10 * tol * max(1.0, _maxabs(S)) for S in sub)
        if scalar:
            continue  # a genuine joint eigenspace; any orthonormal basis will do
        if len(idx) == n or depth > n:
            raise DegenerateAfterRetries(
                f"eigenvalue cluster of size {len(idx)} did not split after {MAX_REDRAWS} redraws"
            )
        out[:, idx] = W @ _diagonalize(sub, rng, tol, depth + 1)
    return out


def simultaneous_eigenbasis(mats, seed=0, tol: float = TOL) -> np.ndarray:
    """Common eigenbasis of a commuting family of normal matrices.

    Parameters
    ----------
    mats : sequence of square matrices (dense or exact)
        Must pairwise commute and be normal, both within ``tol``.
    seed : int, sequence of ints, or numpy Generator
        Drives the random Hermitian combination whose eigenvectors are used.
    tol : float
        Predicate tolerance.

    Returns
    -------
    V : ndarray
        Unitary whose columns are common eigenvectors, ordered by eigenvalue
        of the combined Hermitian matrix, each column's phase normalized.
    """
    mats = [dense(M) for M in mats]
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].shape[0]
    scale = max(1.0, max(_maxabs(M) for M in mats))
    for i, A in enumerate(mats):
        if A.shape != (n, n):
            raise DimensionMismatch("matrices differ in shape")
        if not is_normal(A, tol * scale * scale):
            raise NotNormal(f"matrix {i} is not normal")
        for j in range(i):
            if _maxabs(commutator(A, mats[j])) > tol * scale * scale:
                raise NotCommuting(f"matrices {j} and {i} do not commute")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    V = _diagonalize(mats, rng, tol, 0)
    # re-orthonormalize: cluster-wise rotations keep V unitary up to rounding
    Q, R = np.linalg.qr(V)
    V = Q * (np.diag(R) / np.abs(np.diag(R)))[None, :]
    V = _normalize_columns(V)
    for i, M in enumerate(mats):
        D = V.conj().T @ M @ V
        off = _maxabs(D - np.diag(np.diag(D)))
        if off > 10 * tol * max(1.0, np.linalg.norm(M, 2)):
            raise DegenerateAfterRetries(f"matrix {i} is not diagonalized (off-diagonal {off:.3g})")
    return V


@dataclass
class Subspace:
    """Complex span of flattened matrices or vectors.

    ``q`` holds an orthonormal basis (columns) of the span; ``vectors`` keeps
    the original spanning set, each flattened to the ambient dimension.
    """

    dim: int
    vectors: np.ndarray
    q: np.ndarray

    @classmethod
    def span(cls, items, tol_rank: float = TOL_RANK) -> "Subspace":
        vecs = [dense(v).reshape(-1) for v in items]
        if not vecs:
            raise ValueError("empty spanning set; pass ambient dimension via Subspace.zero")
        V = np.stack(vecs, axis=1)
        return cls(V.shape[0], V, _orthonormal_basis(V, tol_rank))

    @classmethod
    def zero(cls, dim: int) -> "Subspace":
        return cls(dim, np.zeros((dim, 0), complex), np.zeros((dim, 0), complex))

    @property
    def rank(self) -> int:
        return self.q.shape[1]

    def contains(self, v, tol: float = TOL) -> bool:
        return subspace_contains(self, v, tol)

    def project(self, v) -> np.ndarray:
        v = dense(v).reshape(-1)
        return self.q @ (self.q.conj().T @ v)


def _orthonormal_basis(V: np.ndarray, tol_rank: float) -> np.ndarray:
    if V.shape[1] == 0:
        return V
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return U[:, :0]
    r = int(np.sum(s > tol_rank * s[0]))
    return U[:, :r]


def subspace_contains(S: Subspace, v, tol: float = TOL) -> bool:
    v = dense(v).reshape(-1)
    if v.shape[0] != S.dim:
        raise DimensionMismatch(f"vector of length {v.shape[0]} in ambient dimension {S.dim}")
    nv = np.linalg.norm(v)
    if nv == 0:
        return True
    return float(np.linalg.norm(v - S.project(v))) <= tol * nv


def subspace_rank(vectors, tol_rank: float = TOL_RANK) -> int:
    vecs = [dense(v).reshape(-1) for v in vectors]
    if not vecs:
        return 0
    s = np.linalg.svd(np.stack(vecs, axis=1), compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol_rank * s[0]))


def fourier_matrix(n: int) -> np.ndarray:
    """Unnormalized DFT matrix with entries exp(2 pi i jk / n)."""
    j = np.arange(n)
    return np.exp(2j * np.pi * (np.outer(j, j) % n) / n)
