"""Exact monomial matrices over roots of unity and generalized Pauli operators.

A ``MonomialMatrix`` sends basis vector j to ``w**exps[j]`` times basis
vector ``perm[j]``, where ``w = exp(2 pi i / order)``.  Products, adjoints
and traces are computed exactly; traces come back as a ``CyclotomicSum``
whose vanishing is decided by reduction modulo the cyclotomic polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NonPrime
from .fields import is_prime

ROOT_SNAP_CAP = 240


def root_values(order: int, exps) -> np.ndarray:
    """exp(2 pi i k / order), exact at the quarter turns 1, i, -1, -i."""
    k = np.asarray(exps, dtype=np.int64) % order
    vals = np.exp(2j * np.pi * k / order)
    quarter = (4 * k) % order == 0
    vals[quarter] = np.array([1, 1j, -1, -1j])[(4 * k[quarter]) // order]
    return vals


# -- cyclotomic sums ---------------------------------------------------------

def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (b monic), least-significant first."""
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        q[i - db] = c
        if c:
            for k in range(db + 1):
                a[i - db + k] -= c * b[k]
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of the m-th cyclotomic polynomial, constant term first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


@dataclass(frozen=True)
class CyclotomicSum:
    """sum_k coeffs[k] * w**k with w a primitive ``order``-th root of unity."""

    order: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_exponents(cls, order: int, exps: Sequence[int]) -> "CyclotomicSum":
        c = [0] * order
        for k in exps:
            c[k % order] += 1
        return cls(order, tuple(c))

    def reduced(self) -> tuple[int, ...]:
        """Canonical remainder modulo the cyclotomic polynomial of ``order``."""
        phi = cyclotomic_poly(self.order)
        d = len(phi) - 1
        r = list(self.coeffs)
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i]
            if c:
                for k in range(d + 1):
                    r[i - d + k] -= c * phi[k]
        r = r[:d]
        while r and r[-1] == 0:
            r.pop()
        return tuple(r)

    def is_zero(self) -> bool:
        return not self.reduced()

    def as_integer(self) -> int | None:
        r = self.reduced()
        if not r:
            return 0
        return r[0] if len(r) == 1 else None

    @property
    def value(self) -> complex:
        r = self.reduced()
        if not r:
            return 0j
        w = root_values(self.order, np.arange(len(r)))
        return complex(np.dot(r, w))

    def __complex__(self):
        return self.value


# -- monomial matrices ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MonomialMatrix:
    """Entry (perm[j], j) equals exp(2 pi i exps[j] / order); all others are zero."""

    n: int
    order: int
    perm: tuple[int, ...]
    exps: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(x) for x in self.perm)
        exps = tuple(int(x) % self.order for x in self.exps)
        if len(perm) != self.n or len(exps) != self.n:
            raise DimensionMismatch("perm/exps length differs from n")
        if sorted(perm) != list(range(self.n)):
            raise ValueError(f"{perm} is not a permutation")
        if self.order < 1:
            raise ValueError("root order must be positive")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "exps", exps)

    @classmethod
    def identity(cls, n: int) -> "MonomialMatrix":
        return cls(n, 1, tuple(range(n)), (0,) * n)

    @classmethod
    def diagonal(cls, order: int, exps: Sequence[int]) -> "MonomialMatrix":
        return cls(len(exps), order, tuple(range(len(exps))), tuple(exps))

    def canonical(self) -> "MonomialMatrix":
        """Same matrix with the smallest root order that expresses it."""
        g = math.gcd(self.order, *self.exps)
        if g == 1:
            return self
        return MonomialMatrix(self.n, self.order // g, self.perm, tuple(k // g for k in self.exps))

    def with_order(self, m: int) -> "MonomialMatrix":
        c = self.canonical()
        if m % c.order:
            raise ValueError(f"order {m} is not a multiple of {c.order}")
        f = m // c.order
        return MonomialMatrix(self.n, m, c.perm, tuple(k * f for k in c.exps))

    def _key(self):
        c = self.canonical()
        return (c.n, c.order, c.perm, c.exps)

    def __eq__(self, other):
        if not isinstance(other, MonomialMatrix):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        return mono_mul(self, other)

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=complex)
        m[list(self.perm), range(self.n)] = root_values(self.order, self.exps)
        return m

    def adjoint(self) -> "MonomialMatrix":
        return mono_adjoint(self)

    def trace(self) -> CyclotomicSum:
        return mono_trace(self)

    def power(self, k: int) -> "MonomialMatrix":
        if k < 0:
            return self.adjoint().power(-k)
        out = MonomialMatrix.identity(self.n)
        for _ in range(k):
            out = mono_mul(out, self)
        return out

    def phase_relative_to(self, other: "MonomialMatrix") -> tuple[int, int] | None:
        """``(k, m)`` with self == exp(2 pi i k/m) * other, or None."""
        if self.n != other.n or self.perm != other.perm:
            return None
        m = math.lcm(self.order, other.order)
        a = self.with_order(m).exps
        b = other.with_order(m).exps
        d = {(x - y) % m for x, y in zip(a, b)}
        if len(d) != 1:
            return None
        return d.pop(), m

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and not any(self.exps)

    def to_json(self) -> dict:
        return {"n": self.n, "order": self.order, "perm": list(self.perm), "exps": list(self.exps)}

    @classmethod
    def from_json(cls, obj: dict) -> "MonomialMatrix":
        return cls(int(obj["n"]), int(obj["order"]), tuple(obj["perm"]), tuple(obj["exps"]))

    def __repr__(self):
        return f"MonomialMatrix(n={self.n}, order={self.order}, perm={self.perm}, exps={self.exps})"


def mono_mul(A: MonomialMatrix, B: MonomialMatrix) -> MonomialMatrix:
    if A.n != B.n:
        raise DimensionMismatch(f"{A.n} != {B.n}")
    m = math.lcm(A.order, B.order)
    fa, fb = m // A.order, m // B.order
    perm = tuple(A.perm[B.perm[j]] for j in range(A.n))
    exps = tuple(B.exps[j] * fb + A.exps[B.perm[j]] * fa for j in range(A.n))
    return MonomialMatrix(A.n, m, perm, exps)


def mono_adjoint(A: MonomialMatrix) -> MonomialMatrix:
    perm = [0] * A.n
    exps = [0] * A.n
    for j, i in enumerate(A.perm):
        # entry (i, j) = w^k becomes entry (j, i) = w^-k
        perm[i] = j
        exps[i] = -A.exps[j]
    return MonomialMatrix(A.n, A.order, tuple(perm), tuple(exps))


def mono_trace(A: MonomialMatrix) -> CyclotomicSum:
    return CyclotomicSum.from_exponents(
        A.order, [A.exps[j] for j in range(A.n) if A.perm[j] == j]
    )


def mono_trace_inner(A: MonomialMatrix, B: MonomialMatrix) -> CyclotomicSum:
    """Exact tr(A^dagger B)."""
    return mono_trace(mono_mul(mono_adjoint(A), B))


def commutes(A: MonomialMatrix, B: MonomialMatrix) -> bool:
    return mono_mul(A, B) == mono_mul(B, A)


# -- generalized Pauli operators ----------------------------------------------

@dataclass(frozen=True)
class PauliLabel:
    p: int
    e: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        x = tuple(int(v) % self.p for v in self.x)
        z = tuple(int(v) % self.p for v in self.z)
        if len(x) != self.e or len(z) != self.e:
            raise DimensionMismatch(f"label vectors must have length {self.e}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    @property
    def group_element(self) -> tuple[int, ...]:
        return self.x + self.z


def _shift_mult(q: int, e: int, x: Sequence[int], z: Sequence[int], order: int) -> MonomialMatrix:
    n = q**e
    perm = []
    exps = []
    for j in range(n):
        digits = []
        r = j
        for _ in range(e):
            r, d = divmod(r, q)
            digits.append(d)
        digits.reverse()  # big-endian: digits[0] is the most significant
        image = 0
        phase = 0
        for t in range(e):
            image = image * q + (digits[t] - x[t]) % q
            phase += z[t] * digits[t]
        perm.append(image)
        exps.append(phase * (order // q))
    return MonomialMatrix(n, order, tuple(perm), tuple(exps))


def pauli(p: int, e: int, label: PauliLabel | tuple) -> MonomialMatrix:
    """X^x1 Z^z1 (x) ... (x) X^xe Z^ze with X|k+1> = |k>, Z|k> = w^k |k>.

    Tensor factor 1 acts on the most significant base-p digit of the index.
    ``label`` may be a ``PauliLabel`` or an ``(x, z)`` pair of sequences.
    """
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if not isinstance(label, PauliLabel):
        x, z = label
        label = PauliLabel(p, e, tuple(x), tuple(z))
    if (label.p, label.e) != (p, e):
        raise DimensionMismatch("label does not match (p, e)")
    return _shift_mult(p, e, label.x, label.z, p)


def composite_pauli(n: int, x: int, z: int) -> MonomialMatrix:
    """X^x Z^z in dimension n with w = exp(2 pi i / n)."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    return _shift_mult(n, 1, (x % n,), (z % n,), n)


def is_monomial_dense(M: np.ndarray, tol: float = 1e-8, cap: int = ROOT_SNAP_CAP) -> MonomialMatrix | None:
    """Recognize a dense matrix as monomial with root-of-unity entries."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return None
    n = M.shape[0]
    mag = np.abs(M)
    nz = mag > tol
    if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
        return None
    perm = np.argmax(nz, axis=0)
    vals = M[perm, np.arange(n)]
    if np.max(np.abs(np.abs(vals) - 1)) > tol:
        return None
    # smallest root order m <= cap matching each entry
    theta = np.angle(vals) / (2 * np.pi)
    ms = np.arange(1, cap + 1)
    K = np.round(theta[:, None] * ms[None, :])
    err = np.abs(vals[:, None] - np.exp(2j * np.pi * K / ms[None, :]))
    good = err <= tol
    if not np.all(good.any(axis=1)):
        return None
    first = np.argmax(good, axis=1)
    orders = ms[first]
    L = math.lcm(*(int(m) for m in orders))
    exps = [int(K[j, first[j]]) % int(orders[j]) * (L // int(orders[j])) for j in range(n)]
    return MonomialMatrix(n, L, tuple(int(i) for i in perm), tuple(exps)).canonical()


def stack_monomials(mats: Sequence[MonomialMatrix]) -> tuple[int, np.ndarray, np.ndarray]:
    """Common root order m and (N, n) arrays of perms and exponents at order m."""
    m = math.lcm(*(A.canonical().order for A in mats))
    P = np.array([A.perm for A in mats], dtype=np.int64)
    X = np.array([A.with_order(m).exps for A in mats], dtype=np.int64)
    return m, P, X


def reduce_cyclotomic(C: np.ndarray, m: int) -> np.ndarray:
    """Vectorized remainder of coefficient arrays (last axis = power of w) mod Phi_m."""
    phi = np.array(cyclotomic_poly(m), dtype=np.int64)
    d = len(phi) - 1
    C = np.array(C, dtype=np.int64)
    for i in range(C.shape[-1] - 1, d - 1, -1):
        c = C[..., i].copy()
        C[..., i - d:i + 1] -= c[..., None] * phi
    return C[..., :d]


def exact_trace_gram(mats: Sequence[MonomialMatrix]) -> tuple[int, np.ndarray]:
    """Exact tr(A_k^dagger A_l) for all pairs, reduced mod Phi_m.

    Returns ``(m, R)`` where ``R[k, l]`` holds the remainder coefficients;
    the trace equals the integer c iff ``R[k, l] == (c, 0, ..., 0)``.
    """
    m, P, X = stack_monomials(mats)
    match = P[:, None, :] == P[None, :, :]
    diff = (X[None, :, :] - X[:, None, :]) % m
    C = np.zeros(match.shape[:2] + (m,), dtype=np.int64)
    for r in range(m):
        C[..., r] = np.sum(match & (diff == r), axis=2)
    return m, reduce_cyclotomic(C, m)
