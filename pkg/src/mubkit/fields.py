"""Finite fields, abelian groups with their character tables, MOLS and nets.

Field elements are coefficient tuples over Z_p, least-significant coefficient
first.  ``FiniteField.to_int`` reads the tuple as base-p digits, which is the
canonical enumeration order used everywhere else in the package.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NonPrime,
    NotOrthogonal,
    NotPrimePower,
    NotUnimodular,
    SingularGram,
    SizeCapExceeded,
)

FIELD_SIZE_CAP = 2**20

Element = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division, ``{p: v_p(n)}``."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(s: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``s == p**e`` or raise NotPrimePower."""
    if s < 2:
        raise NotPrimePower(f"{s} is not a prime power")
    f = factorize(s)
    if len(f) != 1:
        raise NotPrimePower(f"{s} is not a prime power")
    (p, e), = f.items()
    return p, e


# -- polynomial helpers over Z_p (lists, least-significant first) ------------

def _poly_rem(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    r = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            for k in range(dm + 1):
                r[i - dm + k] = (r[i - dm + k] - c * m[k]) % p
    return r[:dm] + [0] * max(0, dm - len(r))


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    deg = len(poly) - 1
    if deg <= 1:
        return True
    # trial division by every monic polynomial of degree 1..deg//2
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_rem(poly, divisor, p)):
                return False
    return True


def _inverse_mod_p(mat: list[list[int]], p: int) -> list[list[int]]:
    n = len(mat)
    a = [[x % p for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise SingularGram("trace Gram matrix is singular over Z_p")
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], -1, p)
        a[col] = [x * inv % p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [(x - c * y) % p for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class FiniteField:
    """GF(p^e) as Z_p[x] / (modulus).

    ``modulus`` is stored least-significant coefficient first and includes
    the leading 1, so it has length ``e + 1``.
    """

    p: int
    e: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def zero(self) -> Element:
        return (0,) * self.e

    @property
    def one(self) -> Element:
        return (1,) + (0,) * (self.e - 1)

    def from_int(self, k: int) -> Element:
        digits = []
        for _ in range(self.e):
            k, r = divmod(k, self.p)
            digits.append(r)
        return tuple(digits)

    def to_int(self, a: Element) -> int:
        return sum(c * self.p**i for i, c in enumerate(a))

    def elements(self) -> Iterator[Element]:
        for k in range(self.q):
            yield self.from_int(k)

    def check(self, a: Element) -> Element:
        a = tuple(int(c) for c in a)
        if len(a) != self.e or any(not 0 <= c < self.p for c in a):
            raise ValueError(f"{a} is not an element of GF({self.p}^{self.e})")
        return a

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a: Element) -> Element:
        return tuple(-x % self.p for x in a)

    def mul(self, a: Element, b: Element) -> Element:
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return tuple(_poly_rem(prod, self.modulus, self.p))

    def pow(self, a: Element, k: int) -> Element:
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: Element) -> Element:
        if not any(a):
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: Element) -> Element:
        return self.pow(a, self.p)

    def trace(self, a: Element) -> int:
        """Absolute trace a + a^p + ... + a^(p^(e-1)), as an integer mod p."""
        total, cur = self.zero, a
        for _ in range(self.e):
            total = self.add(total, cur)
            cur = self.frobenius(cur)
        if any(total[1:]):
            raise ArithmeticError("trace left the prime field; modulus is not irreducible")
        return total[0]

    def multiplicative_order(self, a: Element) -> int:
        n = self.q - 1
        order = n
        for r in factorize(n):
            while order % r == 0 and self.pow(a, order // r) == self.one:
                order //= r
        return order

    @cached_property
    def generator(self) -> Element:
        for k in range(1, self.q):
            a = self.from_int(k)
            if self.multiplicative_order(a) == self.q - 1:
                return a
        raise ArithmeticError("no primitive element found")

    def polynomial_basis(self) -> list[Element]:
        """The basis 1, x, ..., x^(e-1) of GF(p^e) over Z_p."""
        return [tuple(int(i == j) for j in range(self.e)) for i in range(self.e)]


def ff_make(p: int, e: int, cap: int = FIELD_SIZE_CAP) -> FiniteField:
    """Build GF(p^e) using the lexicographically smallest monic irreducible.

    Polynomials are ordered by their coefficient list from the leading term
    down, so for (3, 2) the scan visits x^2, x^2+1, ... and stops at x^2+1.
    """
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p**e > cap:
        raise SizeCapExceeded(f"field size {p}^{e} exceeds cap {cap}")
    # counting with c_0 as the fastest digit is lex order on (c_{e-1}, ..., c_0)
    for code in range(p**e):
        low = []
        for _ in range(e):
            code, r = divmod(code, p)
            low.append(r)
        poly = tuple(low) + (1,)
        if _is_irreducible(poly, p):
            return FiniteField(p, e, poly)
    raise ArithmeticError(f"no irreducible polynomial of degree {e} over Z_{p}")


def ff_trace(F: FiniteField, a: Element) -> int:
    return F.trace(F.check(a))


def ff_dual_basis(F: FiniteField, basis: Sequence[Element]) -> list[Element]:
    """Trace-dual basis: ``Tr(basis[i] * dual[j]) == delta_ij``."""
    basis = [F.check(b) for b in basis]
    if len(basis) != F.e:
        raise SingularGram(f"need {F.e} basis elements, got {len(basis)}")
    gram = [[F.trace(F.mul(bi, bj)) for bj in basis] for bi in basis]
    ginv = _inverse_mod_p(gram, F.p)
    dual = []
    for j in range(F.e):
        d = F.zero
        for k, bk in enumerate(basis):
            c = ginv[k][j]
            if c:
                d = F.add(d, F.mul((c,) + (0,) * (F.e - 1), bk))
        dual.append(d)
    return dual


# -- Latin squares and nets --------------------------------------------------

@dataclass(frozen=True)
class LatinSquare:
    s: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        full = set(range(self.s))
        if len(self.cells) != self.s or any(len(r) != self.s for r in self.cells):
            raise ValueError("Latin square has the wrong shape")
        for r in self.cells:
            if set(r) != full:
                raise ValueError("row is not a permutation")
        for c in zip(*self.cells):
            if set(c) != full:
                raise ValueError("column is not a permutation")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "LatinSquare":
        cells = tuple(tuple(int(x) for x in r) for r in rows)
        return cls(len(cells), cells)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.cells]


def are_orthogonal(a: LatinSquare, b: LatinSquare) -> bool:
    if a.s != b.s:
        return False
    pairs = {(a.cells[i][j], b.cells[i][j]) for i in range(a.s) for j in range(a.s)}
    return len(pairs) == a.s * a.s


def mols_from_field(s: int) -> list[LatinSquare]:
    """The s-1 squares L_a(i, j) = a*i + j over GF(s), a != 0."""
    p, e = prime_power(s)
    F = ff_make(p, e)
    elems = list(F.elements())
    squares = []
    for a in elems[1:]:
        rows = [[F.to_int(F.add(F.mul(a, i), j)) for j in elems] for i in elems]
        squares.append(LatinSquare.from_rows(rows))
    return squares


@dataclass(frozen=True)
class ParallelClass:
    s: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        pts = sorted(p for b in self.blocks for p in b)
        if len(self.blocks) != self.s or any(len(b) != self.s for b in self.blocks):
            raise ValueError("parallel class must have s blocks of size s")
        if pts != list(range(self.s * self.s)):
            raise ValueError("blocks do not partition the point set")

    def incidence(self) -> np.ndarray:
        m = np.zeros((self.s * self.s, self.s), dtype=int)
        for b, block in enumerate(self.blocks):
            m[list(block), b] = 1
        return m

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def net_parallel_classes(mols: Sequence[LatinSquare], s: int | None = None) -> list[ParallelClass]:
    """Rows, columns, then the level sets of each square; point (i, j) is s*i + j."""
    if s is None:
        if not mols:
            raise ValueError("order s is required when no squares are given")
        s = mols[0].s
    if any(L.s != s for L in mols):
        raise NotOrthogonal("squares have different orders")
    for a, b in itertools.combinations(mols, 2):
        if not are_orthogonal(a, b):
            raise NotOrthogonal("squares are not mutually orthogonal")
    classes = [
        ParallelClass(s, tuple(tuple(s * i + j for j in range(s)) for i in range(s))),
        ParallelClass(s, tuple(tuple(s * i + j for i in range(s)) for j in range(s))),
    ]
    for L in mols:
        blocks = [[] for _ in range(s)]
        for i in range(s):
            for j in range(s):
                blocks[L.cells[i][j]].append(s * i + j)
        classes.append(ParallelClass(s, tuple(tuple(b) for b in blocks)))
    return classes


# -- abelian groups and character tables -------------------------------------

@dataclass(frozen=True)
class AbelianGroupSpec:
    """Z_{m_1} x ... x Z_{m_k}; elements are residue tuples."""

    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(m) for m in self.factors))
        if any(m < 1 for m in self.factors):
            raise ValueError("cyclic orders must be positive")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.factors, 1)

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.factors)))

    def add(self, g, h) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(g, h, self.factors))

    def neg(self, g) -> tuple[int, ...]:
        return tuple(-a % m for a, m in zip(g, self.factors))

    def index(self, g) -> int:
        k = 0
        for a, m in zip(g, self.factors):
            k = k * m + a % m
        return k

    def element_order(self, g) -> int:
        return reduce(math.lcm, (m // math.gcd(a, m) for a, m in zip(g, self.factors)), 1)

    def canonical(self) -> tuple[int, ...]:
        """Primary decomposition: sorted prime-power cyclic orders."""
        out = []
        for m in self.factors:
            out.extend(p**v for p, v in factorize(m).items())
        return tuple(sorted(out))

    def isomorphic(self, other: "AbelianGroupSpec") -> bool:
        return self.canonical() == other.canonical()

    def __str__(self):
        return " x ".join(f"Z_{m}" for m in self.factors) or "trivial"


def character_exponents(G: AbelianGroupSpec) -> tuple[int, np.ndarray]:
    """Exact character table as exponents of a primitive L-th root, L = exp(G)."""
    L = G.exponent
    elems = G.elements()
    k = np.zeros((G.order, G.order), dtype=np.int64)
    for r, g in enumerate(elems):
        for c, h in enumerate(elems):
            k[r, c] = sum((a * b % m) * (L // m) for a, b, m in zip(g, h, G.factors)) % L
    return L, k


def character_table(G: AbelianGroupSpec) -> np.ndarray:
    """Entry (g, h) is prod_t exp(2 pi i g_t h_t / m_t); rows in ``G.elements()`` order."""
    L, k = character_exponents(G)
    return np.exp(2j * np.pi * k / L)


def dephase(H: np.ndarray) -> np.ndarray:
    """Divide each column by the phase of its first entry, then each row likewise.

    The first row and column of the result are set to exactly 1.
    """
    H = np.array(H, dtype=complex)
    top = H[0, :]
    H = H / (top / np.abs(top))[None, :]
    left = H[:, 0]
    H = H / (left / np.abs(left))[:, None]
    H[0, :] = 1.0
    H[:, 0] = 1.0
    return H


def _product_table(R: np.ndarray, tol: float) -> np.ndarray | None:
    """Index table of entrywise row products, or None if rows are not closed."""
    m = R.shape[0]
    table = np.empty((m, m), dtype=np.int64)
    for i in range(m):
        prods = R[i][None, :] * R  # (m, cols)
        diff = np.abs(prods[:, None, :] - R[None, :, :]).max(axis=2)  # (m, m)
        hit = diff <= tol
        counts = hit.sum(axis=1)
        if np.any(counts != 1):
            return None
        table[i] = hit.argmax(axis=1)
    return table


def _group_type(table: np.ndarray, identity: int) -> AbelianGroupSpec | None:
    m = table.shape[0]
    orders = np.zeros(m, dtype=np.int64)
    for g in range(m):
        x, k = g, 1
        while x != identity:
            x = table[x, g]
            k += 1
            if k > m:
                return None
        orders[g] = k
    factors: list[int] = []
    for p, v in factorize(m).items():
        counts = []
        for k in range(v + 1):
            n_k = int(np.sum(p**k % orders == 0))
            lg = round(math.log(n_k, p)) if n_k > 1 else 0
            if p**lg != n_k:
                return None
            counts.append(lg)
        ranks = [counts[k] - counts[k - 1] for k in range(1, v + 1)] + [0]
        for a in range(1, v + 1):
            factors.extend([p**a] * (ranks[a - 1] - ranks[a]))
    spec = AbelianGroupSpec(tuple(sorted(factors)))
    return spec if spec.order == m else None


def is_character_table(H: np.ndarray, tol: float = 1e-8) -> AbelianGroupSpec | None:
    """Detect whether a unimodular square matrix is an abelian character table.

    The matrix is dephased first; then both its rows and its columns must be
    closed under entrywise multiplication (within ``tol``) and form
    isomorphic groups.  Returns the group in primary-decomposition form.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {H.shape}")
    dev = float(np.max(np.abs(np.abs(H) - 1.0)))
    if dev > tol:
        raise NotUnimodular(f"entry modulus deviates from 1 by {dev:.3g}")
    D = dephase(H)
    groups = []
    for R in (D, D.T):
        # distinct rows are required for a group of order m
        m = R.shape[0]
        gaps = np.abs(R[:, None, :] - R[None, :, :]).max(axis=2) + np.eye(m) * 10
        if gaps.min() <= tol:
            return None
        table = _product_table(R, tol)
        if table is None:
            return None
        g = _group_type(table, identity=0)
        if g is None:
            return None
        groups.append(g)
    if not groups[0].isomorphic(groups[1]):
        return None
    return groups[0]
