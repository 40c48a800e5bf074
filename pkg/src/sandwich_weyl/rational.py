"""Exact rational vectors and matrices.

Scalars are :class:`fractions.Fraction`. Vectors are plain tuples of
fractions so they hash and compare exactly. Matrices keep integer
numerators over one common positive denominator, which keeps products
cheap and gives a canonical reduced form for hashing.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Rat = Fraction
RatVec = tuple  # tuple[Fraction, ...]


def vec(values: Iterable) -> RatVec:
    return tuple(Fraction(v) for v in values)


def zero_vec(n: int) -> RatVec:
    return (Fraction(0),) * n


def unit_vec(n: int, i: int, scale=1) -> RatVec:
    v = [Fraction(0)] * n
    v[i] = Fraction(scale)
    return tuple(v)


def add(u: RatVec, v: RatVec) -> RatVec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def sub(u: RatVec, v: RatVec) -> RatVec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def neg(u: RatVec) -> RatVec:
    return tuple(-a for a in u)


def scale(c, u: RatVec) -> RatVec:
    c = Fraction(c)
    return tuple(c * a for a in u)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v, strict=True)), Fraction(0))


def is_zero(u: RatVec) -> bool:
    return all(a == 0 for a in u)


def first_nonzero_sign(u: RatVec) -> int:
    for a in u:
        if a:
            return 1 if a > 0 else -1
    return 0


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(vectors: Sequence[Sequence]) -> int:
    return len(rref(vectors)[1]) if vectors else 0


def is_independent(vectors: Sequence[Sequence]) -> bool:
    return rank(vectors) == len(vectors)


def greedy_basis(vectors: Iterable[RatVec]) -> list[RatVec]:
    """Independent subset spanning span(vectors), chosen in iteration order."""
    basis: list[RatVec] = []
    for v in vectors:
        if is_independent(basis + [v]):
            basis.append(v)
    return basis


def solve_square(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [red[i][n] for i in range(n)]


class CoordinateMap:
    """Coordinates with respect to an independent list of vectors.

    ``coords(v)`` returns the unique c with sum(c_j * basis_j) = v, or
    raises when v is outside the span.
    """

    def __init__(self, basis: Sequence[RatVec]):
        if not basis:
            raise ValueError("empty basis")
        if not is_independent(basis):
            raise ValueError("basis vectors are linearly dependent")
        self.basis = tuple(vec(b) for b in basis)
        self.dim = len(self.basis[0])
        r = len(self.basis)
        gram = [[dot(self.basis[i], self.basis[j]) for j in range(r)] for i in range(r)]
        gram_inv = RatMat.from_rows(gram).inverse()
        # left inverse L = (B^T B)^{-1} B^T, rows are dual covectors
        self.dual = tuple(
            tuple(
                sum((gram_inv.entry(i, k) * self.basis[k][c] for k in range(r)), Fraction(0))
                for c in range(self.dim)
            )
            for i in range(r)
        )

    def coords(self, v: RatVec, check: bool = True) -> RatVec:
        c = tuple(dot(row, v) for row in self.dual)
        if check and self.combine(c) != tuple(v):
            raise ValueError(f"vector {fmt_vec(v)} is not in the span of the basis")
        return c

    def combine(self, c: Sequence) -> RatVec:
        out = [Fraction(0)] * self.dim
        for ci, b in zip(c, self.basis, strict=True):
            if ci:
                for k in range(self.dim):
                    out[k] += ci * b[k]
        return tuple(out)

    def in_span(self, v: RatVec) -> bool:
        try:
            self.coords(v)
        except ValueError:
            return False
        return True


def orthogonal_projector(basis: Sequence[RatVec]) -> "RatMat":
    """Matrix of the orthogonal projection onto span(basis) (standard pairing)."""
    cm = CoordinateMap(basis)
    d = cm.dim
    rows = [
        [sum((cm.basis[k][i] * cm.dual[k][j] for k in range(len(cm.basis))), Fraction(0)) for j in range(d)]
        for i in range(d)
    ]
    return RatMat.from_rows(rows)


class RatMat:
    """Exact rational matrix stored as integer numerators over a common denominator."""

    __slots__ = ("num", "den", "shape", "_key", "_hash")

    def __init__(self, num: Sequence[Sequence[int]], den: int = 1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        rows = tuple(tuple(int(x) for x in r) for r in num)
        g = den
        for r in rows:
            for x in r:
                g = gcd(g, x)
                if g == 1:
                    break
        if g > 1:
            rows = tuple(tuple(x // g for x in r) for r in rows)
            den //= g
        self.num = rows
        self.den = den
        self.shape = (len(rows), len(rows[0]) if rows else 0)
        self._key = None
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMat":
        fr = [[Fraction(x) for x in r] for r in rows]
        den = reduce(lcm, (x.denominator for r in fr for x in r), 1)
        return cls([[x.numerator * (den // x.denominator) for x in r] for r in fr], den)

    @classmethod
    def identity(cls, n: int) -> "RatMat":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "RatMat":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "RatMat":
        return cls.from_rows([list(r) for r in zip(*cols)])

    @classmethod
    def block_diag(cls, a: "RatMat", b: "RatMat") -> "RatMat":
        ca, cb = a.shape[1], b.shape[1]
        den = lcm(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        rows = [list(x * fa for x in r) + [0] * cb for r in a.num]
        rows += [[0] * ca + list(x * fb for x in r) for r in b.num]
        return cls(rows, den)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(self.num[i][j], self.den)

    @property
    def rows(self) -> tuple[RatVec, ...]:
        return tuple(tuple(Fraction(x, self.den) for x in r) for r in self.num)

    def column(self, j: int) -> RatVec:
        return tuple(Fraction(r[j], self.den) for r in self.num)

    def transpose(self) -> "RatMat":
        return RatMat([list(c) for c in zip(*self.num)], self.den)

    def __neg__(self) -> "RatMat":
        return RatMat([[-x for x in r] for r in self.num], self.den)

    def __matmul__(self, other: "RatMat") -> "RatMat":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.num))
        rows = [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.num]
        return RatMat(rows, self.den * other.den)

    def apply(self, v: Sequence) -> RatVec:
        if len(v) != self.shape[1]:
            raise ValueError("dimension mismatch")
        return tuple(
            sum((x * Fraction(c) for x, c in zip(r, v) if x), Fraction(0)) / self.den for r in self.num
        )

    def inverse(self) -> "RatMat":
        n, m = self.shape
        if n != m:
            raise ValueError("only square matrices are invertible")
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        red, pivots = rref(aug)
        if pivots[:n] != list(range(n)):
            raise ValueError("matrix is singular")
        return RatMat.from_rows([r[n:] for r in red])

    def is_invertible(self) -> bool:
        return self.shape[0] == self.shape[1] and rank(self.rows) == self.shape[0]

    @property
    def key(self) -> bytes:
        """Canonical serialization of the reduced entries."""
        if self._key is None:
            body = ";".join(",".join(str(x) for x in r) for r in self.num)
            self._key = f"{self.shape[0]}x{self.shape[1]}/{self.den}:{body}".encode()
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMat):
            return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"RatMat({[[str(x) for x in r] for r in self.rows]})"


def fmt_vec(v: Sequence) -> str:
    return "(" + ", ".join(str(Fraction(x)) for x in v) + ")"
