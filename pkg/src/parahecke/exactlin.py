"""Exact integer / rational / Gaussian-rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
there is no overflow and no rounding anywhere.  Matrices are immutable
:class:`IntMat` values; operations return fresh matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Iterable, Sequence

Rat = Fraction


# ---------------------------------------------------------------------------
# integer helpers


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def gcd_all(values: Iterable[int]) -> int:
    return reduce(gcd, values, 0)


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorisation of a positive integer."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for q in range(3, isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorize(n).values())


def divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in factorize(n).items():
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def prime_part(n: int, p: int) -> int:
    """Largest power of p dividing n (n != 0)."""
    out = 1
    n = abs(n)
    while n % p == 0:
        n //= p
        out *= p
    return out


def exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError(f"{a} is not divisible by {b}")
    return q


# ---------------------------------------------------------------------------
# matrices


class IntMat:
    """Immutable dense integer matrix."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = []
        for r in rows:
            row = []
            for x in r:
                if isinstance(x, Fraction):
                    if x.denominator != 1:
                        raise ValueError(f"non-integral entry {x}")
                    x = x.numerator
                elif not isinstance(x, int):
                    raise TypeError(f"entry {x!r} is not an integer")
                row.append(int(x))
            data.append(tuple(row))
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        self._set(tuple(data), len(data), ncols)

    def _set(self, rows, nrows, ncols):
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, rows: tuple) -> "IntMat":
        # trusted constructor: rows is already a tuple of int tuples
        obj = cls.__new__(cls)
        obj._set(rows, len(rows), len(rows[0]) if rows else 0)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("IntMat is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls._raw(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "IntMat":
        ncols = nrows if ncols is None else ncols
        return cls._raw(tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def diag(cls, *entries: int) -> "IntMat":
        if len(entries) == 1 and not isinstance(entries[0], int):
            entries = tuple(entries[0])
        n = len(entries)
        return cls._raw(
            tuple(tuple(int(entries[i]) if i == j else 0 for j in range(n)) for i in range(n))
        )

    @classmethod
    def column(cls, entries: Sequence[int]) -> "IntMat":
        return cls([[x] for x in entries])

    # -- access
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))

    @property
    def T(self) -> "IntMat":
        return IntMat._raw(tuple(zip(*self.rows)) if self.rows else ())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMat":
        return IntMat._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def content(self) -> int:
        """gcd of all entries (0 for the zero matrix)."""
        return gcd_all(x for r in self.rows for x in r)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    # -- arithmetic
    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = tuple(zip(*other.rows))
        return IntMat._raw(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows)
        )

    def __mul__(self, k: int) -> "IntMat":
        return IntMat._raw(tuple(tuple(k * x for x in r) for r in self.rows))

    __rmul__ = __mul__

    def __floordiv__(self, k: int) -> "IntMat":
        return IntMat._raw(tuple(tuple(exact_div(x, k) for x in r) for r in self.rows))

    def __add__(self, other: "IntMat") -> "IntMat":
        return IntMat._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __sub__(self, other: "IntMat") -> "IntMat":
        return IntMat._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __neg__(self) -> "IntMat":
        return self * -1

    def mod(self, p: int) -> "IntMat":
        return IntMat._raw(tuple(tuple(x % p for x in r) for r in self.rows))

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMat) and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.rows))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMat({self.tolist()})"

    def __str__(self) -> str:
        w = max((len(str(x)) for r in self.rows for x in r), default=1)
        return "\n".join("[" + " ".join(str(x).rjust(w) for x in r) + "]" for r in self.rows)

    def det(self) -> int:
        return det(self)

    def adjugate(self) -> "IntMat":
        return inverse_scaled(self, allow_singular=True)[0]


def det(A: IntMat) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = A.nrows
    if n != A.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [list(r) for r in A.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def inverse_scaled(A: IntMat, allow_singular: bool = False) -> tuple[IntMat, int]:
    """Return (adj(A), det(A)), so that A @ adj(A) = det(A) * identity."""
    n = A.nrows
    if n != A.ncols:
        raise ValueError("inverse of a non-square matrix")
    d = det(A)
    if d == 0 and not allow_singular:
        raise ZeroDivisionError("singular matrix has no inverse")
    if n == 1:
        return IntMat([[1]]), d
    idx = range(n)
    adj = [[0] * n for _ in idx]
    for i in idx:
        for j in idx:
            minor = A.submatrix([r for r in idx if r != i], [c for c in idx if c != j])
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return IntMat._raw(tuple(tuple(r) for r in adj)), d


# ---------------------------------------------------------------------------
# rational matrices (lists of Fractions)


def rat_matmul(A, B):
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in A]


def to_rat(A) -> list[list[Fraction]]:
    rows = A.rows if isinstance(A, IntMat) else A
    return [[Fraction(x) for x in r] for r in rows]


def common_denominator(A) -> int:
    return reduce(lcm, (Fraction(x).denominator for r in A for x in r), 1)


def clear_denominators(A) -> tuple[IntMat, int]:
    """Write a rational matrix as (1/k) * B with B integral; returns (B, k)."""
    k = common_denominator(A)
    return IntMat([[Fraction(x) * k for x in r] for r in A]), k


def rat_inverse(A) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals."""
    n = len(A)
    M = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix has no inverse")
        M[k], M[piv] = M[piv], M[k]
        inv = 1 / M[k][k]
        M[k] = [x * inv for x in M[k]]
        for i in range(n):
            if i != k and M[i][k] != 0:
                f = M[i][k]
                M[i] = [a - f * b for a, b in zip(M[i], M[k])]
    return [r[n:] for r in M]


# ---------------------------------------------------------------------------
# Gaussian rationals


class GaussRat:
    """Exact complex number re + i*im with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def _coerce(x) -> "GaussRat":
        return x if isinstance(x, GaussRat) else GaussRat(x)

    def __add__(self, other):
        o = self._coerce(other)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        q = self * o.conjugate()
        return GaussRat(q.re / n, q.im / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussRat(other)
        if not isinstance(other, GaussRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithData:
    invariants: tuple[int, ...]
    left_transform: IntMat
    right_transform: IntMat


def smith_normal_form(A: IntMat) -> SmithData:
    """Smith normal form with unimodular transforms, left @ A @ right = diag.

    Pivoting always picks the nonzero entry of least absolute value in the
    remaining block, then clears its row and column by Euclidean steps.
    """
    n, m = A.nrows, A.ncols
    M = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst -= q * row src
        M[dst] = [a - q * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col dst -= q * col src
        for r in M:
            r[dst] -= q * r[src]
        for r in V:
            r[dst] -= q * r[src]

    for k in range(min(n, m)):
        while True:
            best = None
            for i in range(k, n):
                for j in range(k, m):
                    x = M[i][j]
                    if x and (best is None or abs(x) < abs(M[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(k, best[0])
            swap_cols(k, best[1])
            p = M[k][k]
            dirty = False
            for i in range(k + 1, n):
                if M[i][k]:
                    add_row(k, i, M[i][k] // p)
                    dirty = dirty or M[i][k] != 0
            for j in range(k + 1, m):
                if M[k][j]:
                    add_col(k, j, M[k][j] // p)
                    dirty = dirty or M[k][j] != 0
            if dirty:
                continue
            # pivot row/column are clear; enforce divisibility of the rest
            bad = next(
                (i for i in range(k + 1, n) for j in range(k + 1, m) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, k, -1)
        if M[k][k] < 0:
            M[k] = [-x for x in M[k]]
            U[k] = [-x for x in U[k]]

    invariants = tuple(M[i][i] for i in range(min(n, m)))
    return SmithData(
        invariants,
        IntMat._raw(tuple(tuple(r) for r in U)),
        IntMat._raw(tuple(tuple(r) for r in V)),
    )


def smith_invariants(A: IntMat) -> tuple[int, ...]:
    return smith_normal_form(A).invariants


def rank_mod_p(A: IntMat, p: int) -> int:
    """Rank of A over the field with p elements."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    M = [[x % p for x in r] for r in A.rows]
    rank, ncols = 0, A.ncols
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def solve_congruence(a: int, b: int, n: int) -> list[int]:
    """All x in [0, n) with a*x = b (mod n)."""
    a %= n
    b %= n
    g = gcd(a, n)
    if b % g:
        return []
    n1 = n // g
    if n1 == 1:
        x0 = 0
    else:
        x0 = (b // g) * pow(a // g, -1, n1) % n1
    return [x0 + k * n1 for k in range(g)]
