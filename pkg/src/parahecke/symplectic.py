"""Paramodular side: Sigma_N, Sigma*_N, Atkin-Lehner elements and the
isomorphism to SO_0 of the 5-dimensional form.

A :class:`SympElement` ``(mat, scale)`` denotes the projective element
+-(1/sqrt(scale)) * mat with ``mat`` integral.  The square root is never
formed; products multiply both parts and then strip square factors.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Sequence

from .exactlin import (
    GaussRat,
    IntMat,
    clear_denominators,
    divisors,
    ext_gcd,
    factorize,
    is_prime,
    lcm,
    rat_inverse,
    rat_matmul,
    smith_normal_form,
)
from .hecke import (
    DEFAULT_BOUND,
    EnumerationBound,
    HeckeElement,
    enumerate_right_cosets,
    reduced_labels_dividing,
)
from .orthogonal import (
    MembershipError,
    OrthoDoubleCosetLabel,
    OrthoElement,
    RightCosetForm5,
    as_level,
    build_form,
    double_coset_canonical,
    in_half_space,
    ortho_action,
)

__all__ = [
    "SympElement",
    "AtkinLehner",
    "ParamodCosetLabel",
    "SigmaStarLabel",
    "J4",
    "make_W",
    "J_N",
    "is_paramodular",
    "phi",
    "phi_inverse",
    "siegel_action",
    "to_orthogonal",
    "from_orthogonal",
    "in_discriminant_kernel",
    "nu",
    "sigma_star_canonical",
    "sigma_canonical",
    "sigma_right_cosets",
    "sigma_coset_count",
    "sigma_label_product",
    "sigma_multiply",
    "random_sigma_element",
    "random_G_element",
    "random_H2_point",
]

J4 = IntMat([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
_J4_INV = -J4


def _square_free_part(n: int) -> tuple[int, int]:
    """n = s0 * f^2 with s0 squarefree; returns (s0, f)."""
    s0, f = 1, 1
    for p, e in factorize(n).items():
        f *= p ** (e // 2)
        if e % 2:
            s0 *= p
    return s0, f


def _canonical_pair(mat: IntMat, scale: int) -> tuple[IntMat, int]:
    c = mat.content()
    if c > 1:
        for q, e in factorize(c).items():
            k = 0
            while k < e and scale % (q * q) == 0:
                scale //= q * q
                k += 1
            if k:
                mat = mat // (q**k)
    for r in mat.rows:
        for x in r:
            if x:
                return (mat if x > 0 else -mat), scale
    raise ValueError("zero matrix")


class SympElement:
    """+-(1/sqrt(scale)) * mat with mat' J mat = scale * J."""

    __slots__ = ("N", "mat", "scale")

    def __init__(self, N, mat, scale: int = 1, check: bool = True):
        if not isinstance(mat, IntMat):
            mat = IntMat(mat)
        if scale < 1:
            raise ValueError("scale must be positive")
        if check and mat.T @ J4 @ mat != J4 * scale:
            raise MembershipError("matrix is not a symplectic similitude of the given scale")
        mat, scale = _canonical_pair(mat, scale)
        object.__setattr__(self, "N", as_level(N).N)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "scale", scale)

    def __setattr__(self, name, value):
        raise AttributeError("SympElement is immutable")

    @classmethod
    def from_rational(cls, N, rows, scale: int = 1, check: bool = True) -> "SympElement":
        """Element +-(1/sqrt(scale)) * rows for a rational matrix ``rows``."""
        mat, k = clear_denominators(rows)
        return cls(N, mat, scale * k * k, check=check)

    @classmethod
    def identity(cls, N) -> "SympElement":
        return cls(N, IntMat.identity(4), 1, check=False)

    def __matmul__(self, other: "SympElement") -> "SympElement":
        if self.N != other.N:
            raise ValueError("elements of different levels")
        return SympElement(self.N, self.mat @ other.mat, self.scale * other.scale, check=False)

    def inverse(self) -> "SympElement":
        # (1/sqrt s) M)^-1 = (1/sqrt s) J^-1 M' J
        return SympElement(self.N, _J4_INV @ self.mat.T @ J4, self.scale, check=False)

    def rational(self) -> list[list[Fraction]]:
        """Entries of the matrix sqrt(scale) * element, i.e. mat itself as Fractions."""
        return [[Fraction(x) for x in r] for r in self.mat.rows]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SympElement)
            and self.N == other.N
            and self.scale == other.scale
            and self.mat == other.mat
        )

    def __hash__(self):
        return hash((self.N, self.scale, self.mat))

    def __repr__(self):
        return f"SympElement(N={self.N}, scale={self.scale}, mat={self.mat.tolist()})"

    def to_json(self) -> dict:
        return {
            "v": 1,
            "N": str(self.N),
            "scale": str(self.scale),
            "mat": [[str(x) for x in r] for r in self.mat.rows],
        }

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "SympElement":
        rows = [[Fraction(x) for x in r] for r in data["mat"]]
        return cls.from_rational(int(data["N"]), rows, int(data.get("scale", 1)), check=check)


# ---------------------------------------------------------------------------
# shape (11)

# required ring per slot: "N" -> N*Z, "1" -> Z, "1/N" -> (1/N)*Z
_SHAPE = (
    ("1", "N", "1", "1"),
    ("1", "1", "1", "1/N"),
    ("1", "N", "1", "1"),
    ("N", "N", "N", "1"),
)


def _slot_ok(x: Fraction, slot: str, N: int) -> bool:
    if slot == "N":
        return (x / N).denominator == 1
    if slot == "1/N":
        return (x * N).denominator == 1
    return x.denominator == 1


def is_paramodular(mat, N) -> bool:
    """True iff the rational 4x4 matrix is symplectic with the paramodular pattern."""
    N = as_level(N).N
    rows = [[Fraction(x) for x in r] for r in (mat.rows if isinstance(mat, IntMat) else mat)]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        return False
    if any(not _slot_ok(rows[i][j], _SHAPE[i][j], N) for i in range(4) for j in range(4)):
        return False
    Jr = [[Fraction(x) for x in r] for r in J4.rows]
    Mt = [list(col) for col in zip(*rows)]
    return rat_matmul(rat_matmul(Mt, Jr), rows) == Jr


def nu(M: SympElement) -> int:
    """Least n with sqrt(n) * M of the paramodular pattern."""
    N = M.N
    s0, f = _square_free_part(M.scale)
    # sqrt(s0 k^2) / sqrt(s0 f^2) * mat = (k/f) * mat
    k = 1
    for i in range(4):
        for j in range(4):
            x = M.mat[i, j]
            if not x:
                continue
            slot = _SHAPE[i][j]
            if slot == "N":
                need = f * N // gcd(f * N, x)
            elif slot == "1/N":
                need = f // gcd(f, x * N)
            else:
                need = f // gcd(f, x)
            k = lcm(k, need)
    return s0 * k * k


def in_sigma(M: SympElement) -> bool:
    return nu(M) == 1


# ---------------------------------------------------------------------------
# Atkin-Lehner elements


@dataclass(frozen=True)
class AtkinLehner:
    """W_d = diag(V_d, V_d'^-1), V_d = (1/sqrt d) [[alpha d, beta N], [gamma, delta d]]."""

    N: int
    d: int
    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        as_level(self.N)
        if self.N % self.d:
            raise ValueError(f"{self.d} does not divide {self.N}")
        if self.alpha * self.delta * self.d - self.beta * self.gamma * (self.N // self.d) != 1:
            raise ValueError("Atkin-Lehner coefficients violate alpha delta d - beta gamma N/d = 1")

    @property
    def V(self) -> IntMat:
        """sqrt(d) * V_d."""
        return IntMat([[self.alpha * self.d, self.beta * self.N], [self.gamma, self.delta * self.d]])

    def element(self) -> SympElement:
        a, b, c, e, d, N = self.alpha, self.beta, self.gamma, self.delta, self.d, self.N
        mat = IntMat(
            [
                [a * d, b * N, 0, 0],
                [c, e * d, 0, 0],
                [0, 0, e * d, -c],
                [0, 0, -b * N, a * d],
            ]
        )
        return SympElement(N, mat, d)


def make_W(d: int, N, params: Sequence[int] | None = None) -> AtkinLehner:
    """Atkin-Lehner data for d | N; ``params`` overrides (alpha, beta, gamma, delta)."""
    N = as_level(N).N
    if d < 1 or N % d:
        raise ValueError(f"{d} does not divide {N}")
    if params is not None:
        return AtkinLehner(N, d, *map(int, params))
    if d == 1:
        return AtkinLehner(N, 1, 1, 0, 0, 1)
    if d == N:
        return AtkinLehner(N, d, 0, 1, -1, 0)
    e = N // d
    x = pow(d, -1, e)
    return AtkinLehner(N, d, x, (d * x - 1) // e, 1, 1)


def W(d: int, N) -> SympElement:
    return make_W(d, N).element()


def J_N(N) -> SympElement:
    N = as_level(N).N
    rows = [[0, 0, -1, 0], [0, 0, 0, Fraction(-1, N)], [1, 0, 0, 0], [0, N, 0, 0]]
    return SympElement.from_rational(N, rows)


def translation(N, S) -> SympElement:
    """[[E, S], [0, E]] for rational symmetric S."""
    S = [[Fraction(x) for x in r] for r in S]
    rows = [[1, 0, S[0][0], S[0][1]], [0, 1, S[1][0], S[1][1]], [0, 0, 1, 0], [0, 0, 0, 1]]
    return SympElement.from_rational(N, rows)


def lower_translation(N, C) -> SympElement:
    C = [[Fraction(x) for x in r] for r in C]
    rows = [[1, 0, 0, 0], [0, 1, 0, 0], [C[0][0], C[0][1], 1, 0], [C[1][0], C[1][1], 0, 1]]
    return SympElement.from_rational(N, rows)


def block_diag(N, U) -> SympElement:
    """diag(U, U'^-1) for rational U with det U = 1."""
    U = [[Fraction(x) for x in r] for r in U]
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
    if det != 1:
        raise ValueError("U must have determinant 1")
    # U'^-1 = [[u22, -u21], [-u12, u11]]
    rows = [
        [U[0][0], U[0][1], 0, 0],
        [U[1][0], U[1][1], 0, 0],
        [0, 0, U[1][1], -U[1][0]],
        [0, 0, -U[0][1], U[0][0]],
    ]
    return SympElement.from_rational(N, rows)


def diagonal(N, a1: int, a2: int, d1: int, d2: int) -> SympElement:
    """(1/sqrt s) diag(a1, a2, d1, d2) with s = a1 d1 = a2 d2."""
    if a1 * d1 != a2 * d2 or a1 * d1 <= 0:
        raise ValueError("need a1 d1 = a2 d2 > 0")
    return SympElement(N, IntMat.diag(a1, a2, d1, d2), a1 * d1)


# ---------------------------------------------------------------------------
# half spaces


def phi(Z, N) -> tuple:
    """[[a, b], [b, c]] -> (a, b, N c)."""
    N = as_level(N).N
    if Z[0][1] != Z[1][0]:
        raise ValueError("Z must be symmetric")
    return (Z[0][0], Z[0][1], Z[1][1] * N)


def phi_inverse(z, N) -> list:
    N = as_level(N).N
    return [[z[0], z[1]], [z[1], z[2] / N]]


def _g(x) -> GaussRat:
    return x if isinstance(x, GaussRat) else GaussRat(x)


def _m2mul(X, Y):
    return [[sum((_g(X[i][k]) * _g(Y[k][j]) for k in range(2)), GaussRat(0)) for j in range(2)] for i in range(2)]


def _m2add(X, Y):
    return [[_g(X[i][j]) + _g(Y[i][j]) for j in range(2)] for i in range(2)]


def _m2det(X):
    return _g(X[0][0]) * _g(X[1][1]) - _g(X[0][1]) * _g(X[1][0])


def _blocks(mat: IntMat):
    r = mat.rows
    A = [[r[0][0], r[0][1]], [r[1][0], r[1][1]]]
    B = [[r[0][2], r[0][3]], [r[1][2], r[1][3]]]
    C = [[r[2][0], r[2][1]], [r[3][0], r[3][1]]]
    D = [[r[2][2], r[2][3]], [r[3][2], r[3][3]]]
    return A, B, C, D


def siegel_action(M: SympElement, Z):
    """M<Z> = (AZ + B)(CZ + D)^-1; None on a pole."""
    A, B, C, D = _blocks(M.mat)
    P = _m2add(_m2mul(A, Z), B)
    Q = _m2add(_m2mul(C, Z), D)
    det = _m2det(Q)
    if not det:
        return None
    Qinv = [[Q[1][1] / det, -Q[0][1] / det], [-Q[1][0] / det, Q[0][0] / det]]
    return _m2mul(P, Qinv)


def in_H2(Z) -> bool:
    y = [[_g(x).im for x in r] for r in Z]
    return Z[0][1] == Z[1][0] and y[0][0] > 0 and y[0][0] * y[1][1] - y[0][1] ** 2 > 0


# ---------------------------------------------------------------------------
# the isomorphism


def _adj(X):
    return [[X[1][1], -X[0][1]], [-X[1][0], X[0][0]]]


def _lift_image(mat: IntMat, N: int, Z) -> list:
    """(-N det(AZ+B), phi((AZ+B)(CZ+D)^#), det(CZ+D)) for integral symmetric Z.

    This is the image of the null lift of phi(Z) under the orthogonal matrix,
    up to the common factor carried by the scale."""
    A, B, C, D = _blocks(mat)

    def mm(X, Y):
        return [[sum(X[i][k] * Y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]

    def add(X, Y):
        return [[X[i][j] + Y[i][j] for j in range(2)] for i in range(2)]

    P = add(mm(A, Z), B)
    Q = add(mm(C, Z), D)
    R = mm(P, _adj(Q))
    detP = P[0][0] * P[1][1] - P[0][1] * P[1][0]
    detQ = Q[0][0] * Q[1][1] - Q[0][1] * Q[1][0]
    return [-N * detP, R[0][0], R[0][1], N * R[1][1], detQ]


_SAMPLES = (
    [[0, 0], [0, 0]],
    [[1, 0], [0, 0]],
    [[0, 1], [1, 0]],
    [[0, 0], [0, 1]],
    [[1, 0], [0, 1]],
)


@lru_cache(maxsize=None)
def _sample_basis_inverse(N: int):
    cols = []
    for Z in _SAMPLES:
        det = Z[0][0] * Z[1][1] - Z[0][1] * Z[1][0]
        cols.append([-N * det, Z[0][0], Z[0][1], N * Z[1][1], 1])
    B = [[Fraction(cols[j][i]) for j in range(5)] for i in range(5)]
    return rat_inverse(B)


def orthogonal_numerator(M: SympElement) -> list[list[Fraction]]:
    """Rational 5x5 matrix X with to_orthogonal(M) = X / scale."""
    N = M.N
    F = [_lift_image(M.mat, N, Z) for Z in _SAMPLES]
    Fm = [[Fraction(F[j][i]) for j in range(5)] for i in range(5)]
    return rat_matmul(Fm, _sample_basis_inverse(N))


def to_orthogonal(M: SympElement, check: bool = True) -> OrthoElement:
    """Image of +-M in SO_0 of the 5-dimensional form of level N."""
    X = orthogonal_numerator(M)
    s = M.scale
    rows = [[x / s for x in r] for r in X]
    return OrthoElement.from_rational(build_form(M.N, 5), rows, check=check)


def closed_form_numerator(M: SympElement) -> list[list[Fraction]]:
    """The 5x5 image written blockwise through determinants and adjoints of
    A, B, C, D.  Independent of :func:`orthogonal_numerator`; the two agree.

    First-row vector: a = -phi_N(A# B).  A factor N here would contradict the
    image of translations.
    """
    N = M.N
    A, B, C, D = (_frac2(X) for X in _blocks(M.mat))

    def mm(X, Y):
        return [[sum(X[i][k] * Y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]

    def d2(X):
        return X[0][0] * X[1][1] - X[0][1] * X[1][0]

    def ph(X):
        # off-diagonal entries agree for the products below
        return [X[0][0], X[0][1], N * X[1][1]]

    gamma = -d2(C) / N
    d = [x / N for x in ph(mm(_adj(C), D))]
    delta = d2(D)
    alpha = d2(A)
    a = [-x for x in ph(mm(_adj(A), B))]
    beta = -N * d2(B)
    b = [-x / N for x in ph(mm(A, _adj(C)))]
    c = ph(mm(B, _adj(D)))
    cols = []
    for z in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        Z = [[Fraction(z[0]), Fraction(z[1])], [Fraction(z[1]), Fraction(z[2], N)]]
        P = mm(mm(A, Z), _adj(D))
        Q = mm(mm(B, _adj(Z)), _adj(C))
        X = [[P[i][j] + Q[i][j] for j in range(2)] for i in range(2)]
        cols.append([X[0][0], (X[0][1] + X[1][0]) / 2, N * X[1][1]])
    K = [[cols[j][i] for j in range(3)] for i in range(3)]
    from .orthogonal import s_apply

    aS, dS = s_apply(N, a), s_apply(N, d)
    return [[alpha, *aS, beta]] + [[b[i], *K[i], c[i]] for i in range(3)] + [[gamma, *dS, delta]]


def _frac2(X):
    return [[Fraction(x) for x in r] for r in X]


def in_discriminant_kernel(e: OrthoElement) -> bool:
    """Center entry = 1 mod 2N for an integral element."""
    if e.denom != 1:
        raise ValueError("element must be integral")
    if e.dim != 5:
        raise ValueError("element must be 5-dimensional")
    return (e.mat[2, 2] - 1) % (2 * e.N) == 0


def _preimage_of_form(N: int, form: RightCosetForm5) -> SympElement:
    """Symplectic element mapping onto a right coset canonical form."""
    inner = form.inner
    m, alpha, a_s = inner.m, form.alpha, inner.alpha_star
    delta = form.delta
    c = form.c
    S = [[Fraction(c[0], delta), Fraction(c[1], delta)], [Fraction(c[1], delta), Fraction(c[2], N * delta)]]
    t = Fraction(N * inner.mu, inner.delta_star)
    T = translation(N, S)
    U = block_diag(N, [[1, t], [0, 1]])
    Dg = diagonal(N, alpha * a_s, alpha * m, m * m, a_s * m)
    return T @ U @ Dg


def from_orthogonal(e: OrthoElement) -> SympElement:
    """Preimage of a right coset canonical form (in particular a diagonal
    canonical form) or of J*; other inputs raise ValueError."""
    if e.dim != 5:
        raise ValueError("only 5-dimensional elements have a symplectic preimage")
    N = e.N
    from .orthogonal import make_generator, right_coset_reduction

    if e == make_generator("J_star", e.form):
        return J_N(N)
    R, form = right_coset_reduction(e)
    if R != OrthoElement(e.form, IntMat.identity(5), 1, check=False):
        raise ValueError("not invertible at point level: input is not a canonical form")
    cand = _preimage_of_form(N, form)
    if to_orthogonal(cand) != e:
        raise ValueError("not invertible at point level: preimage check failed")
    return cand


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True, order=True)
class SigmaStarLabel:
    """Double coset of (1/sqrt(u^2 v)) diag(1, u, u^2 v, u v) over Sigma*_N."""

    u: int
    v: int

    def __post_init__(self):
        if self.u < 1 or self.v < 1:
            raise ValueError("u, v must be positive")

    def representative(self, N) -> SympElement:
        u, v = self.u, self.v
        return diagonal(N, 1, u, u * u * v, u * v)

    def ortho_label(self) -> OrthoDoubleCosetLabel:
        u, v = self.u, self.v
        return OrthoDoubleCosetLabel(u * v, (1, v, u * v, u * u * v, u * u * v * v))

    @classmethod
    def from_ortho_label(cls, lab: OrthoDoubleCosetLabel) -> "SigmaStarLabel":
        if lab.dim != 5 or not lab.is_reduced():
            raise ValueError("need a reduced 5-dimensional label")
        v = lab.invariants[1]
        return cls(lab.m // v, v)

    def to_json(self) -> dict:
        return {"u": str(self.u), "v": str(self.v)}

    def __str__(self):
        return f"(u,v)=({self.u},{self.v})"


@dataclass(frozen=True)
class ParamodCosetLabel:
    """Double coset over Sigma_N of W_d (1/sqrt(u1^2 u2^2 v)) diag(u1, u2, u1 u2^2 v, u1^2 u2 v)."""

    d: int
    u1: int
    u2: int
    v: int

    def __post_init__(self):
        if min(self.d, self.u1, self.u2, self.v) < 1:
            raise ValueError("label entries must be positive")
        if gcd(self.u1, self.u2) != 1:
            raise ValueError("u1 and u2 must be coprime")

    def check_level(self, N: int) -> None:
        if N % self.d:
            raise ValueError(f"d={self.d} does not divide N={N}")
        if any(N % p for p in factorize(self.u1)):
            raise ValueError(f"u1={self.u1} has a prime factor not dividing N={N}")

    @property
    def u(self) -> int:
        return self.u1 * self.u2

    @property
    def nu(self) -> int:
        return self.d * self.u**2 * self.v

    def star(self) -> SigmaStarLabel:
        return SigmaStarLabel(self.u, self.v)

    def representative(self, N) -> SympElement:
        N = as_level(N).N
        self.check_level(N)
        u1, u2, v = self.u1, self.u2, self.v
        D = diagonal(N, u1, u2, u1 * u2 * u2 * v, u1 * u1 * u2 * v)
        return W(self.d, N) @ D

    def sort_key(self):
        return (self.nu, self.d, self.u1, self.u2, self.v)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def to_json(self) -> dict:
        return {"d": str(self.d), "u1": str(self.u1), "u2": str(self.u2), "v": str(self.v)}

    @classmethod
    def from_json(cls, data) -> "ParamodCosetLabel":
        if isinstance(data, (list, tuple)):
            return cls(*(int(x) for x in data))
        return cls(int(data["d"]), int(data["u1"]), int(data["u2"]), int(data["v"]))

    def __str__(self):
        return f"(d,u1,u2,v)=({self.d},{self.u1},{self.u2},{self.v})"


def sigma_star_canonical(M: SympElement) -> SigmaStarLabel:
    """(u, v) of the Sigma*_N double coset, read off the orthogonal image."""
    return SigmaStarLabel.from_ortho_label(double_coset_canonical(to_orthogonal(M, check=False)))


def sigma_canonical(M: SympElement) -> ParamodCosetLabel:
    """Label (d, u1, u2, v) of the Sigma_N double coset of M."""
    N = M.N
    star = sigma_star_canonical(M)
    u, v = star.u, star.v
    n = nu(M)
    d, r = divmod(n, u * u * v)
    if r or N % d:
        raise ArithmeticError(f"nu={n} is inconsistent with (u,v)=({u},{v}) at level {N}")
    Mp = W(d, N).inverse() @ M if d > 1 else M
    n1 = nu(Mp)
    if n1 != u * u * v:
        raise ArithmeticError("Atkin-Lehner reduction did not produce the expected nu")
    # integral pattern representative sqrt(n1) * Mp = (k/f) mat
    s0, f = _square_free_part(Mp.scale)
    k = isqrt(n1 // s0)
    outer = [[Fraction(k * Mp.mat[i, j], f) for j in (0, 2)] for i in (0, 2)]
    u1 = 1
    for p in factorize(gcd(N, u)):
        if all((x / p).denominator == 1 for row in outer for x in row):
            e = 1
            while (u // e) % p == 0:
                e *= p
            u1 *= e
    label = ParamodCosetLabel(d, u1, u // u1, v)
    label.check_level(N)
    if label.nu != n:
        raise ArithmeticError("label violates nu = d u1^2 u2^2 v")
    return label


# ---------------------------------------------------------------------------
# right cosets and products


@lru_cache(maxsize=None)
def _sigma_table(N: int, label: ParamodCosetLabel) -> tuple:
    star = label.star()
    table = enumerate_right_cosets(star.ortho_label(), N, EnumerationBound(max_m=star.u * star.v))
    pre = [_preimage_of_form(N, f) for f in table.forms]
    Ws = [W(e, N) for e in divisors(N)]
    reps = []
    for h in pre:
        for w in Ws:
            g = w @ h
            if sigma_canonical(g) == label:
                reps.append(g)
    return tuple(reps)


def sigma_right_cosets(label: ParamodCosetLabel, N, bound: EnumerationBound | None = None) -> list[SympElement]:
    """Representatives of the Sigma_N right cosets in the double coset of ``label``."""
    N = as_level(N).N
    label.check_level(N)
    (bound or DEFAULT_BOUND).check(label.u * label.v)
    return list(_sigma_table(N, label))


def sigma_coset_count(label: ParamodCosetLabel, N, bound: EnumerationBound | None = None) -> int:
    return len(sigma_right_cosets(label, N, bound))


def _candidate_labels(N: int, m: int) -> list[ParamodCosetLabel]:
    out = []
    for lab in reduced_labels_dividing(m, 5):
        st = SigmaStarLabel.from_ortho_label(lab)
        u, v = st.u, st.v
        ps = [p for p in factorize(gcd(N, u))]
        for mask in range(1 << len(ps)):
            u1 = 1
            for i, p in enumerate(ps):
                if mask >> i & 1:
                    e = 1
                    while (u // e) % p == 0:
                        e *= p
                    u1 *= e
            for d in divisors(N):
                out.append(ParamodCosetLabel(d, u1, u // u1, v))
    return out


def sigma_label_product(N: int, la: ParamodCosetLabel, lb: ParamodCosetLabel, bound=None) -> dict:
    """Structure constants of [la] * [lb] over Sigma_N."""
    reps_b = sigma_right_cosets(lb, N, bound)
    la.check_level(N)
    return dict(_sigma_product_cached(N, la, lb, tuple(reps_b)))


@lru_cache(maxsize=None)
def _sigma_product_cached(N, la, lb, reps_b):
    binv = [b.inverse() for b in reps_b]
    ma = la.u * la.v
    mb = lb.u * lb.v
    out = {}
    for lc in _candidate_labels(N, ma * mb):
        C = lc.representative(N)
        n = 0
        for bi in binv:
            x = C @ bi
            if nu(x) != la.nu:
                continue
            if sigma_canonical(x) == la:
                n += 1
        if n:
            out[lc] = n
    return tuple(sorted(out.items(), key=lambda kv: kv[0].sort_key()))


def sigma_multiply(a, b, N=None, bound: EnumerationBound | None = None) -> HeckeElement:
    """Product of Sigma_N Hecke elements (labels are promoted to basis elements)."""
    from .hecke import multiply

    if not isinstance(a, HeckeElement):
        a = HeckeElement.basis(N, a, "param")
    if not isinstance(b, HeckeElement):
        b = HeckeElement.basis(N, b, "param")
    return multiply(a, b, bound)


def sigma_T1(N, p: int) -> HeckeElement:
    """Sigma_N (1/sqrt p) diag(1,1,p,p) Sigma_N."""
    return HeckeElement.basis(N, ParamodCosetLabel(1, 1, 1, p), "param")


def sigma_T2(N, p: int) -> HeckeElement:
    """Sigma_N (1/p) diag(1,p,p^2,p) Sigma_N."""
    return HeckeElement.basis(N, ParamodCosetLabel(1, 1, p, 1), "param")


def sigma_W(N, d: int) -> HeckeElement:
    return HeckeElement.basis(N, ParamodCosetLabel(d, 1, 1, 1), "param")


# ---------------------------------------------------------------------------
# sampling


def _sigma_generators(N: int) -> list[SympElement]:
    gens = [J_N(N)]
    for s in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)):
        gens.append(translation(N, [[s[0], s[1]], [s[1], Fraction(s[2], N)]]))
    for c in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0)):
        gens.append(lower_translation(N, [[c[0], N * c[1]], [N * c[1], N * c[2]]]))
    for U in ([[1, 0], [1, 1]], [[1, 0], [-1, 1]], [[1, N], [0, 1]], [[1, -N], [0, 1]]):
        gens.append(block_diag(N, U))
    return gens


def random_sigma_element(N, seed=None, word_length: int = 6) -> SympElement:
    """Random word in generators of Sigma_N (deterministic for a fixed seed)."""
    N = as_level(N).N
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    gens = _sigma_generators(N)
    g = SympElement.identity(N)
    for _ in range(word_length):
        g = g @ rng.choice(gens)
    return g


def random_sigma_star_element(N, seed=None, word_length: int = 6) -> SympElement:
    N = as_level(N).N
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    g = random_sigma_element(N, rng, word_length)
    return W(rng.choice(divisors(N)), N) @ g


def random_G_element(N, seed=None, word_length: int = 4) -> SympElement:
    """Random element of the rational similitude group: words in Sigma_N
    generators, rational translations and diagonal similitudes."""
    N = as_level(N).N
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    g = SympElement.identity(N)
    for _ in range(word_length):
        k = rng.randrange(4)
        if k == 0:
            g = g @ random_sigma_element(N, rng, 2)
        elif k == 1:
            S = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
            S[1][0] = S[0][1]
            g = g @ translation(N, S)
        elif k == 2:
            a1, a2 = rng.randint(1, 3), rng.randint(1, 3)
            s = a1 * a2 * rng.randint(1, 2)
            g = g @ diagonal(N, a1, a2, s // a1, s // a2)
        else:
            g = g @ W(rng.choice(divisors(N)), N)
    return g


def random_H2_point(seed=None, size: int = 5):
    """Random point of the Siegel half-space with rational coordinates."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)

    def q():
        return Fraction(rng.randint(-size, size), rng.randint(1, size))

    x1, x2, x3 = q(), q(), q()
    y1 = Fraction(rng.randint(1, size), rng.randint(1, size))
    y2 = q()
    # y3 > y2^2 / y1 keeps Y positive definite
    y3 = y2 * y2 / y1 + Fraction(rng.randint(1, size), rng.randint(1, size))
    return [[GaussRat(x1, y1), GaussRat(x2, y2)], [GaussRat(x2, y2), GaussRat(x3, y3)]]


def check_intertwining(M: SympElement, Z) -> bool:
    """phi(M<Z>) == to_orthogonal(M)<phi(Z)> exactly."""
    N = M.N
    W_ = siegel_action(M, Z)
    lhs = phi(W_, N)
    e = to_orthogonal(M)
    rhs = ortho_action(e.mat, N, phi(Z, N))
    return rhs is not None and tuple(lhs) == tuple(rhs) and in_half_space(N, rhs)
