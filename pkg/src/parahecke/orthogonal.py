"""Rational orthogonal groups of the forms S_N (signature (1,2)) and
S^_N (signature (2,3)), their integral subgroups, and canonical coset
representatives.

Coordinates follow the block conventions

    S_N  = [[0, 0, 1], [0, -2N, 0], [1, 0, 0]]
    S^_N = [[0, 0, 1], [0, S_N, 0], [1, 0, 0]]

An element of the rational group is stored as ``(1/denom) * mat`` with
``mat`` integral and the fraction in lowest terms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .exactlin import (
    GaussRat,
    IntMat,
    clear_denominators,
    det,
    exact_div,
    ext_gcd,
    factorize,
    gcd_all,
    rat_matmul,
    smith_normal_form,
)

__all__ = [
    "Level",
    "QuadForm",
    "OrthoElement",
    "RightCosetForm3",
    "RightCosetForm5",
    "OrthoDoubleCosetLabel",
    "NotSquarefreeError",
    "MembershipError",
    "build_form",
    "make_generator",
    "is_in_SO0",
    "reduce_isotropic",
    "right_coset_canonical",
    "double_coset_canonical",
    "random_group_element",
]


class NotSquarefreeError(ValueError):
    """Raised for a level N that is not squarefree."""


class MembershipError(ValueError):
    """Raised when a matrix is not in the group it is claimed to be in."""


# ---------------------------------------------------------------------------
# levels and forms


@dataclass(frozen=True, order=True)
class Level:
    N: int

    def __post_init__(self):
        N = self.N
        if not isinstance(N, int) or N < 1:
            raise NotSquarefreeError(f"level must be a positive integer, got {N!r}")
        bad = [q for q, e in factorize(N).items() if e > 1]
        if bad:
            # the isotropic reduction needs squarefree N
            raise NotSquarefreeError(
                f"level must be squarefree: N={N} is divisible by {bad[0]}^2; "
                "isotropic vectors such as (2,1,2)' for N=4 are not reducible to (1,0,0)'"
            )

    @property
    def primes(self) -> list[int]:
        return sorted(factorize(self.N))

    def __int__(self):
        return self.N


def as_level(N) -> Level:
    return N if isinstance(N, Level) else Level(int(N))


@dataclass(frozen=True)
class QuadForm:
    level: Level
    dim: int
    gram: IntMat

    @property
    def N(self) -> int:
        return self.level.N

    def value(self, v: Sequence) -> object:
        """gram[v] = v' * gram * v (works for ints, Fractions, GaussRats)."""
        return quad_value(self.N, self.dim, v)

    def gram_inverse(self) -> list[list[Fraction]]:
        return _gram_inverse(self.N, self.dim)


def s_value(N: int, v) -> object:
    """S_N[v] for a 3-vector."""
    return 2 * v[0] * v[2] - 2 * N * v[1] * v[1]


def s_apply(N: int, v) -> tuple:
    """S_N @ v."""
    return (v[2], -2 * N * v[1], v[0])


def quad_value(N: int, dim: int, v):
    if dim == 3:
        return s_value(N, v)
    return 2 * v[0] * v[4] + s_value(N, v[1:4])


@lru_cache(maxsize=None)
def build_form(N, dim: int = 5) -> QuadForm:
    """The Gram matrix S_N (dim 3) or S^_N (dim 5)."""
    level = as_level(N)
    n = level.N
    s3 = [[0, 0, 1], [0, -2 * n, 0], [1, 0, 0]]
    if dim == 3:
        gram = IntMat(s3)
    elif dim == 5:
        g = [[0] * 5 for _ in range(5)]
        g[0][4] = g[4][0] = 1
        for i in range(3):
            for j in range(3):
                g[i + 1][j + 1] = s3[i][j]
        gram = IntMat(g)
    else:
        raise ValueError(f"dim must be 3 or 5, got {dim}")
    return QuadForm(level, dim, gram)


@lru_cache(maxsize=None)
def _gram_inverse_scaled(N: int, dim: int) -> IntMat:
    """2N * gram^-1 as an integral matrix."""
    return IntMat([[x * 2 * N for x in r] for r in _gram_inverse(N, dim)])


@lru_cache(maxsize=None)
def _gram_inverse(N: int, dim: int):
    inv3 = [[0, 0, 1], [0, Fraction(-1, 2 * N), 0], [1, 0, 0]]
    if dim == 3:
        return [[Fraction(x) for x in r] for r in inv3]
    g = [[Fraction(0)] * 5 for _ in range(5)]
    g[0][4] = g[4][0] = Fraction(1)
    for i in range(3):
        for j in range(3):
            g[i + 1][j + 1] = Fraction(inv3[i][j])
    return g


# ---------------------------------------------------------------------------
# elements


def _check_orthogonal(form: QuadForm, mat: IntMat, m: int) -> None:
    if mat.shape != (form.dim, form.dim):
        raise MembershipError(f"expected a {form.dim}x{form.dim} matrix, got {mat.shape}")
    if mat.T @ form.gram @ mat != form.gram * (m * m):
        raise MembershipError("matrix does not preserve the quadratic form up to m^2")
    if det(mat) != m**form.dim:
        raise MembershipError("determinant is not m^dim")


def is_in_SO0(mat: IntMat, denom: int, form: QuadForm) -> bool:
    """Identity-component test for (1/denom)*mat in SO(gram; Q).

    dim 3: the image of y0 = (1,0,1)' stays in the positive cone component
    of y0.  dim 5: the base point (i*t, 0, i)' of the half-space H_N is
    mapped into H_N (not its complex conjugate).  Both checks are exact.
    """
    _check_orthogonal(form, mat, denom)
    N = form.N
    if form.dim == 3:
        y0 = (1, 0, 1)
        img = [sum(a * b for a, b in zip(r, y0)) for r in mat.rows]
        return img[0] + img[2] > 0
    t = 1
    while True:
        z = (GaussRat(0, t), GaussRat(0), GaussRat(0, 1))
        image = ortho_action(mat, N, z)
        if image is not None:
            break
        t += 1
    return in_half_space(N, image)


def null_lift(N: int, z) -> list:
    """z in C^3 -> isotropic vector (-S_N[z]/2, z, 1) in C^5."""
    return [-s_value(N, z) * Fraction(1, 2), z[0], z[1], z[2], GaussRat(1)]


def ortho_action(mat, N: int, z):
    """Fractional-linear action of a 5x5 matrix on z in C^3; None on a pole."""
    rows = mat.rows if isinstance(mat, IntMat) else mat
    Z = null_lift(N, z)
    w = [sum((GaussRat(a) * b for a, b in zip(r, Z)), GaussRat(0)) for r in rows]
    if not w[4]:
        return None
    return tuple(x / w[4] for x in w[1:4])


def in_half_space(N: int, z) -> bool:
    y = [x.im for x in z]
    return y[0] > 0 and s_value(N, y) > 0


class OrthoElement:
    """(1/denom) * mat in SO_0 of S_N or S^_N over Q.

    Construction validates the form relation, the determinant and the
    identity-component test unless ``check=False``.
    """

    __slots__ = ("form", "mat", "denom")

    def __init__(self, form: QuadForm, mat: IntMat, denom: int = 1, check: bool = True):
        if not isinstance(mat, IntMat):
            mat = IntMat(mat)
        if denom < 1:
            if denom == 0:
                raise MembershipError("denominator must be nonzero")
            mat, denom = -mat, -denom
        g = gcd(mat.content(), denom)
        if g > 1:
            mat, denom = mat // g, denom // g
        if check and not is_in_SO0(mat, denom, form):
            raise MembershipError("element is not in the identity component SO_0")
        self.form = form
        self.mat = mat
        self.denom = denom

    @classmethod
    def from_rational(cls, form: QuadForm, rows, check: bool = True) -> "OrthoElement":
        mat, k = clear_denominators(rows)
        return cls(form, mat, k, check=check)

    @property
    def N(self) -> int:
        return self.form.N

    @property
    def dim(self) -> int:
        return self.form.dim

    def is_integral(self) -> bool:
        return self.denom == 1

    def rational(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.denom) for x in r] for r in self.mat.rows]

    def __matmul__(self, other: "OrthoElement") -> "OrthoElement":
        if self.form != other.form:
            raise ValueError("elements belong to different forms")
        return OrthoElement(self.form, self.mat @ other.mat, self.denom * other.denom, check=False)

    def scaled_inverse(self) -> IntMat:
        """gram^-1 mat' gram = m^2 * mat^-1.

        Raises ArithmeticError when this is not integral (right coset
        representatives of the tables always pass).
        """
        k = 2 * self.N
        G = _gram_inverse_scaled(self.N, self.dim)
        return (G @ self.mat.T @ self.form.gram) // k

    def inverse(self) -> "OrthoElement":
        rows = rat_matmul(rat_matmul(self.form.gram_inverse(), self.mat.T.rows), self.form.gram.rows)
        mat, k = clear_denominators(rows)
        return OrthoElement(self.form, mat, self.denom * k, check=False)

    def validate(self) -> None:
        if not is_in_SO0(self.mat, self.denom, self.form):
            raise MembershipError("element is not in the identity component SO_0")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OrthoElement)
            and self.form == other.form
            and self.denom == other.denom
            and self.mat == other.mat
        )

    def __hash__(self):
        return hash((self.form.N, self.denom, self.mat))

    def __repr__(self):
        return f"OrthoElement(N={self.N}, denom={self.denom}, mat={self.mat.tolist()})"

    def to_json(self) -> dict:
        return {
            "v": 1,
            "N": str(self.N),
            "dim": str(self.dim),
            "denom": str(self.denom),
            "mat": [[str(x) for x in r] for r in self.mat.rows],
        }

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "OrthoElement":
        form = build_form(int(data["N"]), int(data.get("dim", len(data["mat"]))))
        mat = IntMat([[int(x) for x in r] for r in data["mat"]])
        return cls(form, mat, int(data.get("denom", 1)), check=check)


def identity_element(form: QuadForm) -> OrthoElement:
    return OrthoElement(form, IntMat.identity(form.dim), 1, check=False)


# ---------------------------------------------------------------------------
# generators


def _embed_middle(K, dim5: bool = True) -> list[list]:
    """diag(1, K, 1) for a 3x3 K."""
    rows = K.rows if isinstance(K, IntMat) else K
    out = [[0] * 5 for _ in range(5)]
    out[0][0] = out[4][4] = 1
    for i in range(3):
        for j in range(3):
            out[i + 1][j + 1] = rows[i][j]
    return out


def translation_rows(N: int, lam) -> list[list]:
    """M_lambda of the 5-dim form (entries rational if lambda is)."""
    sl = s_apply(N, lam)
    rows = [[0] * 5 for _ in range(5)]
    rows[0][0] = 1
    rows[0][1:4] = [-x for x in sl]
    rows[0][4] = -s_value(N, lam) * Fraction(1, 2)
    for i in range(3):
        rows[i + 1][i + 1] = 1
        rows[i + 1][4] = lam[i]
    rows[4][4] = 1
    return rows


def lower_translation_rows(N: int, lam) -> list[list]:
    sl = s_apply(N, lam)
    rows = [[int(i == j) for j in range(5)] for i in range(5)]
    for i in range(3):
        rows[i + 1][0] = lam[i]
    rows[4][0] = -s_value(N, lam) * Fraction(1, 2)
    rows[4][1:4] = [-x for x in sl]
    return rows


def k_mu_rows(N: int, mu) -> list[list]:
    return [[1, 2 * N * mu, N * mu * mu], [0, 1, mu], [0, 0, 1]]


def k_tilde_mu_rows(N: int, mu) -> list[list]:
    return [[1, 0, 0], [mu, 1, 0], [N * mu * mu, 2 * N * mu, 1]]


def atkin_lehner3_rows(N: int, e: int, x, y, z, w) -> list[list]:
    """Image in SO_0(S_N) of Y -> U Y U' with U = e^(-1/2) [[e x, N y], [z, e w]].

    Requires e x w - (N/e) y z = 1.  e=1, x=w=1, z=0 gives K_y.
    """
    f = N // e
    return [
        [e * x * x, 2 * N * x * y, f * y * y],
        [x * z, e * x * w + f * y * z, y * w],
        [f * z * z, 2 * N * z * w, e * w * w],
    ]


def atkin_lehner_params(N: int, e: int) -> tuple[int, int, int, int]:
    """Integral (x, y, z, w) with e*x*w - (N/e)*y*z = 1 (smallest x >= 0, w = z = 1)."""
    f = N // e
    if e == 1:
        return 1, 0, 0, 1
    if f == 1:
        return 0, 1, -1, 0
    x = pow(e, -1, f)
    y = (e * x - 1) // f
    return x, y, 1, 1


V_ROWS = [[0, 0, -1], [0, 1, 0], [-1, 0, 0]]


def make_generator(kind: str, form: QuadForm, param=None) -> OrthoElement:
    """Integral generators of Gamma_N (dim 3) or Gamma^_N (dim 5).

    kinds (dim 5): M_lambda, M_tilde_lambda (param: 3-vector), J_star,
    M_F, M_tilde_F (param: 2x2 SL2(Z) matrix), K_hat (param: 3x3 matrix
    in Gamma_N).  kinds (dim 3): K_mu, K_tilde_mu (param: integer),
    minus_V, atkin_lehner (param: divisor e of N).
    """
    N = form.N
    if form.dim == 5:
        if kind == "M_lambda":
            rows = translation_rows(N, [int(x) for x in param])
        elif kind == "M_tilde_lambda":
            rows = lower_translation_rows(N, [int(x) for x in param])
        elif kind == "J_star":
            rows = _embed_middle(V_ROWS)
            rows[0][4] = rows[4][0] = -1
            rows[0][0] = rows[4][4] = 0
        elif kind in ("M_F", "M_tilde_F"):
            F = [[int(x) for x in r] for r in (param.rows if isinstance(param, IntMat) else param)]
            (a, b), (c, d) = F
            if a * d - b * c != 1:
                raise MembershipError("F must have determinant 1")
            rows = m_f_rows(a, b, c, d) if kind == "M_F" else m_tilde_f_rows(a, b, c, d)
        elif kind == "K_hat":
            K = param if isinstance(param, IntMat) else IntMat(param)
            inner = OrthoElement(build_form(form.level, 3), K, 1, check=False)
            try:
                inner.validate()
            except MembershipError as exc:
                raise MembershipError(f"K is not in Gamma_N: {exc}") from None
            if inner.denom != 1:
                raise MembershipError("K is not integral")
            rows = _embed_middle(K)
        else:
            raise ValueError(f"unknown generator kind {kind!r} for dim 5")
    else:
        if kind == "K_mu":
            rows = k_mu_rows(N, int(param))
        elif kind == "K_tilde_mu":
            rows = k_tilde_mu_rows(N, int(param))
        elif kind == "minus_V":
            rows = [[-x for x in r] for r in V_ROWS]
        elif kind == "atkin_lehner":
            e = int(param)
            if N % e:
                raise MembershipError(f"{e} does not divide N={N}")
            rows = atkin_lehner3_rows(N, e, *atkin_lehner_params(N, e))
        else:
            raise ValueError(f"unknown generator kind {kind!r} for dim 3")
    return OrthoElement(form, IntMat(rows), 1, check=False)


def m_f_rows(a, b, c, d) -> list[list]:
    rows = [[0] * 5 for _ in range(5)]
    rows[0][0], rows[0][1], rows[1][0], rows[1][1] = a, b, c, d
    rows[2][2] = 1
    rows[3][3], rows[3][4], rows[4][3], rows[4][4] = a, -b, -c, d
    return rows


def m_tilde_f_rows(a, b, c, d) -> list[list]:
    # [[aE, 0, bI], [0, 1, 0], [cI, 0, dE]] with I = diag(-1, 1)
    rows = [[0] * 5 for _ in range(5)]
    rows[0][0] = rows[1][1] = a
    rows[0][3], rows[1][4] = -b, b
    rows[2][2] = 1
    rows[3][0], rows[4][1] = -c, c
    rows[3][3] = rows[4][4] = d
    return rows


# ---------------------------------------------------------------------------
# isotropic reduction


def _reduce3(N: int, g: Sequence[int]) -> tuple[IntMat, int]:
    if s_value(N, g) != 0:
        raise MembershipError(f"vector {tuple(g)} is not isotropic for S_{N}")
    G = gcd_all(g)
    if G == 0:
        raise ValueError("zero vector")
    h = [x // G for x in g]
    # h = lam * (s^2, s t, N t^2) for a primitive (s, t)
    if h[0] != 0:
        r = Fraction(h[1], h[0])
        s, t = r.denominator, r.numerator
        lam = Fraction(h[0], s * s)
    else:
        s, t = 0, 1
        lam = Fraction(h[2], N)
    e = gcd(s, N)
    s1 = s // e
    one, x, y = ext_gcd(e * s1, (N // e) * t)
    assert one == 1
    z, w = -t, s1
    K = IntMat(atkin_lehner3_rows(N, e, x, y, z, w))
    gamma = lam * Fraction((e * x * s + N * y * t) ** 2, e) * G
    assert gamma.denominator == 1 and abs(gamma) == G
    return K, int(gamma)


def _sl2_kill_second(u: int, v: int) -> list[list[int]]:
    """G in SL2(Z) with G (u, v)' = (gcd, 0)'."""
    if u == 0 and v == 0:
        return [[1, 0], [0, 1]]
    d, x, y = ext_gcd(u, v)
    return [[x, y], [-v // d, u // d]]


def _reduce5(N: int, g: Sequence[int]) -> tuple[IntMat, int]:
    if quad_value(N, 5, g) != 0:
        raise MembershipError(f"vector {tuple(g)} is not isotropic for S^_{N}")
    if all(x == 0 for x in g):
        raise ValueError("zero vector")
    total = IntMat.identity(5)
    vec = IntMat.column(g)

    def apply(rows):
        nonlocal total, vec
        A = IntMat(rows)
        total = A @ total
        vec = A @ vec

    # kill g5 with M_F, F* = G  <=>  F = I G I
    (x, y), (u, v) = _sl2_kill_second(vec[3, 0], vec[4, 0])
    apply(m_f_rows(x, -y, -u, v))
    mid = [vec[i, 0] for i in (1, 2, 3)]
    if any(mid):
        K, _ = _reduce3(N, mid)
        apply(_embed_middle(K))
    (a, b), (c, d) = _sl2_kill_second(vec[0, 0], vec[1, 0])
    apply(m_f_rows(a, b, c, d))
    if vec[0, 0] < 0:
        apply(m_f_rows(-1, 0, 0, -1))
    gamma = vec[0, 0]
    assert all(vec[i, 0] == 0 for i in range(1, 5)) and gamma == gcd_all(g)
    return total, gamma


def reduce_isotropic(g: Sequence[int], form: QuadForm) -> tuple[OrthoElement, int]:
    """K in Gamma_N (resp. Gamma^_N) and gamma with K g = (gamma, 0, ..., 0)'.

    |gamma| = gcd(g); in dimension 5 gamma is positive.
    """
    g = [int(x) for x in g]
    if len(g) != form.dim:
        raise ValueError(f"expected a vector of length {form.dim}")
    if form.dim == 3:
        K, gamma = _reduce3(form.N, g)
    else:
        K, gamma = _reduce5(form.N, g)
    return OrthoElement(form, K, 1, check=False), gamma


# ---------------------------------------------------------------------------
# right cosets


@dataclass(frozen=True, order=True)
class RightCosetForm3:
    alpha_star: int
    m: int
    delta_star: int
    mu: int

    def __post_init__(self):
        if self.alpha_star < 1 or self.delta_star < 1 or self.alpha_star * self.delta_star != self.m**2:
            raise ValueError(f"invalid right coset data {self}")
        if not 0 <= self.mu < self.delta_star:
            raise ValueError(f"mu out of range in {self}")

    def rows(self, N: int) -> list[list[Fraction]]:
        a, m, d, mu = self.alpha_star, self.m, self.delta_star, self.mu
        return [
            [Fraction(a), Fraction(2 * N * m * mu, d), Fraction(N * mu * mu, d)],
            [Fraction(0), Fraction(m), Fraction(mu)],
            [Fraction(0), Fraction(0), Fraction(d)],
        ]

    def is_integral(self, N: int) -> bool:
        return (2 * N * self.m * self.mu) % self.delta_star == 0 and (N * self.mu**2) % self.delta_star == 0

    def matrix(self, N: int) -> IntMat:
        return IntMat(self.rows(N))

    def element(self, form: QuadForm) -> OrthoElement:
        return OrthoElement(form, self.matrix(form.N), self.m, check=False)


@dataclass(frozen=True, order=True)
class RightCosetForm5:
    alpha: int
    delta: int
    inner: RightCosetForm3
    c: tuple[int, int, int]

    def __post_init__(self):
        m = self.inner.m
        if self.alpha < 1 or self.alpha * self.delta != m * m:
            raise ValueError(f"invalid right coset data {self}")
        if any(not 0 <= x < self.delta for x in self.c):
            raise ValueError(f"c out of range in {self}")

    @property
    def m(self) -> int:
        return self.inner.m

    def rows(self, N: int) -> list[list[Fraction]]:
        L = self.inner.rows(N)
        c, delta = self.c, self.delta
        sc = s_apply(N, c)
        # a = -(1/delta) L' S_N c ;  beta = -S_N[c] / (2 delta)
        a = [-sum(L[k][j] * sc[k] for k in range(3)) / delta for j in range(3)]
        beta = Fraction(-s_value(N, c), 2 * delta)
        rows = [[Fraction(0)] * 5 for _ in range(5)]
        rows[0] = [Fraction(self.alpha), *a, beta]
        for i in range(3):
            rows[i + 1][1:4] = L[i]
            rows[i + 1][4] = Fraction(c[i])
        rows[4][4] = Fraction(delta)
        return rows

    def matrix(self, N: int) -> IntMat:
        return IntMat(self.rows(N))

    def element(self, form: QuadForm) -> OrthoElement:
        return OrthoElement(form, self.matrix(form.N), self.m, check=False)


def _canon3(N: int, K: IntMat, m: int) -> tuple[IntMat, RightCosetForm3]:
    """Left multiplier R in Gamma_N and the form of R @ K (denominator m kept as is)."""
    R, gamma = _reduce3(N, K.col(0))
    Kp = R @ K
    if gamma < 0:
        raise MembershipError("element is not in the identity component")
    alpha_star = gamma
    delta_star = exact_div(m * m, alpha_star)
    if Kp[1, 1] != m or Kp[2, 2] != delta_star:
        raise MembershipError("element does not reduce to the triangular shape")
    mu = Kp[1, 2]
    shift = -(mu // delta_star)
    if shift:
        T = IntMat(k_mu_rows(N, shift))
        R = T @ R
    form = RightCosetForm3(alpha_star, m, delta_star, mu % delta_star)
    return R, form


def _canon5(N: int, M: IntMat, m: int) -> tuple[IntMat, RightCosetForm5]:
    R, alpha = _reduce5(N, M.col(0))
    Mp = R @ M
    delta = exact_div(m * m, alpha)
    inner_mat = Mp.submatrix([1, 2, 3], [1, 2, 3])
    R3, inner = _canon3(N, inner_mat, m)
    Rh = IntMat(_embed_middle(R3))
    R = Rh @ R
    Mp = Rh @ Mp
    c_raw = [Mp[i, 4] for i in (1, 2, 3)]
    lam = [-(x // delta) for x in c_raw]
    if any(lam):
        T = IntMat(translation_rows(N, lam))
        R = T @ R
    c = tuple(x % delta for x in c_raw)
    return R, RightCosetForm5(alpha, delta, inner, c)


def right_coset_reduction(e: OrthoElement):
    """(R, form): R in the integral group with R @ e equal to the canonical form."""
    if e.dim == 3:
        R, f = _canon3(e.N, e.mat, e.denom)
    else:
        R, f = _canon5(e.N, e.mat, e.denom)
    return OrthoElement(e.form, R, 1, check=False), f


def right_coset_canonical(e: OrthoElement):
    """Canonical representative data of the right coset Gamma e."""
    return right_coset_reduction(e)[1]


# ---------------------------------------------------------------------------
# double cosets


@dataclass(frozen=True, order=True)
class OrthoDoubleCosetLabel:
    """Smith invariants of a reduced group element (1/m) M.

    dim 5: (alpha, alpha*, m, delta*, delta); dim 3: (alpha*, m, delta*).
    """

    m: int
    invariants: tuple[int, ...]

    def __post_init__(self):
        inv = tuple(int(x) for x in self.invariants)
        object.__setattr__(self, "invariants", inv)
        m = self.m
        if len(inv) == 5:
            a, a_s, mm, d_s, d = inv
            ok = mm == m and a * d == m * m and a_s * d_s == m * m
        elif len(inv) == 3:
            a_s, mm, d_s = inv
            ok = mm == m and a_s * d_s == m * m
        else:
            ok = False
        ok = ok and all(x > 0 for x in inv) and all(inv[i + 1] % inv[i] == 0 for i in range(len(inv) - 1))
        if not ok:
            raise ValueError(f"invalid double coset label m={m}, invariants={inv}")

    @property
    def dim(self) -> int:
        return len(self.invariants)

    def is_reduced(self) -> bool:
        return self.invariants[0] == 1

    def representative(self, form: QuadForm) -> OrthoElement:
        return OrthoElement(form, IntMat.diag(*self.invariants), self.m, check=False)

    def __str__(self):
        return "(1/{}) diag({})".format(self.m, ",".join(map(str, self.invariants)))

    def to_json(self) -> dict:
        return {"m": str(self.m), "invariants": [str(x) for x in self.invariants]}

    @classmethod
    def from_json(cls, data) -> "OrthoDoubleCosetLabel":
        if isinstance(data, (list, tuple)):
            inv = [int(x) for x in data]
            return cls(inv[len(inv) // 2], tuple(inv))
        return cls(int(data["m"]), tuple(int(x) for x in data["invariants"]))


def label_from_invariants(inv: Sequence[int]) -> OrthoDoubleCosetLabel:
    inv = tuple(int(x) for x in inv)
    return OrthoDoubleCosetLabel(inv[len(inv) // 2], inv)


def double_coset_label_of(mat: IntMat, m: int) -> OrthoDoubleCosetLabel:
    inv = smith_normal_form(mat).invariants
    try:
        return OrthoDoubleCosetLabel(m, inv)
    except ValueError:
        raise MembershipError(
            f"Smith invariants {inv} violate the double coset relations for m={m}"
        ) from None


def double_coset_canonical(e: OrthoElement) -> OrthoDoubleCosetLabel:
    """Double coset Gamma e Gamma, classified by the Smith invariants of e."""
    return double_coset_label_of(e.mat, e.denom)


# ---------------------------------------------------------------------------
# random sampling


_SL2_SMALL = [
    [[1, 1], [0, 1]],
    [[1, -1], [0, 1]],
    [[1, 0], [1, 1]],
    [[1, 0], [-1, 1]],
    [[0, -1], [1, 0]],
    [[2, 1], [1, 1]],
]


def _generator_pool3(N: int) -> list[list[list[int]]]:
    pool = [k_mu_rows(N, mu) for mu in (-2, -1, 1, 2)]
    pool += [k_tilde_mu_rows(N, mu) for mu in (-2, -1, 1, 2)]
    pool.append([[-x for x in r] for r in V_ROWS])
    for e in (d for d in range(2, N + 1) if N % d == 0):
        pool.append(atkin_lehner3_rows(N, e, *atkin_lehner_params(N, e)))
    return pool


def _generator_pool5(N: int) -> list[list[list[int]]]:
    pool = []
    for lam in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 1, 0], [0, -1, 1], [1, 0, -1]):
        pool.append([[int(x) for x in r] for r in translation_rows(N, lam)])
        pool.append([[int(x) for x in r] for r in lower_translation_rows(N, lam)])
    j = _embed_middle(V_ROWS)
    j[0][4] = j[4][0] = -1
    j[0][0] = j[4][4] = 0
    pool.append(j)
    for F in _SL2_SMALL:
        (a, b), (c, d) = F
        pool.append(m_f_rows(a, b, c, d))
        pool.append(m_tilde_f_rows(a, b, c, d))
    for K in _generator_pool3(N):
        pool.append(_embed_middle(K))
    return pool


def random_group_element(form: QuadForm, seed=None, word_length: int = 6) -> OrthoElement:
    """A random word of the given length in generators of Gamma_N / Gamma^_N."""
    if word_length < 0:
        raise ValueError("word_length must be non-negative")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    pool = _generator_pool3(form.N) if form.dim == 3 else _generator_pool5(form.N)
    mat = IntMat.identity(form.dim)
    for _ in range(word_length):
        mat = mat @ IntMat(rng.choice(pool))
    return OrthoElement(form, mat, 1, check=False)
