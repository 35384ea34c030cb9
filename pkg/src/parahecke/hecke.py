"""Hecke algebras of (Gamma_N, G_N) and (Gamma^_N, G^_N).

Double cosets are indexed by :class:`OrthoDoubleCosetLabel` (their Smith
invariants).  A product of double cosets is computed with the classical
counting rule

    (G a G)(G b G) = sum_c  #{ j : c b_j^-1 in G a G }  (G c G),

where b_j runs over right coset representatives of G b G and c over fixed
(diagonal) representatives of the candidate double cosets.  Only the
right-hand factor ever needs a coset table.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Mapping

from .exactlin import IntMat, divisors, exact_div, factorize, is_prime, smith_normal_form
from .orthogonal import (
    OrthoDoubleCosetLabel,
    OrthoElement,
    RightCosetForm3,
    RightCosetForm5,
    as_level,
    build_form,
)

log = logging.getLogger(__name__)

__all__ = [
    "BoundExceeded",
    "EnumerationBound",
    "RightCosetTable",
    "HeckeElement",
    "GeneratorLabel",
    "T1",
    "T2",
    "enumerate_right_cosets",
    "multiply",
    "count_double_cosets",
    "express_in_generators",
    "evaluate_polynomial",
    "verify_commutativity",
]


class BoundExceeded(RuntimeError):
    """The requested enumeration is larger than the configured bound."""


@dataclass(frozen=True)
class EnumerationBound:
    """Largest admissible prime-power part of a coset denominator.

    By default p^2 for p in {2, 3} and p for larger primes.  ``max_m``
    caps the whole denominator when given.
    """

    max_exponent: Mapping[int, int] | None = None
    max_m: int | None = None

    def limit(self, p: int) -> int:
        if self.max_exponent and p in self.max_exponent:
            return self.max_exponent[p]
        return 2 if p <= 3 else 1

    def check(self, m: int) -> None:
        if self.max_m is not None and m > self.max_m:
            raise BoundExceeded(f"denominator {m} exceeds the bound {self.max_m}")
        if self.max_m is None:
            for p, e in factorize(m).items():
                if e > self.limit(p):
                    raise BoundExceeded(
                        f"denominator {m} has {p}^{e}, above the enumeration bound {p}^{self.limit(p)}"
                    )

    def allows(self, m: int) -> bool:
        try:
            self.check(m)
        except BoundExceeded:
            return False
        return True


DEFAULT_BOUND = EnumerationBound()


# ---------------------------------------------------------------------------
# right coset enumeration


def _residues(a: int, b: int, n: int, upto: int) -> range:
    """All x in [0, upto) with a x = b (mod n); empty range if unsolvable."""
    a %= n
    b %= n
    g = gcd(a, n)
    if b % g:
        return range(0)
    n1 = n // g
    x0 = 0 if n1 == 1 else (b // g) * pow(a // g, -1, n1) % n1
    return range(x0, upto, n1)


def inner_forms(N: int, m: int) -> list[RightCosetForm3]:
    """All integral 3x3 forms L with m^2 L^-1 integral, for denominator m."""
    out = []
    m2 = m * m
    for a_s in divisors(m2):
        d_s = m2 // a_s
        for mu in range(d_s):
            # L integral and S^-1 L' S = m^2 L^-1 integral
            if (m * mu) % d_s == 0 and (N * mu * mu) % d_s == 0:
                out.append(RightCosetForm3(a_s, m, d_s, mu))
    return out


def _candidates5(N: int, m: int, alpha: int, inner: RightCosetForm3):
    """Canonical 5x5 right coset forms with given alpha and inner block that
    are integral together with m^2 M^-1."""
    m2 = m * m
    delta = m2 // alpha
    a_s, d_s, mu = inner.alpha_star, inner.delta_star, inner.mu
    x = 2 * N * m * mu // d_s
    y = N * mu * mu // d_s
    for c3 in _residues(a_s, 0, delta, delta):
        for c2 in _residues(2 * N * m, x * c3, 2 * N * delta, delta):
            for c1 in _residues(d_s, 2 * N * mu * c2 - y * c3, delta, delta):
                if (c1 * c3 - N * c2 * c2) % delta == 0:
                    yield RightCosetForm5(alpha, delta, inner, (c1, c2, c3))


def _enumerate_branch(args):
    N, label_inv, m, alpha, inner = args
    out = []
    for form in _candidates5(N, m, alpha, inner):
        mat = form.matrix(N)
        if smith_normal_form(mat).invariants == label_inv:
            out.append(form)
    return out


@dataclass(frozen=True)
class RightCosetTable:
    N: int
    label: OrthoDoubleCosetLabel
    forms: tuple

    @property
    def count(self) -> int:
        return len(self.forms)

    def __len__(self) -> int:
        return len(self.forms)

    @property
    def form_obj(self):
        return build_form(self.N, self.label.dim)

    @property
    def reps(self) -> list[OrthoElement]:
        f = self.form_obj
        return [x.element(f) for x in self.forms]

    def matrices(self) -> list[IntMat]:
        return [x.matrix(self.N) for x in self.forms]

    def to_json(self) -> dict:
        return {
            "v": 1,
            "N": str(self.N),
            "label": [str(x) for x in self.label.invariants],
            "m": str(self.label.m),
            "reps": [[[str(x) for x in r] for r in M.rows] for M in self.matrices()],
            "count": str(self.count),
        }

    @classmethod
    def from_json(cls, data: dict) -> "RightCosetTable":
        """Parse and re-validate a serialized table.

        Every representative must be a group element in canonical right coset
        form with the stated double coset label, and the count must match.
        """
        from .orthogonal import right_coset_reduction

        if str(data.get("v")) != "1":
            raise ValueError("unsupported table version")
        N = as_level(int(data["N"])).N
        label = OrthoDoubleCosetLabel.from_json([int(x) for x in data["label"]])
        if int(data["m"]) != label.m:
            raise ValueError("denominator does not match the label")
        f = build_form(N, label.dim)
        forms = []
        for rows in data["reps"]:
            mat = IntMat([[int(x) for x in r] for r in rows])
            e = OrthoElement(f, mat, label.m)
            if e.denom != label.m or smith_normal_form(e.mat).invariants != label.invariants:
                raise ValueError("representative outside the double coset")
            R, form = right_coset_reduction(e)
            if form.matrix(N) != mat:
                raise ValueError("representative is not in canonical form")
            forms.append(form)
        if len(set(forms)) != len(forms):
            raise ValueError("duplicate representatives")
        if int(data["count"]) != len(forms):
            raise ValueError("count does not match the representatives")
        return cls(N, label, tuple(sorted(forms)))


_TABLES: dict = {}


def register_table(table: RightCosetTable) -> None:
    """Make a (validated) table available to later enumerations."""
    _TABLES[(table.N, table.label)] = table


def enumerate_right_cosets(
    label: OrthoDoubleCosetLabel,
    N,
    bound: EnumerationBound | None = None,
    jobs: int = 1,
) -> RightCosetTable:
    """All right cosets Gamma h inside the double coset of ``label``.

    Every canonical tuple (alpha, inner form, c) is produced by solving the
    integrality conditions as linear congruences; the survivors whose Smith
    invariants match the label are the coset representatives.
    """
    level = as_level(N)
    (bound or DEFAULT_BOUND).check(label.m)
    if not label.is_reduced():
        raise ValueError(f"label {label} is not in lowest terms")
    key = (level.N, label)
    table = _TABLES.get(key)
    if table is None:
        table = _enumerate(level.N, label, jobs)
        _TABLES[key] = table
    return table


def _enumerate(N: int, label: OrthoDoubleCosetLabel, jobs: int = 1) -> RightCosetTable:
    m = label.m
    inners = inner_forms(N, m)
    if label.dim == 3:
        forms = [f for f in inners if smith_normal_form(f.matrix(N)).invariants == label.invariants]
        return RightCosetTable(N, label, tuple(sorted(forms)))
    work = [(N, label.invariants, m, alpha, inner) for alpha in divisors(m * m) for inner in inners]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_enumerate_branch, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        chunks = [_enumerate_branch(w) for w in work]
    forms = sorted(f for chunk in chunks for f in chunk)
    log.debug("enumerated %d right cosets for N=%d, %s", len(forms), N, label)
    return RightCosetTable(N, label, tuple(forms))


def coset_count(label: OrthoDoubleCosetLabel, N, bound: EnumerationBound | None = None) -> int:
    return enumerate_right_cosets(label, N, bound).count


# ---------------------------------------------------------------------------
# labels


def chain_labels(m: int, dim: int = 5) -> list[OrthoDoubleCosetLabel]:
    """All chains alpha | alpha* | m | delta* | delta with alpha delta = alpha* delta* = m^2."""
    out = []
    m2 = m * m
    if dim == 3:
        for a_s in divisors(m):
            out.append(OrthoDoubleCosetLabel(m, (a_s, m, m2 // a_s)))
        return out
    for a_s in divisors(m):
        for a in divisors(a_s):
            out.append(OrthoDoubleCosetLabel(m, (a, a_s, m, m2 // a_s, m2 // a)))
    return sorted(out)


def reduced_labels_dividing(m: int, dim: int = 5) -> list[OrthoDoubleCosetLabel]:
    """Labels in lowest terms whose denominator divides m."""
    return sorted(lab for k in divisors(m) for lab in chain_labels(k, dim) if lab.is_reduced())


def prime_power_label(p: int, r: int, s: int) -> OrthoDoubleCosetLabel:
    """(1/p^r) diag(1, p^s, p^r, p^(2r-s), p^(2r))."""
    if not 0 <= s <= r:
        raise ValueError("need 0 <= s <= r")
    return OrthoDoubleCosetLabel(p**r, (1, p**s, p**r, p ** (2 * r - s), p ** (2 * r)))


def count_double_cosets(N, p: int, r: int) -> int:
    """Number of double cosets Gamma^ (1/p^r) M Gamma^ with M integral."""
    as_level(N)
    if r < 0:
        raise ValueError("r must be non-negative")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return len(chain_labels(p**r))


# ---------------------------------------------------------------------------
# Hecke elements


@dataclass(frozen=True)
class GeneratorLabel:
    which: str
    p: int
    N: int

    def __post_init__(self):
        if self.which not in ("T1", "T2"):
            raise ValueError("which must be 'T1' or 'T2'")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        as_level(self.N)

    @property
    def label(self) -> OrthoDoubleCosetLabel:
        return prime_power_label(self.p, 1, 1 if self.which == "T1" else 0)

    def element(self) -> "HeckeElement":
        return HeckeElement.basis(self.N, self.label)


class HeckeElement:
    """Finite Z-combination of double cosets (immutable)."""

    __slots__ = ("N", "kind", "_terms")

    def __init__(self, N, terms: Mapping | Iterable = (), kind: str | None = None):
        self.N = as_level(N).N
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = defaultdict(int)
        for lab, c in items:
            acc[lab] += int(c)
        clean = {lab: c for lab, c in acc.items() if c}
        if kind is None:
            kind = _kind_of(next(iter(clean))) if clean else "so5"
        self.kind = kind
        self._terms = dict(sorted(clean.items(), key=lambda kv: _sort_key(kv[0])))

    @classmethod
    def basis(cls, N, label, kind: str | None = None) -> "HeckeElement":
        return cls(N, {label: 1}, kind)

    @classmethod
    def unit(cls, N, kind: str = "so5") -> "HeckeElement":
        if kind == "param":
            from .symplectic import ParamodCosetLabel

            return cls(N, {ParamodCosetLabel(1, 1, 1, 1): 1}, kind)
        dim = 3 if kind == "so3" else 5
        return cls(N, {OrthoDoubleCosetLabel(1, (1,) * dim): 1}, kind)

    @classmethod
    def zero(cls, N, kind: str = "so5") -> "HeckeElement":
        return cls(N, {}, kind)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, label) -> int:
        return self._terms.get(label, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "HeckeElement"):
        if self.N != other.N:
            raise ValueError("Hecke elements of different levels")
        if self._terms and other._terms and self.kind != other.kind:
            raise ValueError(f"cannot combine {self.kind} and {other.kind} elements")

    def _kind_with(self, other):
        return self.kind if self._terms else other.kind

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        return HeckeElement(self.N, list(self.items()) + list(other.items()), self._kind_with(other))

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        return HeckeElement(
            self.N, list(self.items()) + [(k, -c) for k, c in other.items()], self._kind_with(other)
        )

    def __neg__(self):
        return HeckeElement(self.N, [(k, -c) for k, c in self.items()], self.kind)

    def __mul__(self, other):
        if isinstance(other, int):
            return HeckeElement(self.N, [(k, other * c) for k, c in self.items()], self.kind)
        if isinstance(other, HeckeElement):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "HeckeElement":
        out = HeckeElement.unit(self.N, self.kind)
        for _ in range(n):
            out = multiply(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.N == other.N and self._terms == other._terms

    def __hash__(self):
        return hash((self.N, tuple(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"HeckeElement(N={self.N}, 0)"
        body = " + ".join(f"{c}*[{lab}]" for lab, c in self.items())
        return f"HeckeElement(N={self.N}, {body})"

    def degree(self, bound: EnumerationBound | None = None) -> int:
        """Total number of right cosets, counted with coefficients."""
        if self.kind == "param":
            from .symplectic import sigma_coset_count

            return sum(c * sigma_coset_count(lab, self.N, bound) for lab, c in self.items())
        return sum(c * coset_count(lab, self.N, bound) for lab, c in self.items())

    def to_json(self) -> dict:
        return {
            "v": 1,
            "N": str(self.N),
            "kind": self.kind,
            "terms": [{"label": lab.to_json(), "coeff": str(c)} for lab, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HeckeElement":
        kind = data.get("kind", "so5")
        if kind == "param":
            from .symplectic import ParamodCosetLabel

            parse = ParamodCosetLabel.from_json
        else:
            parse = OrthoDoubleCosetLabel.from_json
        terms = [(parse(t["label"]), int(t["coeff"])) for t in data["terms"]]
        return cls(int(data["N"]), terms, kind)


def _kind_of(label) -> str:
    if isinstance(label, OrthoDoubleCosetLabel):
        return "so3" if label.dim == 3 else "so5"
    return "param"


def _sort_key(label):
    if isinstance(label, OrthoDoubleCosetLabel):
        return (label.m, label.invariants)
    return label.sort_key()


def T1(N, p: int) -> HeckeElement:
    """T_{N,1}(p) = Gamma^ (1/p) diag(1,p,p,p,p^2) Gamma^."""
    return GeneratorLabel("T1", p, as_level(N).N).element()


def T2(N, p: int) -> HeckeElement:
    """T_{N,2}(p) = Gamma^ (1/p) diag(1,1,p,p^2,p^2) Gamma^."""
    return GeneratorLabel("T2", p, as_level(N).N).element()


# ---------------------------------------------------------------------------
# products


def _inverse_numerators(table: RightCosetTable) -> list[IntMat]:
    """m^2 h^-1 = gram^-1 h' gram for each representative h of the table."""
    return [e.scaled_inverse() for e in table.reps]


def _reduced_label(mat: IntMat, den: int):
    g = gcd(mat.content(), den)
    if g > 1:
        mat, den = mat // g, den // g
    return den, mat


def label_product(
    N: int,
    la: OrthoDoubleCosetLabel,
    lb: OrthoDoubleCosetLabel,
    bound: EnumerationBound | None = None,
) -> dict:
    """Structure constants of [la] * [lb] by the fixed-representative count."""
    table = enumerate_right_cosets(lb, N, bound)
    return dict(_label_product_cached(N, la, lb, table))


@lru_cache(maxsize=None)
def _label_product_cached(N, la, lb, table):
    binv = _inverse_numerators(table)
    out = {}
    for lc in reduced_labels_dividing(la.m * lb.m, la.dim):
        inv_c = lc.invariants
        den0 = lc.m * lb.m
        n = 0
        for B in binv:
            # diag(c) @ B is a row scaling
            scaled = IntMat._raw(tuple(tuple(c * x for x in r) for c, r in zip(inv_c, B.rows)))
            den, mat = _reduced_label(scaled, den0)
            if den != la.m:
                continue
            if smith_normal_form(mat).invariants == la.invariants:
                n += 1
        if n:
            out[lc] = n
    return tuple(sorted(out.items()))


def label_product_by_division(
    N: int,
    la: OrthoDoubleCosetLabel,
    lb: OrthoDoubleCosetLabel,
    bound: EnumerationBound | None = None,
) -> dict:
    """Same structure constants via the degree rule: count every product a_i b_j
    by its double coset, then divide by the right coset count of that coset."""
    ta = enumerate_right_cosets(la, N, bound)
    tb = enumerate_right_cosets(lb, N, bound)
    hits: dict = defaultdict(int)
    A = ta.matrices()
    B = tb.matrices()
    for a in A:
        for b in B:
            den, mat = _reduced_label(a @ b, la.m * lb.m)
            inv = smith_normal_form(mat).invariants
            hits[OrthoDoubleCosetLabel(den, inv)] += 1
    out = {}
    for lc, total in hits.items():
        deg = coset_count(lc, N, bound)
        q, r = divmod(total, deg)
        if r:
            raise ArithmeticError(f"non-integral structure constant {total}/{deg} for {lc}")
        out[lc] = q
    return out


def multiply(a: HeckeElement, b: HeckeElement, bound: EnumerationBound | None = None) -> HeckeElement:
    """Product in the Hecke algebra; exact integer structure constants."""
    a._check(b)
    if a.is_zero() or b.is_zero():
        return HeckeElement.zero(a.N, a._kind_with(b))
    kind = a._kind_with(b)
    if kind == "param":
        from .symplectic import sigma_label_product

        prod = sigma_label_product
    else:
        prod = label_product
    acc: dict = defaultdict(int)
    for la, ca in a.items():
        for lb, cb in b.items():
            for lc, n in prod(a.N, la, lb, bound).items():
                acc[lc] += ca * cb * n
    return HeckeElement(a.N, acc, kind)


def verify_commutativity(a, b, N=None, bound: EnumerationBound | None = None) -> bool:
    """True iff a*b == b*a (labels or Hecke elements)."""
    if not isinstance(a, HeckeElement):
        a = HeckeElement.basis(N, a)
    if not isinstance(b, HeckeElement):
        b = HeckeElement.basis(N, b)
    return multiply(a, b, bound) == multiply(b, a, bound)


# ---------------------------------------------------------------------------
# polynomials in T1, T2


def monomial(N, p: int, u: int, v: int, bound: EnumerationBound | None = None) -> HeckeElement:
    """T1(p)^u * T2(p)^v."""
    return _monomial_cached(as_level(N).N, p, u, v, bound)


@lru_cache(maxsize=None)
def _monomial_cached(N, p, u, v, bound):
    if u == 0 and v == 0:
        return HeckeElement.unit(N)
    if v > 0:
        return multiply(_monomial_cached(N, p, u, v - 1, bound), T2(N, p), bound)
    return multiply(_monomial_cached(N, p, u - 1, v, bound), T1(N, p), bound)


def evaluate_polynomial(poly: Mapping, N, p: int, bound: EnumerationBound | None = None) -> HeckeElement:
    """sum coeff * T1^u T2^v for poly = {(u, v): coeff}."""
    out = HeckeElement.zero(N)
    for (u, v), c in poly.items():
        if c:
            out = out + monomial(N, p, u, v, bound) * c
    return out


def _prime_exponent(m: int, p: int) -> int:
    r = 0
    while m % p == 0:
        m //= p
        r += 1
    if m != 1:
        raise ValueError(f"denominator is not a power of {p}")
    return r


def express_in_generators(x: HeckeElement, p: int, bound: EnumerationBound | None = None) -> dict:
    """Write x as an integral polynomial {(u, v): coeff} in T1(p), T2(p).

    Elimination runs from the top filtration degree down; inside degree k the
    monomial T1^s T2^(k-s) has leading label (1, p^s, p^k, p^(2k-s), p^(2k)).
    """
    if x.kind != "so5":
        raise ValueError("only orthogonal (dim 5) Hecke elements are supported")
    N = x.N
    r = max((_prime_exponent(lab.m, p) for lab, _ in x.items()), default=0)
    residual = x
    poly: dict = {}
    for k in range(r, -1, -1):
        for s in range(k + 1):
            lead = prime_power_label(p, k, s)
            c = residual.coefficient(lead)
            if not c:
                continue
            mono = monomial(N, p, s, k - s, bound)
            for s2 in range(s):
                if mono.coefficient(prime_power_label(p, k, s2)):
                    raise ArithmeticError("monomial expansion is not triangular")
            lc = mono.coefficient(lead)
            q, rem = divmod(c, lc)
            if rem:
                raise ArithmeticError(f"leading coefficient {lc} does not divide {c}")
            poly[(s, k - s)] = poly.get((s, k - s), 0) + q
            residual = residual - mono * q
    if not residual.is_zero():
        raise ArithmeticError(f"element is not in the span of the monomials: {residual}")
    return {k: v for k, v in sorted(poly.items()) if v}
