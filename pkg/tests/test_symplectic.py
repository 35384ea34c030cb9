import json
import random
from fractions import Fraction
from math import gcd

import pytest

from parahecke.exactlin import GaussRat, IntMat
from parahecke.hecke import HeckeElement
from parahecke.hecke import enumerate_right_cosets, prime_power_label
from parahecke.orthogonal import (
    OrthoElement,
    build_form,
    make_generator,
    right_coset_canonical,
    translation_rows,
)
from parahecke import symplectic as sp
from parahecke.symplectic import ParamodCosetLabel as P

LEVELS = (1, 2, 3, 5, 6)


# -- elements and shape


def test_projective_sign_and_scale_reduction():
    a = sp.SympElement(2, IntMat.diag(2, 4, 8, 4), 16)
    assert a == sp.diagonal(2, 1, 2, 4, 2)
    neg = sp.SympElement(2, -sp.J_N(2).mat, sp.J_N(2).scale)
    assert neg == sp.J_N(2)
    with pytest.raises(sp.MembershipError):
        sp.SympElement(1, IntMat.diag(1, 2, 1, 1), 1)


def test_is_paramodular_examples():
    for N in LEVELS:
        assert sp.is_paramodular(IntMat.identity(4), N)
    assert not sp.is_paramodular(sp.J4, 2)
    JN = [[0, 0, -1, 0], [0, 0, 0, Fraction(-1, 2)], [1, 0, 0, 0], [0, 2, 0, 0]]
    assert sp.is_paramodular(JN, 2)
    # the Atkin-Lehner elements are not in Sigma_N
    assert sp.nu(sp.W(2, 2)) == 2


def test_nu_examples():
    rng = random.Random(1)
    for N in LEVELS:
        assert sp.nu(sp.random_sigma_element(N, rng, 6)) == 1
        for p in (2, 3):
            assert sp.nu(sp.diagonal(N, 1, p, p * p, p)) == p * p
        assert sp.nu(sp.W(N, N)) == N


def test_make_W_examples():
    w = sp.make_W(2, 2)
    assert (w.alpha, w.beta, w.gamma, w.delta) == (0, 1, -1, 0)
    assert w.V == IntMat([[0, 2], [-1, 0]])
    assert sp.W(1, 6) == sp.SympElement.identity(6)
    w = sp.make_W(2, 6)
    assert (w.alpha, w.beta, w.gamma, w.delta) == (2, 1, 1, 1)
    assert 2 * w.alpha * w.delta - 3 * w.beta * w.gamma == 1
    alt = sp.make_W(2, 6, (-1, -1, 1, 1)).element()
    assert sp.nu(alt @ w.element().inverse()) == 1
    assert sp.sigma_canonical(alt) == sp.sigma_canonical(w.element()) == P(2, 1, 1, 1)
    with pytest.raises(ValueError):
        sp.make_W(4, 6)
    with pytest.raises(ValueError):
        sp.make_W(2, 6, (1, 1, 1, 1))


@pytest.mark.parametrize("N", LEVELS)
def test_W_squared_in_sigma(N):
    for d in (x for x in range(1, N + 1) if N % x == 0):
        w = sp.W(d, N)
        assert sp.nu(w @ w) == 1
        for e in (x for x in range(1, N + 1) if N % x == 0):
            f = d * e // gcd(d, e) ** 2
            prod = w @ sp.W(e, N)
            assert sp.nu(prod @ sp.W(f, N).inverse()) == 1


# -- half spaces and the isomorphism


def test_phi_examples():
    i = GaussRat(0, 1)
    assert sp.phi([[i, 0], [0, i]], 2) == (i, 0, GaussRat(0, 2))
    assert sp.phi([[1, 2], [2, 3]], 5) == (1, 2, 15)
    assert sp.phi([[0, 0], [0, 0]], 3) == (0, 0, 0)
    with pytest.raises(ValueError):
        sp.phi([[0, 1], [2, 0]], 1)


def test_map_examples():
    for N in LEVELS:
        f = build_form(N, 5)
        assert sp.to_orthogonal(sp.J_N(N)) == make_generator("J_star", f)
        S = [[Fraction(1, 2), 3], [3, Fraction(-2, N)]]
        lam = sp.phi(S, N)
        assert sp.to_orthogonal(sp.translation(N, S)) == OrthoElement.from_rational(f, translation_rows(N, lam))
    img = sp.to_orthogonal(sp.diagonal(1, 1, 2, 12, 6))
    assert img == OrthoElement(build_form(1, 5), IntMat.diag(1, 3, 6, 12, 36), 6)


@pytest.mark.parametrize("N", LEVELS)
def test_diagonal_images(N):
    f = build_form(N, 5)
    for u in range(1, 7):
        for v in range(1, 5):
            img = sp.to_orthogonal(sp.diagonal(N, 1, u, u * u * v, u * v))
            assert img == OrthoElement(f, IntMat.diag(1, v, u * v, u * u * v, u * u * v * v), u * v)
            assert sp.from_orthogonal(img) == sp.diagonal(N, 1, u, u * u * v, u * v)


@pytest.mark.parametrize("N", LEVELS)
def test_homomorphism(N):
    rng = random.Random(N)
    for _ in range(200):
        a = sp.random_G_element(N, rng, 3)
        b = sp.random_G_element(N, rng, 3)
        assert sp.to_orthogonal(a @ b) == sp.to_orthogonal(a) @ sp.to_orthogonal(b)


@pytest.mark.parametrize("N", LEVELS)
def test_closed_form_matches_interpolation(N):
    rng = random.Random(10 + N)
    for _ in range(100):
        M = sp.random_G_element(N, rng, 3)
        assert sp.closed_form_numerator(M) == sp.orthogonal_numerator(M)


@pytest.mark.parametrize("N", LEVELS)
def test_intertwining(N):
    rng = random.Random(20 + N)
    for _ in range(60):
        M = sp.random_G_element(N, rng, 4)
        Z = sp.random_H2_point(rng)
        assert sp.in_H2(Z)
        assert sp.check_intertwining(M, Z)


@pytest.mark.parametrize("N", LEVELS)
def test_discriminant_kernel(N):
    rng = random.Random(30 + N)
    f = build_form(N, 5)
    assert sp.in_discriminant_kernel(OrthoElement(f, IntMat.identity(5)))
    for _ in range(100):
        e = sp.to_orthogonal(sp.random_sigma_element(N, rng, 8))
        assert e.denom == 1 and sp.in_discriminant_kernel(e)
        s = sp.to_orthogonal(sp.random_sigma_star_element(N, rng, 8))
        assert s.denom == 1
    if N > 1:
        assert not sp.in_discriminant_kernel(sp.to_orthogonal(sp.W(N, N)))


def test_kernel_is_plus_minus_identity():
    for N in LEVELS:
        minus = sp.SympElement(N, -IntMat.identity(4), 1)
        assert sp.to_orthogonal(minus) == OrthoElement(build_form(N, 5), IntMat.identity(5))


@pytest.mark.parametrize("N", [1, 2, 3])
def test_canonical_forms_round_trip(N):
    f = build_form(N, 5)
    for lab in (prime_power_label(2, 1, 0), prime_power_label(2, 1, 1)):
        for form in enumerate_right_cosets(lab, N).forms:
            e = form.element(f)
            back = sp.from_orthogonal(e)
            assert sp.to_orthogonal(back) == e
    assert sp.from_orthogonal(make_generator("J_star", f)) == sp.J_N(N)


def test_so2sp_rejects_non_canonical_input():
    f = build_form(2, 5)
    e = make_generator("M_tilde_lambda", f, (1, 0, 0)) @ OrthoElement(f, IntMat.diag(1, 2, 2, 2, 4), 2)
    assert right_coset_canonical(e).element(f) != e
    with pytest.raises(ValueError, match="not invertible at point level"):
        sp.from_orthogonal(e)


def test_sigma_words_match_kernel_and_nu():
    rng = random.Random(7)
    for N in (2, 3, 6):
        for _ in range(50):
            d = rng.choice([x for x in range(1, N + 1) if N % x == 0])
            M = sp.W(d, N) @ sp.random_sigma_element(N, rng, 6)
            e = sp.to_orthogonal(M)
            assert sp.in_discriminant_kernel(e) == (sp.nu(M) == 1)


# -- canonical labels


def test_sigma_star_canonical_examples():
    for N in (1, 2, 3):
        assert sp.sigma_star_canonical(sp.SympElement.identity(N)) == sp.SigmaStarLabel(1, 1)
        for p in (2, 3):
            assert sp.sigma_star_canonical(sp.diagonal(N, 1, 1, p, p)) == sp.SigmaStarLabel(1, p)
            assert sp.sigma_star_canonical(sp.diagonal(N, 1, p, p * p, p)) == sp.SigmaStarLabel(p, 1)


def test_sigma_canonical_examples():
    for N in (1, 2, 3, 6):
        assert sp.sigma_canonical(sp.SympElement.identity(N)) == P(1, 1, 1, 1)
        for p in (2, 3):
            assert sp.sigma_canonical(sp.diagonal(N, 1, 1, p, p)) == P(1, 1, 1, p)
            if N % p:
                assert sp.sigma_canonical(sp.diagonal(N, 1, p, p * p, p)) == P(1, 1, p, 1)
            else:
                Wp = sp.W(p, N)
                x = Wp @ sp.diagonal(N, 1, p, p * p, p) @ Wp
                assert sp.sigma_canonical(x) == P(1, p, 1, 1)
                assert sp.sigma_canonical(sp.diagonal(N, p, 1, p, p * p)) == P(1, p, 1, 1)


@pytest.mark.parametrize("N", [2, 3, 6])
def test_atkin_lehner_conjugated_diagonals(N):
    for d in (x for x in range(1, N + 1) if N % x == 0):
        Wd = sp.W(d, N)
        for u in range(1, 7):
            for v in (1, 2):
                x = Wd @ sp.diagonal(N, 1, u, u * u * v, u * v) @ Wd
                u1 = 1
                for p in (2, 3, 5):
                    if d % p == 0:
                        while u % (u1 * p) == 0:
                            u1 *= p
                assert sp.sigma_canonical(x) == P(1, u1, u // u1, v)


@pytest.mark.parametrize("N", [1, 2, 3, 6])
def test_sigma_canonical_is_double_coset_invariant(N):
    rng = random.Random(40 + N)
    labels = [P(1, 1, 1, 1), P(1, 1, 1, 2), P(1, 1, 2, 1), P(1, 1, 3, 2)]
    labels += [P(d, 1, 1, 1) for d in range(2, N + 1) if N % d == 0]
    labels += [P(1, p, 1, 1) for p in (2, 3) if N % p == 0]
    for lab in labels:
        rep = lab.representative(N)
        assert sp.nu(rep) == lab.nu
        for _ in range(25):
            a = sp.random_sigma_element(N, rng, 5)
            b = sp.random_sigma_element(N, rng, 5)
            assert sp.sigma_canonical(a @ rep @ b) == lab


def test_label_validation():
    with pytest.raises(ValueError):
        P(1, 2, 2, 1)
    with pytest.raises(ValueError):
        P(1, 3, 1, 1).representative(2)
    with pytest.raises(ValueError):
        P(3, 1, 1, 1).representative(2)
    lab = P(2, 2, 3, 5)
    assert lab.nu == 2 * 36 * 5
    assert P.from_json(json.loads(json.dumps(lab.to_json()))) == lab


# -- the paramodular Hecke algebra


def test_sigma_coset_counts():
    assert sp.sigma_coset_count(P(1, 1, 1, 2), 1) == 15
    assert sp.sigma_coset_count(P(1, 1, 2, 1), 1) == 30
    assert sp.sigma_coset_count(P(1, 1, 1, 2), 2) == 18
    assert sp.sigma_coset_count(P(1, 1, 2, 1), 2) == 24
    assert sp.sigma_coset_count(P(1, 2, 1, 1), 2) == 24
    assert sp.sigma_coset_count(P(2, 1, 1, 1), 2) == 1


@pytest.mark.parametrize("N", [2, 3, 6])
def test_atkin_lehner_products(N):
    divs = [d for d in range(1, N + 1) if N % d == 0]
    for d in divs:
        for e in divs:
            f = d * e // gcd(d, e) ** 2
            assert sp.sigma_W(N, d) * sp.sigma_W(N, e) == sp.sigma_W(N, f)


@pytest.mark.parametrize("N", [2, 3])
def test_zero_divisor_and_non_commutativity(N):
    one = HeckeElement.unit(N, "param")
    Wn = sp.sigma_W(N, N)
    assert (Wn * Wn) == one
    assert ((Wn - one) * (Wn + one)).is_zero()
    t1, t2 = sp.sigma_T1(N, N), sp.sigma_T2(N, N)
    assert Wn * t2 != t2 * Wn
    assert Wn * t1 == t1 * Wn
    assert Wn * t2 * Wn == HeckeElement.basis(N, P(1, N, 1, 1), "param")


def test_atkin_lehner_commutations():
    N = 6
    ws = [sp.sigma_W(N, d) for d in (2, 3, 6)]
    for a in ws:
        for b in ws:
            assert a * b == b * a
    others = [
        HeckeElement.basis(N, P(1, 1, 1, 2), "param"),
        HeckeElement.basis(N, P(1, 1, 1, 3), "param"),
    ]
    for w in ws:
        for x in others:
            assert w * x == x * w
    # nu = 9 is coprime to d = 2
    w2 = sp.sigma_W(N, 2)
    for lab in (P(1, 3, 1, 1), P(1, 1, 3, 1)):
        x = HeckeElement.basis(N, lab, "param")
        assert w2 * x == x * w2


def test_coprime_sigma_products():
    for N, la, lb in ((2, P(1, 1, 1, 2), P(1, 1, 1, 3)), (3, P(1, 1, 2, 1), P(3, 1, 1, 1))):
        prod = sp.sigma_multiply(la, lb, N)
        rep = la.representative(N) @ lb.representative(N)
        assert prod == HeckeElement.basis(N, sp.sigma_canonical(rep), "param")


@pytest.mark.parametrize("N,p", [(1, 2), (3, 2), (2, 3)])
def test_primary_components_commute_when_p_does_not_divide_N(N, p):
    t1, t2 = sp.sigma_T1(N, p), sp.sigma_T2(N, p)
    assert t1 * t2 == t2 * t1


def _param(N, terms):
    return HeckeElement(N, {P(*k): c for k, c in terms.items()}, "param")


def test_t1_t2_expansion_p_not_dividing_N():
    for N in (1, 3):
        t1, t2 = sp.sigma_T1(N, 2), sp.sigma_T2(N, 2)
        assert t1 * t2 == _param(N, {(1, 1, 1, 2): 6, (1, 1, 2, 2): 1})


def test_t1_t2_expansion_p_dividing_N():
    # a third term with coefficient p^2 - 1 appears, and the order matters
    t1, t2 = sp.sigma_T1(2, 2), sp.sigma_T2(2, 2)
    assert t1 * t2 == _param(2, {(1, 1, 1, 2): 4, (1, 1, 2, 2): 1, (2, 1, 2, 1): 3})
    assert t2 * t1 == _param(2, {(1, 1, 1, 2): 4, (1, 1, 2, 2): 1, (2, 2, 1, 1): 3})
    t1, t2 = sp.sigma_T1(3, 3), sp.sigma_T2(3, 3)
    assert t1 * t2 == _param(3, {(1, 1, 1, 3): 9, (1, 1, 3, 3): 1, (3, 1, 3, 1): 8})
    assert t2 * t1 == _param(3, {(1, 1, 1, 3): 9, (1, 1, 3, 3): 1, (3, 3, 1, 1): 8})


def _invert(x: HeckeElement) -> HeckeElement:
    """Apply M -> M^-1 label-wise; an anti-automorphism of the Hecke algebra."""
    N = x.N
    return HeckeElement(N, {sp.sigma_canonical(lab.representative(N).inverse()): c for lab, c in x.items()}, "param")


@pytest.mark.parametrize("N", [2, 3])
def test_expansions_compatible_with_inversion(N):
    t1, t2 = sp.sigma_T1(N, N), sp.sigma_T2(N, N)
    assert _invert(t1) == t1 and _invert(t2) == t2
    assert _invert(t1 * t2) == t2 * t1


def test_json_round_trip():
    rng = random.Random(3)
    M = sp.random_G_element(6, rng, 4)
    back = sp.SympElement.from_json(json.loads(json.dumps(M.to_json())))
    assert back == M
