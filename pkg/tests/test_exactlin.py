import random
from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest

from parahecke.exactlin import (
    GaussRat,
    IntMat,
    clear_denominators,
    det,
    divisors,
    factorize,
    inverse_scaled,
    is_squarefree,
    rank_mod_p,
    rat_inverse,
    smith_normal_form,
    solve_congruence,
)


def minors_oracle(A: IntMat) -> tuple[int, ...]:
    """Invariant factors from gcds of k x k minors (independent of the SNF code)."""
    n, m = A.shape
    out, prev = [], 1
    for k in range(1, min(n, m) + 1):
        g = 0
        for rows in combinations(range(n), k):
            for cols in combinations(range(m), k):
                g = gcd(g, det(A.submatrix(rows, cols)))
        if g == 0:
            out.extend([0] * (min(n, m) - k + 1))
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


def random_matrix(rng, n, m, lo=-6, hi=6):
    return IntMat([[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_snf_of_diagonal_chain(p):
    assert smith_normal_form(IntMat.diag(1, p, p * p)).invariants == (1, p, p * p)


def test_snf_two_by_two():
    assert smith_normal_form(IntMat([[2, 4], [6, 8]])).invariants == (2, 4)


def test_snf_identity_and_zero():
    assert smith_normal_form(IntMat.identity(5)).invariants == (1,) * 5
    assert smith_normal_form(IntMat.zeros(3)).invariants == (0, 0, 0)


def test_snf_transforms_and_minors_oracle():
    rng = random.Random(11)
    for _ in range(200):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        A = random_matrix(rng, n, m)
        s = smith_normal_form(A)
        D = s.left_transform @ A @ s.right_transform
        diag = [[s.invariants[i] if i == j and i < len(s.invariants) else 0 for j in range(m)] for i in range(n)]
        assert D == IntMat(diag)
        assert abs(det(s.left_transform)) == 1 and abs(det(s.right_transform)) == 1
        nz = [d for d in s.invariants if d]
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
        assert s.invariants == minors_oracle(A)


def block_diag(A: IntMat, B: IntMat) -> IntMat:
    n, m = A.nrows, B.nrows
    return IntMat([list(A.row(i)) + [0] * m for i in range(n)] + [[0] * n + list(B.row(i)) for i in range(m)])


def test_snf_multiplicative_on_coprime_blocks():
    rng = random.Random(5)
    done = 0
    while done < 40:
        A, B = random_matrix(rng, 2, 2), random_matrix(rng, 3, 3)
        if det(A) == 0 or det(B) == 0 or gcd(det(A), det(B)) != 1:
            continue
        done += 1
        # right-align the invariant sequences and multiply entrywise
        a = (1,) * 3 + smith_normal_form(A).invariants
        b = (1,) * 2 + smith_normal_form(B).invariants
        expected = tuple(x * y for x, y in zip(a, b))
        assert smith_normal_form(block_diag(A, B)).invariants == expected


def test_rank_mod_p_examples():
    assert rank_mod_p(IntMat.diag(1, 2, 2, 2, 4), 2) == 1
    assert rank_mod_p(IntMat.diag(1, 3, 3, 3, 9), 3) == 1
    assert rank_mod_p(IntMat.identity(4), 7) == 4
    assert rank_mod_p(IntMat([[2, 4], [6, 8]]), 2) == 0
    with pytest.raises(ValueError):
        rank_mod_p(IntMat.identity(2), 4)


def test_rank_mod_p_counts_units_among_invariants():
    rng = random.Random(3)
    for _ in range(200):
        A = random_matrix(rng, 5, 5)
        for p in (2, 3, 5):
            inv = smith_normal_form(A).invariants
            assert rank_mod_p(A, p) == sum(1 for d in inv if d % p)


def test_inverse_scaled_examples():
    assert inverse_scaled(IntMat.identity(3)) == (IntMat.identity(3), 1)
    assert inverse_scaled(IntMat.diag(1, 2, 4)) == (IntMat.diag(8, 4, 2), 8)
    a, b, c, d = 3, 5, -2, 7
    assert inverse_scaled(IntMat([[a, b], [c, d]])) == (IntMat([[d, -b], [-c, a]]), a * d - b * c)
    with pytest.raises(ZeroDivisionError):
        inverse_scaled(IntMat([[1, 2], [2, 4]]))


def test_inverse_scaled_random():
    rng = random.Random(9)
    for _ in range(100):
        A = random_matrix(rng, 4, 4)
        if det(A) == 0:
            continue
        B, s = inverse_scaled(A)
        assert A @ B == IntMat.identity(4) * s
        assert s == det(A)


def test_rational_helpers():
    A = [[Fraction(1, 2), Fraction(1, 3)], [0, 1]]
    B, k = clear_denominators(A)
    assert k == 6 and B == IntMat([[3, 2], [0, 6]])
    inv = rat_inverse(A)
    assert inv == [[2, Fraction(-2, 3)], [0, 1]]


def test_intmat_is_immutable_value():
    A = IntMat([[1, 2], [3, 4]])
    with pytest.raises(AttributeError):
        A.rows = ()
    assert A == IntMat([[1, 2], [3, 4]]) and hash(A) == hash(IntMat([[1, 2], [3, 4]]))
    with pytest.raises(ValueError):
        IntMat([[Fraction(1, 2)]])


def test_gaussian_rationals():
    z = GaussRat(Fraction(1, 2), 3)
    w = GaussRat(2, -1)
    assert (z * w) / w == z
    assert z * z.conjugate() == GaussRat(z.norm(), 0)


def test_number_theory_helpers():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert is_squarefree(30) and not is_squarefree(12)
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert solve_congruence(4, 2, 6) == [2, 5]
    assert solve_congruence(2, 1, 4) == []
