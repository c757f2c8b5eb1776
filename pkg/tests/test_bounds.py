from fractions import Fraction
from math import comb, factorial

import mpmath
import pytest

from sunflower_lab import bounds as B
from sunflower_lab.bounds import BoundDomainError, RecursionVariant, Rounding


def er_oracle(k, r):
    s = sum(Fraction(t, factorial(t + 1) * (r - 1) ** t) for t in range(1, k))
    return factorial(k) * (r - 1) ** k * (1 - s)


def hp(expr):
    with mpmath.workdps(120):
        return expr()


@pytest.mark.parametrize("k,r,expected", [(1, 3, 2), (2, 3, 6), (3, 3, 32), (4, 3, 250)])
def test_er_values(k, r, expected):
    b = B.er_bound(k, r)
    assert b.value == expected and b.rounding_mode is Rounding.EXACT


def test_er_matches_oracle_and_grows_in_r():
    for k in range(1, 9):
        prev = 0
        for r in range(2, 8):
            v = B.er_bound(k, r).value
            assert v == er_oracle(k, r) and v > 0 and v > prev
            prev = v


def test_er_domain():
    with pytest.raises(BoundDomainError):
        B.er_bound(0, 3)
    with pytest.raises(BoundDomainError):
        B.er_bound(2, 1)


def test_kostochka_domain_and_rounding():
    b = B.kostochka_bound(16, 3, Fraction(3, 2), 1)
    assert b.rounding_mode is Rounding.ROUNDED_UP and b.value > 0
    with pytest.raises(BoundDomainError):
        B.kostochka_bound(10, 3, 2, 1)
    true = hp(lambda: mpmath.factorial(100) * (mpmath.log(mpmath.log(mpmath.log(100))) ** 2
                                               / (2 * mpmath.log(mpmath.log(100)))) ** 100)
    got = B.kostochka_bound(100, 3, 2, 1).value
    assert got >= Fraction(mpmath.nstr(true, 110)) * (1 - Fraction(1, 10**50))
    assert abs(float(got) / float(true) - 1) < 1e-12


def test_rw_and_deza():
    assert B.rw_bound(7, 1).value == 7
    assert B.rw_bound(10, 3).value == 120
    assert B.rw_bound(5, 5).value == 1
    assert [B.deza_bound(k).value for k in (1, 3, 10)] == [1, 7, 91]


def test_main_bound_exact_at_s1():
    for k in range(1, 12):
        b = B.main_bound(k, 1)
        assert b.rounding_mode is Rounding.EXACT
        assert b.value == k * k - k + 2 == B.deza_bound(k).value + 1


def test_main_bound_rounds_up():
    got = B.main_bound(2, 2).value
    true = hp(lambda: 4 * 8 * mpmath.power(2, (1 + mpmath.sqrt(5) / 5) * 2))
    assert 0 <= got - Fraction(mpmath.nstr(true, 100)) < Fraction(1, 10**40)
    assert abs(float(got) - 237.936) < 1e-3


def test_main2_binomial_factor():
    a = B.main2_bound(40, 20, 2, 1)
    b = B.main2_bound(40, 24, 2, 1)
    assert a.rounding_mode is Rounding.ROUNDED_UP
    # same log factor shape aside, the binomials differ as C(40,24) vs C(40,20)
    assert comb(40, 24) < comb(40, 20)
    assert a.value > 0 and b.value > 0
    with pytest.raises(BoundDomainError):
        B.main2_bound(20, 10, 2, 1)


@pytest.mark.parametrize("base", ["e", "2"])
def test_main3_small_and_audit(base):
    b = B.main3_bound(2, 1, base)
    assert b.value == 16 and b.params["ell"] == 0 and b.log_base == base
    big = B.main3_bound(16, 1, base)
    assert big.value == 4**16
    ell = big.params["ell"]
    assert comb(16, ell) * factorial(16 - ell) <= 4**16
    assert big.audit["holds"]


def test_ceil_ell_against_floats():
    for k in range(2, 200):
        for base, f in (("e", mpmath.log), ("2", lambda x: mpmath.log(x, 2))):
            expect = int(mpmath.ceil(hp(lambda: k - k / f(k))))
            assert B.ceil_k_minus_k_over_log(k, base) == expect


def test_lemma_help_examples():
    assert B.lemma_help(5, 1) == (True, True)
    assert B.lemma_help(4, 2) == (False, False)
    for n in range(1, 201):
        assert B.lemma_help(n, n) == (False, False)


def test_lemma_help_agreement_away_from_origin():
    bad = [(n, r) for n in range(1, 201) for r in range(n + 1) if len(set(B.lemma_help(n, r))) > 1]
    assert bad == []


def test_lemma_help_disagrees_at_origin():
    # C(0,0)=1 > C(-1,1)=0 while the quadratic is exactly 0
    assert B.lemma_help(0, 0) == (False, True)


def test_help2_threshold():
    t = B.corollary_help2_threshold(10)
    assert t.rounding_mode is Rounding.ROUNDED_DOWN
    assert 2.2 < float(t.value) < 2.21
    assert list(B.help2_guaranteed_rs(10)) == [0, 1, 2]
    assert all(comb(10, r) <= comb(9, r + 1) for r in (0, 1, 2))
    assert B.corollary_help2_threshold(2).value < 0 and len(B.help2_guaranteed_rs(2)) == 0


def test_binom_lemma():
    ok, rows = B.lemma_binom_check(1)
    assert ok and rows[0]["lhs"] == 2
    assert abs(float(B.lemma_binom_rhs(1)) - 21.81) < 0.01
    assert all(B.lemma_binom_check(k)[0] for k in range(1, 65))


def test_binom_rhs_rounds_down():
    for k in (1, 7, 30, 64):
        true = hp(lambda: 8 * mpmath.power(2, (1 + mpmath.sqrt(5) / 5) * k))
        got = B.lemma_binom_rhs(k)
        diff = Fraction(mpmath.nstr(true, 110)) - got
        assert 0 <= diff < Fraction(1, 10**30) * got


@pytest.mark.parametrize("k,s,stated,proved", [
    (3, 2, 30, 20), (3, 3, 80, 48), (4, 2, 147, 63), (4, 3, 630, 168), (4, 4, 1680, 384),
])
def test_recursion_variants(k, s, stated, proved):
    assert B.recursion_f_bound(k, s, variant=RecursionVariant.AS_STATED).value == stated
    assert B.recursion_f_bound(k, s, variant=RecursionVariant.AS_PROVED).value == proved


def test_recursion_base_and_custom():
    assert B.recursion_f_bound(3, 1).value == 7
    assert B.recursion_f_bound(2, 2, variant=RecursionVariant.AS_STATED).value == max(
        comb(4 - ell, ell + 1) * 2 for ell in (0, 1))
    assert B.recursion_f_bound(2, 2, base=lambda k: 100, variant=RecursionVariant.AS_STATED).value == 400
    with pytest.raises(BoundDomainError):
        B.recursion_f_bound(2, 0)


def test_lower_bounds():
    v = B.f_lower_bound(1, 5).value
    assert v <= 2 * Fraction(mpmath.nstr(hp(lambda: mpmath.sqrt(10)), 60))
    assert abs(float(v) - 6.3245553) < 1e-6
    assert B.f_lower_bound(2, 0).value == 20
    assert B.f_lower_bound(5, 2).value < B.f_lower_bound(5, 1).value
    assert B.ahs_lower(3, 1).rounding_mode is Rounding.ROUNDED_DOWN


def test_bound_value_json():
    data = B.main_bound(2, 2).to_json()
    assert data["theorem_id"] and data["rounding_mode"] == "ROUNDED_UP"
    assert Fraction(data["value"]) == B.main_bound(2, 2).value
