"""Bound formulas for sunflower-free families, as auditable values.

Rational formulas are evaluated exactly with :class:`fractions.Fraction`.
Formulas with irrational parts are evaluated in outward-rounded interval
arithmetic (192-bit mantissa) and the endpoint that keeps the inequality
conservative is reported: the upper endpoint for upper bounds, the lower
one for lower bounds.  Endpoints are binary floats and therefore convert to
``Fraction`` exactly, so comparisons against integers are exact.

Unspecified constants (the Kostochka constant ``D``, the exponent constant
``c``) are always caller-supplied and recorded in ``params``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

PREC_BITS = 192

_iv = MPIntervalContext()
_iv.prec = PREC_BITS


class BoundDomainError(ValueError):
    pass


class TheoremId(str, Enum):
    ERDOS_RADO = "ERDOS_RADO"
    KOSTOCHKA = "KOSTOCHKA"
    RAY_CHAUDHURI_WILSON = "RAY_CHAUDHURI_WILSON"
    DEZA = "DEZA"
    L_INTERSECTING = "L_INTERSECTING"
    ELL_INTERSECTING = "ELL_INTERSECTING"
    ELL_INTERSECTING_4K = "ELL_INTERSECTING_4K"
    RECURSION = "RECURSION"
    AHS_LOWER = "AHS_LOWER"
    F_LOWER = "F_LOWER"
    BINOMIAL_STEP = "BINOMIAL_STEP"


class Rounding(str, Enum):
    EXACT = "EXACT"
    ROUNDED_UP = "ROUNDED_UP"
    ROUNDED_DOWN = "ROUNDED_DOWN"


class RecursionVariant(str, Enum):
    AS_STATED = "RECURSION_AS_STATED"  # recurse on f(k-1, 3, s-1)
    AS_PROVED = "RECURSION_AS_PROVED"  # recurse on f(k-l-1, 3, s-1)


@dataclass(frozen=True)
class BoundValue:
    theorem_id: TheoremId
    params: dict
    value: Fraction
    rounding_mode: Rounding
    log_base: str | None = None
    audit: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        return {
            "theorem_id": self.theorem_id.value,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "value": _jsonable(self.value),
            "approx": float(self.value) if self.value < 10**300 else str(self.value.numerator // self.value.denominator),
            "rounding_mode": self.rounding_mode.value,
            "log_base": self.log_base,
            "audit": {k: _jsonable(v) for k, v in self.audit.items()},
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# -- interval helpers --------------------------------------------------------

def _ivq(x):
    x = _q(x)
    return _iv.mpf(x.numerator) / _iv.mpf(x.denominator)


def _ends(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return Fraction(*map(int, libmp.to_rational(lo))), Fraction(*map(int, libmp.to_rational(hi)))


def _upper(x) -> Fraction:
    return _ends(x)[1]


def _lower(x) -> Fraction:
    return _ends(x)[0]


def _log(x, base: str):
    if base == "e":
        return _iv.log(x)
    if base == "2":
        return _iv.log(x) / _iv.log(_iv.mpf(2))
    raise ValueError(f"log base must be 'e' or '2', got {base!r}")


def _pow2(x):
    return _iv.exp(x * _iv.log(_iv.mpf(2)))


def _golden_exponent():
    """1 + sqrt(5)/5 as an interval."""
    return 1 + _iv.sqrt(_iv.mpf(5)) / 5


def _binom(a: int, b: int) -> int:
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


# -- the bounds --------------------------------------------------------------

def er_bound(k: int, r: int) -> BoundValue:
    """Exact value of k!(r-1)^k (1 - sum_{t=1}^{k-1} t / ((t+1)! (r-1)^t))."""
    if k < 1 or r < 2:
        raise BoundDomainError(f"need k >= 1 and r >= 2, got k={k}, r={r}")
    tail = sum((Fraction(t, factorial(t + 1) * (r - 1) ** t) for t in range(1, k)), Fraction(0))
    value = factorial(k) * (r - 1) ** k * (1 - tail)
    return BoundValue(TheoremId.ERDOS_RADO, {"k": k, "r": r}, value, Rounding.EXACT)


def _loglog_factor(t: int, alpha: Fraction, base: str):
    """(log log log t)^2 / (alpha log log t), domain-checked."""
    ll = _log(_log(_iv.mpf(t), base), base)
    lll = _log(ll, base) if _lower(ll) > 0 else None
    if lll is None or _lower(lll) <= 0:
        raise BoundDomainError(f"log log log {t} is not certifiably positive (base {base})")
    return lll * lll / (_ivq(alpha) * ll)


def kostochka_bound(k: int, r: int, alpha, D, log_base: str = "e") -> BoundValue:
    """Upper-rounded D k! ((log log log k)^2 / (alpha log log k))^k."""
    alpha, D = _q(alpha), _q(D)
    if r <= 2 or alpha <= 1:
        raise BoundDomainError("need r > 2 and alpha > 1")
    if D <= 0:
        raise BoundDomainError("constant D must be positive")
    x = _ivq(D) * factorial(k) * _loglog_factor(k, alpha, log_base) ** k
    return BoundValue(
        TheoremId.KOSTOCHKA,
        {"k": k, "r": r, "alpha": alpha, "D": D},
        _upper(x),
        Rounding.ROUNDED_UP,
        log_base,
    )


def rw_bound(n: int, s: int) -> BoundValue:
    if not 0 < s <= n:
        raise BoundDomainError(f"need 0 < s <= n, got n={n}, s={s}")
    return BoundValue(TheoremId.RAY_CHAUDHURI_WILSON, {"n": n, "s": s}, Fraction(comb(n, s)), Rounding.EXACT)


def deza_bound(k: int) -> BoundValue:
    if k < 1:
        raise BoundDomainError("need k >= 1")
    return BoundValue(TheoremId.DEZA, {"k": k}, Fraction(k * k - k + 1), Rounding.EXACT)


def main_bound(k: int, s: int) -> BoundValue:
    """(k^2-k+2) 8^(s-1) 2^((1+sqrt5/5) k (s-1)); exact when s == 1."""
    if k < 1 or s < 1:
        raise BoundDomainError(f"need k >= 1 and s >= 1, got k={k}, s={s}")
    base = k * k - k + 2
    if s == 1:
        return BoundValue(TheoremId.L_INTERSECTING, {"k": k, "s": s}, Fraction(base), Rounding.EXACT)
    x = _iv.mpf(base * 8 ** (s - 1)) * _pow2(_golden_exponent() * (k * (s - 1)))
    return BoundValue(TheoremId.L_INTERSECTING, {"k": k, "s": s}, _upper(x), Rounding.ROUNDED_UP)


def main2_bound(k: int, ell: int, alpha, D, log_base: str = "e") -> BoundValue:
    """Upper-rounded D C(k,l) (k-l)! ((log log log (k-l))^2 / (alpha log log (k-l)))^(k-l)."""
    alpha, D = _q(alpha), _q(D)
    if not 0 <= ell < k:
        raise BoundDomainError(f"need 0 <= ell < k, got k={k}, ell={ell}")
    if alpha <= 1 or D <= 0:
        raise BoundDomainError("need alpha > 1 and D > 0")
    t = k - ell
    x = _ivq(D) * comb(k, ell) * factorial(t) * _loglog_factor(t, alpha, log_base) ** t
    return BoundValue(
        TheoremId.ELL_INTERSECTING,
        {"k": k, "ell": ell, "alpha": alpha, "D": D},
        _upper(x),
        Rounding.ROUNDED_UP,
        log_base,
    )


def _is_power_of_two(k: int) -> bool:
    return k > 0 and k & (k - 1) == 0


def ceil_k_minus_k_over_log(k: int, log_base: str = "e") -> int:
    """Certified ceil(k - k / log k)."""
    if k < 2:
        raise BoundDomainError("need k >= 2")
    if log_base == "2" and _is_power_of_two(k):
        x = k - Fraction(k, k.bit_length() - 1)
        return -((-x.numerator) // x.denominator)
    prec = PREC_BITS
    while prec <= 4 * PREC_BITS:
        ctx = MPIntervalContext()
        ctx.prec = prec
        lg = ctx.log(ctx.mpf(k)) if log_base == "e" else ctx.log(ctx.mpf(k)) / ctx.log(ctx.mpf(2))
        lo, hi = _ends(k - ctx.mpf(k) / lg)
        c_lo = -((-lo.numerator) // lo.denominator)
        c_hi = -((-hi.numerator) // hi.denominator)
        if c_lo == c_hi and lo.denominator != 1:
            return c_lo
        prec *= 2
    raise BoundDomainError(f"could not certify ceil(k - k/log k) for k={k}")


def main3_bound(k: int, D, log_base: str = "e") -> BoundValue:
    """D 4^k with the threshold l = ceil(k - k/log k) and the inequality audit.

    The audit checks C(k,l) (k-l)! <= 4^k in exact integers.
    """
    D = _q(D)
    if k < 2:
        raise BoundDomainError("need k >= 2")
    ell = ceil_k_minus_k_over_log(k, log_base)
    ell_c = max(ell, 0)
    lhs = comb(k, ell_c) * factorial(k - ell_c)
    return BoundValue(
        TheoremId.ELL_INTERSECTING_4K,
        {"k": k, "D": D, "ell": ell},
        D * 4**k,
        Rounding.EXACT,
        log_base,
        audit={"binom_times_factorial": lhs, "four_to_k": 4**k, "holds": lhs <= 4**k},
    )


def lemma_help(n: int, r: int) -> tuple[bool, bool]:
    """(C(n,r) <= C(n-1,r+1), r^2 + (1-3n) r + n^2 - 2n >= 0).

    Binomials with out-of-range arguments count as 0.
    """
    if not 0 <= r <= n:
        raise BoundDomainError(f"need 0 <= r <= n, got n={n}, r={r}")
    ineq = _binom(n, r) <= _binom(n - 1, r + 1)
    quad = r * r + (1 - 3 * n) * r + n * n - 2 * n >= 0
    return ineq, quad


def corollary_help2_threshold(n: int) -> BoundValue:
    """Lower-rounded (3n - 1 - sqrt(5)(n+1)) / 2."""
    x = (3 * n - 1 - _iv.sqrt(_iv.mpf(5)) * (n + 1)) / 2
    return BoundValue(TheoremId.BINOMIAL_STEP, {"n": n}, _lower(x), Rounding.ROUNDED_DOWN)


def help2_guaranteed_rs(n: int) -> range:
    """Integers r with 0 <= r <= threshold(n)."""
    t = corollary_help2_threshold(n).value
    top = t.numerator // t.denominator
    return range(0, min(top, n) + 1) if top >= 0 else range(0)


def lemma_binom_rhs(k: int) -> Fraction:
    """Lower-rounded 8 * 2^((1+sqrt5/5) k)."""
    return _lower(8 * _pow2(_golden_exponent() * k))


def lemma_binom_check(k: int) -> tuple[bool, list[dict]]:
    """Check C(2k-l, l+1) <= 8 2^((1+sqrt5/5) k) for 0 <= l <= k-1.

    The right side is rounded down, so a True answer is certified.
    """
    if k < 1:
        raise BoundDomainError("need k >= 1")
    rhs = lemma_binom_rhs(k)
    rows = []
    for ell in range(k):
        lhs = comb(2 * k - ell, ell + 1)
        rows.append({"ell": ell, "lhs": lhs, "rhs_lower": rhs, "holds": lhs <= rhs})
    return all(r["holds"] for r in rows), rows


def default_f1_base(k: int) -> int:
    """Upper bound on f(k,3,1).

    A {lam}-intersecting family with lam >= 1 and more than k^2-k+1 members is
    a sunflower; a {0}-intersecting one is pairwise disjoint.  Either way more
    than max(k^2-k+1, 2) members force a 3-petal sunflower.
    """
    return max(k * k - k + 1, 2)


def recursion_f_bound(
    k: int,
    s: int,
    base: Callable[[int], int] | None = None,
    variant: RecursionVariant = RecursionVariant.AS_STATED,
) -> BoundValue:
    """Evaluate f(k,3,s) <= max_l C(2k-l, l+1) f(k', 3, s-1).

    AS_STATED uses k' = k-1 with l over 0..k-1.  AS_PROVED uses k' = k-l-1,
    the uniformity of the reduced families, with l over 0..k-s (larger l
    leaves no room for s-1 further intersection sizes below k').
    """
    if not 1 <= s <= k:
        raise BoundDomainError(f"need 1 <= s <= k, got k={k}, s={s}")
    variant = RecursionVariant(variant)
    base_fn = base or default_f1_base

    @lru_cache(maxsize=None)
    def rec(kk: int, ss: int) -> tuple[int, int | None]:
        if ss == 1:
            return base_fn(kk), None
        best, arg = -1, None
        ells = range(kk) if variant is RecursionVariant.AS_STATED else range(kk - ss + 1)
        for ell in ells:
            sub = kk - 1 if variant is RecursionVariant.AS_STATED else kk - ell - 1
            val = comb(2 * kk - ell, ell + 1) * rec(sub, ss - 1)[0]
            if val > best:
                best, arg = val, ell
        return best, arg

    value, arg = rec(k, s)
    return BoundValue(
        TheoremId.RECURSION,
        {"k": k, "s": s, "variant": variant.value},
        Fraction(value),
        Rounding.EXACT,
        audit={"argmax_ell": arg, "base_is_default": base is None},
    )


def _ten_power_lower(t: int, c, log_base: str):
    c = _q(c)
    lg = _log(_iv.mpf(t), log_base) if t > 1 else _iv.mpf(0)
    expo = _iv.mpf(t) / 2 - _ivq(c) * lg
    return 2 * _iv.exp(expo * _iv.log(_iv.mpf(10)))


def _ten_power_bound(tid: TheoremId, name: str, t: int, c, log_base: str) -> BoundValue:
    if t < 1:
        raise BoundDomainError(f"need {name} >= 1")
    c = _q(c)
    params = {name: t, "c": c}
    if t % 2 == 0 and c == 0:
        return BoundValue(tid, params, Fraction(2 * 10 ** (t // 2)), Rounding.EXACT, log_base)
    x = _ten_power_lower(t, c, log_base)
    return BoundValue(tid, params, _lower(x), Rounding.ROUNDED_DOWN, log_base)


def f_lower_bound(s: int, c, log_base: str = "e") -> BoundValue:
    """Lower-rounded 2 * 10^(s/2 - c log s), a lower bound on f(k,3,s).

    Exact when the exponent is an integer (c = 0 and s even).
    """
    return _ten_power_bound(TheoremId.F_LOWER, "s", s, c, log_base)


def ahs_lower(k: int, c, log_base: str = "e") -> BoundValue:
    """Lower-rounded 2 * 10^(k/2 - c log k), size of the 3-sunflower-free construction."""
    return _ten_power_bound(TheoremId.AHS_LOWER, "k", k, c, log_base)
