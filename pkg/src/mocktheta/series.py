"""Exact truncated Puiseux/power series in q, and constructors for the
q-hypergeometric and partial theta series that the verification suites cross-check.

Coefficients are exact `Fraction`s; every operation returns the largest
truncation order that is guaranteed correct, so identity checks are exact
rational comparisons, never float approximations.

A FracPowSeries with scale D represents  sum_{e} c_e q^(e/D)  with the
coefficients known exactly for min_exp <= e < trunc_order (in units of 1/D)
and *unknown* — not zero — from trunc_order on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .arith import kronecker

__all__ = [
    "FracPowSeries",
    "SeriesIdentityReport",
    "verify_identity",
    "qpochhammer",
    "mock_theta_f",
    "mock_theta_f2",
    "mock_theta_f_outer",
    "mock_theta_f2_outer",
    "partial_theta_psi",
    "partial_theta",
    "wrt_A",
    "wrt_chi60",
    "zwegers_phi",
    "zwegers_phi_star",
    "false_theta_F",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class FracPowSeries:
    """Truncated formal series in q^(1/scale) with exact rational coefficients."""

    __slots__ = ("scale", "min_exp", "trunc_order", "coeffs")

    def __init__(self, scale: int, min_exp: int, trunc_order: int,
                 coeffs: Sequence[Fraction]):
        if scale < 1:
            raise ValueError("scale must be a positive integer")
        if trunc_order - min_exp != len(coeffs):
            raise ValueError("coeffs must have exactly trunc_order - min_exp entries")
        self.scale = scale
        self.min_exp = min_exp
        self.trunc_order = trunc_order
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int, scale: int = 1) -> "FracPowSeries":
        n = order * scale
        return cls(scale, 0, n, [_ZERO] * n)

    @classmethod
    def one(cls, order: int, scale: int = 1) -> "FracPowSeries":
        n = order * scale
        return cls(scale, 0, n, [_ONE] + [_ZERO] * (n - 1))

    @classmethod
    def from_terms(cls, terms, order: int, scale: int = 1) -> "FracPowSeries":
        """Series from (exponent, coefficient) pairs; exponents in units 1/scale."""
        n = order * scale
        coeffs = [_ZERO] * n
        for e, c in terms:
            if e < n:
                if e < 0:
                    raise ValueError("from_terms only supports exponents >= 0")
                coeffs[e] += Fraction(c)
        return cls(scale, 0, n, coeffs)

    # -- bookkeeping -------------------------------------------------------

    def coeff(self, exponent) -> Fraction:
        """Coefficient of q^exponent (a Fraction or int); error beyond truncation."""
        e = Fraction(exponent) * self.scale
        if e.denominator != 1:
            return _ZERO
        e = int(e)
        if e >= self.trunc_order:
            raise ValueError(f"exponent {exponent} is beyond the truncation order")
        if e < self.min_exp:
            return _ZERO
        return self.coeffs[e - self.min_exp]

    def nonzero_terms(self):
        """Iterate (exponent_numerator, coefficient) over stored nonzeros."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.min_exp + i, c

    def rescale(self, new_scale: int) -> "FracPowSeries":
        if new_scale == self.scale:
            return self
        if new_scale % self.scale:
            raise ValueError("new scale must be a multiple of the current scale")
        f = new_scale // self.scale
        coeffs = [_ZERO] * (len(self.coeffs) * f)
        coeffs[::f] = self.coeffs
        return FracPowSeries(new_scale, self.min_exp * f, self.trunc_order * f, coeffs)

    def shift(self, delta) -> "FracPowSeries":
        """Multiply by q^delta (delta rational with denominator dividing scale)."""
        d = Fraction(delta) * self.scale
        if d.denominator != 1:
            raise ValueError("shift must be representable in the current scale")
        d = int(d)
        return FracPowSeries(self.scale, self.min_exp + d, self.trunc_order + d, self.coeffs)

    def _common(self, other: "FracPowSeries"):
        s = math.lcm(self.scale, other.scale)
        return self.rescale(s), other.rescale(s)

    # -- ring operations ---------------------------------------------------

    def __neg__(self) -> "FracPowSeries":
        return FracPowSeries(self.scale, self.min_exp, self.trunc_order,
                             [-c for c in self.coeffs])

    def __add__(self, other) -> "FracPowSeries":
        if not isinstance(other, FracPowSeries):
            return NotImplemented
        a, b = self._common(other)
        n = min(a.trunc_order, b.trunc_order)
        m = min(a.min_exp, b.min_exp, n)
        out = [_ZERO] * (n - m)
        for i, c in enumerate(a.coeffs):
            e = a.min_exp + i
            if e < n:
                out[e - m] += c
        for i, c in enumerate(b.coeffs):
            e = b.min_exp + i
            if e < n:
                out[e - m] += c
        return FracPowSeries(a.scale, m, n, out)

    def __sub__(self, other) -> "FracPowSeries":
        return self + (-other)

    def __mul__(self, other) -> "FracPowSeries":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return FracPowSeries(self.scale, self.min_exp, self.trunc_order,
                                 [c * x for x in self.coeffs])
        a, b = self._common(other)
        # guaranteed order of the Cauchy product
        n = min(a.trunc_order + b.min_exp, b.trunc_order + a.min_exp)
        m = a.min_exp + b.min_exp
        out = [_ZERO] * (n - m)
        bc = b.coeffs
        blen = len(bc)
        for i, ai in enumerate(a.coeffs):
            if not ai:
                continue
            base = a.min_exp + i + b.min_exp - m
            jmax = min(blen, n - m - base)
            for j in range(jmax):
                bj = bc[j]
                if bj:
                    out[base + j] += ai * bj
        return FracPowSeries(a.scale, m, n, out)

    __rmul__ = __mul__

    def inverse(self) -> "FracPowSeries":
        """Multiplicative inverse; requires a nonzero leading coefficient."""
        v = None
        for i, c in enumerate(self.coeffs):
            if c:
                v = i
                break
        if v is None:
            raise ValueError("non-invertible series: zero leading coefficient")
        u = self.coeffs[v:]  # unit part, u[0] != 0
        length = len(u)
        inv = [_ZERO] * length
        inv[0] = 1 / u[0]
        for i in range(1, length):
            s = _ZERO
            for j in range(1, i + 1):
                if u[j] and inv[i - j]:
                    s += u[j] * inv[i - j]
            inv[i] = -s / u[0]
        val = self.min_exp + v
        return FracPowSeries(self.scale, -val, -val + length, inv)

    # -- comparison & serialization -----------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, FracPowSeries):
            return NotImplemented
        return verify_identity(self, other).equal

    # unhashable: equality is truncation-sensitive
    __hash__ = None

    def __repr__(self):
        parts = []
        for e, c in list(self.nonzero_terms())[:8]:
            exp = Fraction(e, self.scale)
            parts.append(f"{c}*q^({exp})")
        body = " + ".join(parts) if parts else "0"
        return f"<FracPowSeries {body} + O(q^({Fraction(self.trunc_order, self.scale)}))>"

    def to_json(self) -> str:
        return json.dumps({
            "scale": self.scale,
            "min_exp": self.min_exp,
            "trunc_order": self.trunc_order,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "FracPowSeries":
        d = json.loads(text)
        coeffs = [Fraction(s) for s in d["coeffs"]]
        return cls(d["scale"], d["min_exp"], d["trunc_order"], coeffs)


@dataclass(frozen=True)
class SeriesIdentityReport:
    """Outcome of an exact comparison of two truncated series."""

    checked_order: int
    scale: int
    equal: bool
    first_mismatch: Optional[tuple] = None  # (exponent: Fraction, lhs, rhs)


def verify_identity(lhs: FracPowSeries, rhs: FracPowSeries) -> SeriesIdentityReport:
    """Compare two series exactly on their common known range.

    Raises if the stored ranges are disjoint (nothing can be compared).
    """
    a, b = lhs._common(rhs)
    n = min(a.trunc_order, b.trunc_order)
    if n <= max(a.min_exp, b.min_exp):
        raise ValueError("disjoint exponent ranges: nothing to compare")
    lo = min(a.min_exp, b.min_exp)
    for e in range(lo, n):
        ca = a.coeffs[e - a.min_exp] if a.min_exp <= e else _ZERO
        cb = b.coeffs[e - b.min_exp] if b.min_exp <= e else _ZERO
        if ca != cb:
            return SeriesIdentityReport(n, a.scale, False,
                                        (Fraction(e, a.scale), ca, cb))
    return SeriesIdentityReport(n, a.scale, True, None)


# ---------------------------------------------------------------------------
# q-Pochhammer products
# ---------------------------------------------------------------------------

def qpochhammer(coeff, a, b, n, order: int, scale: int = None) -> FracPowSeries:
    """(coeff * q^a ; q^b)_n = prod_{j=0}^{n-1} (1 - coeff q^(a + j b)).

    `n` may be None (or math.inf) for the infinite product, which requires
    a > 0 and b > 0 so that only finitely many factors matter mod q^order.
    Exponents a, b may be Fractions; scale defaults to the lcm of their
    denominators.
    """
    a = Fraction(a)
    b = Fraction(b)
    coeff = Fraction(coeff)
    if scale is None:
        scale = math.lcm(a.denominator, b.denominator)
    infinite = n is None or n == math.inf
    if infinite and (a <= 0 or b <= 0):
        raise ValueError("divergent product: infinite q-Pochhammer needs a, b > 0")
    out = FracPowSeries.one(order, scale)
    j = 0
    while True:
        if not infinite and j >= n:
            break
        e = a + j * b
        if infinite and e >= order:
            break
        en = e * scale
        if en.denominator != 1:
            raise ValueError("exponent not representable at this scale")
        factor = FracPowSeries.from_terms([(0, _ONE), (int(en), -coeff)], order, scale) \
            if e < order else FracPowSeries.one(order, scale)
        out = out * factor
        j += 1
    return out


def _inv_one_plus(m: int, order: int, square: bool = False) -> FracPowSeries:
    """(1+q^m)^(-1) or (1+q^m)^(-2), expanded directly (sparse)."""
    terms = []
    j = 0
    while j * m < order:
        c = (-1) ** j * ((j + 1) if square else 1)
        terms.append((j * m, Fraction(c)))
        j += 1
    return FracPowSeries.from_terms(terms, order)


def _inv_one_minus(m: int, order: int) -> FracPowSeries:
    terms = []
    j = 0
    while j * m < order:
        terms.append((j * m, _ONE))
        j += 1
    return FracPowSeries.from_terms(terms, order)


# ---------------------------------------------------------------------------
# The mock theta function f(q) and its relatives
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def mock_theta_f(order: int) -> FracPowSeries:
    """f(q) = sum_{n>=0} q^(n^2) / (-q;q)_n^2, truncated to O(q^order)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    total = FracPowSeries.one(order)
    term = FracPowSeries.one(order)
    n = 1
    while n * n < order:
        # term_n = term_{n-1} * q^(2n-1) * (1+q^n)^(-2)
        term = (term * _inv_one_plus(n, order, square=True)).shift(2 * n - 1)
        total = total + term
        n += 1
    return total


@lru_cache(maxsize=8)
def mock_theta_f2(order: int) -> FracPowSeries:
    """f2(q) = 1 + sum_{n>=1} (-1)^(n+1) q^n / ((1+q)...(1+q^n)); equals f(q).

    The sign (-1)^(n+1) is forced by f2 = f: with (-1)^n the sum is 2 - f(q)
    instead (the identity suite pins both facts).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    total = FracPowSeries.one(order)
    term = FracPowSeries.one(order)
    for n in range(1, order):
        # running (-1)^(n+1) q^n / (-q;q)_n
        term = (term * _inv_one_plus(n, order)).shift(1) * Fraction(-1)
        total = total - term
    return total


def mock_theta_f_outer(order: int) -> FracPowSeries:
    """The |q|>1 expansion of f in the variable w = 1/q:
    1 + sum_{n>=1} w^n / ((1+w)^2 ... (1+w^n)^2)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    total = FracPowSeries.one(order)
    prod = FracPowSeries.one(order)
    for n in range(1, order):
        prod = prod * _inv_one_plus(n, order, square=True)
        total = total + prod.shift(n)
    return total


def mock_theta_f2_outer(order: int) -> FracPowSeries:
    """The |q|>1 expansion of f2 in the variable w = 1/q:

        1 + sum_{n>=1} (-1)^(n+1) w^(n(n-1)/2) / ((1+w)...(1+w^n)),

    obtained by substituting q = 1/w in each term of f2 (q^n / (-q;q)_n =
    w^(n(n-1)/2) / (-w;w)_n).  Equals 2 psi(w) exactly.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    total = FracPowSeries.one(order)
    prod = FracPowSeries.one(order)
    n = 1
    while n * (n - 1) // 2 < order:
        prod = prod * _inv_one_plus(n, order)
        total = total - prod.shift(n * (n - 1) // 2) * Fraction((-1) ** n)
        n += 1
    return total


def partial_theta_psi(order: int) -> FracPowSeries:
    """psi(w) = sum_{n>=1} (-12/n) w^((n^2-1)/24)  (n coprime to 6)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    terms = []
    n = 1
    while (n * n - 1) // 24 < order:
        c = kronecker(-12, n)
        if c:
            terms.append(((n * n - 1) // 24, Fraction(c)))
        n += 1
    return FracPowSeries.from_terms(terms, order)


def partial_theta(char_modulus: int, char_values, nu: int, order: int,
                  exponent_scale: int = 1) -> FracPowSeries:
    """theta*(psi, nu) = sum_{n>=0} psi(n) n^nu q^(n^2 / exponent_scale).

    char_values: mapping or callable on residues mod char_modulus.
    """
    if nu not in (0, 1):
        raise ValueError("nu must be 0 or 1")
    if callable(char_values):
        psi: Callable[[int], Fraction] = lambda n: Fraction(char_values(n % char_modulus))
    else:
        table = list(char_values)
        psi = lambda n: Fraction(table[n % char_modulus])
    terms = []
    n = 0
    while n * n < order * exponent_scale:
        c = psi(n) * (n ** nu if nu else 1)
        if c:
            terms.append((n * n, c))
        n += 1
    return FracPowSeries.from_terms(terms, order, scale=exponent_scale)


# ---------------------------------------------------------------------------
# The Poincare-sphere partial thetas and the fifth-order identity family
# ---------------------------------------------------------------------------

def wrt_chi60(n: int) -> int:
    """The odd +/-1 pattern mod 60 carried by the A± series:
    +1 on {1,11,19,29}, -1 on {31,41,49,59}, else 0.

    Equals (12/n) for n = +1 mod 5 and -(12/n) for n = -1 mod 5.
    """
    r = n % 60
    if r in (1, 11, 19, 29):
        return 1
    if r in (31, 41, 49, 59):
        return -1
    return 0


def wrt_A(sign: int, order: int) -> FracPowSeries:
    """A±(q) = sum over n>0, n = ±1 mod 5, of chi60(n) q^((n^2-1)/120).

    On the n = +1 branch chi60(n) = (12/n). On the n = -1 branch the
    coefficient is -(12/n): the real-part construction
    Re((12/n) eps(n)) with eps the order-4 character mod 5 fixes this sign,
    and it is the one under which the fifth-order identities hold exactly.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    terms = []
    n = 1
    residue = 1 if sign > 0 else 4
    while (n * n - 1) // 120 < order:
        if n % 5 == residue:
            c = wrt_chi60(n)
            if c:
                terms.append(((n * n - 1) // 120, Fraction(c)))
        n += 1
    return FracPowSeries.from_terms(terms, order)


def _phi_denominators(order: int):
    """Yield cumulative 1/((q;q^5)_{n+1} (q^4;q^5)_n) for n = 0, 1, 2, ..."""
    inv = _inv_one_minus(1, order)  # 1/(1-q) = 1/(q;q^5)_1
    n = 0
    while True:
        yield n, inv
        n += 1
        e1 = 1 + 5 * n   # next factor of (q;q^5)_{n+1}
        e4 = 4 + 5 * (n - 1)  # next factor of (q^4;q^5)_n
        if e4 < order:
            inv = inv * _inv_one_minus(e4, order)
        if e1 < order:
            inv = inv * _inv_one_minus(e1, order)


def zwegers_phi(order: int) -> FracPowSeries:
    """Phi(q) = -1 + sum_{n>=0} q^(5n^2) / ((q;q^5)_{n+1} (q^4;q^5)_n)."""
    total = -FracPowSeries.one(order)
    for n, inv in _phi_denominators(order):
        if 5 * n * n >= order:
            break
        total = total + inv.shift(5 * n * n)
    return total


def zwegers_phi_star(order: int) -> FracPowSeries:
    """Phi*(q) = -1 - sum_{n>=0} q^(5n+1) / ((q;q^5)_{n+1} (q^4;q^5)_n) = Phi(1/q)."""
    total = -FracPowSeries.one(order)
    for n, inv in _phi_denominators(order):
        if 5 * n + 1 >= order:
            break
        total = total - inv.shift(5 * n + 1)
    return total


def false_theta_F(sign: int, order: int) -> FracPowSeries:
    """F±(q) = sum over ±(n - 1/2) > 0 of (-1)^n q^((5n^2-n)/2)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    terms = []
    n = 1 if sign > 0 else 0
    while True:
        e = (5 * n * n - n) // 2
        if e >= order:
            break
        terms.append((e, Fraction((-1) ** n)))
        n += sign if sign > 0 else -1
    return FracPowSeries.from_terms(terms, order)
