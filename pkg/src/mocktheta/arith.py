"""Exact arithmetic ingredients: sawtooth, Dedekind sums, eta-type multiplier
phases, Kronecker symbols, and the Kloosterman-type sums A_k(n).

Everything here is exact until the final lowering to a complex number:
Dedekind sums and phases are kept as `Fraction`s, and A_k(n) is accumulated
as a sum of exactly-represented unit phases, each lowered once at the target
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpc, mpf

__all__ = [
    "sawtooth",
    "dedekind_sum",
    "dedekind_sum_sawtooth",
    "dedekind_sum_reciprocity",
    "Phase",
    "omega",
    "kronecker",
    "KloostermanValue",
    "kloosterman_A",
    "unit_phase",
]


def sawtooth(x) -> Fraction:
    """((x)): 0 at integers, else x - floor(x) - 1/2."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def dedekind_sum_sawtooth(h: int, k: int) -> Fraction:
    """s(h,k) summed literally from the sawtooth definition (reference path)."""
    if k < 1:
        raise ValueError("modulus k must be positive")
    if math.gcd(h, k) != 1:
        raise ValueError("undefined Dedekind sum: gcd(h, k) != 1")
    return sum(
        (sawtooth(Fraction(mu, k)) * sawtooth(Fraction(h * mu, k)) for mu in range(1, k)),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def _dedekind_reduced(h: int, k: int) -> Fraction:
    # 0 <= h < k, gcd(h,k) = 1.  Exact integer rearrangement of the sawtooth
    # sum: s(h,k) = sum_mu mu*(h*mu mod k)/k^2 - (k-1)/4, valid since k never
    # divides h*mu for 0 < mu < k.
    if k == 1:
        return Fraction(0)
    total = 0
    for mu in range(1, k):
        total += mu * ((h * mu) % k)
    return Fraction(total, k * k) - Fraction(k - 1, 4)


def dedekind_sum(h: int, k: int) -> Fraction:
    """Dedekind sum s(h,k) = sum_{mu mod k} ((mu/k))((h mu/k)).

    O(k) evaluation of the defining sum, exact rationals throughout.
    h is reduced mod k first; gcd(h,k) must be 1.
    """
    if k < 1:
        raise ValueError("modulus k must be positive")
    if math.gcd(h, k) != 1:
        raise ValueError("undefined Dedekind sum: gcd(h, k) != 1")
    return _dedekind_reduced(h % k, k)


def dedekind_sum_reciprocity(h: int, k: int) -> Fraction:
    """s(h,k) via the reciprocity law in O(log k) steps (oracle path).

    Uses s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk))/12 together with
    periodicity and oddness, Euclid-style.
    """
    if k < 1:
        raise ValueError("modulus k must be positive")
    if math.gcd(h, k) != 1:
        raise ValueError("undefined Dedekind sum: gcd(h, k) != 1")
    h %= k
    sign = 1
    s = Fraction(0)
    while k > 1:
        if h == 0:
            break
        # s(h,k) = rec(h,k) - s(k mod h, h)
        rec = Fraction(-1, 4) + Fraction(h * h + k * k + 1, 12 * h * k)
        s += sign * rec
        sign = -sign
        h, k = k % h, h
    return s


@dataclass(frozen=True)
class Phase:
    """An exact unit complex number e^(pi*i*r) with rational r reduced mod 2."""

    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r) % 2)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.r + other.r)

    def conjugate(self) -> "Phase":
        return Phase(-self.r)

    def lower(self, prec: int = 256) -> mpc:
        """Numerical value at the given binary precision."""
        with mp.workprec(prec):
            x = mpf(self.r.numerator) / self.r.denominator
            return mpc(mp.cospi(x), mp.sinpi(x))


def unit_phase(x) -> Phase:
    """e(x) = e^(2 pi i x) as an exact Phase, x rational."""
    return Phase(2 * Fraction(x))


def omega(h: int, k: int) -> Phase:
    """The multiplier omega_{h,k} = exp(pi*i*s(h,k)) as an exact Phase."""
    return Phase(dedekind_sum(h, k))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out twos from n
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    # Jacobi-style reciprocity loop
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    if n != 1:
        return 0
    return result


@dataclass(frozen=True)
class KloostermanValue:
    """A_k(n) with its parameters; value is real up to rounding noise."""

    value: mpc
    k: int
    n: int

    @property
    def real(self) -> mpf:
        return self.value.real


@lru_cache(maxsize=None)
def _omega_table(k: int) -> tuple:
    """(x, s(-x,k)) for the residues x mod k coprime to k."""
    return tuple((x, dedekind_sum(-x, k)) for x in range(k) if math.gcd(x, k) == 1)


def _lower_fraction_phase(r: Fraction) -> mpc:
    r %= 2
    x = mpf(r.numerator) / r.denominator
    return mpc(mp.cospi(x), mp.sinpi(x))


@lru_cache(maxsize=4096)
def _phase_tables(k: int, prec: int):
    """Lowered omega_{-x,k} for coprime x, and the k-th roots of unity e(j/k)."""
    with mp.workprec(prec + 8):
        omegas = tuple((x, _lower_fraction_phase(s)) for x, s in _omega_table(k))
        zetas = tuple(_lower_fraction_phase(Fraction(2 * j, k)) for j in range(k))
    return omegas, zetas


@lru_cache(maxsize=400000)
def kloosterman_A(k: int, n: int, prec: int = 256) -> KloostermanValue:
    """A_k(n) = sum over x mod k, gcd(x,k)=1, of omega_{-x,k} e(n x / k).

    Every term is the product of two exactly represented unit phases
    (omega_{-x,k} and e(nx/k)), each lowered once from its exact rational
    angle at the working precision; no partial result feeds back into a
    phase, so there is no cancellation amplification in large-k sums.
    """
    if k < 1:
        raise ValueError("k must be positive")
    omegas, zetas = _phase_tables(k, prec)
    with mp.workprec(prec + 8):
        total = mpc(0)
        for x, om in omegas:
            total += om * zetas[(n * x) % k]
    return KloostermanValue(value=+total, k=k, n=n)
