"""The harmonic completion of f(q): the non-holomorphic correction R3, the
completed function h3hat = q^(-1/24) f(q) + R3, generic termwise Eichler
integrals of unary theta series, and numerical near-modularity checks on
the level-2 principal congruence group.

The correction series is

    R3(z) = -2 sum_{n>=1, gcd(n,6)=1} (-12/n) pi^(-1/2) Gamma(1/2, pi n^2 y / 6) q^(-n^2/24),

whose terms decay like exp(-pi n^2 y / 12); the termwise closed form

    int_{-conj(z)}^{i inf} e^(2 pi i tau a) / sqrt(-i (tau + z)) dtau
        = i (2 pi a)^(-1/2) Gamma(1/2, 4 pi a y) q^(-a)

(a = n^2 / D) drives the generic Eichler integral for any exponent
denominator D.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from mpmath import mp, mpc, mpf

from .arith import kronecker
from .boundary import f_ref
from .kernels import inc_gamma_half

__all__ = [
    "UnaryThetaSpec",
    "g3_spec",
    "wrt_theta_spec",
    "R3",
    "h3hat",
    "eichler_integral",
    "modularity_check",
]

DEFAULT_PREC = 256


@dataclass(frozen=True)
class UnaryThetaSpec:
    """A unary theta series sum_{n>0} c(n) q^(n^2/D) described by its
    exponent denominator D and coefficient rule c (zero outside the support)."""

    exponent_denominator: int
    coefficient_rule: Callable[[int], int]
    support: Optional[Callable[[int], bool]] = None
    name: str = ""

    def coefficient(self, n: int):
        if self.support is not None and not self.support(n):
            return 0
        return self.coefficient_rule(n)


def g3_spec() -> UnaryThetaSpec:
    """The weight-3/2 companion of f: g3(z) = sum_{n>=1} (-12/n) n q^(n^2/24)."""
    return UnaryThetaSpec(24, lambda n: kronecker(-12, n) * n, name="g3")


def wrt_theta_spec() -> UnaryThetaSpec:
    """The weight-3/2 theta with conductor-60 coefficients on n = ±1 mod 5,
    exponents n^2/120 (the companion of the A± partial thetas)."""
    from .series import wrt_chi60
    return UnaryThetaSpec(
        120, lambda n: wrt_chi60(n) * n,
        support=lambda n: n % 5 in (1, 4), name="wrt_theta")


def R3(z, prec: int = DEFAULT_PREC) -> mpc:
    """The non-holomorphic correction term, summed directly from its series."""
    with mp.workprec(prec + 16):
        z = mpc(z)
        y = mp.im(z)
        if y <= 0:
            raise ValueError("R3 requires Im z > 0")
        pref = -2 / mp.sqrt(mp.pi)
        total = mpc(0)
        n = 1
        small = 0
        while small < 2:
            c = kronecker(-12, n)
            if c:
                g = inc_gamma_half(mp.pi * n * n * y / 6, prec + 16)
                term = c * g * mp.expjpi(-2 * z * n * n / mpf(24))
                total += term
                if abs(term) < mp.eps * (abs(total) + 1):
                    small += 1
                else:
                    small = 0
            n += 1
        return +(pref * total)


def h3hat(z, prec: int = DEFAULT_PREC) -> mpc:
    """h3hat(z) = q^(-1/24) f(q) + R3(z), with q^(-1/24) = e^(-2 pi i z/24)."""
    with mp.workprec(prec + 16):
        z = mpc(z)
        if mp.im(z) <= 0:
            raise ValueError("h3hat requires Im z > 0")
        return +(mp.expjpi(-z / mpf(12)) * f_ref(z, prec) + R3(z, prec))


def eichler_integral(spec: UnaryThetaSpec, z, normalization=1,
                     prec: int = DEFAULT_PREC) -> mpc:
    """int_{-conj(z)}^{i inf} g(tau) / sqrt(-i(tau+z)) dtau, termwise.

    Each term n contributes c(n) * i (2 pi n^2/D)^(-1/2) Gamma(1/2, 4 pi n^2 y/D) q^(-n^2/D);
    the result is multiplied by `normalization` (e.g. i/sqrt(3) to reproduce
    R3 from the g3 spec).
    """
    with mp.workprec(prec + 16):
        z = mpc(z)
        y = mp.im(z)
        if y <= 0:
            raise ValueError("eichler_integral requires Im z > 0")
        D = spec.exponent_denominator
        total = mpc(0)
        n = 1
        small = 0
        while small < 2:
            c = spec.coefficient(n)
            if c:
                a = mpf(n * n) / D
                g = inc_gamma_half(4 * mp.pi * a * y, prec + 16)
                term = c * mpc(0, 1) / mp.sqrt(2 * mp.pi * a) * g * mp.expjpi(-2 * z * a)
                total += term
                if abs(term) < mp.eps * (abs(total) + 1):
                    small += 1
                else:
                    small = 0
            n += 1
            if n > 100000:
                raise ArithmeticError("eichler integral did not converge")
        return +(mpc(normalization) * total)


def modularity_check(z, gamma, prec: int = DEFAULT_PREC) -> mpf:
    """Relative defect of |h3hat| covariance under gamma in Gamma(2):

        | |h3hat(gamma z)| - |c z + d|^(1/2) |h3hat(z)| | / |h3hat(z)|.

    Only moduli are compared (the multiplier system has modulus one), so
    the check is multiplier-free.  gamma = [[a, b], [c, d]] must have
    determinant 1 with a, d odd and b, c even.
    """
    (a, b), (c, d) = gamma
    for entry in (a, b, c, d):
        if not isinstance(entry, int):
            raise ValueError("gamma entries must be integers")
    if a * d - b * c != 1:
        raise ValueError("gamma must have determinant 1")
    if a % 2 == 0 or d % 2 == 0 or b % 2 or c % 2:
        raise ValueError("gamma is not in the level-2 principal congruence group")
    with mp.workprec(prec + 16):
        z = mpc(z)
        if mp.im(z) <= 0:
            raise ValueError("modularity_check requires Im z > 0")
        gz = (a * z + b) / (c * z + d)
        lhs = abs(h3hat(gz, prec))
        rhs = mp.sqrt(abs(c * z + d)) * abs(h3hat(z, prec))
        return +(abs(lhs - rhs) / abs(h3hat(z, prec)))
