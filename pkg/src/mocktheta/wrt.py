"""Radial-limit tooling at roots of unity and the fifth-order identity
drivers connecting the A± partial thetas, the mock theta Phi, and the
false thetas F±.

Radial limits are taken along q = xi * exp(-t) with t -> 0+ by polynomial
(Richardson-type) extrapolation on a geometric t-grid; the partial thetas
in play are bounded along these rays and admit smooth expansions in t, so
polynomial extrapolation in t converges quickly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import mp, mpc, mpf

from .arith import Phase
from .boundary import f_of_q, f_outer_of_w
from .series import (FracPowSeries, SeriesIdentityReport, false_theta_F,
                     qpochhammer, verify_identity, wrt_A, wrt_chi60,
                     zwegers_phi_star)

__all__ = [
    "RadialEstimate",
    "radial_limit",
    "wrt_A_evaluator",
    "radial_profile",
    "zwegers_identities",
]

DEFAULT_PREC = 256


@dataclass(frozen=True)
class RadialEstimate:
    """Samples of an evaluator along a radial ray and their extrapolation to t=0."""

    xi: Phase
    samples: tuple          # ((t, value), ...) with t strictly decreasing
    extrapolated: mpc
    order: int


def _neville_at_zero(ts: Sequence, vs: Sequence):
    tab = list(vs)
    n = len(tab)
    for m in range(1, n):
        tab = [(ts[i + m] * tab[i] - ts[i] * tab[i + 1]) / (ts[i + m] - ts[i])
               for i in range(n - m)]
    return tab[0]


def radial_limit(evaluator: Callable, xi: Phase, t0=0.25, levels: int = 8,
                 order: int = 4, prec: int = DEFAULT_PREC) -> RadialEstimate:
    """Extrapolate evaluator(q) to the root of unity xi along q = xi e^(-t).

    Samples at t = t0 / 2^j for j < levels; the limit is the value at t = 0
    of the polynomial through the last order+1 samples (exact for polynomial
    behavior in t up to that degree).
    """
    if levels < 3:
        raise ValueError("levels must be >= 3")
    if not 0 < order < levels:
        raise ValueError("order must lie in [1, levels)")
    with mp.workprec(prec + 16):
        xival = xi.lower(prec + 16)
        ts = [mpf(t0) / 2 ** j for j in range(levels)]
        samples = []
        for t in ts:
            q = xival * mp.exp(-t)
            samples.append((t, mpc(evaluator(q))))
        tail = samples[-(order + 1):]
        est = _neville_at_zero([t for t, _ in tail], [v for _, v in tail])
        return RadialEstimate(xi=xi, samples=tuple(samples),
                              extrapolated=+est, order=order)


def wrt_A_evaluator(sign: int, prec: int = DEFAULT_PREC) -> Callable:
    """Numeric evaluator q -> A±(q) = sum_{n>0, n=±1 mod 5} chi60(n) q^((n^2-1)/120)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    residue = 1 if sign > 0 else 4

    def evaluate(q):
        with mp.workprec(prec + 16):
            q = mpc(q)
            if abs(q) >= 1:
                raise ValueError("|q| must be < 1")
            total = mpc(0)
            n = 1
            while True:
                if n % 5 == residue:
                    c = wrt_chi60(n)
                    if c:
                        term = c * q ** ((n * n - 1) // 120)
                        total += term
                        if abs(term) < mp.eps * (abs(total) + 1):
                            break
                n += 1
                if n > 10 ** 7:
                    raise ArithmeticError("partial theta sum did not converge")
            return +total

    return evaluate


def radial_profile(xi: Phase, t0=0.25, levels: int = 8,
                   prec: int = DEFAULT_PREC) -> list:
    """Exploratory table of f sampled radially on both sides of the unit circle.

    Returns rows (t, inside_value, outside_value): inside at q = xi e^(-t)
    via the defining series of f; outside at q = xi e^(+t) via the |q|>1
    series in w = 1/q.  No pass/fail claim is attached.
    """
    with mp.workprec(prec + 16):
        xival = xi.lower(prec + 16)
        rows = []
        for j in range(levels):
            t = mpf(t0) / 2 ** j
            inside = f_of_q(xival * mp.exp(-t), prec)
            outside = f_outer_of_w(mp.conj(xival) * mp.exp(-t), prec)
            rows.append((t, inside, outside))
        return rows


def zwegers_identities(order: int = 100) -> list[SeriesIdentityReport]:
    """Verify the two fifth-order identities exactly to O(q^order):

        -Phi*(q) = A+(q) - F+(q) / ((q;q^5)_inf (q^4;q^5)_inf)
        -Phi*(q) = A-(q) + F-(q) / ((q;q^5)_inf (q^4;q^5)_inf)

    Returns the two identity reports (and a third for the prefactor-free
    sum identity (A+ + A-) * (q;q^5)_inf (q^4;q^5)_inf = F+ + F-).
    """
    minus_phi_star = -zwegers_phi_star(order)
    P = qpochhammer(1, 1, 5, None, order) * qpochhammer(1, 4, 5, None, order)
    G = P.inverse()
    Ap = wrt_A(+1, order)
    Am = wrt_A(-1, order)
    Fp = false_theta_F(+1, order)
    Fm = false_theta_F(-1, order)
    first = verify_identity(minus_phi_star, Ap - G * Fp)
    second = verify_identity(minus_phi_star, Am + G * Fm)
    third = verify_identity((Ap - Am) * P, Fp + Fm)
    return [first, second, third]
