"""High-precision scalar kernels: order-1/2 Bessel functions in closed form,
the incomplete gamma Gamma(1/2, x) via erfc, the Laurent kernel a_k(s), and
the entire Bessel-type kernel B_k(t).

Order-1/2 Bessel functions reduce to elementary functions,

    I_{1/2}(x) = sqrt(2/(pi x)) sinh x,      J_{1/2}(x) = sqrt(2/(pi x)) sin x,

so no special-function library is needed; the defining power series is kept
only as a test oracle.  All half-integer powers use principal branches.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpc, mpf

__all__ = [
    "KernelParams",
    "bessel_I_half",
    "bessel_J_half",
    "bessel_half_series",
    "erf_taylor",
    "erfc",
    "inc_gamma_half",
    "b_m",
    "a_k",
    "B_k",
    "B_k_series",
]

DEFAULT_PREC = 256


@dataclass(frozen=True)
class KernelParams:
    """Truncation policy for the Laurent kernel a_k."""

    k: int | None = None
    epsilon: float = 1e-70
    max_terms: int = 4096

    def __post_init__(self):
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must lie in (0, 1)")


def bessel_I_half(x, prec: int = DEFAULT_PREC) -> mpc:
    """I_{1/2}(x) = sqrt(2/(pi x)) sinh(x), principal branch of sqrt."""
    with mp.workprec(prec + 8):
        x = mpc(x)
        if x == 0:
            raise ValueError("x must be nonzero")
        return +(mp.sqrt(2 / (mp.pi * x)) * mp.sinh(x))


def bessel_J_half(x, prec: int = DEFAULT_PREC) -> mpc:
    """J_{1/2}(x) = sqrt(2/(pi x)) sin(x), principal branch of sqrt."""
    with mp.workprec(prec + 8):
        x = mpc(x)
        if x == 0:
            raise ValueError("x must be nonzero")
        return +(mp.sqrt(2 / (mp.pi * x)) * mp.sin(x))


def bessel_half_series(x, kind: str = "I", prec: int = DEFAULT_PREC,
                       max_terms: int = 2000) -> mpc:
    """Power-series oracle: sum_m (±1)^m (x/2)^(2m+1/2) / (m! Gamma(m+3/2)).

    kind "I" takes all plus signs; kind "J" alternates.
    """
    sign = {"I": 1, "J": -1}[kind]
    with mp.workprec(prec + 32):
        x = mpc(x)
        half_pow = mp.sqrt(x / 2)  # (x/2)^(1/2), principal
        x2 = (x / 2) ** 2
        gamma32 = mp.sqrt(mp.pi) / 2  # Gamma(3/2)
        term = half_pow / gamma32
        total = term
        m = 0
        while m < max_terms:
            m += 1
            # step m-1 -> m: multiply by sign*x2 / (m (m+1/2))
            term *= sign * x2 / (m * (m + mpf(1) / 2))
            total += term
            if abs(term) < mp.eps * abs(total):
                break
        return +total


def erf_taylor(x, prec: int = DEFAULT_PREC) -> mpf:
    """erf(x) by its Maclaurin series (independent oracle; |x| moderate)."""
    with mp.workprec(prec + 32 + int(4 * abs(x) ** 2)):
        x = mpf(x)
        term = x
        total = x
        n = 0
        while True:
            n += 1
            term *= -x * x / n
            inc = term / (2 * n + 1)
            total += inc
            if abs(inc) < mp.eps * (abs(total) + 1):
                break
        return +(2 / mp.sqrt(mp.pi) * total)


def _lower_gamma_half_series(x, work_prec: int) -> mpf:
    """gamma(1/2, x) = sum_n (-1)^n x^(n+1/2) / (n! (n+1/2)), for small x >= 0."""
    with mp.workprec(work_prec):
        x = mpf(x)
        sq = mp.sqrt(x)
        term = sq  # n = 0 numerator x^(1/2); track x^(n+1/2)/n!
        total = term / mpf("0.5")
        n = 0
        while True:
            n += 1
            term *= -x / n
            inc = term / (n + mpf(1) / 2)
            total += inc
            if abs(inc) < mp.eps * (abs(total) + 1):
                break
        return +total


def _upper_gamma_half_cf(x, work_prec: int) -> mpf:
    """Gamma(1/2, x) by the Legendre continued fraction (modified Lentz), x large."""
    a = mpf(1) / 2
    with mp.workprec(work_prec):
        x = mpf(x)
        tiny = mpf(2) ** (-10 * work_prec)
        b = x + 1 - a
        c = 1 / tiny
        d = 1 / b
        h = d
        i = 0
        while True:
            i += 1
            an = -i * (i - a)
            b += 2
            d = an * d + b
            if abs(d) < tiny:
                d = tiny
            c = b + an / c
            if abs(c) < tiny:
                c = tiny
            d = 1 / d
            delta = d * c
            h *= delta
            if abs(delta - 1) < mp.eps:
                break
            if i > 10 * work_prec:
                raise ArithmeticError("continued fraction did not converge")
        return +(mp.exp(-x) * x ** a * h)


def erfc(x, prec: int = DEFAULT_PREC) -> mpf:
    """erfc(x) for real x: Taylor series of erf for small |x|, continued
    fraction for large, switching near x = 2."""
    xf = mpf(x)
    if xf < 0:
        return 2 - erfc(-xf, prec)
    with mp.workprec(prec + 16):
        if xf < 2:
            return +(1 - erf_taylor(xf, prec + 16))
        return +(_upper_gamma_half_cf(xf * xf, prec + 16) / mp.sqrt(mp.pi))


def inc_gamma_half(x, prec: int = DEFAULT_PREC) -> mpf:
    """Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x)) for real x >= 0."""
    xf = mpf(x)
    if xf < 0:
        raise ValueError("x must be nonnegative")
    with mp.workprec(prec + 16):
        if xf == 0:
            return +mp.sqrt(mp.pi)
        if xf < 4:  # sqrt(x) < 2: complete minus lower series
            return +(mp.sqrt(mp.pi) - _lower_gamma_half_series(xf, prec + 16))
        return +_upper_gamma_half_cf(xf, prec + 16)


def b_m(k: int, m: int, prec: int = DEFAULT_PREC) -> mpf:
    """Taylor kernel b_m(k) = (pi/(24k))^(2m+1/2) / Gamma(m+3/2), so that
    B_k(t) = sum_m b_m(k) t^m / m!.  Half-integer gamma by the recurrence
    from Gamma(3/2) = sqrt(pi)/2.

    The base pi/(24k) (and not pi/(12k)) is what the Bessel series forces:
    I_{1/2}(x) = sum (x/2)^(2m+1/2)/(m! Gamma(m+3/2)) evaluated at
    x = pi sqrt(t)/(12k) has (x/2)^(2m+1/2) = (pi/(24k))^(2m+1/2) t^(m+1/4);
    with pi/(12k) the residue identity against B_k fails by the first term.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if m < 0:
        raise ValueError("m must be nonnegative")
    with mp.workprec(prec + 16):
        base = mp.pi / (24 * k)
        gamma = mp.sqrt(mp.pi) / 2
        for j in range(m):
            gamma *= j + mpf(3) / 2
        return +(base ** (2 * m + mpf(1) / 2) / gamma)


def a_k(k: int, s, params: KernelParams = KernelParams(),
        prec: int = DEFAULT_PREC) -> mpc:
    """a_k(s) = sum_{m>=0} b_m(k) / s^(m+1); converges for every s != 0.

    Truncates once a term falls below epsilon times the running sum twice in
    a row (the first terms may grow before the 1/Gamma(m+3/2) decay wins).
    """
    with mp.workprec(prec + 16):
        s = mpc(s)
        if s == 0:
            raise ValueError("s must be nonzero")
        base = mp.pi / (24 * k)
        ratio = base ** 2  # b_{m+1} = b_m * ratio / (m+3/2)
        inv_s = 1 / s
        bm = base ** (mpf(1) / 2) / (mp.sqrt(mp.pi) / 2)
        spow = inv_s
        term = bm * spow
        total = term
        small = 0
        m = 0
        while small < 2:
            m += 1
            if m > params.max_terms:
                raise ArithmeticError(
                    f"a_k did not converge within {params.max_terms} terms "
                    f"(k={k}, |s|={mp.nstr(abs(s), 8)}, last |term|={mp.nstr(abs(term), 8)})")
            bm *= ratio / (m + mpf(1) / 2)
            spow *= inv_s
            term = bm * spow
            total += term
            if abs(term) < params.epsilon * abs(total):
                small += 1
            else:
                small = 0
        return +total


def B_k(k: int, t, prec: int = DEFAULT_PREC) -> mpc:
    """B_k(t) = t^(-1/4) I_{1/2}(pi sqrt(t) / (12 k)), principal branches.

    Entire in t via its Taylor series sum b_m(k) t^m / m!; for negative real
    t the principal-branch closed form equals (|t|)^(-1/4) J_{1/2}(pi sqrt(|t|)/(12k)).
    """
    with mp.workprec(prec + 8):
        t = mpc(t)
        if t == 0:
            raise ValueError("t must be nonzero")
        root = mp.sqrt(t)
        return +(t ** (-mpf(1) / 4) * bessel_I_half(mp.pi * root / (12 * k), prec + 8))


def B_k_series(k: int, t, prec: int = DEFAULT_PREC, max_terms: int = 4000) -> mpc:
    """Oracle: B_k(t) = sum_m b_m(k) t^m / m!."""
    with mp.workprec(prec + 32):
        t = mpc(t)
        base = mp.pi / (24 * k)
        ratio = base ** 2
        bm = base ** (mpf(1) / 2) / (mp.sqrt(mp.pi) / 2)
        term = bm  # b_m t^m / m! at m=0
        total = term
        m = 0
        while m < max_terms:
            m += 1
            # b_{m} = b_{m-1} * ratio/(m+1/2);  t^m/m! adds factor t/m
            term *= ratio / (m + mpf(1) / 2) * t / m
            total += term
            if abs(term) < mp.eps * abs(total):
                break
        return +total
