"""Evaluation of the two-sided function F(z) and its building block, the
contour integral

    Phi_{d,k}(z) = (1/2 pi i) oint_{|s|=r} a_k(s) e^(23 s) / (1 - zeta_{2k}^d q e^(24 s)) ds,

by spectrally convergent trapezoidal quadrature on a circle whose radius is a
fixed fraction of the distance to the nearest pole.  F(z) is assembled from
the (k, d) terms

    F(z) = 1 + pi sum_k ((-1)^floor((k+1)/2) / k)
               sum_{d mod 2k, gcd(d,2k)=1} omega_{-d,2k}
               e(-d(1+(-1)^k)/8) * qtilde * Phi_{d,k}(z),      qtilde = zeta_{2k}^d q,

which converges in both half-planes and matches f(q) above the real axis and
2 psi(1/q) below it.  Reference evaluators for both targets are provided for
comparison reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from .arith import kloosterman_A, kronecker
from .kernels import B_k, KernelParams, a_k

__all__ = [
    "QuadratureParams",
    "EvalReport",
    "phi_dk",
    "phi_dk_series",
    "F_eval",
    "f_ref",
    "f_of_q",
    "f_outer_of_w",
    "psi_ref",
    "compare",
]

DEFAULT_PREC = 256


@dataclass(frozen=True)
class QuadratureParams:
    """Contour quadrature policy for Phi_{d,k}."""

    radius_frac: float = 0.5          # fraction of the distance to the nearest pole
    initial_points: int = 32
    tol: float = 1e-30                # relative stop for point doubling
    max_doublings: int = 10

    def __post_init__(self):
        if not (0 < self.radius_frac < 1):
            raise ValueError("radius_frac must lie in (0, 1)")
        if self.initial_points < 16:
            raise ValueError("initial_points must be >= 16")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class EvalReport:
    """Comparison of F(z) against the half-plane reference evaluator."""

    z: mpc
    half_plane: str            # "upper" | "lower"
    F_value: mpc
    reference: mpc
    abs_err: mpf
    rel_err: mpf
    K_used: int
    stabilized: bool
    err_trend: tuple = ()      # ((K, rel_err), ...) at K-doubling checkpoints
    precision: int = DEFAULT_PREC


def _qtilde(z, d: int, k: int):
    """zeta_{2k}^d q = e(z + d/(2k)) at the working precision."""
    return mp.expjpi(2 * (z + mpf(d) / (2 * k)))


def _pole_distance(z, d: int, k: int):
    """min_m |Log(zeta_{2k}^d q) + 2 pi i m| = 2 pi sqrt(y^2 + dist(x + d/2k, Z)^2)."""
    x = mp.re(z) + mpf(d) / (2 * k)
    y = mp.im(z)
    frac = x - mp.nint(x)
    return 2 * mp.pi * mp.sqrt(y * y + frac * frac)


def phi_dk(z, d: int, k: int, params: QuadratureParams = QuadratureParams(),
           prec: int = DEFAULT_PREC) -> mpc:
    """Phi_{d,k}(z) by trapezoidal quadrature on |s| = r.

    r is radius_frac times the distance from the origin to the nearest pole
    of the integrand; the point count doubles until the value is stable to
    params.tol.  Valid on both sides of the unit circle (Im z != 0).
    """
    if k < 1:
        raise ValueError("k must be positive")
    if math.gcd(d, 2 * k) != 1:
        raise ValueError("d must be coprime to 2k")
    with mp.workprec(prec + 24):
        z = mpc(z)
        if mp.im(z) == 0:
            raise ValueError("singular parameter: unit circle is the natural boundary")
        qt = _qtilde(z, d, k)
        if qt == 1:
            raise ValueError("singular parameter: zeta_{2k}^d q = 1")
        r = mpf(params.radius_frac) * _pole_distance(z, d, k) / 24
        kp = KernelParams(epsilon=float(mpf(2) ** (-prec - 16)), max_terms=8192)

        def average(M: int) -> mpc:
            # (1/2 pi i) oint g ds  ->  (1/M) sum_j s_j g(s_j) on s_j = r e^(2 pi i j / M)
            total = mpc(0)
            for j in range(M):
                s = r * mp.expjpi(mpf(2 * j) / M)
                g = a_k(k, s, kp, prec + 24) * mp.exp(23 * s) / (1 - qt * mp.exp(24 * s))
                total += s * g
            return total / M

        M = params.initial_points
        value = average(M)
        for _ in range(params.max_doublings):
            M *= 2
            new = average(M)
            if abs(new - value) <= mpf(params.tol) * (abs(new) + mpf(2) ** (-prec)):
                return +new
            value = new
        raise ArithmeticError(
            f"quadrature did not converge: k={k} d={d} M={M} "
            f"last delta {mp.nstr(abs(new - value), 5)}")


def phi_dk_series(z, d: int, k: int, prec: int = DEFAULT_PREC) -> mpc:
    """Independent oracle for Phi_{d,k}:

    |qtilde| < 1:  Phi = sum_{n>=1} B_k(24n-1) qtilde^(n-1)
    |qtilde| > 1:  Phi = -sum_{n>=0} B_k(-(24n+1)) qtilde^(-n-1)
    """
    if math.gcd(d, 2 * k) != 1:
        raise ValueError("d must be coprime to 2k")
    with mp.workprec(prec + 24):
        z = mpc(z)
        qt = _qtilde(z, d, k)
        aq = abs(qt)
        if aq == 1:
            raise ValueError("|qtilde| = 1: no convergent expansion")
        total = mpc(0)
        if aq < 1:
            power = mpc(1)  # qtilde^(n-1)
            n = 1
            while True:
                term = B_k(k, 24 * n - 1, prec + 24) * power
                total += term
                if abs(term) < mp.eps * (abs(total) + 1) and n > 2:
                    break
                power *= qt
                n += 1
        else:
            inv = 1 / qt
            power = inv  # qtilde^(-n-1)
            n = 0
            while True:
                term = B_k(k, -(24 * n + 1), prec + 24) * power
                total -= term
                if abs(term) < mp.eps * (abs(total) + 1) and n > 2:
                    break
                power *= inv
                n += 1
        return +total


def F_eval(z, K: int = 512, params: QuadratureParams = QuadratureParams(),
           prec: int = DEFAULT_PREC, tol: float = 1e-6,
           return_details: bool = False):
    """Evaluate F(z) by the (k, d)-sum with Phi from contour quadrature.

    The k-sum grows in doubling blocks up to the cap K; it stops early if a
    doubling block contributes less than tol relatively.  With
    return_details=True, returns (value, details) where details carries the
    partial values at the doubling checkpoints, K_used and the stabilized flag.

    The (k, d) terms share one set of quadrature nodes per k (one radius
    bounds every pole distance from below, with the same worst-case
    trapezoid rate as per-d radii), and the block quadrature runs at an
    internal precision matched to tol: the k-truncation error dominates the
    result long before either approximation matters.  Terms are evaluated
    and summed in a fixed order, so results are reproducible bit for bit at
    a given precision and configuration.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    # working precision for the quadrature blocks, matched to the target tol
    qbits = min(prec, max(96, int(math.log2(1 / tol)) + 48)) if tol > 0 else prec
    block_tol = mpf(max(params.tol, tol * 1e-4, 1e-40))
    with mp.workprec(qbits + 16):
        z = mpc(z)
        y = mp.im(z)
        if y == 0:
            raise ValueError("unit circle is the natural boundary")
        q = mp.expjpi(2 * z)
        upper = y > 0
        # one radius for every (k, d): a lower bound on all pole distances,
        # same worst-case trapezoid rate as the per-d choice
        r = mpf(params.radius_frac) * 2 * mp.pi * abs(y) / 24
        kp = KernelParams(epsilon=float(mpf(2) ** (-qbits)), max_terms=8192)
        shift = lambda k: k // 2 if k % 2 == 0 else 0

        def k_block(k: int) -> mpc:
            """pi * (-1)^floor((k+1)/2)/k * sum_d phase_d * qtilde_d * Phi_{d,k}.

            The d-sum is carried out exactly: expanding 1/(1 - zeta^d u_j)
            geometrically on the node values (|u_j| is bounded away from 1
            on the whole contour) turns sum_d phase_d zeta^(dm) into the
            Kloosterman-type sums A_{2k}, so the block equals

                upper:  pi c_k / k * q  *  sum_{n>=0} W_n A_{2k}(n+1-shift)
                lower:  pi c_k / k * (-q) * sum_{n>=1} V_n A_{2k}(-(n-1)-shift)

            with W_n = sum_j w_j u_j^n (resp. V_n = sum_j w_j u_j^(-n)) the
            trapezoid values of (1/2 pi i) oint a_k(s) e^((23 +- 24n)s) ds.
            """
            sh = shift(k)

            def block_pair(M: int):
                """(coarse, fine) block values from nested M- and 2M-point rules."""
                M2 = 2 * M
                w = [None] * M2
                e24 = [None] * M2
                for j in range(M + 1):
                    s = r * mp.expjpi(mpf(2 * j) / M2)
                    w[j] = s * a_k(k, s, kp, qbits) * mp.exp(23 * s) / M2
                    e24[j] = mp.exp(24 * s)
                for j in range(1, M):
                    w[M2 - j] = mp.conj(w[j])
                    e24[M2 - j] = mp.conj(e24[j])
                if upper:
                    mult = [q * e for e in e24]   # u_j, |u_j| < 1
                    t = list(w)                   # w_j u_j^n starting at n = 0
                    n = 0
                else:
                    mult = [1 / (q * e) for e in e24]  # u_j^(-1), |.| < 1
                    t = [wj * mj for wj, mj in zip(w, mult)]  # n = 1
                    n = 1
                fine = mpc(0)
                coarse = mpc(0)
                small = 0
                aq = abs(q)
                while small < 2:
                    if n > 4000:
                        raise ArithmeticError(
                            f"geometric resummation did not converge (k={k})")
                    Wf = mp.fsum(t)
                    Wc = 2 * mp.fsum(t[::2])
                    m_arg = (n + 1 - sh) if upper else (-(n - 1) - sh)
                    A = kloosterman_A(2 * k, m_arg, 128).value
                    term_f = q * Wf * A
                    term_c = q * Wc * A
                    if not upper:
                        term_f = -term_f
                        term_c = -term_c
                    fine += term_f
                    coarse += term_c
                    # |A_{2k}| <= phi(2k) <= 2k, so this bound is termwise safe
                    bound = aq * max(abs(Wf), abs(Wc)) * 2 * k
                    if bound < block_tol * (1 + abs(fine)) and n >= 3:
                        small += 1
                    else:
                        small = 0
                    t = [tj * mj for tj, mj in zip(t, mult)]
                    n += 1
                return coarse, fine

            M = params.initial_points
            for _ in range(params.max_doublings):
                coarse, fine = block_pair(M)
                delta = abs(fine - coarse)
                # annulus ratio >= 1/radius_frac >= 2, so the 2M-point error
                # is at most ~delta * 2^(-M); accept without a further halving
                if delta * mpf(2) ** (-M) <= block_tol * (1 + abs(fine)):
                    break
                M *= 2
            else:
                raise ArithmeticError(
                    f"quadrature did not converge in the k={k} block (M={M})")
            return mp.pi * (-1) ** ((k + 1) // 2) / k * fine

        total = mpc(1)
        checkpoints = []
        prev_checkpoint = total
        stabilized = False
        K_used = K
        ladder = 8 if K >= 8 else K
        k = 1
        while k <= K:
            total += k_block(k)
            if k == ladder or k == K:
                checkpoints.append((k, +total))
                if k > 8:
                    block = abs(total - prev_checkpoint)
                    if not stabilized and block < mpf(tol) * (abs(total) + 1):
                        stabilized = True
                        K_used = k
                        break
                prev_checkpoint = total
                while ladder <= k:
                    ladder *= 2
                ladder = min(ladder, K)
            k += 1
        else:
            K_used = K
        value = +checkpoints[-1][1]
        if return_details:
            return value, {
                "checkpoints": tuple(checkpoints),
                "K_used": K_used,
                "stabilized": stabilized,
            }
        return value


def f_of_q(q, prec: int = DEFAULT_PREC) -> mpc:
    """Numeric f(q) = sum q^(n^2)/(-q;q)_n^2 for |q| < 1."""
    with mp.workprec(prec + 16):
        q = mpc(q)
        if abs(q) >= 1:
            raise ValueError("|q| must be < 1")
        total = mpc(1)
        term = mpc(1)
        qn = mpc(1)       # q^n
        qpow = mpc(1)     # q^(2n-1) running factor
        n = 0
        small = 0
        while small < 2:
            n += 1
            qn *= q
            qpow *= q * q
            # term_n = term_{n-1} * q^(2n-1) / (1+q^n)^2
            term *= (qpow / q) / (1 + qn) ** 2
            total += term
            if abs(term) < mp.eps * abs(total):
                small += 1
            else:
                small = 0
        return +total


def f_ref(z, prec: int = DEFAULT_PREC) -> mpc:
    """Reference f(e(z)) for Im z > 0, summed to working precision."""
    with mp.workprec(prec + 16):
        z = mpc(z)
        if mp.im(z) <= 0:
            raise ValueError("f_ref requires Im z > 0")
        return f_of_q(mp.expjpi(2 * z), prec)


def f_outer_of_w(w, prec: int = DEFAULT_PREC) -> mpc:
    """Numeric 1 + sum_{n>=1} w^n / ((1+w)^2 ... (1+w^n)^2) for |w| < 1
    (the |q| > 1 series for f in the variable w = 1/q)."""
    with mp.workprec(prec + 16):
        w = mpc(w)
        if abs(w) >= 1:
            raise ValueError("|w| must be < 1")
        total = mpc(1)
        wn = mpc(1)
        term = mpc(1)
        n = 0
        small = 0
        while small < 2:
            n += 1
            wn *= w
            term = term * w / (1 + wn) ** 2
            total += term
            if abs(term) < mp.eps * abs(total):
                small += 1
            else:
                small = 0
        return +total


def psi_ref(z, prec: int = DEFAULT_PREC) -> mpc:
    """Reference 2 psi(1/q) = 2 sum_{n>=1} (-12/n) q^(-(n^2-1)/24) for Im z < 0."""
    with mp.workprec(prec + 16):
        z = mpc(z)
        if mp.im(z) >= 0:
            raise ValueError("psi_ref requires Im z < 0")
        w = mp.expjpi(-2 * z)  # 1/q, |w| < 1
        total = mpc(0)
        n = 1
        small = 0
        while small < 2:
            c = kronecker(-12, n)
            if c:
                term = c * w ** ((n * n - 1) // 24)
                total += term
                if abs(term) < mp.eps * (abs(total) + 1):
                    small += 1
                else:
                    small = 0
            n += 1
        return +(2 * total)


def compare(z, params: QuadratureParams = QuadratureParams(),
            K: int = 512, prec: int = DEFAULT_PREC, tol: float = 1e-6) -> EvalReport:
    """Evaluate F(z) and compare against f_ref (upper) or psi_ref (lower)."""
    with mp.workprec(prec + 16):
        z = mpc(z)
        y = mp.im(z)
        if y == 0:
            raise ValueError("unit circle is the natural boundary")
        upper = y > 0
        reference = f_ref(z, prec) if upper else psi_ref(z, prec)
        value, details = F_eval(z, K=K, params=params, prec=prec, tol=tol,
                                return_details=True)
        abs_err = abs(value - reference)
        rel_err = abs_err / abs(reference)
        trend = tuple((kk, float(abs(v - reference) / abs(reference)))
                      for kk, v in details["checkpoints"])
        return EvalReport(
            z=z, half_plane="upper" if upper else "lower",
            F_value=value, reference=reference,
            abs_err=+abs_err, rel_err=+rel_err,
            K_used=details["K_used"], stabilized=details["stabilized"],
            err_trend=trend, precision=prec)
