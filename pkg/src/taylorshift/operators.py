"""Truncated Taylor-shift operators on Laurent polynomials.

``T_{a,n}(f)(z) = sum_{j<=n} f^(j)(z)/j! * (a z)^j`` and the reversed
operator ``T~_n = T_{-1,n}``.

The operators act diagonally on monomials: the term ``c z^m`` is sent to
``c * mu(m) * z^m`` with ``mu(m) = sum_{j<=n} C(m, j) a^j`` (generalized
binomial for negative ``m``). :func:`apply_T` walks the derivative chain
``g_j = g_{j-1}' / j`` of each monomial with exact integer bookkeeping and
only rounds once, when the finished multiplier meets a float coefficient.
This keeps the structural zeros (``mu(m) = 0`` for ``a = -1, 1 <= m <= n``)
exactly zero in float mode, where a coefficient-level derivative chain
would drown them in cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpc, mpq

from .errors import DomainError, VerificationError, ZeroPole
from .laurent import LaurentPoly, d_coeff, is_exact, lp_derivative, lp_eval, to_scalar

_GAUSS_DENOM_LIMIT = 1 << 16


@dataclass(frozen=True)
class OperatorSpec:
    """Shift parameter ``a`` and truncation order ``n`` of ``T_{a,n}``."""

    a: object
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"truncation order must be >= 0, got {self.n}")


def gbinom(m: int, j: int) -> int:
    """Generalized binomial ``m (m-1) ... (m-j+1) / j!`` for any integer ``m``."""
    if j < 0:
        return 0
    if m >= 0:
        return math.comb(m, j) if j <= m else 0
    return (-1) ** j * math.comb(j - m - 1, j)


def _exact_gaussian(a):
    """``(re, im)`` as Fractions when ``a`` is a Gaussian rational with small denominators."""
    if isinstance(a, bool):
        a = int(a)
    if isinstance(a, int) or is_exact(a):
        return Fraction(int(mpq(a).numerator), int(mpq(a).denominator)), Fraction(0)
    if isinstance(a, Fraction):
        return a, Fraction(0)
    try:
        z = complex(a)
    except TypeError:
        return None
    parts = []
    for x in (getattr(a, "real", z.real), getattr(a, "imag", z.imag)):
        q = Fraction(*x.as_integer_ratio()) if hasattr(x, "as_integer_ratio") else Fraction(x)
        if q.denominator > _GAUSS_DENOM_LIMIT:
            return None
        parts.append(q)
    return parts[0], parts[1]


@lru_cache(maxsize=1 << 18)
def _exact_multiplier(are: Fraction, aim: Fraction, n: int, m: int):
    """``sum_{j<=n} C(m,j) a^j`` in exact Gaussian-rational arithmetic."""
    sre, sim = Fraction(1), Fraction(0)
    pre, pim = Fraction(1), Fraction(0)
    t = 1
    real = aim == 0
    for j in range(1, n + 1):
        t = t * (m - j + 1) // j
        if t == 0:
            break
        if real:
            pre *= are
            sre += t * pre
        else:
            pre, pim = pre * are - pim * aim, pre * aim + pim * are
            sre += t * pre
            sim += t * pim
    return sre, sim


def ttilde_multiplier(n: int, m: int) -> int:
    """Diagonal entry of ``T~_n`` on ``z^m``: ``sum_{j<=n} C(m,j)(-1)^j = (-1)^n C(m-1, n)``."""
    v = gbinom(m - 1, n)
    return -v if n % 2 else v


def t_multiplier(a, n: int, m: int):
    """Diagonal entry of ``T_{a,n}`` on ``z^m`` (exact when ``a`` is a Gaussian rational)."""
    if isinstance(a, int) and a == -1:
        return ttilde_multiplier(n, m)
    g = _exact_gaussian(a)
    if g is not None:
        sre, sim = _exact_multiplier(g[0], g[1], n, m)
        if sim == 0:
            return to_scalar(sre)
        return mpc(mpq(sre.numerator, sre.denominator), mpq(sim.numerator, sim.denominator))
    a = mpc(a)
    total, power, t = mpc(1), mpc(1), 1
    for j in range(1, n + 1):
        t = t * (m - j + 1) // j
        if t == 0:
            break
        power *= a
        total += t * power
    return total


def apply_T(spec: OperatorSpec, f: LaurentPoly) -> LaurentPoly:
    """``T_{a,n}(f)`` as a Laurent polynomial; exact for exact ``f`` and rational ``a``."""
    out = {}
    for m, c in f:
        mu = t_multiplier(spec.a, spec.n, m)
        if mu != 0:
            out[m] = c * mu
    return LaurentPoly(out)


def apply_Ttilde(n: int, f: LaurentPoly) -> LaurentPoly:
    """``T~_n(f) = T_{-1,n}(f)``."""
    return apply_T(OperatorSpec(-1, n), f)


def apply_T_reference(spec: OperatorSpec, f: LaurentPoly) -> LaurentPoly:
    """Literal operator sum built from the Laurent-polynomial derivative chain.

    Reference route for tests: every ``g_j`` is materialised as a
    :class:`LaurentPoly`. Only trustworthy in exact mode or for small ``n``.
    """
    a = to_scalar(spec.a)
    result = f
    g = f
    power = 1
    for j in range(1, spec.n + 1):
        g = lp_derivative(g) / j
        if g.is_zero():
            break
        power = power * a
        result = result + (g * power).shift(j)
    return result


def eigen_apply_psi(k: int, n: int) -> tuple[int, LaurentPoly]:
    """``(d_{k,n}, d_{k,n} z^-k)``, checked against ``T~_n(z^-k)`` exactly."""
    if k < 1:
        raise DomainError(f"psi_k needs k >= 1, got {k}")
    d = d_coeff(k, n)
    image = LaurentPoly({-k: d})
    applied = apply_Ttilde(n, LaurentPoly.psi(k))
    if applied != image:
        raise VerificationError(f"T~_{n}(z^-{k}) = {applied}, expected {image}")
    return d, image


def taylor_coefficient_poly(f: LaurentPoly, j: int) -> LaurentPoly:
    """``f^(j) / j!`` without forming factorials."""
    return LaurentPoly({m - j: c * gbinom(m, j) for m, c in f if gbinom(m, j) != 0})


def ttilde_of_z_times(n: int, f: LaurentPoly) -> LaurentPoly:
    """Closed form ``T~_n(z f)(z) = (-1)^n f^(n)(z)/n! z^(n+1)``, no operator sum."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    g = taylor_coefficient_poly(f, n)
    return (g * (-1) ** n).shift(n + 1)


def partial_sum_S(n: int, f: LaurentPoly, zeta) -> LaurentPoly:
    """Degree-``n`` Taylor polynomial of ``f`` about ``zeta``, expanded in powers of ``z``.

    ``S_n(f, zeta)(z) = sum_{j<=n} f^(j)(zeta)/j! (z - zeta)^j``.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if not f.is_zero() and f.order < 0 and zeta == 0:
        raise ZeroPole("partial sum of a Laurent polynomial centred at its pole")
    if not is_exact(zeta):
        zeta = mpc(zeta)
    values = [lp_eval(taylor_coefficient_poly(f, j), zeta) for j in range(n + 1)]
    # Horner in (z - zeta), dense coefficients of z^0..z^j
    acc = [values[n]]
    for j in range(n - 1, -1, -1):
        nxt = [0] * (len(acc) + 1)
        for i, c in enumerate(acc):
            nxt[i + 1] += c
            nxt[i] -= c * zeta
        nxt[0] += values[j]
        acc = nxt
    return LaurentPoly.from_dense(acc)
