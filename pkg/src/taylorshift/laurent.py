"""Scalar arithmetic and Laurent polynomial algebra.

Scalars come in two flavours. Exact scalars are Python ints and
``gmpy2.mpq`` rationals; every operation on them is exact. Float scalars
are ``gmpy2.mpfr``/``gmpy2.mpc`` values carrying the precision of the
active gmpy2 context, which :func:`precision` sets. Mixing the two yields
floats at the active precision.

A :class:`LaurentPoly` is an immutable map ``exponent -> coefficient`` in
normalized form (no stored zeros). It carries every object of the
construction: targets, damped principal parts, interpolants and the images
of the truncated Taylor-shift operators.
"""

from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from numbers import Complex, Rational
from typing import Iterable, Iterator, Mapping

import gmpy2
from gmpy2 import mpc, mpfr, mpq, mpz

from .errors import DomainError, EmptySampleSet, VerificationError, ZeroPole

DEFAULT_PRECISION = 256

_EXACT_TYPES = (int, type(mpz(0)), type(mpq(0)))
_MPC = type(mpc(0))
_MPFR = type(mpfr(0))


@contextlib.contextmanager
def precision(bits: int):
    """Run the enclosed block with gmpy2 working precision ``bits``."""
    if bits < 2:
        raise DomainError(f"precision must be at least 2 bits, got {bits}")
    with gmpy2.context(gmpy2.get_context(), precision=int(bits)):
        yield


def current_precision() -> int:
    return gmpy2.get_context().precision


def is_exact(x) -> bool:
    return isinstance(x, _EXACT_TYPES)


def to_scalar(x):
    """Coerce ``x`` to a coefficient type, keeping exact values exact.

    Rationals become ``mpq``, floats and complex numbers become ``mpfr`` or
    ``mpc`` at the active precision. Strings go through :func:`parse_complex`.
    """
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, (type(mpz(0)),)):
        return int(x)
    if isinstance(x, type(mpq(0))):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, (_MPFR, _MPC)):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_complex(x)
    if isinstance(x, float):
        return mpfr(x)
    if isinstance(x, Rational):
        return to_scalar(Fraction(x.numerator, x.denominator))
    if isinstance(x, Complex):
        return mpc(complex(x))
    raise TypeError(f"cannot use {type(x).__name__} as a scalar")


def cplx(x) -> mpc:
    """Convert ``x`` to an ``mpc`` at the active precision."""
    if isinstance(x, _MPC):
        return mpc(x)
    if isinstance(x, Fraction):
        return mpc(mpq(x.numerator, x.denominator))
    if isinstance(x, str):
        return mpc(parse_complex(x))
    if isinstance(x, complex):
        return mpc(x.real, x.imag)
    return mpc(x)


def _split_complex(text: str) -> tuple[str, str | None]:
    body = text.replace(" ", "")
    if not body:
        raise ValueError("empty complex literal")
    if body[-1] not in "ij":
        return body, None
    body = body[:-1]
    # the imaginary part starts at the last sign that is not an exponent sign
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            return body[:pos], body[pos:]
    return "", body


def parse_complex(text: str):
    """Parse ``"re+imi"`` literals such as ``"2"``, ``"-1.5+2i"``, ``"i"``.

    Decimal literals are read exactly: a purely real literal yields an exact
    rational, anything with a nonzero imaginary part yields an ``mpc``.
    """
    re_text, im_text = _split_complex(text)
    try:
        re_part = Fraction(re_text) if re_text else Fraction(0)
        if im_text is None:
            im_part = Fraction(0)
        elif im_text in ("", "+", "-"):
            im_part = Fraction(-1 if im_text == "-" else 1)
        else:
            im_part = Fraction(im_text)
    except ValueError:
        raise ValueError(f"not a complex literal: {text!r}") from None
    if im_part == 0:
        return to_scalar(re_part)
    return mpc(mpq(re_part.numerator, re_part.denominator), mpq(im_part.numerator, im_part.denominator))


def format_sci(x, digits: int = 17) -> str:
    """Scientific notation with ``digits`` significant digits.

    Works for values far outside the double range, e.g. ``1e-900``.
    """
    if is_exact(x):
        x = mpfr(x, max(64, 4 * digits))
    elif not isinstance(x, _MPFR):
        x = mpfr(x)
    if x.is_nan():
        return "nan"
    if x.is_infinite():
        return "inf" if x > 0 else "-inf"
    mant, exp, _ = x.digits(10, digits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    if set(mant) == {"0"}:
        return f"{sign}0." + "0" * (digits - 1) + "e+00"
    e = exp - 1
    return f"{sign}{mant[0]}.{mant[1:]}e{'+' if e >= 0 else '-'}{abs(e):02d}"


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient for ``0 <= k <= n``."""
    if k < 0 or k > n:
        raise DomainError(f"binomial({n}, {k}) requires 0 <= k <= n")
    return math.comb(n, k)


def d_summation(k: int, n: int) -> Fraction:
    """``1 + sum_{j=1}^{n} k(k+1)...(k+j-1)/j!`` in exact rational arithmetic."""
    total = Fraction(1)
    term = Fraction(1)
    for j in range(1, n + 1):
        term = term * (k + j - 1) / j
        total += term
    return total


def d_coeff(k: int, n: int, verify: bool = False) -> int:
    """Eigenvalue ``d_{k,n} = C(n+k, n)`` of the reversed Taylor operator on ``z^-k``.

    With ``verify=True`` the defining rising-factorial sum is evaluated
    exactly as well and the two are required to agree.
    """
    if k < 1:
        raise DomainError(f"d_coeff needs k >= 1, got k={k}")
    if n < 0:
        raise DomainError(f"d_coeff needs n >= 0, got n={n}")
    value = binomial(n + k, n)
    if verify:
        summed = d_summation(k, n)
        if summed != value:
            raise VerificationError(f"d_{{{k},{n}}}: summation {summed} != binomial {value}")
    return value


def _abs(x):
    return abs(x) if not is_exact(x) else abs(mpq(x))


class LaurentPoly:
    """Finite Laurent polynomial ``sum_k c_k z^k`` with integer exponents."""

    __slots__ = ("_c", "_dense")

    def __init__(self, coeffs: Mapping[int, object] | Iterable[tuple[int, object]] | None = None):
        items = coeffs.items() if isinstance(coeffs, Mapping) else (coeffs or ())
        c = {}
        for k, v in items:
            v = to_scalar(v)
            if v != 0:
                k = int(k)
                if k in c:
                    raise ValueError(f"duplicate exponent {k}")
                c[k] = v
        self._c = c
        self._dense = None

    @classmethod
    def _raw(cls, c: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._c = c
        obj._dense = None
        return obj

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def from_dense(cls, coeffs: Iterable, start: int = 0) -> "LaurentPoly":
        """Build from consecutive coefficients of ``z^start, z^(start+1), ...``."""
        return cls((start + i, v) for i, v in enumerate(coeffs))

    @classmethod
    def psi(cls, k: int) -> "LaurentPoly":
        """The function ``z^-k``."""
        return cls({-k: 1})

    # -- structure -----------------------------------------------------
    @property
    def coeffs(self) -> Mapping[int, object]:
        return dict(self._c)

    def __getitem__(self, k: int):
        return self._c.get(k, 0)

    def __iter__(self) -> Iterator[tuple[int, object]]:
        return iter(sorted(self._c.items()))

    def __len__(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int:
        if not self._c:
            raise DomainError("degree of the zero Laurent polynomial")
        return max(self._c)

    @property
    def order(self) -> int:
        if not self._c:
            raise DomainError("order of the zero Laurent polynomial")
        return min(self._c)

    def is_polynomial(self) -> bool:
        return all(k >= 0 for k in self._c)

    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self._c.values())

    def nonnegative_part(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: v for k, v in self._c.items() if k >= 0})

    def negative_part(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: v for k, v in self._c.items() if k < 0})

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return lp_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        return lp_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out: dict = {}
            for i, a in self._c.items():
                for j, b in other._c.items():
                    out[i + j] = out.get(i + j, 0) + a * b
            return LaurentPoly._raw({k: v for k, v in out.items() if v != 0})
        s = to_scalar(other)
        if s == 0:
            return LaurentPoly()
        return LaurentPoly._raw({k: v * s for k, v in self._c.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = to_scalar(other)
        if s == 0:
            raise ZeroDivisionError("division of a Laurent polynomial by zero")
        if is_exact(s):
            inv = mpq(1) / s
            return LaurentPoly._raw({k: v * inv if is_exact(v) else v / s for k, v in self._c.items()})
        return LaurentPoly._raw({k: v / s for k, v in self._c.items()})

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``z^k``."""
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def derivative(self) -> "LaurentPoly":
        return lp_derivative(self)

    def __call__(self, z):
        return lp_eval(self, z)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def max_abs_coeff(self):
        return max((_abs(v) for v in self._c.values()), default=mpfr(0))

    def __repr__(self):
        if not self._c:
            return "LaurentPoly(0)"
        terms = ", ".join(f"{k}: {v}" for k, v in sorted(self._c.items()))
        return f"LaurentPoly({{{terms}}})"

    # -- evaluation support ------------------------------------------
    def _dense_parts(self):
        if self._dense is None:
            pos = [0] * (max(max(self._c), -1) + 1) if self._c else []
            neg = [0] * (max(-min(self._c), 0) + 1) if self._c else [0]
            for k, v in self._c.items():
                if k >= 0:
                    pos[k] = v
                else:
                    neg[-k] = v
            self._dense = (pos, neg)
        return self._dense


def lp_add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Coefficientwise sum in normalized form.

    Float coefficients that cancel to below ``2^(-b/2)`` of the larger
    operand at that exponent are treated as rounding residue and dropped.
    """
    out = dict(f._c)
    for k, v in g._c.items():
        if k not in out:
            out[k] = v
            continue
        u = out[k]
        s = u + v
        if s == 0:
            del out[k]
        elif not is_exact(s):
            scale = max(_abs(u), _abs(v))
            if _abs(s) < scale * mpfr(2) ** (-(current_precision() // 2)):
                del out[k]
            else:
                out[k] = s
        else:
            out[k] = s
    return LaurentPoly._raw(out)


def lp_derivative(f: LaurentPoly) -> LaurentPoly:
    return LaurentPoly._raw({k - 1: k * v for k, v in f._c.items() if k != 0})


def _coerce_point(z):
    if isinstance(z, (_MPC, _MPFR)) or is_exact(z):
        return z
    if isinstance(z, Fraction):
        return mpq(z.numerator, z.denominator)
    if isinstance(z, (complex, float)):
        return cplx(z)
    return to_scalar(z)


def lp_eval(f: LaurentPoly, z):
    """Evaluate ``f`` at ``z`` by Horner's rule in ``z`` and in ``1/z``.

    Exact inputs give an exact result. Raises :class:`ZeroPole` when
    ``z = 0`` and ``f`` has negative exponents.
    """
    z = _coerce_point(z)
    if not f._c:
        return 0
    pos, neg = f._dense_parts()
    total = 0
    if pos:
        acc = pos[-1]
        for c in reversed(pos[:-1]):
            acc = acc * z + c
        total = acc
    if len(neg) > 1:
        if z == 0:
            raise ZeroPole("Laurent polynomial with negative exponents evaluated at 0")
        w = mpq(1) / z if is_exact(z) else 1 / z
        acc = neg[-1]
        for c in reversed(neg[1:-1]):
            acc = acc * w + c
        total = total + acc * w
    return total


def lp_eval_many(f: LaurentPoly, pts: Iterable) -> list:
    return [lp_eval(f, z) for z in pts]


def lp_sup_norm(f: LaurentPoly, pts) -> mpfr:
    """Maximum of ``|f(z)|`` over the sample points ``pts``.

    This under-estimates the supremum over the continuum the points sample.
    """
    pts = list(pts)
    if not pts:
        raise EmptySampleSet("sup-norm over an empty sample set")
    if f.is_zero():
        return mpfr(0)
    return max(_abs(lp_eval(f, z)) for z in pts)
