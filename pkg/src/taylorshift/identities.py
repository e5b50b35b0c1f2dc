"""Seeded exact checks of the reversed-Taylor identities.

Every case runs in rational arithmetic and compares the diagonal
operator action with the literal derivative-chain sum, so a bug in either
route shows up as a mismatch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .laurent import LaurentPoly, binomial, d_coeff, d_summation, lp_eval
from .operators import OperatorSpec, apply_T_reference, apply_Ttilde, ttilde_of_z_times

MAX_N = 200
MAX_K = 10
MAX_DEGREE = 12


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, detail: str) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(detail)


def _rational(rng: random.Random):
    return mpq(rng.randint(-60, 60), rng.randint(1, 24))


def _random_poly(rng: random.Random, degree: int) -> LaurentPoly:
    return LaurentPoly({m: _rational(rng) for m in range(degree + 1)})


def _random_laurent(rng: random.Random) -> LaurentPoly:
    lo = -rng.randint(0, MAX_K)
    hi = rng.randint(0, MAX_DEGREE)
    return LaurentPoly({m: _rational(rng) for m in range(lo, hi + 1) if rng.random() < 0.6})


def _reference_ttilde(n: int, f: LaurentPoly) -> LaurentPoly:
    return apply_T_reference(OperatorSpec(-1, n), f)


def check_poly(rng: random.Random, cases: int) -> CheckResult:
    """``T~_n(p) = p(0)`` whenever ``deg p <= n``."""
    out = CheckResult("poly")
    for _ in range(cases):
        n = rng.randint(0, MAX_N)
        p = _random_poly(rng, rng.randint(0, min(n, MAX_DEGREE)))
        expected = LaurentPoly({0: p[0]})
        ok = apply_Ttilde(n, p) == expected and _reference_ttilde(n, p) == expected
        out.record(ok, f"n={n} p={p}")
    return out


def check_zf(rng: random.Random, cases: int) -> CheckResult:
    """``T~_n(z f) = (-1)^n f^(n)/n! z^(n+1)`` for Laurent polynomials ``f``."""
    out = CheckResult("zf")
    for _ in range(cases):
        n = rng.randint(0, MAX_N)
        f = _random_laurent(rng)
        closed = ttilde_of_z_times(n, f)
        zf = f.shift(1)
        ok = apply_Ttilde(n, zf) == closed and _reference_ttilde(n, zf) == closed
        out.record(ok, f"n={n} f={f}")
    return out


def check_z_k(rng: random.Random, cases: int) -> CheckResult:
    """``T~_n(z^-k) = d_{k,n} z^-k`` with ``d_{k,n}`` from the defining sum."""
    out = CheckResult("z-k")
    for _ in range(cases):
        n = rng.randint(0, MAX_N)
        k = rng.randint(1, MAX_K)
        s = d_summation(k, n)
        expected = LaurentPoly({-k: mpq(s.numerator, s.denominator)})
        psi = LaurentPoly.psi(k)
        ok = apply_Ttilde(n, psi) == expected and _reference_ttilde(n, psi) == expected
        out.record(ok, f"n={n} k={k}")
    return out


def check_d_coeff(rng: random.Random, cases: int) -> CheckResult:
    """``1 + sum_j k(k+1)...(k+j-1)/j! = C(n+k, n)``."""
    out = CheckResult("d_kn")
    for _ in range(cases):
        n = rng.randint(0, MAX_N)
        k = rng.randint(1, MAX_K)
        out.record(d_summation(k, n) == Fraction(binomial(n + k, n)), f"n={n} k={k}")
    return out


def check_spot_values() -> CheckResult:
    """Fixed examples: ``d_{2,3} = 10`` and ``T~_2(z^2 + z) = 0``."""
    out = CheckResult("spot")
    out.record(d_coeff(2, 3, verify=True) == 10, "d_{2,3} != 10")
    out.record(apply_Ttilde(2, LaurentPoly({2: 1, 1: 1})).is_zero(), "T~_2(z^2 + z) != 0")
    out.record(lp_eval(apply_Ttilde(3, LaurentPoly({-2: 1})), 1) == 10, "T~_3(z^-2)(1) != 10")
    return out


def run_identity_suite(seed: int, cases: int) -> list[CheckResult]:
    """All identity checks with inputs drawn from ``random.Random(seed)``."""
    rng = random.Random(seed)
    return [
        check_poly(rng, cases),
        check_zf(rng, cases),
        check_z_k(rng, cases),
        check_d_coeff(rng, cases),
        check_spot_values(),
    ]
