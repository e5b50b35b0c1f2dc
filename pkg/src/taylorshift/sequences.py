"""Index-sequence mechanics: gap condition, growth subsequences, disjointness.

All sequence values are exact integers. Comparisons that involve
logarithms run in ``mpfr`` at :data:`LOG_BITS` bits; the exponential
construction is decided exactly with rational powers of the base.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpq

from .approximant import IndexSequence, _as_fraction
from .errors import BaseExhausted, DomainError
from .geometry import DomainSpec, _c
from .laurent import LaurentPoly, format_sci, is_exact, lp_eval, precision, to_scalar
from .operators import OperatorSpec, apply_T, partial_sum_S

LOG_BITS = 256
POLY_K_MIN = 3
EXP_K_MIN = 4

# ----------------------------------------------------------------------
# Gap condition
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    """Greedy witnesses ``mu_1 < mu_2 < ...`` for the gap condition.

    Witness ``mu_j`` satisfies ``lambda^(1)(mu_j) > j`` and
    ``lambda^(s+1)(mu_j) > j * lambda^(s)(mu_j)`` for every ``s``.
    ``min_ratios[j-1]`` is the smallest consecutive ratio at ``mu_j``.
    """

    witnesses: tuple
    min_ratios: tuple
    n_range: int
    required: int

    @property
    def success(self) -> bool:
        return len(self.witnesses) >= self.required

    @property
    def max_level(self) -> int:
        return len(self.witnesses)


def check_gap_condition(seqs: Sequence[IndexSequence], n_range: int, required: int = 10) -> GapReport:
    """Finite-range search for a subsequence along which all ratios diverge.

    The search is greedy: level ``j`` takes the first index after the
    previous witness where ``lambda^(1)`` and every consecutive ratio exceed
    ``j``. It stops when the range is used up. ``success`` means at least
    ``required`` levels were reached; this is evidence, not a proof.
    """
    if len(seqs) < 2:
        raise DomainError("the gap condition needs at least two sequences")
    witnesses, ratios = [], []
    level = 1
    for n in range(1, n_range + 1):
        try:
            vals = [seq(n) for seq in seqs]
        except DomainError:
            break
        if vals[0] <= level:
            continue
        if all(b > level * a for a, b in zip(vals, vals[1:])):
            witnesses.append(n)
            ratios.append(min(Fraction(b, a) for a, b in zip(vals, vals[1:])))
            level += 1
    return GapReport(tuple(witnesses), tuple(ratios), n_range, required)


def d_ratio(k: int, lam_small: int, lam_large: int) -> Fraction:
    """Exact ``d_{k, lam_large} / d_{k, lam_small}``."""
    return Fraction(math.comb(lam_large + k, k), math.comb(lam_small + k, k))


# ----------------------------------------------------------------------
# Growth models and the subsequence constructions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthModel:
    """``lambda^(s)_n ~ c_s n^{d_s}`` (polynomial) or ``c_s a_s^n`` (exponential)."""

    kind: str
    rates: tuple
    scales: tuple = ()

    def __post_init__(self):
        if self.kind not in ("polynomial", "exponential"):
            raise DomainError(f"unknown growth model {self.kind!r}")
        rates = tuple(_as_fraction(r) for r in self.rates)
        scales = tuple(_as_fraction(c) for c in self.scales) or tuple(Fraction(1) for _ in rates)
        if not rates or len(scales) != len(rates):
            raise DomainError("one scale per rate is required")
        floor = 0 if self.kind == "polynomial" else 1
        if rates[0] <= floor or any(b <= a for a, b in zip(rates, rates[1:])):
            raise DomainError(f"rates must satisfy {floor} < r_1 < r_2 < ...")
        if any(c <= 0 for c in scales):
            raise DomainError("scales must be positive")
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "scales", scales)

    @classmethod
    def polynomial(cls, degrees, scales=()) -> "GrowthModel":
        return cls("polynomial", tuple(degrees), tuple(scales))

    @classmethod
    def exponential(cls, bases, scales=()) -> "GrowthModel":
        return cls("exponential", tuple(bases), tuple(scales))

    def sequences(self) -> list:
        make = IndexSequence.polynomial if self.kind == "polynomial" else IndexSequence.exponential
        return [make(c, r) for c, r in zip(self.scales, self.rates)]

    @property
    def top(self) -> Fraction:
        return self.rates[-1]


@dataclass(frozen=True)
class Check:
    """One displayed inequality at one ``k``: ``lhs <relation> rhs``."""

    name: str
    lhs: object
    relation: str
    rhs: object
    ok: bool


@dataclass(frozen=True)
class SubsequencePair:
    """``q_k`` drawn from the base and ``p_k`` (``None`` below ``k_min``), ``k = 1..k_count``."""

    q: tuple
    p: tuple
    k_min: int
    checks: tuple = ()
    skipped: bool = False

    @property
    def passed(self) -> bool:
        return all(c.ok for row in self.checks for c in row[1])

    def failures(self) -> list:
        return [(k, c) for k, row in self.checks for c in row if not c.ok]


class _Base:
    """Strictly increasing base sequence ``n_1 < n_2 < ...``, searched by value."""

    def __init__(self, base):
        self._list = None
        self._fn: Callable[[int], int] | None = None
        if base is None:
            self._fn = lambda i: i
            self._length = None
        elif isinstance(base, IndexSequence):
            self._fn = base
            self._length = base.length
        else:
            values = [int(v) for v in base]
            if not values or any(v < 1 for v in values) or any(b <= a for a, b in zip(values, values[1:])):
                raise DomainError("base must be a nonempty strictly increasing list of positive integers")
            self._list = values

    def first(self) -> int:
        return self._list[0] if self._list is not None else self._fn(1)

    def at_least(self, target: int) -> int:
        """Smallest base element ``>= target``."""
        if self._list is not None:
            i = bisect.bisect_left(self._list, target)
            if i == len(self._list):
                raise BaseExhausted(f"base has no element >= {target}")
            return self._list[i]
        if self._length is not None and self._fn(self._length) < target:
            raise BaseExhausted(f"base has no element >= {target}")
        hi = 1
        while self._fn(hi) < target:
            hi *= 2
            if self._length is not None and hi > self._length:
                hi = self._length
                break
        lo = 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self._fn(mid) >= target:
                hi = mid
            else:
                lo = mid + 1
        return self._fn(lo)


def _mp(x) -> mpfr:
    if isinstance(x, Fraction):
        return mpfr(mpq(x.numerator, x.denominator))
    return mpfr(x)


def _log_root(k: int, d: Fraction) -> mpfr:
    """``(log k)^(1/d)``."""
    return gmpy2.exp(gmpy2.log(gmpy2.log(mpfr(k))) / _mp(d))


def _check(name, lhs, rel, rhs) -> Check:
    ok = {"<": lhs < rhs, "<=": lhs <= rhs, ">": lhs > rhs, ">=": lhs >= rhs}[rel]
    return Check(name, lhs, rel, rhs, bool(ok))


def _ratio(a: int, b: int) -> mpfr:
    return mpfr(mpq(a, b))


def poly_growth_subsequence(base, model: GrowthModel, k_count: int) -> SubsequencePair:
    """Greedy ``q_{k+1} > k q_k`` and ``p_k = floor(q_k / (log k)^(1/d)) + 1``.

    Checks for ``k = 3..k_count``:

    * ``q_{k+1} > k q_k``
    * ``q_k / L_k <= p_k <= q_k / L_k + 1`` with ``L_k = (log k)^(1/d)``
    * ``(1/L_k + 1/q_k)^-1 <= q_k / p_k <= L_k``
    * ``p_{k+1} >= q_{k+1} / L_{k+1} >= 2 q_{k+1} / k > 2 q_k``
    * for each model sequence: ``lambda_{q_k} / lambda_{p_k} <= 2 (q_k/p_k)^d <= k``,
      with the normalized ratio ``(lambda_q / q^d_s) / (lambda_p / p^d_s) <= 2``

    ``d`` is the largest model degree.
    """
    if model.kind != "polynomial":
        raise DomainError("poly_growth_subsequence needs a polynomial growth model")
    if k_count < 1:
        raise DomainError("k_count must be positive")
    b = _Base(base)
    q = [b.first()]
    for k in range(1, k_count + 1):
        q.append(b.at_least(k * q[-1] + 1))
    d = model.top
    seqs = model.sequences()
    checks = []
    with precision(LOG_BITS):
        p = [None] * (k_count + 1)
        for k in range(POLY_K_MIN, k_count + 2):
            p[k - 1] = int(gmpy2.floor(mpfr(q[k - 1]) / _log_root(k, d))) + 1
        for k in range(POLY_K_MIN, k_count + 1):
            qk, qn, pk, pn = q[k - 1], q[k], p[k - 1], p[k]
            L, Ln = _log_root(k, d), _log_root(k + 1, d)
            row = [
                _check("q_next > k q", qn, ">", k * qk),
                _check("q/L <= p", mpfr(qk) / L, "<=", mpfr(pk)),
                _check("p <= q/L + 1", mpfr(pk), "<=", mpfr(qk) / L + 1),
                _check("(1/L + 1/q)^-1 <= q/p", 1 / (1 / L + mpfr(1) / qk), "<=", _ratio(qk, pk)),
                _check("q/p <= L", _ratio(qk, pk), "<=", L),
                _check("p_next >= q_next/L_next", mpfr(pn), ">=", mpfr(qn) / Ln),
                _check("q_next/L_next >= 2 q_next/k", mpfr(qn) / Ln, ">=", mpfr(2 * qn) / k),
                _check("2 q_next/k > 2 q", _ratio(2 * qn, k), ">", mpfr(2 * qk)),
            ]
            bound = 2 * _ratio(qk, pk) ** _mp(d)
            for s, (seq, ds) in enumerate(zip(seqs, model.rates), 1):
                lq, lp = seq(qk), seq(pk)
                norm = (_ratio(lq, 1) / mpfr(qk) ** _mp(ds)) / (_ratio(lp, 1) / mpfr(pk) ** _mp(ds))
                row.append(_check(f"normalized ratio {s} <= 2", norm, "<=", mpfr(2)))
                row.append(_check(f"lambda{s}_q/lambda{s}_p <= 2(q/p)^d", _ratio(lq, lp), "<=", bound))
            row.append(_check("2(q/p)^d <= k", bound, "<=", mpfr(k)))
            checks.append((k, tuple(row)))
    return SubsequencePair(tuple(q[:k_count]), tuple(p[:k_count]), POLY_K_MIN, tuple(checks), k_count < POLY_K_MIN)


def _floor_log_sqrt(k: int, a: Fraction) -> int:
    """``floor(log sqrt(k) / log a)``: the largest ``j`` with ``a^(2j) <= k``."""
    j = 0
    while (a ** (2 * (j + 1))) <= k:
        j += 1
    return j


def _min_step(k: int, a: Fraction) -> int:
    """Smallest integer ``D`` with ``D > 2 log sqrt(k) / log a``, i.e. ``a^D > k``."""
    D = 0
    while a**D <= k:
        D += 1
    return D


def exp_growth_subsequence(base, model: GrowthModel, k_count: int) -> SubsequencePair:
    """Greedy ``q_{k+1} > q_k + 2 log sqrt(k+1) / log a`` and ``p_k = q_k - floor(log sqrt(k) / log a)``.

    Checks for ``k = 4..k_count`` (``a`` the largest base):

    * ``q_{k+1} > q_k + 2 B_{k+1}`` with ``B_k = log sqrt(k) / log a``
    * ``B_k - 1 <= q_k - p_k <= B_k``
    * ``p_{k+1} > q_k + floor(B_{k+1})`` (so ``p_{k+1} - q_k`` grows)
    * for each model sequence: ``lambda_{q_k} / lambda_{p_k} <= 2 a^(q_k - p_k) <= 2 sqrt(k) <= k``

    The integer comparisons are exact (``a^D > k`` with rational ``a``); the
    displayed real quantities are reported in ``mpfr``.
    """
    if model.kind != "exponential":
        raise DomainError("exp_growth_subsequence needs an exponential growth model")
    if k_count < 1:
        raise DomainError("k_count must be positive")
    a = model.top
    b = _Base(base)
    q = [b.first()]
    for k in range(1, k_count + 1):
        q.append(b.at_least(q[-1] + _min_step(k + 1, a)))
    p = [None] * (k_count + 1)
    for k in range(2, k_count + 2):
        p[k - 1] = q[k - 1] - _floor_log_sqrt(k, a)
    seqs = model.sequences()
    checks = []
    with precision(LOG_BITS):
        log_a = gmpy2.log(_mp(a))

        def B(k):
            return gmpy2.log(gmpy2.sqrt(mpfr(k))) / log_a

        for k in range(EXP_K_MIN, k_count + 1):
            qk, qn, pk, pn = q[k - 1], q[k], p[k - 1], p[k]
            gap = qk - pk
            row = [
                # exact form of q_next - q > 2 B_{k+1}: a^(q_next - q) > k + 1
                _check("q_next > q + 2 B_next", a ** (qn - qk), ">", Fraction(k + 1)),
                _check("B - 1 <= q - p", B(k) - 1, "<=", mpfr(gap)),
                _check("q - p <= B", a ** (2 * gap), "<=", Fraction(k)),
                _check("p_next > q + floor(B_next)", pn, ">", qk + _floor_log_sqrt(k + 1, a)),
            ]
            bound = 2 * a**gap
            for s, (seq, a_s) in enumerate(zip(seqs, model.rates), 1):
                lq, lp = seq(qk), seq(pk)
                norm = (Fraction(lq) / a_s**qk) / (Fraction(lp) / a_s**pk)
                row.append(_check(f"normalized ratio {s} <= 2", norm, "<=", Fraction(2)))
                row.append(_check(f"lambda{s}_q/lambda{s}_p <= 2 a^(q-p)", Fraction(lq, lp), "<=", bound))
            # 2 a^(q-p) <= 2 sqrt(k)  <=>  a^(2(q-p)) <= k
            row.append(_check("2 a^(q-p) <= 2 sqrt(k)", bound * bound, "<=", Fraction(4 * k)))
            row.append(_check("2 sqrt(k) <= k", 4 * k, "<=", k * k))
            checks.append((k, tuple(row)))
    return SubsequencePair(tuple(q[:k_count]), tuple(p[:k_count]), EXP_K_MIN, tuple(checks), k_count < EXP_K_MIN)


def _cell(x) -> str:
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        with precision(LOG_BITS):
            return format_sci(_mp(x))
    return format_sci(x)


def subsequence_csv(pair: SubsequencePair) -> str:
    """One row per checked ``k``: ``k, q_k, p_k``, then LHS/RHS/pass per inequality."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [c.name for c in pair.checks[0][1]] if pair.checks else []
    header = ["k", "q_k", "p_k"]
    for name in names:
        header += [f"{name} [lhs]", f"{name} [rhs]", f"{name} [pass]"]
    header.append("pass")
    writer.writerow(header)
    for k, row in pair.checks:
        cells = [k, pair.q[k - 1], pair.p[k - 1]]
        for c in row:
            cells += [_cell(c.lhs), _cell(c.rhs), int(c.ok)]
        cells.append(int(all(c.ok for c in row)))
        writer.writerow(cells)
    return buf.getvalue()


# ----------------------------------------------------------------------
# G and (a+1)G
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DisjointnessVerdict:
    disjoint: bool
    method: str  # "exact" or "sampled"

    def __bool__(self) -> bool:
        return self.disjoint


_SAMPLED_GRID = 64


def domain_disjointness(G: DomainSpec, a) -> DisjointnessVerdict:
    """Whether ``G`` and ``(a+1)G`` are disjoint.

    Disks and half-planes are decided in closed form; polygons by sampling
    both sets on a grid plus their boundaries (verdict ``sampled``).
    """
    a = to_scalar(a)
    if a == -1:
        raise DomainError("a = -1 collapses (a+1)G to a point")
    if G.kind == "disk":
        with precision(LOG_BITS):
            lhs = abs(gmpy2.mpc(a)) * abs(gmpy2.mpc(G.center))
            rhs = _mp_scalar(G.radius) * (1 + abs(gmpy2.mpc(a) + 1))
            # equality means tangent open disks, which are disjoint
            ok = lhs >= rhs or abs(lhs - rhs) <= rhs * mpfr(2) ** (-(LOG_BITS - 16))
        return DisjointnessVerdict(bool(ok), "exact")
    if G.kind == "half-plane":
        # (a+1)G is the half-plane with normal normal/conj(a+1); two open
        # half-planes {x.n > o1}, {x.(-n) > o2} are disjoint iff o1 + o2 >= 0
        c = gmpy2.mpc(a) + 1
        ok = c.imag == 0 and c.real < 0 and G.offset >= 0
        return DisjointnessVerdict(bool(ok), "exact")
    verts = np.array([_c(v) for v in G.vertices])
    lo, hi = verts.min(), verts.max()
    xs = np.linspace(verts.real.min(), verts.real.max(), _SAMPLED_GRID)
    ys = np.linspace(verts.imag.min(), verts.imag.max(), _SAMPLED_GRID)
    grid = (xs[:, None] + 1j * ys[None, :]).ravel()
    edges = np.concatenate(
        [verts[i] + np.linspace(0, 1, _SAMPLED_GRID, endpoint=False) * (np.roll(verts, -1)[i] - verts[i]) for i in range(len(verts))]
    )
    inside = np.concatenate([grid[G.contains_many(grid)], edges])
    s = _c(a) + 1
    hit = G.contains_many(inside * s).any() or G.contains_many(inside / s).any()
    return DisjointnessVerdict(not bool(hit), "sampled")


def _mp_scalar(x) -> mpfr:
    return mpfr(mpq(x)) if is_exact(x) else mpfr(x)


def disk_intersection_sampled(center: complex, radius: float, a: complex, count: int = 400) -> bool:
    """Dense-sampling oracle: does ``disk(c, r)`` meet ``(a+1) disk(c, r)``?"""
    s = a + 1
    r = np.sqrt(np.linspace(0, 1, count // 8 + 1))[1:-1] * radius * 0.999999
    t = np.exp(2j * np.pi * np.arange(count) / count)
    pts = np.concatenate([[center], (center + r[:, None] * t[None, :]).ravel()])
    image = pts * s
    return bool(np.any(np.abs(image - center) < radius) or np.any(np.abs(pts / s - center) < radius))


# ----------------------------------------------------------------------
# S_n(f, zeta)((a+1) zeta) versus T_{a,n}(f)(zeta)
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    max_abs_diff: mpfr
    worst_n: int
    worst_zeta: object
    cases: int


def t_a_identity_suite(f: LaurentPoly, a, n_max: int, zeta_grid) -> IdentityReport:
    """Largest ``|S_n(f, zeta)((a+1) zeta) - T_{a,n}(f)(zeta)|`` over the grid and ``n <= n_max``.

    The left side expands the Taylor partial sum about ``zeta`` in powers of
    ``z`` and evaluates it at ``(a+1) zeta``; the right side uses the
    diagonal action of ``T_{a,n}`` on monomials.
    """
    a = to_scalar(a)
    worst, worst_n, worst_z, cases = mpfr(0), 0, None, 0
    for zeta in zeta_grid:
        zeta = to_scalar(zeta) if not isinstance(zeta, complex) else gmpy2.mpc(zeta)
        target = (a + 1) * zeta
        for n in range(n_max + 1):
            lhs = lp_eval(partial_sum_S(n, f, zeta), target)
            rhs = lp_eval(apply_T(OperatorSpec(a, n), f), zeta)
            diff = abs(gmpy2.mpc(lhs - rhs)) if not is_exact(lhs - rhs) else abs(mpfr(mpq(lhs - rhs)))
            cases += 1
            if diff > worst or worst_z is None:
                worst, worst_n, worst_z = diff, n, zeta
    return IdentityReport(worst, worst_n, worst_z, cases)
