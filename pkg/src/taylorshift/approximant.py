"""Construction of a function approximating prescribed reversed-Taylor images.

Given a polynomial ``p`` with ``p(0) = 0`` and principal parts
``R_1, ..., R_S`` together with index sequences ``lambda^(1), ...,
lambda^(S)``, the builder produces

    f = p + sum_{s<S} z p^(s) + R_{S,n}

where ``R_{s,n}`` is ``R_s`` with each ``b_k`` divided by
``d_{k, lambda^(s)(n)}`` and ``p^(s)`` interpolates ``R_{s,n}/z`` at
``lambda^(s+1)(n)`` Leja nodes of ``K``. Then ``f`` is close to ``p`` on
``K`` and ``T~_{lambda^(s)(n)}(f)`` is close to ``R_s``.

Errors are measured as sample sup-norms over ``K``. Two routes exist:

* ``remainder`` (default): every error is assembled from exact rational
  Laurent pieces plus the interpolation error ``e = g - p^(s)`` and its
  Taylor coefficients, taken from the Newton remainder formula. No
  expanded interpolant is evaluated, so tiny errors are resolved at any
  size and large ``n`` stays cheap.
* ``direct``: ``f`` is expanded, ``T~`` is applied coefficientwise and
  the result is evaluated at the working precision. Kept as a reference.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpq

from .errors import DomainError, NotReached, SequenceTooSmall
from .geometry import Geometry, NodeSet, leja_points, log_abs_nodal
from .interpolation import (
    _log_positive,
    newton_interpolant,
    remainder_taylor_coefficients,
)
from .laurent import (
    LaurentPoly,
    current_precision,
    d_coeff,
    format_sci,
    is_exact,
    lp_eval,
    lp_sup_norm,
    precision,
    to_scalar,
)
from .operators import apply_Ttilde, ttilde_of_z_times

# ----------------------------------------------------------------------
# Targets and index sequences
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TargetSpec:
    """Polynomial ``p`` (``p(0) = 0``) and one principal part per sequence."""

    p: LaurentPoly
    principal_parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "principal_parts", tuple(self.principal_parts))
        if not self.p.is_zero() and (self.p.order < 1):
            raise DomainError("p must be a polynomial with p(0) = 0")
        for s, R in enumerate(self.principal_parts, 1):
            if not R.is_zero() and R.degree >= 0:
                raise DomainError(f"principal part {s} has a nonnegative power of z")

    @property
    def p_degree(self) -> int:
        return 0 if self.p.is_zero() else self.p.degree


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if is_exact(x):
        q = mpq(x)
        return Fraction(int(q.numerator), int(q.denominator))
    return Fraction(str(x))


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


@dataclass(frozen=True)
class IndexSequence:
    """Strictly positive integer sequence ``n -> lambda_n`` for ``n >= 1``.

    Kinds: ``power`` (``n^e``), ``polynomial`` (``round(c n^d)``),
    ``exponential`` (``round(c a^n)``) and ``explicit`` (a finite list).
    Rounding is half-up and exact.
    """

    kind: str
    params: tuple

    def __post_init__(self):
        k, p = self.kind, self.params
        if k == "power":
            if len(p) != 1 or not isinstance(p[0], int) or p[0] < 1:
                raise DomainError("power sequence needs an integer exponent >= 1")
        elif k == "polynomial":
            c, d = p
            if not (c > 0 and d > 0):
                raise DomainError("polynomial sequence needs c > 0 and d > 0")
        elif k == "exponential":
            c, a = p
            if not (c > 0 and a > 1):
                raise DomainError("exponential sequence needs c > 0 and a > 1")
        elif k == "explicit":
            if not p or any(not isinstance(v, int) or v < 1 for v in p):
                raise DomainError("explicit sequence needs positive integers")
            if any(b <= a for a, b in zip(p, p[1:])):
                raise DomainError("explicit sequence must be strictly increasing")
        else:
            raise DomainError(f"unknown sequence kind {k!r}")

    @classmethod
    def power(cls, exponent: int) -> "IndexSequence":
        return cls("power", (int(exponent),))

    @classmethod
    def polynomial(cls, c, d) -> "IndexSequence":
        return cls("polynomial", (_as_fraction(c), _as_fraction(d)))

    @classmethod
    def exponential(cls, c, a) -> "IndexSequence":
        return cls("exponential", (_as_fraction(c), _as_fraction(a)))

    @classmethod
    def explicit(cls, values: Sequence[int]) -> "IndexSequence":
        return cls("explicit", tuple(int(v) for v in values))

    @property
    def length(self) -> int | None:
        return len(self.params) if self.kind == "explicit" else None

    def __call__(self, n: int) -> int:
        if n < 1:
            raise DomainError(f"sequence index must be >= 1, got {n}")
        k, p = self.kind, self.params
        if k == "power":
            value = n ** p[0]
        elif k == "polynomial":
            c, d = p
            if d.denominator == 1:
                value = _round_half_up(c * n ** d.numerator)
            else:
                value = self._round_real(c, d, n)
        elif k == "exponential":
            c, a = p
            value = _round_half_up(c * a**n)
        else:
            if n > len(p):
                raise DomainError(f"explicit sequence has {len(p)} terms, index {n} requested")
            value = p[n - 1]
        if value < 1:
            raise DomainError(f"sequence value at n={n} is {value}, must be positive")
        return value

    @staticmethod
    def _round_real(c: Fraction, d: Fraction, n: int) -> int:
        # c n^d with irrational power: enough bits to decide the rounding
        bits = 64 + int(float(d) * math.log2(n + 1)) + c.numerator.bit_length()
        while True:
            with precision(bits):
                x = mpfr(mpq(c.numerator, c.denominator)) * mpfr(n) ** mpfr(mpq(d.numerator, d.denominator))
                frac = x + mpfr(0.5) - gmpy2.floor(x + mpfr(0.5))
                if bits > 4096 or (frac > mpfr(2) ** (-bits // 2) and frac < 1 - mpfr(2) ** (-bits // 2)):
                    return int(gmpy2.floor(x + mpfr(0.5)))
            bits *= 2

    def describe(self) -> str:
        k, p = self.kind, self.params
        if k == "power":
            return f"n^{p[0]}"
        if k == "polynomial":
            return f"round({p[0]} n^{p[1]})"
        if k == "exponential":
            return f"round({p[0]} * {p[1]}^n)"
        return "explicit"


def damped_principal_part(R: LaurentPoly, lam: int) -> LaurentPoly:
    """``R`` with each ``b_k z^-k`` replaced by ``b_k / d_{k,lam} z^-k``."""
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    out = {}
    for m, c in R:
        if m >= 0:
            raise DomainError("principal part has a nonnegative power of z")
        d = d_coeff(-m, lam)
        out[m] = (mpq(c) / d) if is_exact(c) else c / d
    return LaurentPoly(out)


# ----------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DecayRow:
    """Errors and bounds for one ``n``.

    ``errors`` holds ``err_U`` followed by ``err_1 .. err_S``. The remaining
    fields refer to the first interpolant ``p^(1)``: ``interp_err`` is
    ``||R_{1,n} - z p^(1)||_K`` with its Bernstein-Walsh bound ``bw_bound``;
    ``interp_term`` is ``||T~_{lambda1}(z p^(1)) - R_1||_K`` with
    ``deriv_bound``; ``cross_term`` is ``||T~_{lambda1}(R_{S,n})||_K`` and
    ``poly_term`` is ``||T~_{lambda1}(p)||_K``.
    """

    n: int
    lambdas: tuple
    errors: tuple
    theta_hat: float
    bw_bound: mpfr
    interp_err: mpfr
    interp_term: mpfr
    deriv_bound: mpfr
    cross_term: mpfr
    poly_term: mpfr

    @property
    def err_U(self) -> mpfr:
        return self.errors[0]

    def max_error(self) -> mpfr:
        return max(self.errors)


@dataclass
class Approximant:
    """Result of :func:`build_approximant`; unpacks as ``(f, errors)``."""

    f: LaurentPoly | None
    errors: dict
    row: DecayRow
    interpolants: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.f, self.errors))


@dataclass
class ApproximantReport:
    """Outcome of :func:`find_n0`: first ``n`` meeting the tolerance and the decay table."""

    n0: int | None
    f: LaurentPoly | None
    errors: dict
    theta_hat: float
    decay_table: list
    epsilon: float
    found: bool = True

    def to_csv(self) -> str:
        return decay_table_csv(self.decay_table)


def _error_dict(errors: Sequence) -> dict:
    out = {"U": errors[0]}
    for s, e in enumerate(errors[1:], 1):
        out[s] = e
    return out


# ----------------------------------------------------------------------
# Pipeline
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class _Plan:
    n: int
    lambdas: tuple
    damped: tuple


def _plan(targets: TargetSpec, seqs: Sequence[IndexSequence], n: int) -> _Plan:
    S = len(seqs)
    if S < 2:
        raise DomainError("at least two index sequences are required")
    if len(targets.principal_parts) != S:
        raise DomainError(f"{S} sequences but {len(targets.principal_parts)} principal parts")
    lambdas = tuple(seq(n) for seq in seqs)
    deg = targets.p_degree
    for s, lam in enumerate(lambdas, 1):
        if lam < deg:
            raise SequenceTooSmall(f"lambda^({s})({n}) = {lam} is below deg p = {deg}")
    damped = tuple(damped_principal_part(R, lam) for R, lam in zip(targets.principal_parts, lambdas))
    return _Plan(n, lambdas, damped)


def _nodes(geom: Geometry, count: int) -> NodeSet:
    K = geom.compact
    source = K if K.kind == "cloud" else K.refine(max(K.sample_count, 2 * count))
    return leja_points(source, count)


def _structural_zero(deg_zp: int, lam: int) -> bool:
    """``T~_lam(z q) = 0`` whenever ``deg(z q) <= lam`` (and ``(zq)(0) = 0``)."""
    return deg_zp <= lam


def _sup(values) -> mpfr:
    return max((abs(v) if not is_exact(v) else abs(mpfr(v)) for v in values), default=mpfr(0))


def _eval_on(f: LaurentPoly, pts: list) -> list:
    return [lp_eval(f, z) for z in pts]


def _bounds(geom: Geometry, nodes: NodeSet, damped_1: LaurentPoly, lam1: int):
    """Measured theta and the two Bernstein-Walsh bounds for the first interpolant."""
    K, contour = geom.compact, geom.contour
    N = len(nodes)
    samples = np.concatenate([K.complex_samples(), nodes.source.complex_samples()])
    top = float(np.max(log_abs_nodal(nodes, samples)))
    bottom = float(np.min(log_abs_nodal(nodes, contour.samples())))
    log_ratio = top - bottom
    theta = math.exp(log_ratio / N)
    norm_R = _sup(_eval_on(damped_1, contour.sample_points()))
    M = K.max_modulus
    with precision(max(current_precision(), 64)):
        if norm_R == 0:
            return theta, mpfr(0), mpfr(0)
        base = (
            _log_positive("length", contour.length)
            - gmpy2.log(2 * gmpy2.const_pi())
            + gmpy2.log(norm_R)
            - _log_positive("min_abs_w", contour.min_modulus)
            - _log_positive("d", geom.separation)
            + mpfr(log_ratio)
        )
        log_M = _log_positive("M", M)
        log_d = _log_positive("d", geom.separation)
        bw = gmpy2.exp(base + log_M)
        deriv = gmpy2.exp(base - lam1 * log_d + (lam1 + 1) * log_M)
    return theta, bw, deriv


def _measure_remainder(geom: Geometry, targets: TargetSpec, plan: _Plan):
    """Errors of the assembled ``f`` through exact pieces and the Newton remainder."""
    K = geom.compact
    zs = K.complex_samples()
    pts = K.points()
    lams = plan.lambdas
    S = len(lams)
    p = targets.p
    R_S = plan.damped[-1]

    # exact rational parts: p + sum_s R_{s,n} + R_{S,n} for err_U; for err_tau
    # T~(p) + sum over non-structural s of T~(R_{s,n}) + T~(R_{S,n}) - R_tau
    rat_U = p
    rat_tau = [apply_Ttilde(lam, p) + apply_Ttilde(lam, R_S) - R for lam, R in zip(lams, targets.principal_parts)]
    scaled = []  # (sigma, remainder coefficients)
    node_sets = []
    for s in range(S - 1):
        N = lams[s + 1]
        g = plan.damped[s].shift(-1)
        nodes = _nodes(geom, N)
        node_sets.append(nodes)
        rat_U = rat_U + plan.damped[s]
        orders = {0}
        for tau in range(S):
            if not _structural_zero(N, lams[tau]):
                orders.add(lams[tau])
                rat_tau[tau] = rat_tau[tau] + apply_Ttilde(lams[tau], plan.damped[s])
        coeffs = remainder_taylor_coefficients(nodes, g, zs, orders) if not g.is_zero() else {}
        scaled.append(coeffs)
    rat_U = rat_U + R_S - p

    err_values = []
    # err_U: f - p = sum_s (R_{s,n} - z e_s) + R_{S,n}
    vals = _eval_on(rat_U, pts)
    for coeffs in scaled:
        if coeffs:
            e0 = coeffs[0].to_mpc()
            vals = [v - z * e for v, z, e in zip(vals, pts, e0)]
    err_values.append(_sup(vals))
    # err_tau: subtract T~_lam(z e_s) = (-1)^lam z^(lam+1) e_s^(lam)
    for tau in range(S):
        lam = lams[tau]
        vals = _eval_on(rat_tau[tau], pts)
        for s, coeffs in enumerate(scaled):
            if coeffs and not _structural_zero(lams[s + 1], lam):
                eL = coeffs[lam].to_mpc()
                sign = -1 if lam % 2 else 1
                vals = [v - sign * z ** (lam + 1) * e for v, z, e in zip(vals, pts, eL)]
        err_values.append(_sup(vals))

    # decomposition for the first interpolant
    lam1 = lams[0]
    first = scaled[0]
    if first:
        interp_err = _sup([abs(z) * e for z, e in zip(pts, first[0].abs_mpfr())])
        if _structural_zero(lams[1], lam1):
            interp_term = lp_sup_norm(targets.principal_parts[0], pts)
        else:
            interp_term = _sup([abs(z) ** (lam1 + 1) * e for z, e in zip(pts, first[lam1].abs_mpfr())])
    else:
        interp_err = mpfr(0)
        interp_term = lp_sup_norm(targets.principal_parts[0], pts)
    cross = lp_sup_norm(apply_Ttilde(lam1, R_S), pts)
    poly_term = lp_sup_norm(apply_Ttilde(lam1, p), pts)
    return err_values, node_sets, (interp_err, interp_term, cross, poly_term)


def _assemble_f(geom: Geometry, targets: TargetSpec, plan: _Plan, node_sets=None, bits: int | None = None):
    """Expanded ``f`` and the interpolants, at the precision each expansion needs."""
    bits = current_precision() if bits is None else bits
    M = geom.compact.max_modulus
    lams = plan.lambdas
    f = targets.p + plan.damped[-1]
    interpolants = []
    work = bits
    for s in range(len(lams) - 1):
        nodes = node_sets[s] if node_sets else _nodes(geom, lams[s + 1])
        g = plan.damped[s].shift(-1)
        if g.is_zero():
            interpolants.append(None)
            continue
        with precision(bits):
            ip = newton_interpolant(nodes, g, radius=M, residual=False, check=False)
        interpolants.append(ip)
        work = max(work, ip.precision)
        with precision(ip.precision):
            f = f + ip.poly.shift(1)
    return f, interpolants, work


def _measure_direct(geom: Geometry, targets: TargetSpec, plan: _Plan, f: LaurentPoly, interpolants, work: int):
    """Errors by applying ``T~`` coefficientwise to the expanded ``f``."""
    lams = plan.lambdas
    with precision(work):
        pts = geom.compact.points()
        errors = [lp_sup_norm(f - targets.p, pts)]
        for lam, R in zip(lams, targets.principal_parts):
            errors.append(lp_sup_norm(apply_Ttilde(lam, f) - R, pts))
        ip = interpolants[0]
        if ip is None:
            interp_err = mpfr(0)
            interp_term = lp_sup_norm(targets.principal_parts[0], pts)
        else:
            zp = ip.poly.shift(1)
            interp_err = lp_sup_norm(plan.damped[0] - zp, pts)
            interp_term = lp_sup_norm(ttilde_of_z_times(lams[0], ip.poly) - targets.principal_parts[0], pts)
        cross = lp_sup_norm(apply_Ttilde(lams[0], plan.damped[-1]), pts)
        poly_term = lp_sup_norm(apply_Ttilde(lams[0], targets.p), pts)
    return errors, (interp_err, interp_term, cross, poly_term)


def _row(geom, plan, errors, node_sets, terms) -> DecayRow:
    interp_err, interp_term, cross, poly_term = terms
    theta, bw, deriv = _bounds(geom, node_sets[0], plan.damped[0], plan.lambdas[0])
    return DecayRow(
        plan.n, plan.lambdas, tuple(errors), theta, bw, interp_err, interp_term, deriv, cross, poly_term
    )


def build_approximant(
    geom: Geometry,
    targets: TargetSpec,
    seqs: Sequence[IndexSequence],
    n: int,
    *,
    route: str = "remainder",
    expand: bool = True,
) -> Approximant:
    """Assemble ``f`` for index ``n`` and measure its errors on ``K``.

    ``route`` selects how errors are measured (``remainder`` or
    ``direct``). With ``expand=False`` the expanded ``f`` is skipped (only
    allowed on the remainder route).
    """
    if route not in ("remainder", "direct"):
        raise DomainError(f"unknown route {route!r}")
    plan = _plan(targets, seqs, n)
    bits = current_precision()
    if route == "remainder":
        errors, node_sets, terms = _measure_remainder(geom, targets, plan)
        f = interpolants = None
        if expand:
            f, interpolants, _ = _assemble_f(geom, targets, plan, node_sets, bits)
    else:
        node_sets = [_nodes(geom, lam) for lam in plan.lambdas[1:]]
        f, interpolants, work = _assemble_f(geom, targets, plan, node_sets, bits)
        errors, terms = _measure_direct(geom, targets, plan, f, interpolants, work)
    row = _row(geom, plan, errors, node_sets, terms)
    return Approximant(f, _error_dict(errors), row, interpolants or [])


def verify_structural_zero(f: LaurentPoly, targets: TargetSpec, lam_last: int, pts: list) -> mpfr:
    """``||T~_{lambda^(S)}(f) - R_S||`` computed coefficientwise from the expanded ``f``."""
    return lp_sup_norm(apply_Ttilde(lam_last, f) - targets.principal_parts[-1], pts)


def find_n0(
    geom: Geometry,
    targets: TargetSpec,
    seqs: Sequence[IndexSequence],
    epsilon,
    n_max: int,
    *,
    expand: bool = True,
) -> ApproximantReport:
    """Smallest ``n <= n_max`` whose errors are all below ``epsilon``.

    Scans ``n = 1, 2, ...`` and keeps the decay table. Raises
    :class:`NotReached` (carrying the report) when no ``n`` qualifies.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    eps = mpfr(to_scalar(epsilon))
    table = []
    best = None
    for n in range(1, n_max + 1):
        result = build_approximant(geom, targets, seqs, n, expand=False)
        table.append(result.row)
        if best is None or result.row.max_error() < best.max_error():
            best = result.row
        if all(e < eps for e in result.row.errors):
            f = build_approximant(geom, targets, seqs, n).f if expand else None
            return ApproximantReport(n, f, result.errors, result.row.theta_hat, table, float(epsilon))
    last = table[-1]
    report = ApproximantReport(None, None, _error_dict(last.errors), last.theta_hat, table, float(epsilon), False)
    raise NotReached(n_max, _error_dict(best.errors), report)


# ----------------------------------------------------------------------
# Output
# ----------------------------------------------------------------------


def decay_columns(S: int) -> list:
    return (
        ["n"]
        + [f"lambda{s}" for s in range(1, S + 1)]
        + ["err_U"]
        + [f"err_{s}" for s in range(1, S + 1)]
        + ["theta_hat", "bw_bound", "interp_err", "interp_term", "deriv_bound", "cross_term"]
    )


def decay_table_csv(rows: Sequence[DecayRow]) -> str:
    """Decay table as CSV text; reals in scientific notation with 17 digits."""
    if not rows:
        raise DomainError("empty decay table")
    S = len(rows[0].lambdas)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(decay_columns(S))
    for r in rows:
        writer.writerow(
            [r.n, *r.lambdas]
            + [format_sci(e) for e in r.errors]
            + [format_sci(mpfr(r.theta_hat))]
            + [format_sci(x) for x in (r.bw_bound, r.interp_err, r.interp_term, r.deriv_bound, r.cross_term)]
        )
    return buf.getvalue()


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _log10(x) -> float:
    return float(gmpy2.log10(x)) if x > 0 else float("nan")


def write_decay_svg(rows: Sequence[DecayRow], path) -> bool:
    """Plot ``log10(error)`` against ``lambda^(S)``. Returns False when matplotlib is missing."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return False
    S = len(rows[0].lambdas)
    x = [r.lambdas[-1] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = ["err_U"] + [f"err_{s}" for s in range(1, S + 1)]
    for i, label in enumerate(labels):
        ax.plot(x, [_log10(r.errors[i]) for r in rows], marker="o", label=label)
    ax.plot(x, [_log10(r.interp_err) for r in rows], linestyle="--", label="interp_err")
    ax.plot(x, [_log10(r.bw_bound) for r in rows], linestyle=":", label="bw_bound")
    ax.set_xlabel(f"lambda{S}")
    ax.set_ylabel("log10 error")
    ax.legend(fontsize="small")
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    write_atomic(path, buf.getvalue())
    return True
