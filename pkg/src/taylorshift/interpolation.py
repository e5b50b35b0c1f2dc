"""Polynomial interpolation at Leja nodes and the contour-integral cross-check.

The primary route builds the Newton form of the interpolant. For a Laurent
polynomial ``g`` its divided differences have closed forms: for ``z^m`` with
``m >= 0`` the value on ``x_0..x_j`` is the complete homogeneous symmetric
polynomial ``h_{m-j}(x_0..x_j)``; for ``z^-s`` it is
``(-1)^j h_{s-1}(1/x_0..1/x_j) / (x_0 ... x_j)``. Both are updated in
``O(deg)`` per node, so no ``O(N^2)`` table is needed. The Newton form is
then expanded into monomials.

That expansion suffers heavy cancellation (roughly ``log2 prod(M + |x_i|)``
bits), so the working precision is raised automatically from a cheap
low-precision estimate of the coefficient growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .errors import DomainError, DuplicateNodes, PoleAtNode, QuadratureUnstable, VerificationError
from .geometry import Contour, NodeSet, _unit_roots, fekete_polynomial
from .laurent import LaurentPoly, current_precision, is_exact, lp_eval, precision, to_scalar

_ESTIMATE_BITS = 128
_GUARD_BITS = 32
_VERIFY_BITS = 64


@dataclass(frozen=True)
class InterpolationResult:
    """Interpolating polynomial with its nodes and sampled residual.

    ``residual_report`` is ``sup |g - poly|`` over the node source samples
    (``None`` when not requested); ``precision`` is the working precision
    in bits used for the expansion.
    """

    poly: LaurentPoly
    nodes: object
    residual_report: object
    precision: int
    newton_coefficients: tuple = ()


def _node_values(nodes) -> list:
    if isinstance(nodes, NodeSet):
        src = nodes.source
        if src.kind == "cloud" and all(is_exact(src.vertices[i]) for i in nodes.indices):
            return [src.vertices[i] for i in nodes.indices]
        return nodes.points()
    return [to_scalar(x) for x in nodes]


def _check_nodes(pts, g: LaurentPoly) -> None:
    seen = set()
    for x in pts:
        key = complex(x)
        if key in seen:
            raise DuplicateNodes(f"node {x} appears more than once")
        seen.add(key)
    if not g.is_zero() and g.order < 0 and 0 in seen:
        raise PoleAtNode("g has a pole at the node 0")


def divided_differences(pts: list, g: LaurentPoly) -> list:
    """Newton coefficients ``g[x_0], g[x_0, x_1], ...`` via the closed forms."""
    n = len(pts)
    exact = all(is_exact(x) for x in pts) and g.is_exact()
    pos = [(m, c) for m, c in g if m >= 0]
    neg = [(-m, c) for m, c in g if m < 0]
    rp = max((m for m, _ in pos), default=-1)
    rn = max((s for s, _ in neg), default=0) - 1
    hp = [1] + [0] * max(rp, 0)
    hn = [1] + [0] * max(rn, 0)
    # int / mpz would round to mpfr, so exact products start as mpq
    prod = gmpy2.mpq(1) if exact else 1
    out = []
    for j, x in enumerate(pts):
        a = 0
        if j <= rp:
            for r in range(1, rp - j + 1):
                hp[r] = hp[r] + x * hp[r - 1]
            for m, c in pos:
                if m >= j:
                    a = a + c * hp[m - j]
        if neg:
            y = gmpy2.mpq(1) / x if exact else 1 / x
            for r in range(1, rn + 1):
                hn[r] = hn[r] + y * hn[r - 1]
            prod = prod * x
            acc = 0
            for s, c in neg:
                acc = acc + c * hn[s - 1]
            a = a + (acc if j % 2 == 0 else -acc) / prod
        out.append(a)
    return out


def divided_difference_table(pts: list, values: list) -> list:
    """Classical ``O(N^2)`` divided-difference table; reference for tests."""
    col = list(values)
    out = [col[0]]
    for level in range(1, len(pts)):
        col = [(col[i + 1] - col[i]) / (pts[i + level] - pts[i]) for i in range(len(col) - 1)]
        out.append(col[0])
    return out


def newton_to_monomial(pts: list, coeffs: list) -> list:
    """Expand ``sum a_j prod_{i<j} (z - x_i)`` into dense monomial coefficients."""
    acc = [coeffs[-1]]
    for j in range(len(coeffs) - 2, -1, -1):
        x = pts[j]
        nxt = [coeffs[j] - acc[0] * x]
        nxt.extend([p - c * x for p, c in zip(acc, acc[1:])])
        nxt.append(acc[-1])
        acc = nxt
    return acc


def _log2_abs(x) -> float:
    if x == 0:
        return -math.inf
    return float(gmpy2.log2(abs(mpc(x))))


def expansion_growth_bits(pts: list, coeffs: list, radius) -> float:
    """``log2 max_k |a_k| prod_{i<k} (radius + |x_i|)``: cancellation in the expansion."""
    best = -math.inf
    acc = 0.0
    radius = float(radius)
    for a, x in zip(coeffs, pts):
        best = max(best, _log2_abs(a) + acc)
        acc += math.log2(radius + abs(complex(x)))
    return best


def suggest_precision(pts: list, g: LaurentPoly, radius=None, extra_bits: float = 0, bits: int | None = None) -> int:
    """Working precision for expanding the interpolant of ``g`` at ``pts``.

    The Newton coefficients are computed once at low precision to measure
    the coefficient growth; ``extra_bits`` covers any further resolution
    the caller needs.
    """
    bits = current_precision() if bits is None else bits
    with precision(_ESTIMATE_BITS):
        lo = [mpc(x) for x in pts]
        coeffs = divided_differences(lo, g)
        if radius is None:
            radius = max(abs(complex(x)) for x in pts)
        growth = expansion_growth_bits(lo, coeffs, radius)
    growth = max(growth, 0.0) + math.log2(len(pts) + 1)
    return int(bits + math.ceil(growth + extra_bits) + _GUARD_BITS)


def _residual(g: LaurentPoly, poly: LaurentPoly, pts) -> object:
    return max(abs(lp_eval(g, z) - lp_eval(poly, z)) for z in pts)


def _node_check(g: LaurentPoly, poly: LaurentPoly, pts: list, bits: int) -> None:
    stride = 1 if len(pts) <= 256 else max(1, len(pts) // 64)
    tol = mpfr(2) ** (-(bits // 2))
    for x in pts[::stride]:
        gx = lp_eval(g, x)
        err = lp_eval(poly, x) - gx
        if is_exact(err):
            if err != 0:
                raise VerificationError(f"interpolant misses g at node {x} in exact mode")
        elif abs(err) > tol * max(1, abs(gx)):
            raise VerificationError(f"interpolant misses g at node {x} by {abs(err)}")


def newton_interpolant(
    nodes,
    g: LaurentPoly,
    *,
    working_precision: int | None = None,
    radius=None,
    extra_bits: float = 0,
    residual: bool = True,
    check: bool = True,
) -> InterpolationResult:
    """Interpolating polynomial of ``g`` at ``nodes`` (degree at most ``len(nodes) - 1``).

    ``nodes`` is a :class:`NodeSet` or a sequence of points taken in the
    given order. With exact nodes and exact ``g`` the result is exact.
    Otherwise coefficients are computed at ``working_precision`` bits
    (estimated by :func:`suggest_precision` when omitted) and returned at
    that precision.
    """
    pts = _node_values(nodes)
    if not pts:
        raise DomainError("interpolation needs at least one node")
    _check_nodes(pts, g)
    bits = current_precision()
    exact = all(is_exact(x) for x in pts) and g.is_exact()
    if exact:
        work = bits
    elif working_precision is None:
        work = suggest_precision(pts, g, radius=radius, extra_bits=extra_bits)
    else:
        work = working_precision
    with precision(work):
        if not exact:
            pts = _node_values(nodes)
            pts = [x if isinstance(x, type(mpc(0))) else mpc(x) for x in pts]
        coeffs = divided_differences(pts, g)
        poly = LaurentPoly.from_dense(newton_to_monomial(pts, coeffs))
        if check:
            _node_check(g, poly, pts, bits)
        report = None
        if residual:
            src = nodes.source.points() if isinstance(nodes, NodeSet) else pts
            report = _residual(g, poly, src)
    return InterpolationResult(poly, nodes, report, work, tuple(coeffs))


def contour_interpolant(
    g: LaurentPoly,
    contour: Contour,
    q,
    quad_points: int,
    *,
    nodes=None,
    tolerance: float = 1e-6,
    residual: bool = False,
) -> InterpolationResult:
    """Interpolant from the Cauchy-integral representation, by quadrature.

    With ``q(z) = sum c_j z^j`` the coefficient of ``z^m`` is
    ``(1/2 pi i) oint g(w) h_m(w) / q(w) dw`` where
    ``h_m(w) = sum_{j>m} c_j w^(j-1-m)``. ``q`` is either the polynomial
    itself or a :class:`NodeSet` of its roots (then ``q`` is rebuilt at
    whatever precision the quadrature needs).

    On a circle the trapezoid sums are discrete Fourier transforms: ``q``
    is moved to the centre of the circle, its values and the moments of
    ``g/q`` come from FFTs and the result is moved back. The rule uses the
    next power of two ``>= quad_points`` points; polylines use the direct
    per-edge rule with ``quad_points`` points.

    The rule is rerun with twice as many points; if any coefficient moves
    by more than ``tolerance`` (relative) :class:`QuadratureUnstable` is
    raised. The working precision is raised until a rerun 64 bits higher
    reproduces every coefficient to ``2^(-b/2)``. The residual over the
    node source samples is only computed when ``residual`` is set.
    """
    if quad_points < 64:
        raise DomainError(f"quad_points must be at least 64, got {quad_points}")
    bits = current_precision()
    if isinstance(q, NodeSet):
        if nodes is None:
            nodes = q
        n = len(q)
        with precision(_ESTIMATE_BITS):
            work = contour_precision(fekete_polynomial(q), contour, bits) + (5 * n) // 4
    else:
        if q.is_zero() or not q.is_polynomial() or q.degree < 1:
            raise DomainError("q must be a polynomial of degree at least 1")
        n = q.degree
        work = contour_precision(q, contour, bits) + (5 * n) // 4
    if contour.is_circle:
        quad_points = 1 << (quad_points - 1).bit_length()
    if quad_points <= n:
        raise DomainError(f"quad_points must exceed the degree of q ({n})")

    target = mpfr(2) ** (-(bits // 2))
    while True:
        with precision(work + _VERIFY_BITS):
            dense = _q_dense(q, bits, work + _VERIFY_BITS)
            fine_rule = _contour_rule(g, contour, dense, quad_points)
        with precision(work):
            rough = _contour_rule(g, contour, [mpc(c) for c in dense], quad_points)
        drift = _max_relative_change(rough, fine_rule, bits)
        if drift <= target:
            break
        work += max(_VERIFY_BITS, int(gmpy2.log2(drift / target)) + _GUARD_BITS)

    with precision(work + _VERIFY_BITS):
        doubled = _contour_rule(g, contour, dense, 2 * quad_points)
        change = _max_relative_change(fine_rule, doubled, bits, report=True)
        if change[0] > tolerance:
            raise QuadratureUnstable(
                f"coefficient of z^{change[1]} moved by {float(change[0]):.3e} "
                f"when doubling {quad_points} quadrature points"
            )
        poly = LaurentPoly.from_dense(fine_rule)
        report = None
        if residual and nodes is not None:
            pts = _node_values(nodes)
            src = nodes.source.points() if isinstance(nodes, NodeSet) else pts
            report = _residual(g, poly, src)
    return InterpolationResult(poly, nodes, report, work + _VERIFY_BITS)


def _q_dense(q, bits: int, work: int) -> list:
    if isinstance(q, NodeSet):
        poly = fekete_polynomial(q)
    else:
        coarse = min(
            (min(c.precision) if isinstance(c, type(mpc(0))) else c.precision for _, c in q if not is_exact(c)),
            default=None,
        )
        if coarse is not None and coarse < work - bits // 2:
            raise DomainError(
                f"q carries {coarse}-bit coefficients but the quadrature needs about {work} bits; "
                "pass the nodes instead or build q at higher precision"
            )
        poly = q
    return [poly[j] for j in range(poly.degree + 1)]


def _max_relative_change(a: list, b: list, bits: int, report: bool = False):
    top = max(abs(mpc(c)) for c in b)
    floor = top * mpfr(2) ** (-bits)
    worst, where = mpfr(0), 0
    for m, (x, y) in enumerate(zip(a, b)):
        rel = abs(x - y) / max(abs(y), floor)
        if rel > worst:
            worst, where = rel, m
    return (worst, where) if report else worst


def contour_precision(q: LaurentPoly, contour: Contour, bits: int | None = None) -> int:
    """Lower estimate of the precision :func:`contour_interpolant` works at.

    Evaluating the monomial form of ``q`` on the contour loses
    ``log2 sum |c_j| |w|^j`` bits, and dividing by ``min |q(w)|`` loses
    ``-log2 min |q|`` more. Small coefficients of the result need extra
    bits on top, which the quadrature adds adaptively.
    """
    bits = current_precision() if bits is None else bits
    reach = float(max(abs(w) for w in contour.complex_vertices()))
    with precision(_ESTIMATE_BITS):
        growth = float(gmpy2.log2(sum(abs(mpc(c)) * mpfr(reach) ** j for j, c in q)))
        floor = min(_log2_abs(lp_eval(q, mpc(w))) for w in contour.samples()[::8])
    return int(bits + math.ceil(max(growth, 0.0) + max(0.0, -floor)) + _GUARD_BITS)


def _contour_rule(g: LaurentPoly, contour: Contour, dense: list, count: int) -> list:
    if contour.is_circle:
        return _circle_rule(g, dense, to_scalar(contour.center), to_scalar(contour.radius), count)
    return _direct_rule(g, dense, contour.quadrature(count))


def _direct_rule(g: LaurentPoly, dense: list, rule) -> list:
    """``sum_l g(w_l)/q(w_l) h_m(w_l) dw_l / (2 pi i)`` for ``m = 0..n-1``."""
    n = len(dense) - 1
    dense = [mpc(c) for c in dense]
    out = [mpc(0)] * n
    two_pi_i = 2 * gmpy2.const_pi() * mpc(0, 1)
    for w, dw in rule:
        # synthetic division: h_{n-1} = c_n, h_{m-1} = w h_m + c_m, q(w) = w h_0 + c_0
        h = [None] * n
        acc = dense[n]
        for m in range(n - 1, -1, -1):
            h[m] = acc
            acc = acc * w + dense[m]
        weight = lp_eval(g, w) / acc * dw / two_pi_i
        for m in range(n):
            out[m] += weight * h[m]
    return out


def taylor_shift(coeffs: list, c) -> list:
    """Coefficients of ``p(u + c)`` from those of ``p(z)`` (repeated synthetic division)."""
    a = list(coeffs)
    n = len(a) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            a[j] = a[j] + c * a[j + 1]
    return a


def _roots_of_unity(count: int) -> list:
    bits = current_precision()
    if _ROOTS.get("bits") != bits:
        _ROOTS.clear()
        _ROOTS["bits"] = bits
    if count not in _ROOTS:
        # every smaller power of two is a subsequence of the largest table
        larger = [k for k in _ROOTS if k != "bits" and k > count and k % count == 0]
        if larger:
            big = min(larger)
            _ROOTS[count] = _ROOTS[big][:: big // count]
        else:
            _ROOTS[count] = _unit_roots(count)
    return _ROOTS[count]


_ROOTS: dict = {}


def fft(values: list, inverse: bool = False) -> list:
    """Radix-2 DFT ``X_l = sum_j x_j omega^(jl)`` with ``omega = exp(+2 pi i / n)``.

    ``inverse`` uses the conjugate root and divides by ``n``.
    """
    n = len(values)
    if n & (n - 1):
        raise DomainError(f"FFT length must be a power of two, got {n}")
    roots = _roots_of_unity(n)
    a = [mpc(v) for v in values]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    size = 2
    while size <= n:
        step = n // size
        half = size // 2
        tw = [roots[(-k * step) % n] if inverse else roots[k * step] for k in range(half)]
        for start in range(0, n, size):
            for k in range(half):
                u = a[start + k]
                v = a[start + k + half] * tw[k]
                a[start + k] = u + v
                a[start + k + half] = u - v
        size *= 2
    if inverse:
        a = [x / n for x in a]
    return a


def _convolve(x: list, y: list) -> list:
    size = len(x) + len(y) - 1
    if min(len(x), len(y)) <= 64:
        out = [mpc(0)] * size
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                out[i + j] += u * v
        return out
    length = 1 << (size - 1).bit_length()
    fx = fft(x + [0] * (length - len(x)))
    fy = fft(y + [0] * (length - len(y)))
    return fft([u * v for u, v in zip(fx, fy)], inverse=True)[:size]


def _circle_rule(g: LaurentPoly, dense: list, center, radius, count: int) -> list:
    """Trapezoid rule on ``|w - center| = radius`` with ``count`` (a power of two) points."""
    n = len(dense) - 1
    shifted = taylor_shift(dense, center)
    rho = mpfr(radius) if is_exact(radius) else radius
    scaled = [mpc(0)] * count
    power = mpfr(1)
    for j, c in enumerate(shifted):
        scaled[j] = c * power
        power *= rho
    q_vals = fft(scaled)
    roots = _roots_of_unity(count)
    c = mpc(center)
    ratio = [lp_eval(g, c + rho * u) / qv for u, qv in zip(roots, q_vals)]
    sums = fft(ratio)
    # nu_k = (1/2 pi i) oint g/q (w - center)^k dw
    nu = []
    power = rho
    for k in range(n):
        nu.append(sums[(k + 1) % count] * power / count)
        power *= rho
    rev = [mpc(shifted[n - t]) for t in range(n + 1)]
    conv = _convolve(rev, nu)
    tilde = [conv[n - 1 - m] for m in range(n)]
    return taylor_shift(tilde, -center)


# ----------------------------------------------------------------------
# Interpolation error through the Newton remainder
# ----------------------------------------------------------------------

_MAX_REMAINDER_ORDER = 256


@dataclass(frozen=True)
class ScaledValues:
    """Complex values ``mant * 2**exp`` with float mantissas and integer exponents.

    Used for quantities that leave the double range, such as interpolation
    errors of size ``1e-500``.
    """

    mant: np.ndarray
    exp: np.ndarray

    def abs_mpfr(self) -> list:
        return [_scaled_abs(m, e) for m, e in zip(self.mant, self.exp)]

    def to_mpc(self) -> list:
        return [_scaled_mpc(m, e) for m, e in zip(self.mant, self.exp)]


def _scaled_abs(m, e) -> mpfr:
    a = abs(complex(m))
    return mpfr(0) if a == 0 else gmpy2.mul_2exp(mpfr(a), int(e))


def _scaled_mpc(m, e) -> mpc:
    m = complex(m)
    return mpc(gmpy2.mul_2exp(mpfr(m.real), int(e)), gmpy2.mul_2exp(mpfr(m.imag), int(e)))


def _normalize_rows(values: np.ndarray, exps: np.ndarray) -> None:
    """Scale each row (or entry, for 1-d input) by a power of two into [0.5, 1)."""
    top = np.abs(values) if values.ndim == 1 else np.max(np.abs(values), axis=-1)
    _, shift = np.frexp(top)
    scale = np.ldexp(1.0, -shift)
    values *= scale if values.ndim == 1 else scale[:, None]
    exps += shift


def remainder_taylor_coefficients(nodes, g: LaurentPoly, samples, orders) -> dict:
    """Taylor coefficients at each sample of the interpolation error ``e = g - p``.

    ``p`` interpolates ``g`` at ``nodes`` (``N`` points). The Newton remainder
    gives ``e(z) = g[x_0, ..., x_{N-1}, z] * omega(z)`` with the nodal
    polynomial ``omega``. The ``L``-th Taylor coefficient at ``zeta`` is
    ``sum_i G_i Omega_{L-i}`` where ``G_i = g[x_0..x_{N-1}, zeta (i+1 times)]``
    and ``Omega_j`` are the Taylor coefficients of ``omega`` at ``zeta``.
    Nothing here subtracts nearly equal numbers, so double precision
    mantissas with separate exponents resolve errors of any size.

    ``g`` may only contain negative powers and powers below ``N`` (the latter
    are interpolated exactly). Returns ``{L: ScaledValues}``.
    """
    x = nodes.complex_points() if isinstance(nodes, NodeSet) else np.asarray([complex(v) for v in nodes])
    n = len(x)
    zeta = np.asarray(samples, dtype=complex).ravel()
    orders = sorted(set(int(L) for L in orders))
    if not orders or orders[0] < 0:
        raise DomainError("orders must be nonnegative")
    top = orders[-1]
    if top > _MAX_REMAINDER_ORDER:
        raise DomainError(f"derivative order {top} exceeds {_MAX_REMAINDER_ORDER}")
    if any(m >= n for m, _ in g):
        raise DomainError("g has a power of z at or above the node count")
    if np.any(x == 0):
        raise PoleAtNode("g has a pole at the node 0")
    neg = [(-m, complex(c)) for m, c in g if m < 0]
    depth = max((s for s, _ in neg), default=1)

    # h_r(1/x_0, ..., 1/x_{N-1}) for r < depth
    H = np.zeros(depth, dtype=complex)
    H[0] = 1
    for w in 1 / x:
        for r in range(1, depth):
            H[r] += w * H[r - 1]
    # prod x_i as mantissa * 2**exponent
    pm, pe = 1 + 0j, 0
    for v in x:
        pm *= v
        _, shift = math.frexp(abs(pm))
        pm = math.ldexp(1.0, -shift) * pm
        pe += shift

    # W_i = (-1)^i A_i zeta^-(i+1), A_i = sum_s b_s sum_t H_{s-1-t} C(i+t, t) zeta^-t
    inv = 1 / zeta
    A = np.zeros((len(zeta), top + 1), dtype=complex)
    for i in range(top + 1):
        col = np.zeros(len(zeta), dtype=complex)
        for s, b in neg:
            acc = np.zeros(len(zeta), dtype=complex)
            for t in range(s - 1, -1, -1):
                acc = acc * inv + H[s - 1 - t] * math.comb(i + t, t)
            col += b * acc
        A[:, i] = col * (-1) ** i * inv ** (i + 1)

    # Taylor coefficients of omega at zeta, truncated at order ``top``
    E = np.zeros((len(zeta), top + 1), dtype=complex)
    E[:, 0] = 1
    ee = np.zeros(len(zeta), dtype=np.int64)
    for v in x:
        c = (zeta - v)[:, None]
        nxt = E * c
        nxt[:, 1:] += E[:, :-1]
        E = nxt
        _normalize_rows(E, ee)

    sign = -1 if n % 2 else 1
    out = {}
    for L in orders:
        total = np.einsum("ij,ij->i", A[:, : L + 1], E[:, L::-1]) * (sign / pm)
        exps = ee - pe
        mant = total.copy()
        _normalize_rows(mant, exps)
        out[L] = ScaledValues(mant, exps)
    return out


def _log_positive(name: str, x) -> mpfr:
    x = mpfr(x) if not isinstance(x, type(mpfr(0))) else x
    if not x > 0:
        raise DomainError(f"{name} must be positive, got {x}")
    return gmpy2.log(x)


def _log_theta(theta) -> mpfr:
    t = mpfr(theta)
    if not 0 < t < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    return gmpy2.log(t)


def bw_error_bound(M, length, norm_R, min_abs_w, d, theta, lam2: int) -> mpfr:
    """``M l/(2 pi) ||R||_Gamma / (min|w| d) theta^lam2``, evaluated in log space."""
    if lam2 < 0:
        raise DomainError(f"lambda must be nonnegative, got {lam2}")
    with precision(max(current_precision(), 64)):
        log = (
            _log_positive("M", M)
            + _log_positive("length", length)
            - gmpy2.log(2 * gmpy2.const_pi())
            + _log_positive("norm_R", norm_R)
            - _log_positive("min_abs_w", min_abs_w)
            - _log_positive("d", d)
            + lam2 * _log_theta(theta)
        )
        return gmpy2.exp(log)


def bw_derivative_bound(M, length, norm_R, min_abs_w, d, theta, lam1: int, lam2: int) -> mpfr:
    """Bound on ``||T~_lam1(z (g - p))||_K``: ``l/(2 pi d) ||R||/(min|w| d^lam1) theta^lam2 M^(lam1+1)``."""
    if lam1 < 0 or lam2 < 0:
        raise DomainError("lambda values must be nonnegative")
    with precision(max(current_precision(), 64)):
        log_d = _log_positive("d", d)
        log = (
            _log_positive("length", length)
            - gmpy2.log(2 * gmpy2.const_pi())
            - log_d
            + _log_positive("norm_R", norm_R)
            - _log_positive("min_abs_w", min_abs_w)
            - lam1 * log_d
            + lam2 * _log_theta(theta)
            + (lam1 + 1) * _log_positive("M", M)
        )
        return gmpy2.exp(log)
