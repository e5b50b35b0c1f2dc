"""Planar geometry: the domain G, the compact set K and the contour Gamma.

Geometry checks (containment, winding numbers, distances, Leja selection)
run in double precision on NumPy arrays. Points that feed high-precision
arithmetic are regenerated from the exact shape parameters at the active
gmpy2 precision by :meth:`CompactSetSpec.points` and :meth:`Contour.points`.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import gmpy2
import mpmath
from mpmath.calculus.quadrature import GaussLegendre
import numpy as np
from gmpy2 import mpc, mpfr, mpq

from .errors import DegenerateSet, GeometryInvalid, InsufficientSamples, OnContour
from .laurent import LaurentPoly, current_precision, is_exact, parse_complex, to_scalar

DEFAULT_SAMPLES = 512
# points spread along a polyline contour for minima and sup-norms over Gamma
CONTOUR_SAMPLES = 2048
_TIE_TOL = 1e-9


def _c(x) -> complex:
    return complex(x)


def _hp(x) -> mpc:
    """High-precision copy of a shape parameter."""
    return mpc(to_scalar(x)) if not isinstance(x, complex) else mpc(x.real, x.imag)


def _unit_roots(count: int, offset=0):
    """``exp(2 pi i (k + offset) / count)`` at the active precision."""
    two_pi = 2 * gmpy2.const_pi()
    out = []
    for k in range(count):
        t = two_pi * (k + offset) / count
        out.append(mpc(gmpy2.cos(t), gmpy2.sin(t)))
    return out


def _point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from points ``p[:, None]`` to segments ``[a, b][None, :]``."""
    d = b - a
    dd = np.abs(d) ** 2
    dd = np.where(dd == 0, 1.0, dd)
    t = ((p[:, None] - a[None, :]) * np.conj(d)[None, :]).real / dd[None, :]
    t = np.clip(t, 0.0, 1.0)
    return np.abs(p[:, None] - (a[None, :] + t * d[None, :]))


def _inside_polygon(z: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Even-odd ray crossing test for points ``z`` against a closed polygon."""
    x, y = z.real[:, None], z.imag[:, None]
    v0 = verts
    v1 = np.roll(verts, -1)
    x0, y0, x1, y1 = v0.real[None, :], v0.imag[None, :], v1.real[None, :], v1.imag[None, :]
    cond = (y0 > y) != (y1 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    return np.count_nonzero(cond & (x < xint), axis=1) % 2 == 1


def _gauss_legendre(level: int):
    """Gauss-Legendre rule with ``3 * 2^(level-1)`` nodes on [-1, 1] at the active precision.

    Rules are cached at the highest precision requested so far and rounded
    down on reuse.
    """
    bits = current_precision()
    cached = _GL_CACHE.get(level)
    if cached is None or cached[0] < bits:
        rule = GaussLegendre(mpmath.mp).calc_nodes(level, bits + 64)
        with gmpy2.context(gmpy2.get_context(), precision=bits + 64):
            cached = (bits + 64, [_from_mpmath(x) for x, _ in rule], [_from_mpmath(w) for _, w in rule])
        _GL_CACHE[level] = cached
    return [mpfr(x) for x in cached[1]], [mpfr(w) for w in cached[2]]


_GL_CACHE: dict = {}


def _from_mpmath(x) -> mpfr:
    sign, man, exp, _ = x._mpf_
    value = mpfr(int(man)) * gmpy2.exp2(exp)
    return -value if sign else value


# ----------------------------------------------------------------------
# Domain G
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DomainSpec:
    """Open simply connected domain: a disk, a half-plane or a polygon interior.

    The half-plane is ``{z : Re(conj(normal) z) > offset}``.
    """

    kind: str
    center: object = None
    radius: object = None
    normal: object = None
    offset: object = None
    vertices: tuple = ()

    def __post_init__(self):
        if self.kind not in ("disk", "half-plane", "polygon"):
            raise GeometryInvalid(f"unknown domain kind {self.kind!r}")
        if self.kind == "disk" and not float(self.radius) > 0:
            raise GeometryInvalid("disk radius must be positive")
        if self.kind == "half-plane" and _c(self.normal) == 0:
            raise GeometryInvalid("half-plane normal must be nonzero")
        if self.kind == "polygon" and len(self.vertices) < 3:
            raise GeometryInvalid("polygon needs at least three vertices")
        if self.contains(0):
            raise GeometryInvalid("the domain must not contain 0")

    @classmethod
    def disk(cls, center, radius) -> "DomainSpec":
        return cls("disk", center=to_scalar(center), radius=to_scalar(radius))

    @classmethod
    def half_plane(cls, normal, offset) -> "DomainSpec":
        return cls("half-plane", normal=to_scalar(normal), offset=to_scalar(offset))

    @classmethod
    def polygon(cls, vertices: Sequence) -> "DomainSpec":
        return cls("polygon", vertices=tuple(to_scalar(v) for v in vertices))

    def contains_many(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).ravel()
        if self.kind == "disk":
            return np.abs(z - _c(self.center)) < float(self.radius)
        if self.kind == "half-plane":
            return (np.conj(_c(self.normal)) * z).real > float(self.offset)
        verts = np.array([_c(v) for v in self.vertices])
        on_edge = _point_segment_distance(z, verts, np.roll(verts, -1)).min(axis=1) < 1e-12
        return _inside_polygon(z, verts) & ~on_edge

    def contains(self, z) -> bool:
        return bool(self.contains_many([_c(z)])[0])

    def complement_samples(self, count: int = 64) -> np.ndarray:
        """Points of C \\ G used to check that Gamma does not wind around them."""
        pts = [0j]
        t = np.exp(2j * np.pi * np.arange(count) / count)
        if self.kind == "disk":
            c, r = _c(self.center), float(self.radius)
            pts.extend(c + 1.05 * r * t)
            pts.extend(c + 3.0 * r * t)
        elif self.kind == "half-plane":
            nrm = _c(self.normal) / abs(_c(self.normal))
            base = nrm * float(self.offset) / abs(_c(self.normal))
            along = 1j * nrm
            s = np.linspace(-10, 10, count)
            pts.extend(base - 0.05 * nrm + s * along)
            pts.extend(base - 2.0 * nrm + s * along)
        else:
            verts = np.array([_c(v) for v in self.vertices])
            centroid = verts.mean()
            scale = np.abs(verts - centroid).max()
            pts.extend(centroid + 1.05 * (verts - centroid))
            mids = (verts + np.roll(verts, -1)) / 2
            pts.extend(centroid + 1.05 * (mids - centroid))
            pts.extend(centroid + 3 * scale * t)
        z = np.array(pts)
        return z[~self.contains_many(z)]


# ----------------------------------------------------------------------
# Compact set K
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CompactSetSpec:
    """Compact set described by its boundary samples.

    Kinds: ``disk`` (closed disk, sampled on its circle), ``segment``,
    ``polygon`` (closed polygon, sampled along its perimeter) and ``cloud``
    (an explicit finite point set).
    """

    kind: str
    center: object = None
    radius: object = None
    start: object = None
    end: object = None
    vertices: tuple = ()
    sample_count: int = DEFAULT_SAMPLES
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.kind not in ("disk", "segment", "polygon", "cloud"):
            raise GeometryInvalid(f"unknown compact-set kind {self.kind!r}")
        if self.kind == "cloud":
            object.__setattr__(self, "sample_count", len(self.vertices))
        if self.sample_count < 1:
            raise GeometryInvalid("a compact set needs at least one sample")
        if self.kind == "disk" and not float(self.radius) >= 0:
            raise GeometryInvalid("disk radius must be nonnegative")
        if self.kind == "polygon" and len(self.vertices) < 3:
            raise GeometryInvalid("polygon needs at least three vertices")

    @classmethod
    def disk(cls, center, radius, samples: int = DEFAULT_SAMPLES) -> "CompactSetSpec":
        return cls("disk", center=to_scalar(center), radius=to_scalar(radius), sample_count=samples)

    @classmethod
    def segment(cls, start, end, samples: int = DEFAULT_SAMPLES) -> "CompactSetSpec":
        return cls("segment", start=to_scalar(start), end=to_scalar(end), sample_count=samples)

    @classmethod
    def polygon(cls, vertices: Sequence, samples: int = DEFAULT_SAMPLES) -> "CompactSetSpec":
        return cls("polygon", vertices=tuple(to_scalar(v) for v in vertices), sample_count=samples)

    @classmethod
    def cloud(cls, points: Sequence) -> "CompactSetSpec":
        return cls("cloud", vertices=tuple(to_scalar(p) for p in points))

    def refine(self, count: int) -> "CompactSetSpec":
        """Same set with at least ``count`` boundary samples."""
        if count <= self.sample_count:
            return self
        if self.kind == "cloud":
            raise InsufficientSamples(f"point cloud has {self.sample_count} points, {count} requested")
        return CompactSetSpec(
            self.kind, self.center, self.radius, self.start, self.end, self.vertices, count
        )

    def _polygon_params(self):
        """Perimeter positions of the samples: ``(edge index, fraction)`` pairs."""
        if "params" in self._cache:
            return self._cache["params"]
        verts = [_c(v) for v in self.vertices]
        lengths = [abs(verts[(i + 1) % len(verts)] - verts[i]) for i in range(len(verts))]
        total = sum(lengths)
        out = []
        edge, acc = 0, 0.0
        for k in range(self.sample_count):
            s = total * k / self.sample_count
            while s >= acc + lengths[edge] and edge < len(verts) - 1:
                acc += lengths[edge]
                edge += 1
            out.append((edge, (s - acc) / lengths[edge]))
        self._cache["params"] = out
        return out

    def complex_samples(self) -> np.ndarray:
        key = "complex"
        if key not in self._cache:
            n = self.sample_count
            if self.kind == "disk":
                z = _c(self.center) + float(self.radius) * np.exp(2j * np.pi * np.arange(n) / n)
            elif self.kind == "segment":
                t = np.linspace(0.0, 1.0, n) if n > 1 else np.array([0.5])
                z = _c(self.start) + t * (_c(self.end) - _c(self.start))
            elif self.kind == "polygon":
                verts = [_c(v) for v in self.vertices]
                z = np.array(
                    [verts[e] + f * (verts[(e + 1) % len(verts)] - verts[e]) for e, f in self._polygon_params()]
                )
            else:
                z = np.array([_c(v) for v in self.vertices])
            self._cache[key] = z
        return self._cache[key]

    def _point(self, k: int):
        n = self.sample_count
        if self.kind == "disk":
            t = 2 * gmpy2.const_pi() * k / n
            return _hp(self.center) + mpfr(to_scalar(self.radius)) * mpc(gmpy2.cos(t), gmpy2.sin(t))
        if self.kind == "segment":
            a, b = _hp(self.start), _hp(self.end)
            return a + (b - a) * (mpfr(k) / (n - 1)) if n > 1 else (a + b) / 2
        if self.kind == "polygon":
            e, f = self._polygon_params()[k]
            verts = self.vertices
            a, b = _hp(verts[e]), _hp(verts[(e + 1) % len(verts)])
            return a + mpfr(f) * (b - a)
        return _hp(self.vertices[k])

    def points(self, indices=None) -> list:
        """Boundary samples (all, or those at ``indices``) as ``mpc`` at the active precision."""
        key = ("mpc", current_precision())
        cache = self._cache.setdefault(key, {})
        if indices is None:
            indices = range(self.sample_count)
        out = []
        for k in indices:
            if k not in cache:
                cache[k] = self._point(k)
            out.append(cache[k])
        return out

    def contains_many(self, z, tol: float = 1e-12) -> np.ndarray:
        z = np.asarray(z, dtype=complex).ravel()
        if self.kind == "disk":
            return np.abs(z - _c(self.center)) <= float(self.radius) * (1 + tol) + tol
        if self.kind == "segment":
            a, b = np.array([_c(self.start)]), np.array([_c(self.end)])
            return _point_segment_distance(z, a, b)[:, 0] <= tol
        if self.kind == "polygon":
            verts = np.array([_c(v) for v in self.vertices])
            on_edge = _point_segment_distance(z, verts, np.roll(verts, -1)).min(axis=1) <= tol
            return _inside_polygon(z, verts) | on_edge
        pts = self.complex_samples()
        return np.abs(z[:, None] - pts[None, :]).min(axis=1) <= tol

    @property
    def min_modulus(self) -> float:
        """``m = min |z|`` over the samples."""
        return float(np.min(np.abs(self.complex_samples())))

    @property
    def max_modulus(self) -> float:
        """``M = max |z|`` over the samples."""
        return float(np.max(np.abs(self.complex_samples())))

    def is_degenerate(self) -> bool:
        z = self.complex_samples()
        return bool(np.all(np.abs(z - z[0]) == 0))

    def validate_in(self, domain: DomainSpec) -> None:
        """Every sample must lie in ``domain`` (which excludes 0, so ``m > 0``)."""
        inside = domain.contains_many(self.complex_samples())
        if not inside.all():
            bad = self.complex_samples()[~inside][0]
            raise GeometryInvalid(f"compact-set sample {bad} lies outside the domain")


# ----------------------------------------------------------------------
# Contour Gamma
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Contour:
    """Closed counterclockwise polyline; circles also keep their exact parametrization."""

    vertices: tuple
    center: object = None
    radius: object = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise GeometryInvalid("a contour needs at least three vertices")
        v = self.complex_vertices()
        signed_area = 0.5 * np.sum((np.conj(v) * np.roll(v, -1)).imag)
        if signed_area <= 0:
            raise GeometryInvalid("contour must be oriented counterclockwise")

    @classmethod
    def circle(cls, center, radius, count: int = DEFAULT_SAMPLES) -> "Contour":
        c, r = to_scalar(center), to_scalar(radius)
        verts = tuple(complex(_c(c) + float(r) * np.exp(2j * np.pi * k / count)) for k in range(count))
        return cls(verts, center=c, radius=r)

    @classmethod
    def polygon(cls, vertices: Sequence) -> "Contour":
        return cls(tuple(to_scalar(v) for v in vertices))

    @property
    def is_circle(self) -> bool:
        return self.radius is not None

    def complex_vertices(self) -> np.ndarray:
        if "complex" not in self._cache:
            self._cache["complex"] = np.array([_c(v) for v in self.vertices])
        return self._cache["complex"]

    def points(self) -> list:
        """Vertices at the active precision (exact circle points for circles)."""
        key = ("mpc", current_precision())
        if key not in self._cache:
            if self.is_circle:
                c, r = _hp(self.center), mpfr(to_scalar(self.radius))
                self._cache[key] = [c + r * u for u in _unit_roots(len(self.vertices))]
            else:
                self._cache[key] = [_hp(v) for v in self.vertices]
        return self._cache[key]

    def _edge_params(self, count: int) -> list:
        """Per edge: start index and the fractions ``t`` placed along it."""
        v = self.complex_vertices()
        lens = np.abs(np.roll(v, -1) - v)
        per = np.maximum(1, np.ceil(count * lens / lens.sum())).astype(int)
        return [(i, [mpq(j, int(m)) for j in range(int(m))]) for i, m in enumerate(per)]

    def samples(self, count: int = CONTOUR_SAMPLES) -> np.ndarray:
        """Points along Gamma for minima and sup-norms.

        Circles return their vertices; polylines add about ``count``
        points spread over the edges by length, vertices included.
        """
        if self.is_circle:
            return self.complex_vertices()
        key = ("samples", count)
        if key not in self._cache:
            v = self.complex_vertices()
            nxt = np.roll(v, -1)
            self._cache[key] = np.array(
                [v[i] + float(t) * (nxt[i] - v[i]) for i, ts in self._edge_params(count) for t in ts]
            )
        return self._cache[key]

    def sample_points(self, count: int = CONTOUR_SAMPLES) -> list:
        """:meth:`samples` at the active precision."""
        if self.is_circle:
            return self.points()
        key = ("sample-mpc", count, current_precision())
        if key not in self._cache:
            verts = self.points()
            out = []
            for i, ts in self._edge_params(count):
                a, b = verts[i], verts[(i + 1) % len(verts)]
                out.extend(a + mpfr(t) * (b - a) for t in ts)
            self._cache[key] = out
        return self._cache[key]

    @property
    def length(self) -> float:
        v = self.complex_vertices()
        return float(np.sum(np.abs(np.roll(v, -1) - v)))

    @property
    def min_modulus(self) -> float:
        """``min |w|`` over Gamma (exact on the polyline edges)."""
        v = self.complex_vertices()
        return float(_point_segment_distance(np.array([0j]), v, np.roll(v, -1)).min())

    def distance_to(self, pts) -> float:
        v = self.complex_vertices()
        return float(_point_segment_distance(np.asarray(pts, dtype=complex), v, np.roll(v, -1)).min())

    def winding_numbers(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).ravel()
        v = self.complex_vertices()
        scale = max(1.0, float(np.abs(v).max()))
        dist = _point_segment_distance(z, v, np.roll(v, -1)).min(axis=1)
        if np.any(dist <= 1e-12 * scale):
            raise OnContour(f"point {z[np.argmin(dist)]} lies on the contour")
        a = v[None, :] - z[:, None]
        b = np.roll(v, -1)[None, :] - z[:, None]
        total = np.angle(b / a).sum(axis=1)
        return np.rint(total / (2 * np.pi)).astype(int)

    def quadrature(self, count: int) -> list[tuple[mpc, mpc]]:
        """Nodes and weights ``(w_l, dw_l)`` with ``sum f(w_l) dw_l ~ contour integral``.

        Circles use the periodic trapezoid rule in the angle. Polylines use
        Gauss-Legendre on each edge with ``3 * 2^k`` nodes, the smallest
        such count covering the edge's length share of ``count``; doubling
        ``count`` doubles every edge rule.
        """
        if self.is_circle:
            c, r = _hp(self.center), mpfr(to_scalar(self.radius))
            h = 2 * gmpy2.const_pi() / count
            out = []
            for u in _unit_roots(count):
                out.append((c + r * u, mpc(0, 1) * r * u * h))
            return out
        verts = self.points()
        lens = np.abs(np.roll(self.complex_vertices(), -1) - self.complex_vertices())
        share = count * lens / lens.sum()
        out = []
        for i, a in enumerate(verts):
            b = verts[(i + 1) % len(verts)]
            half = (b - a) / 2
            level = max(1, math.ceil(math.log2(max(share[i], 3) / 3)) + 1)
            for x, wt in zip(*_gauss_legendre(level)):
                out.append((a + half * (x + 1), half * wt))
        return out

    def validate(self, domain: DomainSpec, compact: CompactSetSpec) -> None:
        """Check the winding, containment and separation invariants."""
        ks = compact.complex_samples()
        if not np.all(self.winding_numbers(ks) == 1):
            raise GeometryInvalid("contour must wind once around every sample of K")
        outside = domain.complement_samples()
        if np.any(self.winding_numbers(outside) != 0):
            raise GeometryInvalid("contour must not wind around 0 or points outside G")
        v = self.samples()
        if not domain.contains_many(v).all():
            raise GeometryInvalid("contour must lie in G")
        if compact.contains_many(v).any():
            raise GeometryInvalid("contour must lie outside K")
        if self.distance_to(ks) <= 0:
            raise GeometryInvalid("contour touches K")


def winding_number(contour: Contour, z) -> int:
    """Integer winding number of ``contour`` around ``z``; raises :class:`OnContour`."""
    return int(contour.winding_numbers([_c(z)])[0])


# ----------------------------------------------------------------------
# Leja / Fekete nodes
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class NodeSet:
    """Leja-ordered nodes, stored as indices into the boundary samples of ``source``."""

    indices: tuple
    source: CompactSetSpec

    def __len__(self) -> int:
        return len(self.indices)

    def points(self) -> list:
        return self.source.points(self.indices)

    def complex_points(self) -> np.ndarray:
        return self.source.complex_samples()[list(self.indices)]

    def prefix(self, count: int) -> "NodeSet":
        return NodeSet(self.indices[:count], self.source)


def _first_max(values: np.ndarray) -> int:
    """Index of the maximum, ties (within tolerance) resolved to the smallest index."""
    top = np.max(values)
    if not np.isfinite(top):
        return int(np.argmax(values))
    return int(np.flatnonzero(values >= top - _TIE_TOL * max(1.0, abs(top)))[0])


def leja_points(K: CompactSetSpec, count: int) -> NodeSet:
    """Greedy Leja sequence over the boundary samples of ``K``.

    The first node is the sample farthest from the centroid; node ``j``
    maximizes the product of distances to the earlier nodes.
    """
    if count < 1:
        raise InsufficientSamples("at least one node is required")
    if count > K.sample_count:
        raise InsufficientSamples(f"{count} nodes requested from {K.sample_count} samples")
    z = K.complex_samples()
    first = _first_max(np.abs(z - z.mean()))
    chosen = [first]
    logp = np.zeros(len(z))
    used = np.zeros(len(z), dtype=bool)
    used[first] = True
    for _ in range(1, count):
        with np.errstate(divide="ignore"):
            logp += np.log(np.abs(z - z[chosen[-1]]))
        scores = np.where(used, -np.inf, logp)
        k = _first_max(scores)
        if not np.isfinite(scores[k]):
            raise InsufficientSamples(f"only {len(chosen)} distinct samples available")
        chosen.append(k)
        used[k] = True
    return NodeSet(tuple(chosen), K)


def fekete_polynomial(nodes) -> LaurentPoly:
    """Monic nodal polynomial ``prod (z - z_i)`` in expanded form."""
    pts = nodes.points() if isinstance(nodes, NodeSet) else [to_scalar(x) for x in nodes]
    if not pts:
        raise InsufficientSamples("fekete_polynomial needs at least one node")
    coeffs = [1]
    for x in pts:
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= c * x
        coeffs = nxt
    return LaurentPoly.from_dense(coeffs)


def log_abs_nodal(nodes: NodeSet, z) -> np.ndarray:
    """``log |q(z)|`` for the nodal polynomial of ``nodes``, as a sum of logs."""
    x = nodes.complex_points()
    z = np.asarray(z, dtype=complex).ravel()
    with np.errstate(divide="ignore"):
        return np.log(np.abs(z[:, None] - x[None, :])).sum(axis=1)


@dataclass(frozen=True)
class ThetaEstimate:
    """Measured ``(||q_n||_K / min_Gamma |q_n|)^(1/n)`` with its raw log-ratio."""

    theta: float
    log_ratio: float
    n: int

    @property
    def ratio(self) -> mpfr:
        return gmpy2.exp(mpfr(self.log_ratio))


def theta_estimate(K: CompactSetSpec, contour: Contour, n: int, nodes: NodeSet | None = None) -> ThetaEstimate:
    """Decay ratio of the nodal polynomial of ``n`` Leja nodes between K and Gamma."""
    if K.is_degenerate():
        raise DegenerateSet("theta is undefined for a single-point compact set")
    if nodes is None:
        nodes = leja_points(K, n)
    elif len(nodes) != n:
        raise ValueError(f"expected {n} nodes, got {len(nodes)}")
    top = float(np.max(log_abs_nodal(nodes, K.complex_samples())))
    bottom = float(np.min(log_abs_nodal(nodes, contour.samples())))
    log_ratio = top - bottom
    return ThetaEstimate(math.exp(log_ratio / n), log_ratio, n)


# ----------------------------------------------------------------------
# Presets
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Geometry:
    """Validated triple ``(G, K, Gamma)``."""

    domain: DomainSpec
    compact: CompactSetSpec
    contour: Contour
    name: str = ""

    def __post_init__(self):
        self.compact.validate_in(self.domain)
        self.contour.validate(self.domain, self.compact)

    @property
    def separation(self) -> float:
        """``d = d(Gamma, K)`` over the samples of K."""
        return self.contour.distance_to(self.compact.complex_samples())


def _complex_list(text: str) -> list:
    return [parse_complex(t) for t in text.split(",") if t.strip()]


def geometry_from_section(section, name: str = "") -> Geometry:
    """Build a :class:`Geometry` from a key/value mapping (one preset section)."""
    get = section.get
    samples = int(get("samples", DEFAULT_SAMPLES))
    kind = get("domain", "disk")
    if kind == "disk":
        domain = DomainSpec.disk(parse_complex(get("domain_center")), parse_complex(get("domain_radius")))
    elif kind == "half-plane":
        domain = DomainSpec.half_plane(parse_complex(get("domain_normal")), parse_complex(get("domain_offset")))
    elif kind == "polygon":
        domain = DomainSpec.polygon(_complex_list(get("domain_vertices")))
    else:
        raise GeometryInvalid(f"unknown domain kind {kind!r}")

    ckind = get("compact", "disk")
    if ckind == "disk":
        compact = CompactSetSpec.disk(
            parse_complex(get("compact_center")), parse_complex(get("compact_radius")), samples
        )
    elif ckind == "segment":
        compact = CompactSetSpec.segment(parse_complex(get("compact_start")), parse_complex(get("compact_end")), samples)
    elif ckind == "polygon":
        compact = CompactSetSpec.polygon(_complex_list(get("compact_vertices")), samples)
    elif ckind == "cloud":
        compact = CompactSetSpec.cloud(_complex_list(get("compact_points")))
    else:
        raise GeometryInvalid(f"unknown compact-set kind {ckind!r}")

    contour_samples = int(get("contour_samples", samples))
    gkind = get("contour", "circle")
    if gkind == "circle":
        if get("contour_center") is not None:
            center = parse_complex(get("contour_center"))
        elif compact.center is not None:
            center = compact.center
        else:
            raise GeometryInvalid("circle contour needs contour_center")
        if get("contour_radius") is not None:
            radius = parse_complex(get("contour_radius"))
        elif domain.kind == "disk" and compact.kind == "disk" and domain.center == compact.center:
            radius = math.sqrt(float(domain.radius) * float(compact.radius))
        else:
            raise GeometryInvalid("contour_radius is required unless K and G are concentric disks")
        contour = Contour.circle(center, radius, contour_samples)
    elif gkind == "polygon":
        contour = Contour.polygon(_complex_list(get("contour_vertices")))
    else:
        raise GeometryInvalid(f"unknown contour kind {gkind!r}")
    return Geometry(domain, compact, contour, name)


def load_presets(path=None) -> dict[str, Geometry]:
    """Read geometry presets from an INI file (the shipped file by default)."""
    parser = configparser.ConfigParser()
    if path is None:
        parser.read_string(resources.files("taylorshift").joinpath("presets.ini").read_text())
    else:
        with open(path) as fh:
            parser.read_file(fh)
    return {name: geometry_from_section(parser[name], name) for name in parser.sections()}


def preset(name: str, samples: int | None = None) -> Geometry:
    """One shipped preset, optionally with a different sample count."""
    parser = configparser.ConfigParser()
    parser.read_string(resources.files("taylorshift").joinpath("presets.ini").read_text())
    if name not in parser:
        raise GeometryInvalid(f"unknown preset {name!r}; available: {', '.join(parser.sections())}")
    section = dict(parser[name])
    if samples is not None:
        section["samples"] = str(samples)
    return geometry_from_section(section, name)
