import math

import numpy as np
import pytest
from gmpy2 import mpc, mpfr

from taylorshift.errors import DegenerateSet, GeometryInvalid, InsufficientSamples, OnContour
from taylorshift.geometry import (
    CompactSetSpec,
    Contour,
    DomainSpec,
    Geometry,
    fekete_polynomial,
    leja_points,
    load_presets,
    preset,
    theta_estimate,
    winding_number,
)
from taylorshift.laurent import LaurentPoly, lp_eval

PRESETS = ["disk-default", "disk-geomean", "segment", "square"]


def ray_crossings(vertices, z):
    """Even-odd count of crossings of the horizontal ray from ``z``."""
    v = np.asarray(vertices, dtype=complex)
    inside = False
    for a, b in zip(v, np.roll(v, -1)):
        if (a.imag > z.imag) != (b.imag > z.imag):
            x = a.real + (z.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
            if x > z.real:
                inside = not inside
    return int(inside)


class TestWinding:
    def test_circle(self):
        gamma = Contour.circle(2, mpfr("0.9"), 256)
        assert winding_number(gamma, 2) == 1
        assert winding_number(gamma, 0) == 0

    def test_square_against_ray_oracle(self):
        geom = preset("square", samples=128)
        verts = geom.contour.complex_vertices()
        for z in geom.compact.complex_samples():
            assert winding_number(geom.contour, z) == 1 == ray_crossings(verts, z)
        for z in [0j, 5 + 5j, 1 + 0.5j]:
            assert winding_number(geom.contour, z) == 0 == ray_crossings(verts, z)

    def test_on_contour(self):
        gamma = Contour.polygon([0, 1, 1 + 1j, 1j])
        with pytest.raises(OnContour):
            winding_number(gamma, 0.5)

    def test_polygon_samples_cover_edges(self):
        gamma = Contour.polygon([0, 4, 4 + 1j, 1j])
        pts = gamma.samples(100)
        assert len(pts) >= 100
        # every edge is sampled, so the samples reach the point of Gamma nearest 2+0.5i
        assert np.abs(pts - (2 + 0.5j)).min() == pytest.approx(gamma.distance_to([2 + 0.5j]), abs=0.05)
        hp = gamma.sample_points(100)
        assert np.allclose(np.array([complex(z) for z in hp]), pts)

    def test_clockwise_rejected(self):
        with pytest.raises(GeometryInvalid):
            Contour.polygon([0, 1j, 1 + 1j, 1])


class TestDomain:
    def test_zero_excluded(self):
        with pytest.raises(GeometryInvalid):
            DomainSpec.disk(0, 1)
        with pytest.raises(GeometryInvalid):
            DomainSpec.half_plane(1, -1)

    def test_half_plane_membership(self):
        G = DomainSpec.half_plane(1, mpfr("0.5"))
        assert G.contains(1) and not G.contains(0.25)

    def test_compact_outside_domain(self):
        with pytest.raises(GeometryInvalid):
            Geometry(DomainSpec.disk(2, 1), CompactSetSpec.disk(2, mpfr("1.5"), 64), Contour.circle(2, mpfr("0.9"), 64))

    def test_contour_inside_compact(self):
        with pytest.raises(GeometryInvalid):
            Geometry(DomainSpec.disk(2, 1), CompactSetSpec.disk(2, mpfr("0.5"), 64), Contour.circle(2, mpfr("0.3"), 64))


class TestPresets:
    def test_all_load(self):
        assert set(PRESETS) <= set(load_presets())

    def test_disk_default(self):
        geom = preset("disk-default")
        assert geom.compact.max_modulus == pytest.approx(2.5)
        assert geom.compact.min_modulus == pytest.approx(1.5)
        assert geom.separation == pytest.approx(0.4, rel=1e-3)
        assert geom.contour.min_modulus == pytest.approx(1.1, rel=1e-4)

    def test_geomean_radius(self):
        geom = preset("disk-geomean")
        assert float(geom.contour.radius) == pytest.approx(math.sqrt(0.5))

    def test_unknown(self):
        with pytest.raises(GeometryInvalid):
            preset("nope")


class TestLeja:
    def test_segment_two(self):
        K = CompactSetSpec.segment(-1, 1, 65)
        pts = leja_points(K, 2).complex_points()
        assert sorted(pts.real) == [-1.0, 1.0]

    def test_one_node_farthest_from_centroid(self):
        K = CompactSetSpec.cloud([1, 2, 3, 10])
        assert leja_points(K, 1).complex_points()[0] == 10

    def test_distinct_boundary_samples(self):
        K = CompactSetSpec.disk(2, mpfr("0.5"), 512)
        nodes = leja_points(K, 200)
        assert len(set(nodes.indices)) == 200
        assert np.allclose(np.abs(nodes.complex_points() - 2), 0.5)

    def test_insufficient(self):
        with pytest.raises(InsufficientSamples):
            leja_points(CompactSetSpec.disk(2, mpfr("0.5"), 16), 17)

    def test_single_point_set(self):
        K = CompactSetSpec.cloud([2])
        assert leja_points(K, 1).complex_points()[0] == 2

    def test_capacity_discrete(self):
        # equispaced N-gon of radius r: the Leja order picks a 2-power subset
        # whose product grows like the discrete oracle r * j^(1/(j-1))
        K = CompactSetSpec.disk(2, mpfr("0.5"), 512)
        x = leja_points(K, 64).complex_points()
        logs = [np.log(abs(x[i] - x[j])) for i in range(64) for j in range(i)]
        mean = math.exp(sum(logs) / len(logs))
        assert mean == pytest.approx(0.5 * 64 ** (1 / 63), rel=1e-9)

    def test_capacity_within_five_percent(self):
        K = CompactSetSpec.disk(2, mpfr("0.5"), 512)
        x = leja_points(K, 64).complex_points()
        logs = [np.log(abs(x[i] - x[j])) for i in range(64) for j in range(i)]
        mean = math.exp(sum(logs) / len(logs))
        assert abs(mean - 0.5) <= 0.05 * 0.5, f"geometric mean {mean:.4f}"


class TestFekete:
    def test_examples(self):
        assert fekete_polynomial([1, -1]) == LaurentPoly({2: 1, 0: -1})
        assert fekete_polynomial([0]) == LaurentPoly({1: 1})

    def test_disk_sup(self):
        K = CompactSetSpec.disk(2, mpfr("0.5"), 512)
        nodes = leja_points(K, 64)
        q = fekete_polynomial(nodes)
        sup = max(abs(lp_eval(q, z)) for z in K.refine(2048).points())
        oracle = 2 * mpfr("0.5") ** 64
        assert oracle / 3 <= sup <= 3 * oracle


class TestTheta:
    def test_concentric_disk(self):
        geom = preset("disk-default")
        est = theta_estimate(geom.compact.refine(128), geom.contour, 64)
        assert est.theta == pytest.approx(0.556, abs=0.02)

    def test_farther_contour_lowers_theta(self):
        K = CompactSetSpec.disk(2, mpfr("0.5"), 512)
        near = theta_estimate(K, Contour.circle(2, mpfr("0.9"), 512), 64).theta
        far = theta_estimate(K, Contour.circle(2, mpfr("0.99"), 512), 64).theta
        assert far < near
        assert far == pytest.approx(0.5 / 0.99, abs=0.02)

    def test_monotone_in_radius(self):
        K = CompactSetSpec.disk(2, mpfr("0.5"), 512)
        radii = ["0.6", "0.7", "0.8", "0.9", "0.99"]
        values = [theta_estimate(K, Contour.circle(2, mpfr(r), 512), 32).theta for r in radii]
        for a, b in zip(values, values[1:]):
            assert b <= a * 1.02

    def test_density_doubling(self):
        geom = preset("disk-default")
        a = theta_estimate(geom.compact, geom.contour, 64).theta
        b = theta_estimate(geom.compact.refine(1024), geom.contour, 64).theta
        assert abs(a - b) < 0.01 * a

    @pytest.mark.parametrize("name", PRESETS)
    def test_below_one(self, name):
        geom = preset(name)
        for n in (8, 16, 32):
            assert theta_estimate(geom.compact, geom.contour, n).theta < 1

    def test_polygon_minimum_along_edges(self):
        # the nearest part of this contour is an edge midpoint, far from any vertex
        K = CompactSetSpec.segment(mpc(2, -1), mpc(2, 1), 256)
        gamma = Contour.polygon([1.5 - 3j, 6 - 3j, 6 + 3j, 1.5 + 3j])
        nodes = leja_points(K, 16)
        est = theta_estimate(K, gamma, 16, nodes)
        dense = np.array([1.5 + 1j * y for y in np.linspace(-3, 3, 20001)])
        x = nodes.complex_points()
        bottom = np.log(np.abs(dense[:, None] - x[None, :])).sum(axis=1).min()
        with np.errstate(divide="ignore"):  # samples that are nodes give log 0
            top = np.log(np.abs(K.complex_samples()[:, None] - x[None, :])).sum(axis=1).max()
        assert est.theta == pytest.approx(np.exp((top - bottom) / 16), rel=1e-3)

    def test_one_node(self):
        K = CompactSetSpec.disk(2, mpfr("0.5"), 64)
        gamma = Contour.circle(2, mpfr("0.9"), 64)
        est = theta_estimate(K, gamma, 1)
        x = leja_points(K, 1).complex_points()[0]
        top = np.abs(K.complex_samples() - x).max()
        bottom = np.abs(gamma.complex_vertices() - x).min()
        assert est.theta == pytest.approx(top / bottom)

    def test_degenerate(self):
        with pytest.raises(DegenerateSet):
            theta_estimate(CompactSetSpec.cloud([2]), Contour.circle(2, mpfr("0.5"), 64), 1)
