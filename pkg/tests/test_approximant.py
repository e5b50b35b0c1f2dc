import random
from fractions import Fraction

import pytest
from gmpy2 import mpfr, mpq

from taylorshift.approximant import (
    IndexSequence,
    TargetSpec,
    build_approximant,
    damped_principal_part,
    decay_columns,
    decay_table_csv,
    find_n0,
    verify_structural_zero,
)
from taylorshift.errors import DomainError, NotReached, SequenceTooSmall
from taylorshift.geometry import preset
from taylorshift.laurent import LaurentPoly, d_coeff, lp_sup_norm
from taylorshift.operators import apply_Ttilde

Z = LaurentPoly.monomial


@pytest.fixture(scope="module")
def disk():
    return preset("disk-default")


def default_targets():
    return TargetSpec(Z(1), [Z(-1), Z(-2)])


def default_seqs():
    return (IndexSequence.power(1), IndexSequence.power(2))


class TestDamping:
    def test_examples(self):
        assert damped_principal_part(Z(-1), 2) == LaurentPoly({-1: mpq(1, 3)})
        assert damped_principal_part(Z(-2), 3) == LaurentPoly({-2: mpq(1, 10)})
        R = LaurentPoly({-1: 2, -3: mpq(1, 7)})
        assert damped_principal_part(R, 0) == R

    def test_negative_lambda(self):
        with pytest.raises(DomainError):
            damped_principal_part(Z(-1), -1)

    def test_eigen_exactness(self):
        rng = random.Random(4)
        for lam in [0, 1, 7, 100, 2500, 10**4]:
            R = LaurentPoly({-k: mpq(rng.randint(-30, 30) or 1, rng.randint(1, 9)) for k in range(1, 8)})
            assert apply_Ttilde(lam, damped_principal_part(R, lam)) == R

    def test_monotone_damping(self, disk):
        pts = disk.compact.points()
        R = LaurentPoly({-1: 1, -2: mpq(-1, 2)})
        norms = [lp_sup_norm(damped_principal_part(R, n * n), pts) for n in range(1, 30)]
        assert all(b < a for a, b in zip(norms, norms[1:]))


class TestTargets:
    def test_p_must_vanish_at_zero(self):
        with pytest.raises(DomainError):
            TargetSpec(LaurentPoly({0: 1, 1: 1}), [Z(-1), Z(-2)])

    def test_principal_parts_negative(self):
        with pytest.raises(DomainError):
            TargetSpec(Z(1), [Z(1), Z(-2)])


class TestIndexSequence:
    def test_kinds(self):
        assert IndexSequence.power(2)(7) == 49
        assert IndexSequence.polynomial(Fraction(1, 2), 2)(3) == 5  # 4.5 rounds up
        assert IndexSequence.exponential(1, Fraction(3, 2))(3) == 3  # 3.375
        assert IndexSequence.explicit([2, 5, 9])(3) == 9

    def test_irrational_power(self):
        seq = IndexSequence.polynomial(1, Fraction(3, 2))
        assert [seq(n) for n in (1, 2, 4, 9)] == [1, 3, 8, 27]

    def test_invalid(self):
        with pytest.raises(DomainError):
            IndexSequence.explicit([3, 3])
        with pytest.raises(DomainError):
            IndexSequence.exponential(1, 1)
        with pytest.raises(DomainError):
            IndexSequence.power(2)(0)

    def test_explicit_exhausted(self):
        with pytest.raises(DomainError):
            IndexSequence.explicit([1, 2])(3)


class TestBuild:
    def test_routes_agree(self, disk):
        for n in range(1, 7):
            a = build_approximant(disk, default_targets(), default_seqs(), n, route="remainder")
            b = build_approximant(disk, default_targets(), default_seqs(), n, route="direct")
            for key in a.errors:
                x, y = a.errors[key], b.errors[key]
                assert abs(x - y) <= mpfr("1e-10") * max(x, y, mpfr("1e-60")), (n, key, x, y)
            assert abs(a.row.interp_err - b.row.interp_err) <= mpfr("1e-10") * b.row.interp_err

    def test_assembled_f(self, disk):
        f, errors = build_approximant(disk, default_targets(), default_seqs(), 4)
        assert f.order == -2
        assert f.degree <= 16
        assert verify_structural_zero(f, default_targets(), 16, disk.compact.points()) <= mpfr("1e-30")
        assert errors[2] <= mpfr("1e-30")

    def test_zero_targets(self, disk):
        targets = TargetSpec(Z(1), [LaurentPoly(), LaurentPoly()])
        result = build_approximant(disk, targets, default_seqs(), 3)
        assert result.f == Z(1)
        assert result.errors["U"] == 0 and result.errors[1] == 0 and result.errors[2] == 0

    def test_three_sequences(self, disk):
        targets = TargetSpec(Z(1), [Z(-1), Z(-1), Z(-2)])
        seqs = (IndexSequence.power(1), IndexSequence.power(2), IndexSequence.power(3))
        a = build_approximant(disk, targets, seqs, 3, route="remainder")
        b = build_approximant(disk, targets, seqs, 3, route="direct")
        assert a.errors[3] <= mpfr("1e-30")
        for key in a.errors:
            assert abs(a.errors[key] - b.errors[key]) <= mpfr("1e-10") * max(a.errors[key], mpfr("1e-60"))

    def test_sequence_too_small(self, disk):
        targets = TargetSpec(LaurentPoly({1: 1, 5: 1}), [Z(-1), Z(-2)])
        with pytest.raises(SequenceTooSmall):
            build_approximant(disk, targets, default_seqs(), 2)

    def test_single_sequence_rejected(self, disk):
        with pytest.raises(DomainError):
            build_approximant(disk, TargetSpec(Z(1), [Z(-1)]), (IndexSequence.power(1),), 2)

    def test_bounds_certify(self, disk):
        for n in range(1, 12):
            row = build_approximant(disk, default_targets(), default_seqs(), n, expand=False).row
            assert row.interp_err <= row.bw_bound
            assert row.interp_term <= row.deriv_bound

    def test_triangle_decomposition(self, disk):
        for n in range(2, 10):
            row = build_approximant(disk, default_targets(), default_seqs(), n, expand=False).row
            slack = mpfr("1e-40")
            assert row.errors[1] <= row.poly_term + row.interp_term + row.cross_term + slack

    def test_cross_term_closed_form(self, disk):
        m = disk.compact.min_modulus
        for n in range(1, 15):
            row = build_approximant(disk, default_targets(), default_seqs(), n, expand=False).row
            closed = mpq(d_coeff(2, n), d_coeff(2, n * n)) / mpfr(m) ** 2
            assert abs(row.cross_term - closed) <= mpfr("1e-12") * closed


class TestFindN0:
    def test_loose_epsilon(self, disk):
        report = find_n0(disk, default_targets(), default_seqs(), 10, 5)
        assert report.n0 == 1 and report.found
        assert len(report.decay_table) == 1
        assert report.f is not None

    def test_not_reached(self, disk):
        with pytest.raises(NotReached) as info:
            find_n0(disk, default_targets(), default_seqs(), Fraction(1, 10**6), 4)
        exc = info.value
        assert exc.n_max == 4
        assert len(exc.report.decay_table) == 4
        assert not exc.report.found

    def test_epsilon_validation(self, disk):
        with pytest.raises(DomainError):
            find_n0(disk, default_targets(), default_seqs(), 0, 4)
        with pytest.raises(DomainError):
            find_n0(disk, default_targets(), default_seqs(), 1, 0)

    def test_first_index_below_epsilon(self, disk):
        eps = Fraction(1, 5)
        report = find_n0(disk, default_targets(), default_seqs(), eps, 30, expand=False)
        rows = report.decay_table
        assert all(e < eps for e in rows[-1].errors)
        assert all(any(e >= eps for e in r.errors) for r in rows[:-1])


class TestCsv:
    def test_columns(self):
        assert decay_columns(2) == [
            "n", "lambda1", "lambda2", "err_U", "err_1", "err_2",
            "theta_hat", "bw_bound", "interp_err", "interp_term", "deriv_bound", "cross_term",
        ]

    def test_format(self, disk):
        rows = [build_approximant(disk, default_targets(), default_seqs(), n, expand=False).row for n in (1, 2)]
        lines = decay_table_csv(rows).splitlines()
        assert len(lines) == 3
        cells = lines[2].split(",")
        assert cells[:3] == ["2", "2", "4"]
        assert all("e" in c and len(c.split("e")[0].lstrip("-").replace(".", "")) == 17 for c in cells[3:])

    def test_empty(self):
        with pytest.raises(DomainError):
            decay_table_csv([])


class TestDiskExamples:
    """Stated outcomes on the disk preset with p = z, R1 = 1/z, R2 = 1/z^2, n and n^2."""

    def test_n25_all_errors_below_1e_3(self, disk):
        errors = build_approximant(disk, default_targets(), default_seqs(), 25, expand=False).errors
        assert all(e <= mpfr("1e-3") for e in errors.values()), {k: float(v) for k, v in errors.items()}

    def test_epsilon_1e_2_within_15(self, disk):
        report = find_n0(disk, default_targets(), default_seqs(), Fraction(1, 100), 15, expand=False)
        assert report.n0 <= 15

    def test_err_U_tracks_damped_first_part(self, disk):
        # f - p = R_{1,n} + (z p_n - R_{1,n}) + R_{2,n}, so err_U sits within
        # interp_err + ||R_{2,n}|| of ||R_{1,n}||_K = 1 / ((n + 1) m)
        pts = disk.compact.points()
        for n in (5, 25, 40):
            row = build_approximant(disk, default_targets(), default_seqs(), n, expand=False).row
            main_term = mpfr(1) / ((n + 1) * mpfr("1.5"))
            slack = row.interp_err + lp_sup_norm(damped_principal_part(Z(-2), n * n), pts) + mpfr("1e-60")
            assert abs(row.err_U - main_term) <= slack


@pytest.mark.parametrize("name", ["disk-default", "disk-geomean", "segment", "square"])
def test_bounds_certify_on_presets(name):
    geom = preset(name, samples=256)
    for n in range(1, 11):
        row = build_approximant(geom, default_targets(), default_seqs(), n, expand=False).row
        assert row.interp_err <= row.bw_bound, (n, float(row.interp_err), float(row.bw_bound))
        assert row.errors[2] <= mpfr("1e-30")
        # the derivative estimate is asymptotic: it drops the derivatives of
        # q(z) and on the segment preset first holds at n = 6
        if n >= 6:
            assert row.interp_term <= row.deriv_bound, (n, float(row.interp_term), float(row.deriv_bound))
