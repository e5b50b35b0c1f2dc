import random

import gmpy2
import pytest
from gmpy2 import mpc, mpfr, mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from taylorshift.errors import DomainError, ZeroPole
from taylorshift.laurent import LaurentPoly, lp_eval
from taylorshift.operators import (
    OperatorSpec,
    apply_T,
    apply_T_reference,
    apply_Ttilde,
    eigen_apply_psi,
    partial_sum_S,
    t_multiplier,
    ttilde_multiplier,
    ttilde_of_z_times,
)

Z = LaurentPoly.monomial


def rand_laurent(rng, lo=-6, hi=8):
    return LaurentPoly({m: mpq(rng.randint(-40, 40), rng.randint(1, 9)) for m in range(lo, hi + 1) if rng.random() < 0.7})


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20).map(lambda q: mpq(q.numerator, q.denominator))
laurents = st.dictionaries(st.integers(-8, 10), rationals, max_size=8).map(LaurentPoly)


class TestApplyT:
    def test_a_zero_is_identity(self):
        f = LaurentPoly({-3: 2, 0: 1, 4: mpq(1, 3)})
        for n in (0, 1, 5, 40):
            assert apply_T(OperatorSpec(0, n), f) == f

    def test_a_one_n_one_on_z(self):
        assert apply_T(OperatorSpec(1, 1), Z(1)) == LaurentPoly({1: 2})

    def test_lemma_poly_example(self):
        assert apply_T(OperatorSpec(-1, 2), LaurentPoly({2: 1, 1: 1})).is_zero()

    def test_negative_n_rejected(self):
        with pytest.raises(DomainError):
            OperatorSpec(1, -1)

    @pytest.mark.parametrize("a", [1, 2, -1, mpq(1, 3), mpc(0, 1), mpc(mpq(1, 2), -2)])
    def test_matches_reference(self, a):
        rng = random.Random(7)
        for _ in range(20):
            f = rand_laurent(rng)
            n = rng.randint(0, 14)
            spec = OperatorSpec(a, n)
            got, ref = apply_T(spec, f), apply_T_reference(spec, f)
            if got.is_exact() and ref.is_exact():
                assert got == ref
            else:
                diff = got - ref
                assert diff.is_zero() or diff.max_abs_coeff() <= mpfr("1e-60") * (1 + ref.max_abs_coeff())

    def test_multiplier_fast_path(self):
        for n in range(12):
            for m in range(-8, 21):
                assert t_multiplier(-1, n, m) == ttilde_multiplier(n, m)
                assert t_multiplier(mpq(-1), n, m) == ttilde_multiplier(n, m)

    @settings(max_examples=60, deadline=None)
    @given(f=laurents, g=laurents, alpha=rationals, beta=rationals, n=st.integers(0, 20), a=st.sampled_from([1, 2, -1, mpq(1, 2)]))
    def test_linearity(self, f, g, alpha, beta, n, a):
        spec = OperatorSpec(a, n)
        lhs = apply_T(spec, f * alpha + g * beta)
        rhs = apply_T(spec, f) * alpha + apply_T(spec, g) * beta
        assert lhs == rhs

    @settings(max_examples=60, deadline=None)
    @given(p=st.dictionaries(st.integers(0, 12), rationals, max_size=6).map(LaurentPoly), n=st.integers(0, 30))
    def test_polynomial_stays_polynomial(self, p, n):
        for a in (1, -1, 3):
            out = apply_T(OperatorSpec(a, n), p)
            assert out.is_zero() or out.order >= 0

    @settings(max_examples=60, deadline=None)
    @given(f=st.dictionaries(st.integers(-10, -1), rationals, max_size=6).map(LaurentPoly), n=st.integers(0, 50))
    def test_negative_part_stays_negative(self, f, n):
        out = apply_Ttilde(n, f)
        assert out.is_zero() or out.degree < 0

    def test_pointwise_consistency(self):
        rng = random.Random(11)
        for _ in range(100):
            f = rand_laurent(rng, -5, 6)
            n = rng.randint(0, 12)
            a = mpc(rng.uniform(-2, 2), rng.uniform(-2, 2))
            z = mpc(rng.uniform(0.5, 3), rng.uniform(-2, 2))
            value = lp_eval(apply_T(OperatorSpec(a, n), f), z)
            direct, g = mpc(0), f
            fact = 1
            for j in range(n + 1):
                direct += lp_eval(g, z) * (a * z) ** j / fact
                g = g.derivative()
                fact *= j + 1
            scale = max(abs(direct), mpfr(1))
            assert abs(value - direct) <= mpfr("1e-40") * scale


class TestTtilde:
    def test_reciprocal(self):
        assert apply_Ttilde(2, Z(-1)) == LaurentPoly({-1: 3})

    def test_square(self):
        assert apply_Ttilde(1, Z(2)) == LaurentPoly({2: -1})

    def test_lemma_poly(self):
        rng = random.Random(3)
        for _ in range(50):
            deg = rng.randint(0, 10)
            n = rng.randint(deg, 60)
            p = LaurentPoly({m: mpq(rng.randint(-9, 9), rng.randint(1, 5)) for m in range(deg + 1)})
            assert apply_Ttilde(n, p) == LaurentPoly({0: p[0]})

    def test_multiplier_closed_form(self):
        # sum_{j<=n} C(m, j) (-1)^j against the literal sum
        for n in range(10):
            for m in range(-6, 15):
                total = 0
                for j in range(n + 1):
                    c = 1
                    for i in range(j):
                        c = c * (m - i) // 1
                    fact = 1
                    for i in range(1, j + 1):
                        fact *= i
                    total += mpq(c, fact) * (-1) ** j
                assert total == ttilde_multiplier(n, m)


class TestEigen:
    @pytest.mark.parametrize("k,n,d", [(1, 2, 3), (2, 0, 1), (2, 3, 10)])
    def test_examples(self, k, n, d):
        value, image = eigen_apply_psi(k, n)
        assert value == d and image == LaurentPoly({-k: d})

    def test_domain(self):
        with pytest.raises(DomainError):
            eigen_apply_psi(0, 3)


class TestZf:
    def test_example(self):
        assert ttilde_of_z_times(1, Z(1)) == LaurentPoly({2: -1})

    def test_low_degree_vanishes(self):
        assert ttilde_of_z_times(3, LaurentPoly({0: 1, 1: 2, 2: 3})).is_zero()

    def test_random_against_operator(self):
        rng = random.Random(5)
        for _ in range(100):
            f = rand_laurent(rng)
            n = rng.randint(0, 16)
            assert ttilde_of_z_times(n, f) == apply_Ttilde(n, f.shift(1))

    def test_negative_n(self):
        with pytest.raises(DomainError):
            ttilde_of_z_times(-1, Z(1))


class TestPartialSum:
    def test_polynomial_exact(self):
        f = LaurentPoly({0: 1, 2: mpq(1, 2), 5: -3})
        assert partial_sum_S(5, f, mpq(3, 2)) == f
        assert partial_sum_S(9, f, 2) == f

    def test_n_zero(self):
        f = LaurentPoly({-2: 1, 3: 1})
        assert partial_sum_S(0, f, 2) == LaurentPoly({0: lp_eval(f, 2)})

    def test_pole_centre(self):
        with pytest.raises(ZeroPole):
            partial_sum_S(2, Z(-1), 0)

    @pytest.mark.parametrize("a", [1, 2, mpc(0, 1)])
    def test_shift_identity(self, a):
        rng = random.Random(9)
        for _ in range(10):
            f = rand_laurent(rng, -4, 5)
            n = rng.randint(0, 20)
            zeta = mpc(2) + mpfr("0.5") * gmpy2.exp(mpc(0, rng.uniform(0, 6.28)))
            lhs = lp_eval(partial_sum_S(n, f, zeta), (a + 1) * zeta)
            rhs = lp_eval(apply_T(OperatorSpec(a, n), f), zeta)
            assert abs(lhs - rhs) <= mpfr("1e-30") * max(abs(rhs), 1)
