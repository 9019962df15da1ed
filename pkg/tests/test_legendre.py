import cmath
import math
import random

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from legendre_params.errors import DomainError, PoleError
from legendre_params.legendre import (
    EvalResult,
    P,
    ParamPoint,
    Q,
    exp_i_pi,
    hyp2f1_regularized,
    legendre_p,
    legendre_q,
    log_coth_map,
    negative_order_p,
    on_cut,
    whipple_argument,
    whipple_q_to_p,
    wronskian,
    z2m1_pow,
)
from legendre_params.oracle import fd_param_derivative, quad_ik, quad_legendre_p
from legendre_params.scalars import gamma


def rel(a, b):
    return abs(a - b) / abs(b)


def mp_p(nu, mu, z):
    with mpmath.workdps(30):
        return complex(mpmath.legenp(nu, mu, z, type=3))


def mp_q(nu, mu, z):
    with mpmath.workdps(30):
        return complex(mpmath.legenq(nu, mu, z, type=3))


class TestTypes:
    def test_param_point_coerces(self):
        p = ParamPoint(1, 0.5, 2)
        assert isinstance(p.nu, complex) and isinstance(p.z, complex)

    @pytest.mark.parametrize("z", [0.0, 1.0, -1.0, 0.3, complex(0.5, 1e-15)])
    def test_cut_rejected(self, z):
        assert on_cut(complex(z))
        with pytest.raises(DomainError):
            ParamPoint(0, 0, z)

    def test_just_off_cut(self):
        assert not on_cut(complex(0.5, 1e-6))
        assert not on_cut(complex(1 + 1e-9, 0))

    def test_eval_result_validation(self):
        with pytest.raises(ValueError):
            EvalResult(1.0, "guess", 0.0)
        with pytest.raises(ValueError):
            EvalResult(1.0, "series", math.inf)
        with pytest.raises(ValueError):
            EvalResult(1.0, "series", -1.0)

    def test_branch_of_power(self):
        assert z2m1_pow(2.0, 0.5) == pytest.approx(math.sqrt(3))
        # principal branch is continuous across the imaginary axis above the cut
        a = z2m1_pow(complex(1e-9, 0.5), 0.5)
        b = z2m1_pow(complex(-1e-9, 0.5), 0.5)
        assert abs(a - b) < 1e-8

    def test_exp_i_pi_exact_at_half_integers(self):
        assert exp_i_pi(0.5) == 1j
        assert exp_i_pi(-1.0) == -1
        assert exp_i_pi(2.0) == 1


def mp_hyp2f1_regularized(a, b, c, x):
    with mpmath.workdps(30):
        # mpmath regularizes by the limit when c is a nonpositive integer
        return complex(mpmath.hyp2f1(a, b, c, x) / mpmath.gamma(c)) if c.real > 0 else complex(
            mpmath.limit(lambda cc: mpmath.hyp2f1(a, b, cc, x) / mpmath.gamma(cc), c))


class TestHyp2f1:
    @pytest.mark.parametrize("a,b,c,x", [(0.3, -1.2, 0.7, 0.5), (1 + 1j, 0.5, 2.5, 0.9), (2.0, -3.0, 1.5, 0.99)])
    def test_vs_mpmath(self, a, b, c, x):
        val, err = hyp2f1_regularized(a, b, c, x)
        ref = mp_hyp2f1_regularized(a, b, c, x)
        assert abs(val - ref) < 1e-13 * max(1, abs(ref))
        assert err < 1e-12 * max(1, abs(ref))

    def test_nonpositive_integer_c(self):
        # the series starts at k = 1 - c: (a)_3 (b)_3 / 3! x^3 2F1(a+3, b+3; 4; x)
        a, b, x = 1.5, 2.5, 0.3
        val, _ = hyp2f1_regularized(a, b, -2.0, x)
        with mpmath.workdps(30):
            ref = complex(mpmath.rf(a, 3) * mpmath.rf(b, 3) * x ** 3 * mpmath.hyp2f1(a + 3, b + 3, 4, x) / 6)
        assert rel(val, ref) < 1e-13


class TestLegendreP:
    def test_examples(self):
        assert abs(P(0, 0, 2) - 1) < 1e-15
        assert abs(P(1, 0, 3) - 3) < 1e-14

    def test_vs_quadrature(self):
        ref = quad_legendre_p(0.7, -1.3, 2.5).value
        assert rel(P(0.7, -1.3, 2.5), ref) < 1e-9
        # same point straight from the K-integral, prefactors undone by hand
        a, v, z = 1.3, 1.2, 2.5
        raw = quad_ik(a, v, z).value
        scale = math.sqrt(math.pi / 2) * gamma(a - v + 0.5) * gamma(a + v + 0.5) * z2m1_pow(z, -a / 2)
        assert rel(P(0.7, -1.3, 2.5), raw / scale) < 1e-9

    def test_pole_free_at_integer_orders(self):
        # regularized hypergeometric: no pole when 1 - mu is a nonpositive integer
        assert rel(P(1.3, 2, 2.0), mp_p(1.3, 2, 2.0)) < 1e-12

    def test_methods_agree(self):
        for args in ((0.7, 0.2, 1.5), (2.3, -1.1, 4 + 1j), (-3.2, 0.5, 1.2)):
            s = legendre_p(ParamPoint(*args), method="series").value
            m = legendre_p(ParamPoint(*args), method="mpmath").value
            assert rel(s, m) < 1e-11

    def test_bad_method(self):
        with pytest.raises(ValueError):
            legendre_p(ParamPoint(0, 0, 2), method="magic")

    def test_box(self):
        with pytest.raises(DomainError):
            legendre_p(ParamPoint(31, 0, 2))


class TestLegendreQ:
    def test_examples(self):
        assert abs(Q(0, 0, 2) - 0.5 * math.log(3)) < 1e-15
        assert abs(Q(1, 0, 2) - (math.log(3) - 1)) < 1e-15

    def test_vs_quadrature_second_k_equality(self):
        # Q_{a-1/2}^v(y) from the K-integral at z = w(y), y = 3
        nu, mu, y = 1.2, 0.4, 3.0
        a, v = nu + 0.5, mu
        z = whipple_argument(y)
        raw = quad_ik(a, v, z).value
        scale = gamma(a - v + 0.5) * z2m1_pow(z, -a / 2 - 0.25) * exp_i_pi(-v)
        assert rel(Q(nu, mu, y), raw / scale) < 1e-9

    def test_real_for_zero_order(self):
        for nu in (0.3, 1.7, -2.4, 5.0):
            for z in (1.1, 2.0, 30.0):
                q = Q(nu, 0, z)
                assert abs(q.imag) <= 1e-12 * abs(q.real)

    def test_pole(self):
        with pytest.raises(PoleError):
            legendre_q(ParamPoint(-0.5, -0.5, 2.0))
        with pytest.raises(PoleError):
            legendre_q(ParamPoint(-1.3, -1.7, 2.0))

    def test_methods_agree(self):
        for args in ((0.7, 0.2, 1.5), (2.3, -1.1, 4 + 1j), (1.4, 1.0, 1.05), (0.5, 2.5, 10.0)):
            ref = legendre_q(ParamPoint(*args), method="mpmath").value
            for method in ("series", "whipple", "auto"):
                assert rel(legendre_q(ParamPoint(*args), method=method).value, ref) < 1e-9


def _grid_points(seed, n):
    rng = random.Random(seed)
    zs = (1.001, 1.1, 1.5, 2.0, 5.0, 20.0, 100.0)
    for _ in range(n):
        yield rng.uniform(-10, 10), rng.uniform(-10, 10), rng.choice(zs)


@pytest.mark.parametrize("nu,mu,z", list(_grid_points(7, 80)))
def test_accuracy_vs_mpmath(nu, mu, z):
    assert rel(P(nu, mu, z), mp_p(nu, mu, z)) < 1e-10
    if abs((nu + mu + 1) - round(nu + mu + 1)) > 1e-3 or nu + mu + 1 > 0:
        assert rel(Q(nu, mu, z), mp_q(nu, mu, z)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(1.05, 50), st.floats(-3, 3))
def test_complex_argument_property(nu, mu, x, y):
    assume(abs(nu + mu + 1 - round(nu + mu + 1)) > 1e-2 or nu + mu + 1 > 0)
    z = complex(x, y)
    assert rel(P(nu, mu, z), mp_p(nu, mu, z)) < 1e-9
    assert rel(Q(nu, mu, z), mp_q(nu, mu, z)) < 1e-9


class TestLogCothMap:
    def test_value(self):
        assert abs(log_coth_map(1.0) - math.log(math.cosh(0.5) / math.sinh(0.5))) < 1e-15
        assert abs(log_coth_map(1.0) - 0.7719368329053046) < 1e-15

    def test_real_ray_is_real(self):
        for x in (1e-6, 0.1, 1.0, 10.0, 40.0):
            assert log_coth_map(x).imag == 0.0
            assert log_coth_map(x).real > 0

    def test_example_involution(self):
        z = 0.3 + 0.2j
        assert rel(log_coth_map(log_coth_map(z)), z) < 1e-12

    def test_involution_and_swap_sample(self):
        rng = random.Random(11)
        pts = [complex(rng.uniform(0.05, 4), 0.0) for _ in range(10)]
        pts += [complex(rng.uniform(0.05, 4), rng.uniform(-3.0, 3.0)) for _ in range(40)]
        for z in pts:
            w = log_coth_map(z)
            assert rel(log_coth_map(w), z) < 1e-12
            assert rel(cmath.cosh(w), 1 / cmath.tanh(z)) < 1e-12
            assert rel(1 / cmath.tanh(w), cmath.cosh(z)) < 1e-12
            assert rel(cmath.sinh(w), 1 / cmath.sinh(z)) < 1e-12

    @pytest.mark.parametrize("z", [0.0, -1.0, 1 + 3.2j, 2 - 4j])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            log_coth_map(z)


class TestWhipple:
    def test_argument_examples(self):
        assert abs(whipple_argument(2) - 2 / math.sqrt(3)) < 1e-15
        assert abs(whipple_argument(math.sqrt(2)) - math.sqrt(2)) < 1e-15
        assert abs(whipple_argument(1.1) - 1.1 / math.sqrt(0.21)) < 1e-15

    def test_argument_involution(self):
        for z in (1.0001, 1.5, 3.0, 10.0, 2 + 1j, 0.5 + 0.5j, 20 + 5j):
            x = whipple_argument(z)
            assert rel(whipple_argument(x), z) < 1e-13
        # (z^2-1)^(1/2) ~ z at infinity sends the left half plane to the right
        assert rel(whipple_argument(whipple_argument(-3 + 0.1j)), 3 - 0.1j) < 1e-13
        assert whipple_argument(5.0).imag == 0 and whipple_argument(5.0).real > 1

    def test_argument_involution_large_z(self):
        # w(z) - 1 ~ 1/(2 z^2) keeps only ~eps z^2 relative information
        for z in (100.0, 1e3, 1e4):
            assert rel(whipple_argument(whipple_argument(z)), z) < 10 * 2.2e-16 * z * z

    def test_imaginary_axis_maps_onto_cut(self):
        with pytest.raises(DomainError):
            whipple_argument(whipple_argument(100j))

    def test_argument_domain(self):
        with pytest.raises(DomainError):
            whipple_argument(0.5)

    def test_examples(self):
        for nu, mu, z in ((0, 0, 2.0), (1, 0, 3.0)):
            left = P(-mu - 0.5, -nu - 0.5, whipple_argument(z))
            right = math.sqrt(2 / math.pi) * (z * z - 1) ** 0.25 * Q(nu, mu, z) / math.gamma(nu + mu + 1)
            assert rel(whipple_q_to_p(nu, mu, z).value, left) < 1e-12
            assert rel(left, right) < 1e-12
            assert rel(whipple_q_to_p(nu, mu, z, direction="p_to_q").value, Q(nu, mu, z)) < 1e-12

    GRID = (0, 0.5, -0.5, 1, 1.5)

    @pytest.mark.parametrize("nu", GRID)
    @pytest.mark.parametrize("mu", GRID)
    @pytest.mark.parametrize("z", [1.1, 2.0, 5.0, 20.0])
    def test_two_sided(self, nu, mu, z):
        if nu + mu + 1 == 0:
            with pytest.raises(PoleError):
                whipple_q_to_p(nu, mu, z)
            return
        left_from_q = whipple_q_to_p(nu, mu, z, method="series").value
        left_direct = legendre_p(ParamPoint(-mu - 0.5, -nu - 0.5, whipple_argument(z)), method="series").value
        assert rel(left_from_q, left_direct) < 1e-9
        q_from_p = whipple_q_to_p(nu, mu, z, direction="p_to_q", method="series").value
        assert rel(q_from_p, legendre_q(ParamPoint(nu, mu, z), method="series").value) < 1e-9

    def test_errors(self):
        with pytest.raises(PoleError):
            whipple_q_to_p(-0.3, -0.7, 2.0)
        with pytest.raises(DomainError):
            whipple_q_to_p(0, 0, -2.0)
        with pytest.raises(ValueError):
            whipple_q_to_p(0, 0, 2.0, direction="sideways")


class TestNegativeOrder:
    def test_zero_order_identity(self):
        assert negative_order_p(1.3, 0, 2.0).value == P(1.3, 0, 2.0)

    @pytest.mark.parametrize("nu,mu,z", [(1.3, 2, 2.0), (0.7, 0.4, 1.5), (2.2, -1.6, 3 + 1j), (0.4, 1.5, 1.2)])
    def test_matches_direct(self, nu, mu, z):
        assert rel(negative_order_p(nu, mu, z).value, P(nu, -mu, z)) < 1e-10

    @pytest.mark.parametrize("nu,mu,z", [(0.7, 0.4, 1.5), (1.9, 1.3, 4.0), (0.2, -0.8, 2 + 0.5j)])
    def test_round_trip(self, nu, mu, z):
        p_neg = negative_order_p(nu, mu, z).value
        back = negative_order_p(nu, -mu, z, p_value=p_neg, q_value=Q(nu, -mu, z)).value
        assert rel(back, P(nu, mu, z)) < 1e-10

    def test_pole(self):
        with pytest.raises(PoleError):
            negative_order_p(0.5, 1.5, 2.0)


@pytest.mark.parametrize("nu,mu", [(0.3, 0.2), (1.5, 0.5), (2.2, -1.3), (1.0, 1.0)])
@pytest.mark.parametrize("z", [1.3, 2.5, 7.0])
def test_wronskian_by_fd(nu, mu, z):
    dp = fd_param_derivative(lambda x: P(nu, mu, x), z, h=1e-3).value
    dq = fd_param_derivative(lambda x: Q(nu, mu, x), z, h=1e-3).value
    w = P(nu, mu, z) * dq - dp * Q(nu, mu, z)
    assert rel(w, wronskian(nu, mu, z)) < 1e-8
