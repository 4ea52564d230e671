import cmath
import math

import numpy as np
import pytest

from momsum import (DomainError, GevreyKernel, cauchy_kernel_identity,
                    contour_moment_derivative, eval_kernel, germ,
                    make_gevrey_kernel, make_sequence)

# high-precision reference values for the order-1/s entire kernel function E
# (computed once with adaptive-precision summation and frozen)
E_REFERENCE = [
    (0.5, complex(2.0, 0.0), complex(108.94090438997797, 0.0)),
    (0.5, complex(-3.0, 0.0), complex(0.17900115118138995, 0.0)),
    (0.5, complex(25.0, 0.0), complex(5.4335189393274734e+271, 0.0)),
    (0.5, complex(-8.0, 5.0), complex(0.050743677837035821, 0.031363955938247167)),
    (1.0, complex(1.5, -2.0), complex(-1.8650407290090892, -4.0751883394911839)),
    (1.3, complex(4.0, 0.0), complex(14.087897895149225, 0.0)),
    (1.3, complex(-30.0, 10.0), complex(-0.0071083425913827668, -0.0027546172043987401)),
    (1.3, complex(300.0, 0.0), complex(6.6248102626578163e+34, 0.0)),
    (2.0, complex(9.0, 0.0), complex(10.067661995777766, 0.0)),
    (2.0, complex(-16.0, 0.0), complex(-0.65364362086361191, 0.0)),
    (2.0, complex(100.0, 40.0), complex(-5088.8703514265442, 12318.141671925057)),
    (2.0, complex(-2500.0, 0.0), complex(0.96496602849211327, 0.0)),
    (0.7, complex(0.5, 0.5), complex(1.373332457799279, 1.0513856532500399)),
    (1.7, complex(-40.0, 0.0), complex(-0.063070622495116931, 0.0)),
]


class TestKernelFunctions:
    def test_order_bounds(self):
        with pytest.raises(DomainError):
            make_gevrey_kernel(0.0)
        with pytest.raises(DomainError):
            make_gevrey_kernel(2.5)
        assert make_gevrey_kernel(2.0).order == 2.0

    def test_e_closed_form_s1(self):
        k = make_gevrey_kernel(1.0)
        for t in (0.3, 1.0, 4.0):
            assert eval_kernel(k, "e", t) == pytest.approx(t * math.exp(-t),
                                                           rel=1e-13)

    def test_e_closed_form_s_half(self):
        k = make_gevrey_kernel(0.5)
        for t in (0.1, 0.9):
            assert eval_kernel(k, "e", t) == pytest.approx(
                2.0 * t ** 2 * math.exp(-t ** 2), rel=1e-13)

    def test_moment_function(self):
        k = make_gevrey_kernel(0.5)
        assert eval_kernel(k, "moment", 4) == pytest.approx(math.gamma(3.0),
                                                            rel=1e-13)
        k1 = make_gevrey_kernel(1.0)
        for p in range(6):
            assert k1.moment(p) == pytest.approx(math.factorial(p), rel=1e-13)

    @pytest.mark.parametrize("s,z,ref", E_REFERENCE)
    def test_E_against_reference(self, s, z, ref):
        k = make_gevrey_kernel(s)
        got = complex(eval_kernel(k, "E", z))
        assert abs(got - ref) <= 1e-9 * max(abs(ref), 1.0)

    def test_E_at_zero_is_one(self):
        for s in (0.5, 1.0, 1.5, 2.0):
            assert eval_kernel(make_gevrey_kernel(s), "E", 0.0) == \
                pytest.approx(1.0, rel=1e-14)

    def test_E_vectorized_matches_scalar(self):
        k = make_gevrey_kernel(1.3)
        zs = np.array([0.5 + 0.1j, 4.0, -30.0 + 10.0j, 300.0])
        vec = k.E_vec(zs)
        for z, v in zip(zs, vec):
            assert abs(v - complex(k.E(complex(z)))) <= 1e-12 * max(abs(v), 1)

    def test_smallz_slope(self):
        for s in (0.5, 1.0, 2.0):
            k = make_gevrey_kernel(s)
            assert k.smallz_slope() == pytest.approx(1.0 / s, rel=2e-2)

    def test_flatness_fit(self):
        k = make_gevrey_kernel(1.0)
        C, K = k.flatness_fit()
        assert C > 0 and K > 0
        # bound |e(t)| <= C exp(-M(t/K)) spot-checked on the ray, with M the
        # associated function of the factorial powers of the kernel order
        from momsum import associated_function_any, make_sequence
        base = make_sequence("factorial_power", 40, s=k.s)
        for t in (0.5, 5.0, 50.0):
            bound = C * math.exp(-associated_function_any(base, t / K))
            assert abs(k.e(t)) <= bound * (1 + 1e-9)

    def test_positivity_on_ray(self):
        for s in (0.5, 1.0, 1.5):
            k = make_gevrey_kernel(s)
            assert all(k.e(t).real > 0 and abs(k.e(t).imag) < 1e-15
                       for t in (0.1, 1.0, 10.0))


class TestCauchyIdentity:
    @pytest.mark.parametrize("s", [1.0, 0.5])
    def test_identity(self, s):
        k = make_gevrey_kernel(s)
        for z, w in [(0.02, 0.3 + 0.1j), (0.01 + 0.005j, 0.2),
                     (-0.015, 0.25 - 0.05j)]:
            tau = -cmath.phase(w)
            val = cauchy_kernel_identity(k, z, w, tau)
            assert abs(val - 1.0 / (w - z)) <= 1e-6

    def test_rejects_tau_outside_window(self):
        k = make_gevrey_kernel(1.0)
        with pytest.raises(DomainError):
            cauchy_kernel_identity(k, 0.01, 0.2, math.pi)


class TestContourMomentDerivative:
    def test_coefficient_rule_s1(self):
        k = make_gevrey_kernel(1.0)
        m = make_sequence("gamma_gevrey", 400, s=1.0)
        u = germ([1.0] * 420, 0.9)        # germ of 1/(1-z)
        for n in (0, 1, 3, 5):
            for z in (0.05, -0.08, 0.07j):
                got = contour_moment_derivative(u, k, z, n)
                ref = sum(complex(z) ** p * m.ratio(p + n, p)
                          for p in range(360))
                assert abs(got - ref) <= 1e-8

    def test_coefficient_rule_s_half(self):
        k = make_gevrey_kernel(0.5)
        m = make_sequence("gamma_gevrey", 400, s=0.5)
        u = germ([1.0] * 420, 0.9)
        got = contour_moment_derivative(u, k, 0.02, 2)
        ref = sum(complex(0.02) ** p * m.ratio(p + 2, p) for p in range(360))
        assert abs(got - ref) <= 1e-8

    def test_rejects_points_outside_trust_radius(self):
        k = make_gevrey_kernel(1.0)
        u = germ([1.0] * 40, 0.9)
        with pytest.raises(DomainError):
            contour_moment_derivative(u, k, 0.5, 1)


class TestGevreyKernelRepr:
    def test_kernel_class_direct(self):
        k = GevreyKernel(1.0)
        assert k.s == 1.0
