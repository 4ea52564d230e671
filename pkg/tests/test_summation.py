import math

import numpy as np
import pytest

from momsum import (AccuracyError, ContinuationStrategy, Direction,
                    DomainError, Multidirection, ShapeError,
                    SingularDirectionError, SumResult, borel_sum,
                    continue_borel, growth_classify, laplace_along,
                    make_gevrey_kernel, make_sequence, multisum, series)

from conftest import euler_series

# independently computed values of the Borel sum of the alternating
# factorial series, i.e. int_0^inf e^{-t} / (1 + z t) dt (frozen)
EULER_SUM = {0.05: 0.95437090991921683,
             0.10: 0.91563333939788082,
             0.20: 0.85211088142366101}


def exp_series(N=40):
    return series([1.0 / math.factorial(p) for p in range(N + 1)], "z")


def geom_series(N=40):
    return series([1.0] * (N + 1), "z")


class TestDirections:
    def test_direction_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            Direction(math.nan)
        assert Direction(7.0).d == 7.0

    def test_multidirection_level_order(self):
        with pytest.raises(DomainError):
            Multidirection(0.0, 0.0, 2.0, 1.0)
        with pytest.raises(DomainError):
            Multidirection(0.0, 0.0, 1.0, 2.5)

    def test_multidirection_angle_gap(self):
        # |d1 - d2| must stay below pi (omega2 - omega1) / 2
        with pytest.raises(DomainError):
            Multidirection(0.0, 2.0, 1.0, 2.0)
        md = Multidirection(0.0, 1.2, 1.0, 2.0)
        assert md.omega2 == 2.0


class TestContinueBorel:
    def test_geometric_pade_is_exact(self):
        # coefficients of 1/(1 - zeta); Pade recovers the rational exactly
        cont = continue_borel(geom_series(), math.pi)
        for r in (0.5, 2.0, 10.0, 100.0):
            assert abs(cont(r) - 1.0 / (1.0 + r)) <= 1e-10 / (1.0 + r)
        assert any(abs(p - 1.0) < 1e-6 for p in cont.poles)

    def test_geometric_pole_on_ray_raises(self):
        with pytest.raises(SingularDirectionError) as exc:
            continue_borel(geom_series(), 0.0)
        assert abs(exc.value.pole - 1.0) < 1e-6

    def test_entire_function_has_no_pole_near_ray(self):
        # Pade approximants of the exponential carry stable poles off the
        # positive axis; none may land near the summation ray, and the
        # evaluator must stay accurate along it
        cont = continue_borel(exp_series(), 0.0)
        assert all(abs(math.atan2(p.imag, p.real)) > 0.3 for p in cont.poles)
        for r in (0.5, 2.0, 5.0):
            assert abs(cont(r) - math.exp(r)) <= 1e-8 * math.exp(r)

    def test_vectorized_evaluation(self):
        cont = continue_borel(geom_series(), math.pi)
        rs = np.array([0.5, 1.0, 2.0])
        out = cont(rs)
        assert out.shape == (3,)
        assert np.allclose(out, 1.0 / (1.0 + rs), rtol=1e-10)

    def test_partial_sum_method(self):
        strat = ContinuationStrategy(method="partial_sum")
        cont = continue_borel(exp_series(), 0.0, strat)
        assert cont.method == "partial_sum"
        assert abs(cont(1.0) - math.e) <= 1e-12

    def test_stability_reflects_degree_perturbation(self):
        cont = continue_borel(exp_series(), 0.0)
        assert cont.stability(1.0) < 1e-8

    def test_requires_enough_coefficients(self):
        with pytest.raises(ShapeError):
            continue_borel(series([1.0] * 5, "z"), 0.0)

    def test_unknown_method_rejected(self):
        with pytest.raises(DomainError):
            ContinuationStrategy(method="bogus")

    def test_zero_series(self):
        cont = continue_borel(series([0.0] * 12, "z"), 0.0)
        assert cont(3.0) == 0.0


class TestLaplaceAlong:
    def test_unit_mass(self):
        # the kernel weight integrates to exactly 1 for any z in the window
        for s in (1.0, 0.5):
            k = make_gevrey_kernel(s)
            for z in (0.1, 0.05 + 0.02j):
                val = laplace_along(k, lambda t: np.ones_like(t), 0.0, z)
                assert abs(val - 1.0) <= 1e-12

    def test_identity_input_gives_z(self):
        k = make_gevrey_kernel(1.0)
        for z in (0.1, 0.03 + 0.04j):
            val = laplace_along(k, lambda t: t, 0.0, z)
            assert abs(val - z) <= 1e-12 * abs(z)

    def test_rejects_z_outside_window(self):
        k = make_gevrey_kernel(1.0)
        with pytest.raises(DomainError):
            laplace_along(k, lambda t: t, 0.0, -0.1)
        with pytest.raises(DomainError):
            laplace_along(k, lambda t: t, 0.0, 0.0)

    def test_rejects_growth_beyond_kernel_decay(self):
        k = make_gevrey_kernel(1.0)
        with pytest.raises(AccuracyError):
            laplace_along(k, lambda t: t, 0.0, 0.5, growth_rate=100.0)


class TestGrowthClassify:
    def test_exponential_fits_factorial_scale(self, gevrey1):
        rec = growth_classify(lambda r: math.exp(r), gevrey1)
        assert rec.ok
        # exp(r) = exp(M(r)) exactly up to log corrections, so K near 1
        assert 0.5 <= rec.K <= 2.0

    def test_squared_exponential_fails(self, gevrey1):
        rec = growth_classify(lambda r: math.exp(r * r), gevrey1)
        assert not rec.ok

    def test_bounded_function_passes(self, gevrey1):
        rec = growth_classify(lambda r: 1.0 / (1.0 + r), gevrey1)
        assert rec.ok and rec.C <= math.e ** 5

    def test_zero_function(self, gevrey1):
        rec = growth_classify(lambda r: 0.0, gevrey1)
        assert rec.ok and rec.C == 0.0


class TestBorelSum:
    def test_euler_series(self, gevrey1):
        k = make_gevrey_kernel(1.0)
        grid = sorted(EULER_SUM)
        res = borel_sum(euler_series(), gevrey1, k, 0.0, grid)
        assert isinstance(res, SumResult)
        for z, val, err in zip(grid, res.values, res.err_est):
            assert abs(val - EULER_SUM[z]) <= 1e-9
            assert err <= 1e-6

    def test_geometric_beyond_convergence(self, gevrey1):
        # sum of the geometric series along the negative axis extends
        # 1/(1 - z) to z = -0.5
        k = make_gevrey_kernel(1.0)
        res = borel_sum(geom_series(), gevrey1, k, math.pi, [-0.5])
        assert abs(res.values[0] - 2.0 / 3.0) <= 1e-10

    def test_singular_direction_raises(self, gevrey1):
        # the alternating factorial series has its only Borel singularity
        # at -1, blocking summation along the negative axis
        k = make_gevrey_kernel(1.0)
        with pytest.raises(SingularDirectionError) as exc:
            borel_sum(euler_series(), gevrey1, k, math.pi, [-0.1])
        assert abs(exc.value.pole + 1.0) < 1e-6

    def test_direction_independence(self, gevrey1):
        # the Euler series has no singular direction between 0 and 0.3, so
        # both rays must produce the same function where windows overlap
        k = make_gevrey_kernel(1.0)
        z = 0.1 * np.exp(0.15j)
        a = borel_sum(euler_series(), gevrey1, k, 0.0, [z]).values[0]
        b = borel_sum(euler_series(), gevrey1, k, 0.3, [z]).values[0]
        assert abs(a - b) <= 1e-10

    def test_shift_identity(self, gevrey1):
        # multiplying the formal input by z multiplies the sum by z
        k = make_gevrey_kernel(1.0)
        f = euler_series()
        g = series([0.0] + list(f.coeffs[:-1]), "z")
        grid = [0.04, 0.08, 0.12, 0.16, 0.20]
        sf = borel_sum(f, gevrey1, k, 0.0, grid)
        sg = borel_sum(g, gevrey1, k, 0.0, grid)
        for z, a, b in zip(grid, sf.values, sg.values):
            assert abs(b - z * a) <= 1e-9

    def test_zero_series(self, gevrey1):
        k = make_gevrey_kernel(1.0)
        res = borel_sum(series([0.0] * 20, "z"), gevrey1, k, 0.0, [0.1])
        assert res.values == (0j,)
        assert res.err_est == (0.0,)

    def test_convergent_series_reproduces_function(self, gevrey1):
        k = make_gevrey_kernel(1.0)
        res = borel_sum(exp_series(), gevrey1, k, 0.0, [0.2, 0.5])
        for z, val in zip(res.grid, res.values):
            assert abs(val - np.exp(z)) <= 1e-10


class TestMultisum:
    LEVELS = None

    @pytest.fixture()
    def levels(self, gevrey1, gevrey2):
        return ((gevrey1, make_gevrey_kernel(1.0)),
                (gevrey2, make_gevrey_kernel(2.0)))

    def test_convergent_input(self, levels):
        md = Multidirection(0.0, 0.0, 1.0, 2.0)
        grid = [0.1, 0.3]
        res = multisum(exp_series(), levels[0], levels[1], md, grid)
        for z, val, err in zip(grid, res.values, res.err_est):
            assert abs(val - math.exp(z)) <= 1e-9
            assert err <= 1e-6

    def test_shift_identity(self, levels):
        md = Multidirection(0.0, 0.0, 1.0, 2.0)
        f = exp_series()
        g = series([0.0] + list(f.coeffs[:-1]), "z")
        grid = [0.05, 0.1, 0.15, 0.2, 0.25]
        sf = multisum(f, levels[0], levels[1], md, grid)
        sg = multisum(g, levels[0], levels[1], md, grid)
        for z, a, b in zip(grid, sf.values, sg.values):
            assert abs(b - z * a) <= 1e-5

    def test_zero_series(self, levels):
        md = Multidirection(0.0, 0.0, 1.0, 2.0)
        res = multisum(series([0.0] * 20, "z"), levels[0], levels[1],
                       md, [0.1])
        assert res.values == (0j,)

    def test_kernel_order_must_match_levels(self, gevrey1, gevrey2):
        md = Multidirection(0.0, 0.0, 1.0, 2.0)
        bad = ((gevrey1, make_gevrey_kernel(0.5)),
               (gevrey2, make_gevrey_kernel(2.0)))
        with pytest.raises(DomainError):
            multisum(exp_series(), bad[0], bad[1], md, [0.1])

    def test_requires_multidirection(self, levels):
        with pytest.raises(DomainError):
            multisum(exp_series(), levels[0], levels[1], 0.0, [0.1])
