import math
from fractions import Fraction

import numpy as np
import pytest

from momsum import (DomainError, ShapeError, associated_function,
                    check_equivalence, check_strongly_regular, combine,
                    estimate_omega, make_sequence, rho_factor)


class TestMakeSequence:
    def test_factorial_power_values(self):
        m = make_sequence("factorial_power", 10, s=2, mode="exact")
        assert m.values[3] == Fraction(36)
        assert m.values[0] == 1

    def test_gamma_gevrey_matches_factorials_at_s1(self):
        m = make_sequence("gamma_gevrey", 12, s=1.0)
        for p in range(13):
            assert m.values[p] == pytest.approx(math.factorial(p), rel=1e-12)

    def test_q_factorial_exact(self):
        m = make_sequence("q_factorial", 5, q=Fraction(1, 2), mode="exact")
        # [p]_q! with [l]_q = 1 + q + ... + q^{l-1}
        assert m.values[2] == Fraction(3, 2)
        assert m.values[3] == Fraction(3, 2) * Fraction(7, 4)

    def test_explicit_values(self):
        m = make_sequence("explicit", 3, values=[1.0, 2.0, 6.0, 24.0])
        assert m.values == (1.0, 2.0, 6.0, 24.0)

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            make_sequence("factorial_power", 1, s=1.0)
        with pytest.raises(DomainError):
            make_sequence("nope", 10)
        with pytest.raises(DomainError):
            make_sequence("factorial_power", 10, s=-1.0)
        with pytest.raises(DomainError):
            make_sequence("explicit", 2, values=[1.0, 0.0, 1.0])
        with pytest.raises(ShapeError):
            make_sequence("explicit", 4, values=[1.0, 1.0])

    def test_exact_mode_requires_integer_exponent(self):
        with pytest.raises(DomainError):
            make_sequence("factorial_power", 10, s=0.5, mode="exact")


class TestCombine:
    def test_quotient_of_factorial_powers(self):
        a = make_sequence("factorial_power", 10, s=2, mode="exact")
        b = make_sequence("factorial_power", 10, s=1, mode="exact")
        q = combine("quotient", a, b)
        assert q.values[4] == Fraction(24)

    def test_power(self):
        b = make_sequence("factorial_power", 10, s=1, mode="exact")
        sq = combine("power", b, s=2)
        assert sq.values[3] == Fraction(36)

    def test_product(self):
        b = make_sequence("factorial_power", 10, s=1, mode="exact")
        pr = combine("product", b, b)
        assert pr.values[3] == Fraction(36)


class TestStronglyRegular:
    @pytest.mark.parametrize("s", [0.5, 1.0, 1.5])
    def test_gevrey_powers_pass(self, s):
        m = make_sequence("factorial_power", 50, s=s)
        rep = check_strongly_regular(m)
        assert rep.lc_ok and rep.mg_ok and rep.snq_ok

    def test_q_factorial_fails_snq(self):
        m = make_sequence("q_factorial", 50, q=0.5)
        rep = check_strongly_regular(m)
        assert rep.lc_ok
        assert not rep.snq_ok

    def test_constant_sequence_flags(self):
        m = make_sequence("explicit", 20, values=[1.0] * 21)
        rep = check_strongly_regular(m)
        assert rep.lc_ok          # trivially log-convex
        assert not rep.snq_ok     # no growth at all


class TestOmega:
    @pytest.mark.parametrize("s", [0.5, 1.0, 1.5])
    def test_gevrey_power_omega(self, s):
        m = make_sequence("factorial_power", 50, s=s)
        om = estimate_omega(m)
        assert abs(om.value - s) <= 0.05 * s

    def test_gamma_gevrey_omega(self):
        m = make_sequence("gamma_gevrey", 50, s=1.5)
        om = estimate_omega(m)
        assert abs(om.value - 1.5) <= 0.075


class TestAssociatedFunction:
    def test_matches_direct_supremum(self):
        m = make_sequence("factorial_power", 40, s=1.0)
        for t in (0.5, 3.0, 10.0):
            got = associated_function(m, t)
            direct = max(p * math.log(t) - float(m.log_values[p])
                         for p in range(41))
            assert got.value == pytest.approx(direct, abs=1e-12)

    def test_monotone_in_t(self):
        m = make_sequence("factorial_power", 40, s=1.0)
        vals = [associated_function(m, t).value for t in np.linspace(0.2, 8, 20)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


class TestEquivalence:
    def test_power_vs_gamma_equivalent(self):
        a = make_sequence("factorial_power", 40, s=1.5)
        b = make_sequence("gamma_gevrey", 40, s=1.5)
        ok, C, D, Ct, Dt = check_equivalence(a, b)
        assert ok
        # sandwich C*D^p <= b/a <= Ct*Dt^p on the prefix
        for p in range(41):
            ratio = math.exp(b.log_values[p] - a.log_values[p])
            assert C * D ** p <= ratio * (1 + 1e-9)
            assert ratio <= Ct * Dt ** p * (1 + 1e-9)

    def test_different_levels_not_equivalent(self):
        a = make_sequence("factorial_power", 40, s=1.0)
        b = make_sequence("factorial_power", 40, s=2.0)
        ok, *_ = check_equivalence(a, b)
        assert not ok


class TestRhoFactor:
    def test_rho_is_one_at_s1(self):
        m = make_sequence("factorial_power", 50, s=1.0)
        assert rho_factor(m, 1) == 1.0

    def test_rho_bound_holds(self):
        from momsum import associated_function_any
        m = make_sequence("factorial_power", 50, s=1.0)
        rho = rho_factor(m, 2)
        assert rho >= 1.0
        for t in np.geomspace(0.1, 20, 25):
            assert (associated_function_any(m, t) + 1e-9
                    >= 2 * associated_function_any(m, t / rho))

    def test_rejects_s_below_one(self):
        m = make_sequence("factorial_power", 50, s=1.0)
        with pytest.raises(DomainError):
            rho_factor(m, 0.5)
