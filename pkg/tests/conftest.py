"""Shared fixtures and small builders for the test suite."""

import math
from fractions import Fraction

import pytest

from momsum import bivariate, germ, make_sequence, series


def euler_coeffs(N):
    """Coefficients of the alternating factorial series, p = 0..N."""
    return [(-1) ** p * math.factorial(p) for p in range(N + 1)]


def biv_from(entries, N0, N1, mode="exact", vars=("eps", "z")):
    """Bivariate series from a sparse {(row, col): coeff} dict."""
    zero = Fraction(0) if mode == "exact" else 0.0
    rows = [[entries.get((n, j), zero) for j in range(N1 + 1)]
            for n in range(N0 + 1)]
    return bivariate(rows, vars, mode=mode)


@pytest.fixture(scope="session")
def factorials_exact():
    return make_sequence("factorial_power", 80, s=1, mode="exact")


@pytest.fixture(scope="session")
def factorials_float():
    return make_sequence("factorial_power", 80, s=1.0)


@pytest.fixture(scope="session")
def gevrey1():
    return make_sequence("gamma_gevrey", 60, s=1.0)


@pytest.fixture(scope="session")
def gevrey2():
    return make_sequence("gamma_gevrey", 60, s=2.0)


@pytest.fixture(scope="session")
def one_germ_exact():
    return germ([Fraction(1)], 1.0, mode="exact")


def euler_series(N=60, mode="float"):
    coeffs = euler_coeffs(N)
    if mode == "float":
        coeffs = [float(c) for c in coeffs]
    return series(coeffs, "z", mode=mode)
