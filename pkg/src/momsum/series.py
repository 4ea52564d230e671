"""Truncated formal power series in one and two variables.

Coefficients are complex (float mode) or Fraction (exact mode).  Moment
derivatives, moment antiderivatives and the formal Borel transform act
coefficientwise through a MomentSequence; the germ algebra supplies the
truncated ring operations used by the solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ShapeError
from .sequences import MomentSequence


def _coerce(c, mode):
    if mode == "exact":
        if isinstance(c, Fraction):
            return c
        if isinstance(c, int):
            return Fraction(c)
        raise DomainError(f"exact mode needs rational coefficients, got {type(c).__name__}")
    return complex(c)


def _zero(mode):
    return Fraction(0) if mode == "exact" else 0j


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    coeffs: tuple
    var: str = "z"
    mode: str = "float"

    @property
    def N(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        """Horner evaluation of the truncated polynomial."""
        acc = 0j if self.mode == "float" else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def truncate(self, N):
        if N > self.N:
            raise ShapeError(f"cannot extend truncation {self.N} to {N}")
        return TruncatedSeries(self.coeffs[:N + 1], self.var, self.mode)

    def to_float(self):
        if self.mode == "float":
            return self
        return TruncatedSeries(tuple(complex(c) for c in self.coeffs), self.var, "float")


def series(coeffs, var="z", mode="float"):
    return TruncatedSeries(tuple(_coerce(c, mode) for c in coeffs), var, mode)


@dataclass(frozen=True, eq=False)
class BivariateSeries:
    coeffs: tuple      # rows indexed by vars[0], columns by vars[1]
    vars: tuple = ("eps", "z")
    mode: str = "float"

    @property
    def N(self):
        return (len(self.coeffs) - 1, len(self.coeffs[0]) - 1)

    def row(self, n):
        """Coefficient of vars[0]^n as a series in vars[1]."""
        return TruncatedSeries(self.coeffs[n], self.vars[1], self.mode)

    def col(self, j):
        """Coefficient of vars[1]^j as a series in vars[0]."""
        return TruncatedSeries(tuple(r[j] for r in self.coeffs), self.vars[0], self.mode)

    def truncate(self, N0, N1):
        if N0 > self.N[0] or N1 > self.N[1]:
            raise ShapeError(f"cannot extend truncations {self.N} to {(N0, N1)}")
        return BivariateSeries(tuple(r[:N1 + 1] for r in self.coeffs[:N0 + 1]),
                               self.vars, self.mode)


def bivariate(coeffs, vars=("eps", "z"), mode="float"):
    rows = [tuple(_coerce(c, mode) for c in r) for r in coeffs]
    if len({len(r) for r in rows}) != 1:
        raise ShapeError("coefficient rows must be rectangular")
    return BivariateSeries(tuple(rows), tuple(vars), mode)


def bivariate_zero(N0, N1, vars=("eps", "z"), mode="float"):
    z = _zero(mode)
    return BivariateSeries(tuple(tuple(z for _ in range(N1 + 1))
                                 for _ in range(N0 + 1)), tuple(vars), mode)


@dataclass(frozen=True, eq=False)
class AnalyticGerm:
    """A truncated Taylor series with a declared radius of validity."""
    series: TruncatedSeries
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"germ radius must be positive, got {self.radius}")

    @property
    def mode(self):
        return self.series.mode

    def __call__(self, z):
        if abs(complex(z)) > self.radius:
            raise DomainError(f"|z|={abs(complex(z)):.4g} outside germ radius {self.radius}")
        return self.series(z)

    def coeff_bound(self):
        """max |c_p| r^p over the prefix (boundedness witness)."""
        return max(abs(complex(c)) * self.radius ** p
                   for p, c in enumerate(self.series.coeffs))


def germ(coeffs, radius, mode="float"):
    return AnalyticGerm(series(coeffs, "z", mode), radius)


# ---------------------------------------------------------------------------
# moment calculus


def _check_variable(u, var):
    if isinstance(u, TruncatedSeries):
        if var is not None and var != u.var:
            raise ShapeError(f"series is in {u.var!r}, not {var!r}")
        return None
    if var is None:
        raise DomainError("bivariate input needs an explicit variable")
    if var not in u.vars:
        raise ShapeError(f"variable {var!r} not among {u.vars}")
    return u.vars.index(var)


def _seq_ratio(m, p, q, mode):
    if mode == "exact":
        if m.mode != "exact":
            raise DomainError("exact series need an exact moment sequence")
        return m.values[p] / m.values[q]
    return math.exp(m.log_values[p] - m.log_values[q])


def moment_derivative(u, m, n=1, var=None):
    """n-th moment derivative: out[p] = in[p+n] * m(p+n)/m(p)."""
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    axis = _check_variable(u, var)
    if isinstance(u, TruncatedSeries):
        if n > u.N:
            raise ShapeError(f"order {n} exceeds truncation {u.N}")
        if len(m) < u.N + 1:
            raise ShapeError(f"moment sequence too short: need {u.N + 1}, have {len(m)}")
        out = tuple(u.coeffs[p + n] * _seq_ratio(m, p + n, p, u.mode)
                    for p in range(u.N - n + 1))
        return TruncatedSeries(out, u.var, u.mode)
    if axis == 0:
        rows = tuple(u.coeffs[p + n] for p in range(u.N[0] - n + 1))
        if n > u.N[0]:
            raise ShapeError(f"order {n} exceeds truncation {u.N[0]}")
        scaled = tuple(tuple(c * _seq_ratio(m, p + n, p, u.mode) for c in row)
                       for p, row in enumerate(rows))
        return BivariateSeries(scaled, u.vars, u.mode)
    if n > u.N[1]:
        raise ShapeError(f"order {n} exceeds truncation {u.N[1]}")
    out = tuple(tuple(row[p + n] * _seq_ratio(m, p + n, p, u.mode)
                      for p in range(u.N[1] - n + 1))
                for row in u.coeffs)
    return BivariateSeries(out, u.vars, u.mode)


def moment_antiderivative(u, m, n=1, var=None):
    """Moment antiderivative; left-inverted exactly by moment_derivative."""
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    axis = _check_variable(u, var)
    if isinstance(u, TruncatedSeries):
        z = _zero(u.mode)
        out = tuple(z for _ in range(n)) + tuple(
            u.coeffs[p] * _seq_ratio(m, p, p + n, u.mode) for p in range(u.N + 1))
        return TruncatedSeries(out, u.var, u.mode)
    if axis == 0:
        zrow = tuple(_zero(u.mode) for _ in u.coeffs[0])
        rows = tuple(zrow for _ in range(n)) + tuple(
            tuple(c * _seq_ratio(m, p, p + n, u.mode) for c in row)
            for p, row in enumerate(u.coeffs))
        return BivariateSeries(rows, u.vars, u.mode)
    z = _zero(u.mode)
    out = tuple(tuple(z for _ in range(n)) +
                tuple(row[p] * _seq_ratio(m, p, p + n, u.mode)
                      for p in range(u.N[1] + 1))
                for row in u.coeffs)
    return BivariateSeries(out, u.vars, u.mode)


def formal_borel(u, m, var=None):
    """Coefficientwise division by m(p) along the chosen variable."""
    axis = _check_variable(u, var)
    if isinstance(u, TruncatedSeries):
        if len(m) < u.N + 1:
            raise ShapeError(f"moment sequence too short: need {u.N + 1}, have {len(m)}")
        out = tuple(c / m.values[p] if u.mode == "exact"
                    else c * math.exp(-m.log_values[p])
                    for p, c in enumerate(u.coeffs))
        return TruncatedSeries(out, u.var, u.mode)
    if axis == 0:
        out = tuple(tuple(c / m.values[p] if u.mode == "exact"
                          else c * math.exp(-m.log_values[p]) for c in row)
                    for p, row in enumerate(u.coeffs))
        return BivariateSeries(out, u.vars, u.mode)
    out = tuple(tuple(c / m.values[p] if u.mode == "exact"
                      else c * math.exp(-m.log_values[p])
                      for p, c in enumerate(row))
                for row in u.coeffs)
    return BivariateSeries(out, u.vars, u.mode)


def formal_borel_inverse(u, m, var=None):
    """Coefficientwise multiplication by m(p); exact inverse of formal_borel."""
    axis = _check_variable(u, var)
    mul = (lambda c, p: c * m.values[p]) if u.mode == "exact" else \
        (lambda c, p: c * math.exp(m.log_values[p]))
    if isinstance(u, TruncatedSeries):
        return TruncatedSeries(tuple(mul(c, p) for p, c in enumerate(u.coeffs)),
                               u.var, u.mode)
    if axis == 0:
        return BivariateSeries(tuple(tuple(mul(c, p) for c in row)
                                     for p, row in enumerate(u.coeffs)),
                               u.vars, u.mode)
    return BivariateSeries(tuple(tuple(mul(c, p) for p, c in enumerate(row))
                                 for row in u.coeffs), u.vars, u.mode)


# ---------------------------------------------------------------------------
# germ / truncated-ring algebra


def _binary_check(a, b):
    if isinstance(a, TruncatedSeries) != isinstance(b, TruncatedSeries):
        raise ShapeError("cannot mix univariate and bivariate series")
    if a.mode != b.mode:
        raise ShapeError(f"arithmetic mode mismatch: {a.mode} vs {b.mode}")
    if isinstance(a, TruncatedSeries):
        if a.var != b.var:
            raise ShapeError(f"variable mismatch: {a.var!r} vs {b.var!r}")
    elif a.vars != b.vars:
        raise ShapeError(f"variable mismatch: {a.vars} vs {b.vars}")


def add_series(a, b):
    _binary_check(a, b)
    if isinstance(a, TruncatedSeries):
        N = min(a.N, b.N)
        return TruncatedSeries(tuple(a.coeffs[p] + b.coeffs[p] for p in range(N + 1)),
                               a.var, a.mode)
    N0 = min(a.N[0], b.N[0])
    N1 = min(a.N[1], b.N[1])
    return BivariateSeries(tuple(tuple(a.coeffs[n][j] + b.coeffs[n][j]
                                       for j in range(N1 + 1))
                                 for n in range(N0 + 1)), a.vars, a.mode)


def scale_series(a, c):
    c = _coerce(c, a.mode)
    if isinstance(a, TruncatedSeries):
        return TruncatedSeries(tuple(c * x for x in a.coeffs), a.var, a.mode)
    return BivariateSeries(tuple(tuple(c * x for x in row) for row in a.coeffs),
                           a.vars, a.mode)


def mul_series(a, b, N=None):
    """Truncated Cauchy product (univariate only)."""
    _binary_check(a, b)
    if not isinstance(a, TruncatedSeries):
        raise ShapeError("mul_series handles univariate series; use mul_bivariate")
    if N is None:
        N = min(a.N, b.N)
    z = _zero(a.mode)
    out = []
    for p in range(N + 1):
        acc = z
        for i in range(max(0, p - b.N), min(p, a.N) + 1):
            acc += a.coeffs[i] * b.coeffs[p - i]
        out.append(acc)
    return TruncatedSeries(tuple(out), a.var, a.mode)


def mul_bivariate(a, b, N=None):
    _binary_check(a, b)
    if N is None:
        N = (min(a.N[0], b.N[0]), min(a.N[1], b.N[1]))
    z = _zero(a.mode)
    out = [[z] * (N[1] + 1) for _ in range(N[0] + 1)]
    for n in range(min(a.N[0], N[0]) + 1):
        for j in range(min(a.N[1], N[1]) + 1):
            c = a.coeffs[n][j]
            if c == 0:
                continue
            for nn in range(min(b.N[0], N[0] - n) + 1):
                brow = b.coeffs[nn]
                orow = out[n + nn]
                for jj in range(min(b.N[1], N[1] - j) + 1):
                    orow[j + jj] += c * brow[jj]
    return BivariateSeries(tuple(tuple(r) for r in out), a.vars, a.mode)


def multiply_by_germ(a, g, N=None):
    """Multiply a series in the germ's variable by the germ's Taylor prefix."""
    if isinstance(a, TruncatedSeries):
        return mul_series(a, g.series, N=N if N is not None else a.N)
    gz = g.series
    z = _zero(a.mode)
    row = tuple(gz.coeffs[j] if j <= gz.N else z for j in range(a.N[1] + 1))
    germ_bi = BivariateSeries((row,), a.vars, a.mode)
    return mul_bivariate(a, germ_bi, N=a.N)


def invert_series(u, N=None):
    """Multiplicative inverse in the truncated ring; requires u[0] != 0."""
    if u.coeffs[0] == 0:
        raise DomainError("cannot invert: constant term a(0) must be nonzero")
    if N is None:
        N = u.N
    inv0 = (Fraction(1) / u.coeffs[0]) if u.mode == "exact" else 1.0 / u.coeffs[0]
    out = [inv0]
    for p in range(1, N + 1):
        acc = _zero(u.mode)
        for i in range(1, min(p, u.N) + 1):
            acc += u.coeffs[i] * out[p - i]
        out.append(-inv0 * acc)
    return TruncatedSeries(tuple(out), u.var, u.mode)


def invert_germ(g, N=None):
    return AnalyticGerm(invert_series(g.series, N=N), g.radius)


def germ_algebra(op, *args, **kwargs):
    """Dispatcher over the truncated-ring operations."""
    table = {"add": add_series, "mul": mul_series, "scale": scale_series,
             "multiply_by_germ": multiply_by_germ, "invert_germ": invert_series}
    if op not in table:
        raise DomainError(f"unknown germ op {op!r}")
    return table[op](*args, **kwargs)


def series_equal(a, b):
    """Exact coefficient equality on the common prefix."""
    if isinstance(a, TruncatedSeries):
        N = min(a.N, b.N)
        return all(a.coeffs[p] == b.coeffs[p] for p in range(N + 1))
    N0 = min(a.N[0], b.N[0])
    N1 = min(a.N[1], b.N[1])
    return all(a.coeffs[n][j] == b.coeffs[n][j]
               for n in range(N0 + 1) for j in range(N1 + 1))
