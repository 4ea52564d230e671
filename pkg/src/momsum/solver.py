"""Formal solutions of the singularly perturbed moment differential equation

    eps^k a(z) D_{m2,z}^p w - w = f(z, eps)          (perturbed form)

and of its Borel-plane companion Cauchy problem

    (D_{m1,t}^k - a(z) D_{m2,z}^p) u = f(t, z),  D_{m1,t}^j u(0,z) = phi_j,

where D_{m,x} is the moment derivative attached to the sequence m.  Both are
solved by direct coefficient recursion; the Cauchy problem additionally by
the contractive fixed-point series.  Each z-derivative loses p z-orders, so
solutions carry an explicit resolved frontier and refuse to report
coefficients beyond it.

Inputs a and f are interpreted exactly through their stored prefixes
(coefficients beyond the stored truncation are zero).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ShapeError
from .sequences import estimate_omega
from .series import (BivariateSeries, TruncatedSeries, _seq_ratio, _zero,
                     formal_borel, invert_series)

_DEFAULT_ORDER = {"exact": 30, "float": 60}


def _omega_of(seq):
    if seq.kind in ("factorial_power", "gamma_gevrey"):
        return float(seq.params["s"])
    return estimate_omega(seq).value


def _require_mode(*objs):
    modes = {o.mode for o in objs}
    if len(modes) != 1:
        raise ShapeError(f"mixed arithmetic modes {sorted(modes)}")
    return modes.pop()


def _coeff(rows, n, j):
    """Entry (n, j) of stored rows, zero outside the stored rectangle."""
    if n >= len(rows) or n < 0:
        return 0
    row = rows[n]
    return row[j] if 0 <= j < len(row) else 0


def _row_of(obj, n, N_z, mode):
    """Row n of a bivariate series, padded with mode zeros to length N_z+1."""
    z = _zero(mode)
    out = []
    for j in range(N_z + 1):
        c = _coeff(obj.coeffs, n, j)
        out.append(c if c != 0 else z)
    return out


def _row_mderiv(row, m, p, mode):
    """Moment z-derivative of a resolved row; loses p orders."""
    L = len(row) - p
    if L <= 0:
        return []
    return [row[j + p] * _seq_ratio(m, j + p, j, mode) for j in range(L)]


def _row_mul(row, a_coeffs, mode):
    """Product with the germ prefix, truncated to the row's resolved length."""
    z = _zero(mode)
    out = [z] * len(row)
    for i, ac in enumerate(a_coeffs):
        if i >= len(row):
            break
        if ac == 0:
            continue
        for j in range(len(row) - i):
            out[i + j] += ac * row[j]
    return out


@dataclass(frozen=True, eq=False)
class SingularlyPerturbedProblem:
    k: int
    p: int
    m1: object                 # moments governing the eps-Borel level
    m2: object                 # moments of the z-derivative
    baseM: object
    s1: float
    s2: float
    a: object                  # AnalyticGerm, a(0) != 0
    f: object                  # BivariateSeries in (eps, z)
    N_eps: int = None
    N_z: int = None

    def __post_init__(self):
        if not (isinstance(self.k, int) and isinstance(self.p, int)
                and 1 <= self.k < self.p):
            raise DomainError(f"need integers 1 <= k < p, got k={self.k}, p={self.p}")
        if not (self.s1 > 0 and self.s2 > 0):
            raise DomainError("s1 and s2 must be positive")
        if not self.s2 * self.p > self.s1 * self.k:
            raise DomainError(
                f"need s2*p > s1*k, got {self.s2}*{self.p} <= {self.s1}*{self.k}")
        lvl = _omega_of(self.baseM) * self.s2 * self.p / self.k
        if lvl > 2 + 1e-9:
            raise DomainError(
                f"summability level omega(M)*s2*p/k = {lvl:.4g} exceeds the "
                "admissible bound 2")
        if self.a.series.coeffs[0] == 0:
            raise DomainError("a(0) must be nonzero")
        if not isinstance(self.f, BivariateSeries):
            raise ShapeError("f must be a BivariateSeries in (eps, z)")
        mode = _require_mode(self.a.series, self.f)
        if self.N_eps is None:
            object.__setattr__(self, "N_eps", _DEFAULT_ORDER[mode])
        if self.N_z is None:
            object.__setattr__(self, "N_z",
                               self.p * (self.N_eps // self.k) + 10)

    @property
    def mode(self):
        return self.f.mode


@dataclass(frozen=True, eq=False)
class CauchyProblem:
    k: int
    p: int
    m1: object
    m2: object
    a: object
    f: object                  # BivariateSeries in (t, z)
    phi: tuple                 # k AnalyticGerms (initial moment derivatives)
    N_t: int = None
    N_z: int = None

    def __post_init__(self):
        if not (isinstance(self.k, int) and isinstance(self.p, int)
                and 1 <= self.k < self.p):
            raise DomainError(f"need integers 1 <= k < p, got k={self.k}, p={self.p}")
        if self.a.series.coeffs[0] == 0:
            raise DomainError("a(0) must be nonzero")
        if len(self.phi) != self.k:
            raise ShapeError(f"need k={self.k} initial germs, got {len(self.phi)}")
        mode = _require_mode(self.a.series, self.f,
                             *[g.series for g in self.phi])
        if self.N_t is None:
            object.__setattr__(self, "N_t", _DEFAULT_ORDER[mode])
        if self.N_z is None:
            object.__setattr__(self, "N_z",
                               self.p * (self.N_t // self.k) + 10)

    @property
    def mode(self):
        return self.f.mode


@dataclass(frozen=True, eq=False)
class FormalSolution:
    series: BivariateSeries
    frontier: tuple            # resolved z-order per row; -1 = nothing resolved
    tag: str
    traces: tuple = None
    residual_norm: float = None

    def coeff(self, n, j):
        if n >= len(self.frontier) or j > self.frontier[n]:
            raise ShapeError(
                f"coefficient ({n},{j}) beyond the resolved frontier "
                f"{self.frontier}")
        return self.series.coeffs[n][j]

    def with_residual(self, r):
        return FormalSolution(self.series, self.frontier, self.tag,
                              self.traces, r)


def _pack(rows, frontier, vars, mode, N_z):
    z = _zero(mode)
    padded = tuple(tuple(row[j] if j < len(row) else z for j in range(N_z + 1))
                   for row in rows)
    return BivariateSeries(padded, vars, mode)


# ---------------------------------------------------------------------------
# main equation


def solve_main(prob):
    """Unique formal solution w = sum_n w_n(z) eps^n of the perturbed equation.

    Recursion: w_n = a * D_{m2,z}^p w_{n-k} - f_n for n >= k, w_n = -f_n
    otherwise (coefficient matching in eps of eps^k a D^p w - w = f).
    """
    mode = prob.mode
    a_coeffs = prob.a.series.coeffs
    rows, frontier = [], []
    for n in range(prob.N_eps + 1):
        f_n = _row_of(prob.f, n, prob.N_z, mode)
        if n < prob.k:
            rows.append([-c for c in f_n])
            frontier.append(prob.N_z)
            continue
        prev = rows[n - prob.k][: frontier[n - prob.k] + 1]
        d = _row_mderiv(prev, prob.m2, prob.p, mode)
        ad = _row_mul(d, a_coeffs, mode)
        rows.append([ad[j] - f_n[j] for j in range(len(ad))])
        frontier.append(frontier[n - prob.k] - prob.p)
    series = _pack(rows, frontier, ("eps", "z"), mode, prob.N_z)
    sol = FormalSolution(series, tuple(frontier), "recursion")
    return sol.with_residual(verify_residual(sol, prob))


def extract_traces(sol, prob, normalized=False):
    """psi_j = j-th moment z-derivative of the solution at z = 0, j < p.

    Default scaling is m2(j)/m2(0) * (z^j coefficient), i.e. the literal
    initial-condition series; normalized=True returns the raw z^j coefficient
    series used for Taylor reconstruction.
    """
    mode = prob.mode
    m2 = prob.m2
    var = sol.series.vars[0]
    out = []
    for j in range(prob.p):
        n_max = -1
        for n, r in enumerate(sol.frontier):
            if r >= j:
                n_max = n
            else:
                break
        if n_max < 0:
            raise ShapeError(
                f"trace {j} unresolved everywhere; resolved frontier "
                f"{sol.frontier}")
        ratio = 1 if normalized else _seq_ratio(m2, j, 0, mode)
        coeffs = tuple(sol.series.coeffs[n][j] * ratio for n in range(n_max + 1))
        out.append(TruncatedSeries(coeffs, var, mode))
    return tuple(out)


def borel_in_epsilon(u, k, m1):
    """Formal Borel transform in the perturbation variable of u = eps^k * w.

    Requires divisibility by eps^k; combined with a k-fold moment derivative
    this realizes the eps^{-k} shift identity used to pass to the companion
    Cauchy problem.
    """
    if not isinstance(u, BivariateSeries):
        raise ShapeError("borel_in_epsilon expects a BivariateSeries")
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    for n in range(min(k, u.N[0] + 1)):
        if any(c != 0 for c in u.coeffs[n]):
            raise DomainError(
                f"input is not divisible by {u.vars[0]}^{k}: row {n} is nonzero")
    return formal_borel(u, m1, var=u.vars[0])


# ---------------------------------------------------------------------------
# companion Cauchy problem


def solve_cauchy(prob):
    """Unique formal solution u = sum_n u_n(z) t^n of the Cauchy problem."""
    mode = prob.mode
    a_coeffs = prob.a.series.coeffs
    rows, frontier = [], []
    for j in range(prob.k):
        g = prob.phi[j].series
        row = [g.coeffs[i] if i <= g.N else _zero(mode)
               for i in range(prob.N_z + 1)]
        scale = _seq_ratio(prob.m1, 0, j, mode)
        rows.append([scale * c for c in row])
        frontier.append(prob.N_z)
    for n in range(prob.N_t + 1 - prob.k):
        f_n = _row_of(prob.f, n, prob.N_z, mode)
        prev = rows[n][: frontier[n] + 1]
        d = _row_mderiv(prev, prob.m2, prob.p, mode)
        ad = _row_mul(d, a_coeffs, mode)
        scale = _seq_ratio(prob.m1, n, n + prob.k, mode)
        rows.append([scale * (ad[j] + f_n[j]) for j in range(len(ad))])
        frontier.append(frontier[n] - prob.p)
    series = _pack(rows, frontier, prob.f.vars, mode, prob.N_z)
    sol = FormalSolution(series, tuple(frontier), "recursion")
    return sol.with_residual(verify_residual(sol, prob))


class _ColGrid:
    """Dense (t, z) coefficient grid with a per-z-column resolved t-order."""

    def __init__(self, N_t, N_z, mode):
        self.N_t, self.N_z, self.mode = N_t, N_z, mode
        z = _zero(mode)
        self.vals = [[z] * (N_z + 1) for _ in range(N_t + 1)]
        self.colres = [N_t] * (N_z + 1)

    def t_mderiv(self, m1, k):
        out = _ColGrid(self.N_t, self.N_z, self.mode)
        for n in range(self.N_t + 1 - k):
            r = _seq_ratio(m1, n + k, n, self.mode)
            for j in range(self.N_z + 1):
                out.vals[n][j] = self.vals[n + k][j] * r
        out.colres = [max(c - k, -1) for c in self.colres]
        return out

    def z_antideriv(self, m2, p):
        out = _ColGrid(self.N_t, self.N_z, self.mode)
        for j in range(p, self.N_z + 1):
            r = _seq_ratio(m2, j - p, j, self.mode)
            for n in range(self.N_t + 1):
                out.vals[n][j] = self.vals[n][j - p] * r
            out.colres[j] = self.colres[j - p]
        return out

    def mul_prefix(self, coeffs):
        """Multiply every t-row by the z-polynomial prefix coeffs."""
        out = _ColGrid(self.N_t, self.N_z, self.mode)
        for n in range(self.N_t + 1):
            row = self.vals[n]
            orow = out.vals[n]
            for i, c in enumerate(coeffs):
                if i > self.N_z or c == 0:
                    continue
                for j in range(self.N_z + 1 - i):
                    orow[i + j] += c * row[j]
        run = self.N_t
        for j in range(self.N_z + 1):
            run = min(run, self.colres[j])
            out.colres[j] = run
        return out

    def accumulate(self, other):
        for n in range(self.N_t + 1):
            for j in range(self.N_z + 1):
                self.vals[n][j] += other.vals[n][j]
        self.colres = [min(a, b) for a, b in zip(self.colres, other.colres)]


def fixed_point_solution(prob, Q, traces=None):
    """Fixed-point series for W = D_{m2,z}^p u, summed through Q iterations.

    Seed: W_0 = a^{-1} (D_{m1,t}^k prefix - f) with prefix = sum_{j<p}
    psi_j(t) z^j; iteration W_q = a^{-1} D_{m1,t}^k D_{m2,z}^{-p} W_{q-1}.
    Each iteration raises the resolved z-order by p and costs k t-orders.
    Traces default to the z-prefix of the recursion solution.
    """
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    mode = prob.mode
    if traces is None:
        base = solve_cauchy(prob)
        traces = extract_traces(base, prob, normalized=True)
    a_inv = invert_series(prob.a.series, N=prob.N_z).coeffs

    prefix = _ColGrid(prob.N_t, prob.N_z, mode)
    for j, tr in enumerate(traces[: prob.p]):
        for n in range(min(tr.N, prob.N_t) + 1):
            prefix.vals[n][j] = tr.coeffs[n]
        prefix.colres[j] = min(tr.N, prob.N_t)

    g = prefix.t_mderiv(prob.m1, prob.k)
    for n in range(min(prob.f.N[0], prob.N_t) + 1):
        for j in range(min(prob.f.N[1], prob.N_z) + 1):
            g.vals[n][j] -= prob.f.coeffs[n][j]
    total = g.mul_prefix(a_inv)

    term = total
    for _ in range(Q):
        term = term.z_antideriv(prob.m2, prob.p) \
                   .t_mderiv(prob.m1, prob.k) \
                   .mul_prefix(a_inv)
        total.accumulate(term)

    frontier = []
    for n in range(prob.N_t + 1):
        j_max = -1
        for j in range(prob.N_z + 1):
            if total.colres[j] >= n and j // prob.p <= Q:
                j_max = j
            else:
                break
        frontier.append(j_max)
    series = BivariateSeries(tuple(tuple(r) for r in total.vals),
                             prob.f.vars, mode)
    return FormalSolution(series, tuple(frontier), "fixed_point")


# ---------------------------------------------------------------------------
# residual verification


def _max_abs(x):
    return max((abs(complex(c)) for c in x), default=0.0)


def verify_residual(sol, prob):
    """Max |defining equation, left minus right| over verifiable coefficients."""
    mode = prob.mode
    a_coeffs = prob.a.series.coeffs
    resid = []
    if isinstance(prob, SingularlyPerturbedProblem):
        for n, r_n in enumerate(sol.frontier):
            if r_n < 0:
                continue
            f_n = _row_of(prob.f, n, prob.N_z, mode)
            if n < prob.k:
                resid.extend(sol.series.coeffs[n][j] + f_n[j]
                             for j in range(r_n + 1))
                continue
            prev = list(sol.series.coeffs[n - prob.k]
                        [: sol.frontier[n - prob.k] + 1])
            ad = _row_mul(_row_mderiv(prev, prob.m2, prob.p, mode),
                          a_coeffs, mode)
            resid.extend(ad[j] - sol.series.coeffs[n][j] - f_n[j]
                         for j in range(min(r_n, len(ad) - 1) + 1))
        return _max_abs(resid)

    if isinstance(prob, CauchyProblem):
        for j in range(prob.k):
            g = prob.phi[j].series
            scale = _seq_ratio(prob.m1, 0, j, mode)
            for i in range(min(sol.frontier[j], prob.N_z) + 1):
                want = g.coeffs[i] if i <= g.N else _zero(mode)
                resid.append(sol.series.coeffs[j][i] - scale * want)
        for n in range(len(sol.frontier) - prob.k):
            r_next = sol.frontier[n + prob.k]
            if r_next < 0 or sol.frontier[n] < 0:
                continue
            f_n = _row_of(prob.f, n, prob.N_z, mode)
            prev = list(sol.series.coeffs[n][: sol.frontier[n] + 1])
            ad = _row_mul(_row_mderiv(prev, prob.m2, prob.p, mode),
                          a_coeffs, mode)
            scale = _seq_ratio(prob.m1, n + prob.k, n, mode)
            resid.extend(scale * sol.series.coeffs[n + prob.k][j]
                         - ad[j] - f_n[j]
                         for j in range(min(r_next, len(ad) - 1) + 1))
        return _max_abs(resid)

    raise DomainError(f"unknown problem type {type(prob).__name__}")
