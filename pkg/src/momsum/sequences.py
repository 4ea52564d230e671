"""Moment sequences and strongly-regular-sequence diagnostics.

A moment sequence is a finite prefix m(0..N) of a positive sequence.  The
shipped kinds are the factorial powers (p!)^s, the gamma variants
Gamma(1+s*p), and the q-factorials [p]_q!.  Sequences carry both native-mode
values (floats or Fractions) and a log-value array used by everything that
would otherwise overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .errors import AccuracyError, DomainError, ShapeError

KINDS = ("factorial_power", "gamma_gevrey", "q_factorial", "explicit", "derived")

# Kinds whose log-values extend analytically to arbitrary index p.  Needed by
# estimate_omega: the growth function M(r) at r ~ 1e8 attains its sup far
# beyond any stored prefix.
_EXTENDABLE = ("factorial_power", "gamma_gevrey")


@dataclass(frozen=True, eq=False)
class MomentSequence:
    values: tuple
    kind: str
    params: dict
    N: int
    mode: str = "float"
    log_values: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.log_values is None:
            lv = np.array([_log_of(v) for v in self.values], dtype=float)
            object.__setattr__(self, "log_values", lv)

    def value(self, p):
        return self.values[p]

    def log_value(self, p):
        """log m(p), valid for any p >= 0 when the kind extends analytically."""
        if p <= self.N:
            return float(self.log_values[p])
        if self.kind in _EXTENDABLE:
            return _log_extended(self.kind, self.params, p)
        raise ShapeError(f"index {p} beyond truncation N={self.N} for kind {self.kind!r}")

    def ratio(self, p, q):
        """m(p)/m(q) in the native arithmetic mode."""
        if self.mode == "exact":
            return self.values[p] / self.values[q]
        return math.exp(self.log_values[p] - self.log_values[q])

    @property
    def extendable(self):
        return self.kind in _EXTENDABLE

    def __len__(self):
        return self.N + 1


class SRCheckReport(NamedTuple):
    lc_ok: bool
    mg_ok: bool
    A1: float
    snq_ok: bool
    A2: float
    N_checked: int
    notes: tuple


class AssociatedValue(NamedTuple):
    value: float
    argmax: int
    truncation_limited: bool


class OmegaEstimate(NamedTuple):
    value: float
    uncertainty: float


def _log_of(v):
    if isinstance(v, Fraction):
        # avoid float overflow for huge rationals
        return math.log(v.numerator) - math.log(v.denominator)
    return math.log(v)


def _log_extended(kind, params, p):
    if kind == "factorial_power":
        return float(params["s"]) * math.lgamma(p + 1)
    if kind == "gamma_gevrey":
        return math.lgamma(1 + float(params["s"]) * p)
    raise ShapeError(f"kind {kind!r} has no analytic extension")


def _q_bracket_factorial(q, N, exact):
    """[p]_q! for p = 0..N, with [l]_q = sum_{j<l} q^j."""
    vals = [Fraction(1) if exact else 1.0]
    bracket_running = Fraction(0) if exact else 0.0
    power = Fraction(1) if exact else 1.0
    for ell in range(1, N + 1):
        bracket_running += power          # [ell]_q = [ell-1]_q + q^(ell-1)
        power *= q
        vals.append(vals[-1] * bracket_running)
    return vals


def make_sequence(kind, N, s=None, q=None, values=None, mode="float"):
    """Construct a MomentSequence of the requested kind and length N+1."""
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    if kind not in KINDS:
        raise DomainError(f"unknown kind {kind!r}; expected one of {KINDS}")

    if kind in ("factorial_power", "gamma_gevrey"):
        if s is None or not s > 0:
            raise DomainError(f"kind {kind!r} requires s > 0, got {s}")
        params = {"s": s}
        if mode == "exact":
            s_frac = Fraction(s)
            if s_frac.denominator != 1:
                raise DomainError(
                    "exact mode requires an integer exponent s "
                    f"(got {s}); non-integer powers of factorials are irrational"
                )
            si = int(s_frac)
            if kind == "factorial_power":
                vals = [Fraction(math.factorial(p)) ** si for p in range(N + 1)]
            else:
                vals = [Fraction(math.factorial(si * p)) for p in range(N + 1)]
        else:
            if kind == "factorial_power":
                lv = [s * math.lgamma(p + 1) for p in range(N + 1)]
            else:
                lv = [math.lgamma(1 + s * p) for p in range(N + 1)]
            vals = [math.exp(x) if x < 700 else math.inf for x in lv]
            seq = MomentSequence(tuple(vals), kind, params, N, "float",
                                 np.array(lv, dtype=float))
            return seq
        return MomentSequence(tuple(vals), kind, params, N, mode)

    if kind == "q_factorial":
        if q is None or not (0 < q < 1):
            raise DomainError(f"q_factorial requires q in (0,1), got {q}")
        if mode == "exact":
            vals = _q_bracket_factorial(Fraction(q), N, exact=True)
        else:
            vals = _q_bracket_factorial(float(q), N, exact=False)
        return MomentSequence(tuple(vals), kind, {"q": q}, N, mode)

    if kind in ("explicit", "derived"):
        if values is None:
            raise DomainError(f"kind {kind!r} requires explicit values")
        vals = tuple(values)
        if len(vals) != N + 1:
            raise ShapeError(f"need N+1={N + 1} values, got {len(vals)}")
        if any((v <= 0) for v in vals):
            raise DomainError("all moment values must be strictly positive")
        return MomentSequence(vals, kind, {}, N, mode)

    raise DomainError(f"unhandled kind {kind!r}")


def _combined_kind(op, a, b=None, s=None):
    """Propagate analytic kind metadata through combine where possible."""
    if op == "power" and a.kind == "factorial_power":
        return "factorial_power", {"s": a.params["s"] * s}
    if op in ("product", "quotient") and \
            a.kind == "factorial_power" and b.kind == "factorial_power":
        sa, sb = a.params["s"], b.params["s"]
        s_new = sa + sb if op == "product" else sa - sb
        if s_new > 0:
            return "factorial_power", {"s": s_new}
    return "derived", {}


def combine(op, a, b=None, s=None):
    """Elementwise power/product/quotient of moment sequences."""
    if op == "power":
        if s is None:
            raise DomainError("power requires the exponent s")
        kind, params = _combined_kind("power", a, s=s)
        if a.mode == "exact" and Fraction(s).denominator == 1 and s > 0:
            vals = tuple(v ** int(s) for v in a.values)
            mode = "exact"
        else:
            vals = None
            mode = "float"
        lv = a.log_values * float(s)
        if vals is None:
            vals = tuple(math.exp(x) if x < 700 else math.inf for x in lv)
        return MomentSequence(vals, kind, params, a.N, mode, np.asarray(lv, float))

    if op not in ("product", "quotient"):
        raise DomainError(f"unknown combine op {op!r}")
    if b is None:
        raise DomainError(f"{op} requires a second sequence")
    if a.N != b.N:
        raise ShapeError(f"truncation mismatch: {a.N} vs {b.N}")
    kind, params = _combined_kind(op, a, b)
    mode = "exact" if (a.mode == "exact" and b.mode == "exact") else "float"
    if op == "product":
        lv = a.log_values + b.log_values
    else:
        lv = a.log_values - b.log_values
    if mode == "exact":
        if op == "product":
            vals = tuple(x * y for x, y in zip(a.values, b.values))
        else:
            vals = tuple(Fraction(x) / Fraction(y) for x, y in zip(a.values, b.values))
    else:
        vals = tuple(math.exp(x) if x < 700 else math.inf for x in lv)
    return MomentSequence(vals, kind, params, a.N, mode, np.asarray(lv, float))


# ---------------------------------------------------------------------------
# diagnostics


def check_strongly_regular(seq):
    """Check (lc), (mg) exactly on the prefix and (snq) heuristically."""
    if seq.N < 10:
        raise DomainError(f"check requires N >= 10, got N={seq.N}")
    N = seq.N
    notes = []
    lv = seq.log_values

    if seq.mode == "exact":
        lc_ok = all(seq.values[p] ** 2 <= seq.values[p - 1] * seq.values[p + 1]
                    for p in range(1, N))
    else:
        lc_ok = bool(np.all(2 * lv[1:-1] <= lv[:-2] + lv[2:] + 1e-12))

    # moderate growth witness: smallest A1 with m(p+q) <= A1^(p+q) m(p) m(q)
    worst = 0.0
    for p in range(N + 1):
        for qq in range(N + 1 - p):
            if p + qq == 0:
                continue
            worst = max(worst, (lv[p + qq] - lv[p] - lv[qq]) / (p + qq))
    A1 = math.exp(worst)
    mg_ok = math.isfinite(A1)

    # snq heuristic on the tail terms a_q = m(q) / ((q+1) m(q+1)).
    # Geometric decay passes outright; otherwise classify the power-law tail
    # slope: summable tails (slope well below -1) pass, c/q tails fail.
    qs = np.arange(0, N)
    a = np.exp(lv[:-1] - lv[1:]) / (qs + 1)
    tail = slice(N // 2, N)
    logq = np.log(qs[tail] + 1.0)
    loga = np.log(a[tail])
    geo_slope, geo_inter = np.polyfit(qs[tail], loga, 1)
    pow_slope, pow_inter = np.polyfit(logq, loga, 1)
    geo_resid = float(np.max(np.abs(loga - (geo_inter + geo_slope * qs[tail]))))
    pow_resid = float(np.max(np.abs(loga - (pow_inter + pow_slope * logq))))
    if math.exp(geo_slope) < 0.95 and geo_resid <= pow_resid:
        snq_ok = True
        notes.append(f"snq: geometric tail decay, ratio {math.exp(geo_slope):.3f}")
    elif pow_slope <= -1.25:
        snq_ok = True
        notes.append(f"snq: summable power-law tail, slope {pow_slope:.3f}")
    elif pow_slope >= -1.1:
        snq_ok = False
        notes.append(f"snq: non-summable tail (~c/q), slope {pow_slope:.3f}")
    else:
        snq_ok = False
        notes.append(f"snq: inconclusive tail slope {pow_slope:.3f}")

    # witness A2 over the truncated partial sums (diagnostic only)
    ratios = np.exp(lv[:-1] - lv[1:])           # m(p)/m(p+1)
    tails = np.cumsum(a[::-1])[::-1]            # sum_{q>=p} a_q over the prefix
    A2 = float(np.max(tails / ratios))
    for pp in (0, N // 4, N // 2):
        notes.append(f"snq partial sum from p={pp}: {tails[pp]:.6g}")

    return SRCheckReport(bool(lc_ok), bool(mg_ok), float(A1), bool(snq_ok),
                         A2, N, tuple(notes))


def associated_function(seq, t):
    """M(t) = sup_p log(t^p / m(p)) over the stored prefix, clamped at 0."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if t == 0:
        return AssociatedValue(0.0, 0, False)
    logt = math.log(t)
    vals = np.arange(seq.N + 1) * logt - seq.log_values
    p_star = int(np.argmax(vals))
    value = max(0.0, float(vals[p_star]))
    return AssociatedValue(value, p_star, p_star == seq.N)


def _log_M_extended(seq, t):
    """M(t) with the index sup taken over the analytic extension of the kind."""
    if t <= 0:
        return 0.0
    logt = math.log(t)
    s = float(seq.params["s"])
    # stationary index from psi(p+1) ~ log p: p* ~ exp(log t / s)
    if seq.kind == "factorial_power":
        p_guess = math.exp(logt / s)
    else:  # gamma_gevrey
        p_guess = (math.exp(logt / s) - 1.0) / s
    p0 = max(0, int(p_guess))
    best = 0.0
    for p in range(max(0, p0 - 3), p0 + 4):
        best = max(best, p * logt - _log_extended(seq.kind, seq.params, p))
    return best


def associated_function_any(seq, t):
    """M(t) preferring the analytic extension when the kind allows it."""
    if seq.extendable:
        return _log_M_extended(seq, t)
    return associated_function(seq, t).value


def estimate_omega(seq, r_lo=1e1, r_hi=1e8, n_grid=30):
    """Growth index omega(M) from log M(r)/log r extrapolated in 1/log r."""
    report = check_strongly_regular(seq) if seq.N >= 10 else None
    if report is not None and not report.lc_ok:
        raise DomainError("estimate_omega requires a log-convex sequence")
    rs = np.geomspace(r_lo, r_hi, n_grid)
    ys = []
    limited = 0
    for r in rs:
        if seq.extendable:
            m_val = _log_M_extended(seq, r)
        else:
            av = associated_function(seq, r)
            limited += av.truncation_limited
            m_val = av.value
        if m_val <= 0:
            limited += 1
            ys.append(np.nan)
            continue
        ys.append(math.log(m_val) / math.log(r))
    if limited >= n_grid // 2:
        raise AccuracyError(
            "growth-function sup is truncation-limited on most of the grid; "
            "increase the sequence truncation N")
    ys = np.asarray(ys)
    xs = 1.0 / np.log(rs)
    good = np.isfinite(ys)
    # extrapolate from the large-r half, where the curvature of
    # log M(r)/log r in 1/log r has died out
    good[: n_grid // 2] = False
    coeffs, residuals, *_ = np.polyfit(xs[good], ys[good], 1, full=True)
    intercept = coeffs[1]
    if intercept <= 0:
        raise AccuracyError("nonpositive extrapolated limsup; sequence grows too slowly")
    omega = 1.0 / intercept
    spread = abs(1.0 / ys[good][-1] - omega) if ys[good][-1] > 0 else math.inf
    resid = math.sqrt(residuals[0] / good.sum()) if len(residuals) else 0.0
    return OmegaEstimate(float(omega), float(spread + resid))


def check_equivalence(a, b):
    """Test m_a ~ m_b up to C*D^p factors; returns (ok, C, D, Ctilde, Dtilde).

    Fits log(b/a) by an affine law on the first half of the prefix and
    declares equivalence when the extrapolation stays within 0.5 on the
    second half (bounded log-residual drift).
    """
    if a.N != b.N:
        raise ShapeError(f"truncation mismatch: {a.N} vs {b.N}")
    if a.N < 10:
        raise DomainError(f"check requires common N >= 10, got {a.N}")
    x = b.log_values - a.log_values
    ps = np.arange(a.N + 1, dtype=float)
    # affine fit of log(b/a); small residuals mean the ratio is sandwiched
    # between two geometric envelopes (slowly varying corrections such as a
    # log p drift are absorbed into the envelopes)
    lo = min(5, a.N // 4)
    slope_f, inter_f = np.polyfit(ps[lo:], x[lo:], 1)
    drift = np.max(np.abs(x[lo:] - (inter_f + slope_f * ps[lo:])))
    ok = bool(drift <= 1.0)
    slope, inter = np.polyfit(ps, x, 1)
    resid = x - (inter + slope * ps)
    D = Dt = math.exp(slope)
    C = math.exp(inter + float(np.min(resid)))
    Ct = math.exp(inter + float(np.max(resid)))
    return ok, C, D, Ct, Dt


def rho_factor(seq, s, t_points=200, rho_cap=1e3):
    """Smallest grid rho >= 1 with M(t) >= s*M(t/rho) on a sampled t-grid."""
    if s < 1:
        raise DomainError(f"rho_factor requires s >= 1, got {s}")
    if s == 1:
        return 1.0
    # keep t below the truncation-limited regime of the stored prefix
    t_max = 0.9 * math.exp(seq.log_values[seq.N] - seq.log_values[seq.N - 1])
    ts = np.geomspace(1e-2, t_max, t_points)
    m_t = np.array([associated_function_any(seq, t) for t in ts])
    for rho in np.geomspace(1.0, rho_cap, 400):
        m_scaled = np.array([associated_function_any(seq, t / rho) for t in ts])
        if np.all(m_t + 1e-12 >= s * m_scaled):
            return float(rho)
    raise AccuracyError(f"no rho <= {rho_cap} satisfies the scaling bound")
