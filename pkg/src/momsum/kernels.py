"""Gevrey-family summability kernels.

For order s the flat kernel is e(z) = (1/s) z^(1/s) exp(-z^(1/s)) with moment
function m_e(x) = Gamma(1+s*x); the dual entire function is the
Mittag-Leffler sum E(z) = sum_p z^p / Gamma(1+s*p).

All ray integrals substitute t = v^s so that kernel decay becomes exactly
exponential in v; powers along a ray are taken with one principal logarithm
of the ray direction, which keeps the substituted integrand analytic in v.
"""

from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
from scipy.special import gamma as _gamma, rgamma as _rgamma

from .errors import AccuracyError, DomainError
from .quadrature import ray_integral
from .sequences import associated_function_any, make_sequence, rho_factor

_ASYMP_TERMS = 60


def _wrap_angle(a):
    """Reduce an angle to (-pi, pi]."""
    a = math.fmod(a + math.pi, 2 * math.pi)
    if a <= 0:
        a += 2 * math.pi
    return a - math.pi


def _ray_root(w, s):
    """exp(log(w)/s) with the principal logarithm."""
    return cmath.exp(cmath.log(w) / s)


class GevreyKernel:
    """Strong kernel pair (e, E) of Gevrey order s.

    s = 2 sits on the boundary of kernel existence (the opposite sector for
    the algebraic decay of E is empty); the evaluators and Laplace quadrature
    remain well defined there and are needed for level-2 single sums.
    """

    def __init__(self, s):
        if not 0 < s <= 2:
            raise DomainError(
                f"Gevrey order must satisfy 0 < s <= 2 (kernel existence "
                f"requires a growth index below 2), got {s}")
        self.s = float(s)
        self.boundary = (s == 2)
        # series coefficients 1/Gamma(1+s*p), zero once Gamma overflows
        coeffs = _rgamma(1.0 + self.s * np.arange(0, 420))
        nz = np.nonzero(coeffs)[0]
        self._series_coeffs = coeffs[: nz[-1] + 1]
        self._log_coeffs = np.full_like(self._series_coeffs, -np.inf)
        pos = self._series_coeffs > 0
        self._log_coeffs[pos] = np.log(self._series_coeffs[pos])
        # asymptotic algebraic-tail coefficients -1/Gamma(1-s*k); the tail is
        # a divergent asymptotic series, summed to its smallest term
        ks = np.arange(1, _ASYMP_TERMS + 1)
        self._tail_coeffs = -_rgamma(1.0 - self.s * ks)
        # smallest |z| where the optimally truncated asymptotics reach 1e-9
        # relative accuracy even against the algebraic background
        self._series_radius = min(600.0, 650.0 ** self.s, 36.0 ** self.s)
        self._fit_cache = {}

    # -- elementary evaluators ------------------------------------------------

    @property
    def order(self):
        return self.s

    def moment(self, x):
        """m_e(x) = Gamma(1 + s*x); defined for Re(x) > -1/s."""
        xc = complex(x)
        if xc.real <= -1.0 / self.s:
            raise DomainError(f"moment function needs Re(x) > {-1 / self.s:.3g}")
        val = _gamma(1.0 + self.s * xc)
        if xc.imag == 0:
            return float(val.real) if isinstance(val, complex) else float(val)
        return complex(val)

    def e(self, z):
        """Flat kernel on the sector |arg z| < s*pi."""
        zc = complex(z)
        if zc == 0:
            return 0.0 + 0.0j
        if abs(cmath.phase(zc)) >= self.s * math.pi:
            raise DomainError(
                f"e is defined on |arg z| < s*pi = {self.s * math.pi:.4g}, "
                f"got arg z = {cmath.phase(zc):.4g}")
        w = _ray_root(zc, self.s)
        return (w / self.s) * cmath.exp(-w)

    def _log_abs_e(self, z):
        """log|e(z)| without underflow (e is flat: |e| ~ exp(-|z|^(1/s)))."""
        zc = complex(z)
        w = _ray_root(zc, self.s)
        return math.log(abs(w) / self.s) - w.real

    def E(self, z):
        """Entire dual kernel, 1e-8 relative accuracy target."""
        return complex(self.E_vec(np.asarray([z], dtype=complex))[0])

    def E_vec(self, z):
        z = np.asarray(z, dtype=complex)
        if self.s == 1.0:
            return np.exp(z)
        out = np.empty_like(z)
        small = np.abs(z) <= self._series_radius
        if small.any():
            out[small] = self._E_series(z[small])
        if (~small).any():
            out[~small] = self._E_asymptotic(z[~small])
        return out

    def _E_series(self, z):
        vals = np.polynomial.polynomial.polyval(z, self._series_coeffs)
        # cancellation guard: compare the largest series term with the result
        absz = np.abs(z)
        with np.errstate(divide="ignore"):
            logz = np.where(absz > 0, np.log(absz), -745.0)
        log_max_term = np.max(
            np.arange(len(self._series_coeffs))[:, None] * logz[None, :]
            + self._log_coeffs[:, None], axis=0)
        bad = log_max_term - np.log(np.maximum(np.abs(vals), 1e-300)) > 12.0
        if bad.any():
            vals = vals.copy()
            for i in np.nonzero(bad)[0]:
                vals[i] = self._E_mp(z[i])
        return vals

    def _E_mp(self, z):
        """High-precision series fallback for cancellation-heavy arguments."""
        zc = complex(z)
        extra = int(0.45 * abs(zc) ** (1.0 / self.s)) + 10
        with mpmath.workdps(25 + extra):
            zm = mpmath.mpc(zc)
            sm = mpmath.mpf(self.s)       # keep s*p exact at working precision
            total = mpmath.mpf(0)
            term_scale = mpmath.mpf(0)
            p = 0
            while True:
                term = zm ** p / mpmath.gamma(1 + sm * p)
                total += term
                term_scale = max(term_scale, abs(term))
                if p > 4 and abs(term) < mpmath.mpf(10) ** (-(20 + extra)) * term_scale:
                    break
                p += 1
                if p > 20000:
                    raise AccuracyError("Mittag-Leffler series did not converge")
            return complex(total)

    def _E_asymptotic(self, z):
        return np.asarray([self._E_asym_scalar(complex(zi)) for zi in z],
                          dtype=complex)

    def _E_asym_scalar(self, z):
        s = self.s
        inv = 1.0 / z
        total = 0j
        power = inv
        prev = math.inf
        for c in self._tail_coeffs:
            term = c * power
            power *= inv
            if c == 0.0:                   # 1/Gamma pole: term absent
                continue
            if abs(term) >= prev:          # divergent tail: stop at minimum
                break
            total += term
            prev = abs(term)
        # exponential branches present within |arg z + 2*pi*n| <= 3*s*pi/4
        base = cmath.phase(z)
        log_r = math.log(abs(z))
        for n in (-1, 0, 1):
            ang = base + 2.0 * math.pi * n
            if abs(ang) <= 0.75 * s * math.pi:
                w = cmath.exp(complex(log_r, ang) / s)
                try:
                    total += cmath.exp(w) / s
                except OverflowError:
                    return complex(math.inf, math.inf)
        return total

    # -- fitted metadata -------------------------------------------------------

    def smallz_slope(self, t_lo=1e-6, t_hi=1e-3):
        """log-log slope of |e| near 0 on the positive axis (~ alpha = 1/s)."""
        ts = np.geomspace(t_lo, t_hi, 40)
        ys = np.array([self._log_abs_e(t) for t in ts])
        return float(np.polyfit(np.log(ts), ys, 1)[0])

    def flatness_fit(self, phi=0.0, t_hi=1e3, c_cap=100.0):
        """Fit (C, K) with |e(t e^{i phi})| <= C exp(-M(t/K)), M from (p!)^s."""
        key = ("flat", round(phi, 12))
        if key in self._fit_cache:
            return self._fit_cache[key]
        base = make_sequence("factorial_power", 40, s=self.s)
        ts = np.geomspace(1.0, t_hi, 80)
        loge = np.array([self._log_abs_e(t * cmath.exp(1j * phi)) for t in ts])
        best = None
        for K in np.geomspace(0.05, 50.0, 300):
            m_vals = np.array([associated_function_any(base, t / K) for t in ts])
            logC = float(np.max(loge + m_vals))
            if logC <= math.log(c_cap):
                best = (math.exp(logC), float(K))
                break
        if best is None:
            raise AccuracyError("no feasible flatness constants on the grid")
        self._fit_cache[key] = best
        return best

    def opposite_decay_fit(self, r_lo=1.0, r_hi=30.0):
        """Fit c2 with |E(-r)| <= c2 / r on the negative real axis."""
        if self.boundary:
            raise DomainError("algebraic E-decay is vacuous at the boundary order 2")
        rs = np.geomspace(r_lo, r_hi, 40)
        vals = np.abs(self.E_vec(-rs))
        return float(np.max(vals * rs))

    def _contour_radius_policy(self, germ_radius):
        """r1 and the trusted |z| bound for the circular-contour derivative."""
        key = "policy"
        if key not in self._fit_cache:
            base = make_sequence("factorial_power", 120, s=self.s)
            rho2 = rho_factor(base, 2.0)
            _, K = self.flatness_fit()
            self._fit_cache[key] = (rho2, K)
        rho2, K = self._fit_cache[key]
        r1 = 0.7 * germ_radius
        r_tilde = r1 / (2.0 * rho2 * max(K, 1e-3))
        return r1, r_tilde


def make_gevrey_kernel(s):
    return GevreyKernel(s)


def eval_kernel(k, which, z):
    if which == "e":
        return k.e(z)
    if which == "E":
        return k.E(z)
    if which == "moment":
        return k.moment(z)
    raise DomainError(f"unknown evaluator {which!r}; expected e|E|moment")


# ---------------------------------------------------------------------------
# kernel integral identities


def cauchy_kernel_identity(k, z, w, tau, rel_tol=1e-13):
    """Quadrature of int_0^{inf(tau)} E(z xi) e(w xi) / (w xi) d xi = 1/(w-z)."""
    s = k.s
    zc, wc = complex(z), complex(w)
    if wc == 0:
        raise DomainError("w must be nonzero")
    if abs(_wrap_angle(tau + cmath.phase(wc))) >= s * math.pi / 2:
        raise DomainError(
            f"tau must satisfy |tau + arg w| < s*pi/2 = {s * math.pi / 2:.4g}")
    c_w = _ray_root(wc * cmath.exp(1j * tau), s)
    if zc == 0:
        growth = 0.0
        c_z_abs = 0.0
    else:
        c_z = _ray_root(zc * cmath.exp(1j * tau), s)
        growth = max(c_z.real, 0.0)
        c_z_abs = abs(c_z)
    decay = c_w.real - growth
    if decay <= 0:
        raise AccuracyError(
            "integrand does not decay along the ray: kernel decay "
            f"{c_w.real:.4g} vs E growth {growth:.4g}")
    phase = cmath.exp(1j * tau)
    pref = c_w / wc

    def integrand(v):
        xi_z = zc * np.power(v, s) * phase
        return k.E_vec(xi_z) * pref * np.exp(-c_w * v)

    scale = 1.0 / (abs(c_w) + c_z_abs + decay)
    value, err = ray_integral(integrand, scale, rel_tol=rel_tol)
    return value


def contour_moment_derivative(u, k, z, n, nodes=128, rel_tol=1e-13):
    """n-th moment derivative of an analytic germ via the circular contour.

    Valid for |z| below the policy radius r_tilde; beyond that the caller
    should differentiate through the Taylor coefficients instead.
    """
    if n < 0:
        raise DomainError(f"order must be >= 0, got {n}")
    s = k.s
    zc = complex(z)
    r1, r_tilde = k._contour_radius_policy(u.radius)
    if abs(zc) > r_tilde:
        raise DomainError(
            f"|z| = {abs(zc):.4g} exceeds the circular-contour bound "
            f"{r_tilde:.4g}; use the coefficient-rule moment derivative")
    c_w = r1 ** (1.0 / s)          # (omega e^{i tau})^{1/s} with tau = -arg omega
    total = 0j
    for j in range(nodes):
        theta = 2.0 * math.pi * j / nodes
        omega = r1 * cmath.exp(1j * theta)
        tau = -theta
        phase = cmath.exp(1j * tau)
        if zc == 0:
            growth = 0.0
            c_z_abs = 0.0
        else:
            c_z = _ray_root(zc * phase, s)
            growth = max(c_z.real, 0.0)
            c_z_abs = abs(c_z)
        decay = c_w - growth
        if decay <= 0:
            raise AccuracyError("inner kernel integral does not decay")
        pref = (c_w / omega) * cmath.exp(1j * n * tau)

        def integrand(v):
            xi_z = zc * np.power(v, s) * phase
            return (k.E_vec(xi_z) * pref * np.exp(-c_w * v)
                    * np.power(v, s * n))

        scale = 1.0 / (c_w + c_z_abs + decay)
        inner, _ = ray_integral(integrand, scale, rel_tol=rel_tol)
        total += u(omega) * omega * inner
    return total / nodes
