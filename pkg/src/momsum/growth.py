"""Growth-level fitting for coefficient sequences and remainder bounds.

Every bound in this toolkit has the shape C * A^n * (M_n)^s for a base
moment sequence M; fit_growth recovers (log C, log A, s) by least squares on
the regressors {1, n, log M_n}.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DegenerateInputError, DomainError, ShapeError


class GrowthFit(NamedTuple):
    s_est: float
    logA: float
    logC: float
    residual: float
    window: tuple


def fit_growth(mags, base, window=None, logs=False):
    """Fit log|u_n| ~ logC + n*logA + s*log M_n over the index window.

    mags: coefficient magnitudes, or their logs when logs=True (pass logs for
    truncations beyond ~80 to avoid overflow).  Zero magnitudes are dropped;
    an all-zero window is degenerate.
    """
    mags = np.asarray(mags, dtype=float)
    n_all = np.arange(len(mags))
    if window is None:
        window = (min(20, max(0, len(mags) - 8)), len(mags) - 1)
    lo, hi = window
    if not (0 <= lo <= hi < len(mags)):
        raise ShapeError(f"window {window} outside [0, {len(mags) - 1}]")
    if hi - lo + 1 < 8:
        raise DomainError(f"window length must be >= 8, got {hi - lo + 1}")
    if len(base) < hi + 1:
        raise ShapeError(f"base sequence too short: need {hi + 1}, have {len(base)}")

    sel = slice(lo, hi + 1)
    n = n_all[sel].astype(float)
    if logs:
        y = mags[sel]
        good = np.isfinite(y)
    else:
        y = np.where(mags[sel] > 0, np.log(np.maximum(mags[sel], 1e-300)), -np.inf)
        good = mags[sel] > 0
    if good.sum() == 0:
        raise DegenerateInputError("all magnitudes vanish on the window")
    if good.sum() < 8:
        raise DegenerateInputError(
            f"only {int(good.sum())} nonzero magnitudes on the window; need >= 8")
    logM = np.asarray(base.log_values[sel], dtype=float)
    X = np.column_stack([np.ones(int(good.sum())), n[good], logM[good]])
    if np.linalg.matrix_rank(X, tol=1e-9 * max(1.0, float(np.abs(X).max()))) < 3:
        raise DegenerateInputError(
            "degenerate regressor collinearity (is log M_n affine in n?); "
            "choose a different base sequence or window")
    coef, *_ = np.linalg.lstsq(X, y[good], rcond=None)
    resid = float(np.sqrt(np.mean((X @ coef - y[good]) ** 2)))
    return GrowthFit(float(coef[2]), float(coef[1]), float(coef[0]),
                     resid, (int(lo), int(hi)))


def check_asymptotic_remainder(samples, partial_sums, M, resid_tol=1.5):
    """Fit (C, A) with |f(z) - sum_{p<N} f_p z^p| <= C A^N M_N |z|^N.

    samples: sequence of (z, f(z)); partial_sums[i][N] is the order-N partial
    sum at z_i for N = 0..N_max.  Returns (ok, C, A) where (C, A) satisfy the
    bound on every sample by construction and ok reports whether the fit
    residual stays below resid_tol (i.e. the bound shape is consistent).
    """
    samples = list(samples)
    if not samples:
        raise DomainError("no samples given")
    N_max = min(len(ps) for ps in partial_sums) - 1
    if len(partial_sums) != len(samples):
        raise ShapeError(f"{len(samples)} samples vs {len(partial_sums)} "
                         "partial-sum rows")
    if len(M) < N_max + 1:
        raise ShapeError(f"moment sequence too short: need {N_max + 1}, "
                         f"have {len(M)}")
    ys = []
    orders = []
    for N in range(1, N_max + 1):
        worst = -math.inf
        for (z, fz), ps in zip(samples, partial_sums):
            r = abs(complex(fz) - complex(ps[N]))
            az = abs(complex(z))
            if r == 0 or az == 0:
                continue
            worst = max(worst,
                        math.log(r) - N * math.log(az) - float(M.log_values[N]))
        if math.isfinite(worst):
            ys.append(worst)
            orders.append(N)
    if len(ys) < 2:
        # every remainder vanished: the bound holds trivially
        return True, 0.0, 1.0
    ns = np.asarray(orders, dtype=float)
    ys = np.asarray(ys)
    slope, inter = np.polyfit(ns, ys, 1)
    resid = ys - (inter + slope * ns)
    ok = bool(np.max(np.abs(resid)) <= resid_tol)
    # bump C so the fitted bound covers every sampled remainder
    C = math.exp(inter + float(np.max(resid)))
    A = math.exp(slope)
    return ok, C, A
