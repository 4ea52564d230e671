"""JSON/CSV interchange for sequences, series, problems, and sum results.

Complex numbers are stored as [re, im] pairs.  All JSON output is emitted
with sorted keys and written atomically (temp file + rename) so identical
inputs produce bitwise-identical artifacts.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction

from .errors import ConfigError
from .sequences import MomentSequence, make_sequence
from .series import AnalyticGerm, bivariate, series


def _c2pair(c):
    c = complex(c)
    return [c.real, c.imag]


def _pair2c(v):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        return complex(Fraction(v))
    if isinstance(v, list) and len(v) == 2:
        return complex(v[0], v[1])
    raise ConfigError(f"bad coefficient entry {v!r}")


def _entry2fraction(v):
    if isinstance(v, (int, str)):
        return Fraction(v)
    if isinstance(v, list) and len(v) == 2 and v[1] == 0 \
            and float(v[0]).is_integer():
        return Fraction(int(v[0]))
    raise ConfigError(f"exact mode needs rational real coefficients, got {v!r}")


def _c2entry(c, mode):
    return str(Fraction(c)) if mode == "exact" else _c2pair(c)


def sequence_to_dict(m):
    d = {"kind": m.kind,
         "params": dict(m.params),
         "N": m.N,
         "mode": m.mode}
    if m.mode == "exact":
        d["values"] = [str(Fraction(v)) for v in m.values]
    else:
        d["values"] = [float(v) for v in m.values]
    return d


def sequence_from_dict(d, mode=None):
    kind = d.get("kind")
    params = d.get("params", {})
    N = d.get("N")
    mode = mode or d.get("mode", "float")
    if kind in ("explicit", "derived") or "values" in d:
        vals = d["values"]
        if mode == "exact":
            vals = [Fraction(v) for v in vals]
        return MomentSequence(tuple(vals), kind, dict(params), N, mode)
    return make_sequence(kind, N, s=params.get("s"), q=params.get("q"), mode=mode)


def series_to_dict(u):
    return {"var": u.var, "N": u.N, "mode": u.mode,
            "coeffs": [_c2entry(c, u.mode) for c in u.coeffs]}


def series_from_dict(d, mode=None):
    mode = mode or d.get("mode", "float")
    if mode == "exact":
        coeffs = [_entry2fraction(c) for c in d["coeffs"]]
    else:
        coeffs = [_pair2c(c) for c in d["coeffs"]]
    return series(coeffs, var=d.get("var", "z"), mode=mode)


def bivariate_to_dict(u):
    return {"vars": list(u.vars), "N": list(u.N), "mode": u.mode,
            "coeffs": [[_c2entry(c, u.mode) for c in row] for row in u.coeffs]}


def bivariate_from_dict(d, mode=None):
    mode = mode or d.get("mode", "float")
    if mode == "exact":
        rows = [[_entry2fraction(c) for c in row] for row in d["coeffs"]]
    else:
        rows = [[_pair2c(c) for c in row] for row in d["coeffs"]]
    return bivariate(rows, vars=tuple(d.get("vars", ("eps", "z"))), mode=mode)


def germ_to_dict(g):
    d = series_to_dict(g.series)
    d["radius"] = g.radius
    return d


def germ_from_dict(d, mode=None):
    return AnalyticGerm(series_from_dict(d, mode), d.get("radius", 1.0))


def solution_to_dict(sol):
    d = {"series": bivariate_to_dict(sol.series),
         "frontier": list(sol.frontier),
         "tag": sol.tag,
         "residual_norm": sol.residual_norm}
    if sol.traces is not None:
        d["traces"] = [series_to_dict(t.to_float()) for t in sol.traces]
    return d


def sum_result_to_dict(res):
    return {"grid": [_c2pair(z) for z in res.grid],
            "values": [_c2pair(v) for v in res.values],
            "err_est": list(res.err_est),
            "direction": res.direction,
            "growth": {"ok": res.growth.ok, "C": res.growth.C,
                       "K": res.growth.K},
            "diagnostics": res.diagnostics}


def sum_result_to_csv(res):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["z_re", "z_im", "sum_re", "sum_im", "err_est"])
    for z, v, e in zip(res.grid, res.values, res.err_est):
        w.writerow([repr(z.real), repr(z.imag), repr(v.real), repr(v.imag),
                    repr(float(e))])
    return buf.getvalue()


def dumps_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def write_atomic(path, text):
    """Write text to path via a same-directory temp file and atomic rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
