"""Young functions: closed forms, log-spaced tables, densities, serialization.

A Young function here is a convex, left-continuous map A: [0, inf) -> [0, inf]
with A(0) = 0, represented either by a closed form or by a log-spaced table
with monotone piecewise-power interpolation.  Infinity is a first-class
value: evaluation saturates to ``inf`` at and beyond ``t_infinity`` and is
never silently replaced by a large float.

Everything that can overflow (exponential-growth functions far out on the
grid) goes through ``log_evaluate``, which works in the log domain.
"""

import json

import numpy as np

from ..errors import ParameterError
from ..quadrature import (
    TABLE_HI,
    TABLE_LO,
    TABLE_NODES,
    cumulative_power_integral,
    log_grid,
    monotone_inverse,
)


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


class YoungFunction:
    """Interface shared by all Young-function representations."""

    kind = "abstract"

    @property
    def t_infinity(self):
        """Threshold at and beyond which the function is infinite."""
        return np.inf

    def __call__(self, t):
        return self.evaluate(t)

    def evaluate(self, t):
        t, scalar = _as_array(t)
        with np.errstate(over="ignore"):
            out = np.exp(self.log_evaluate(t))
        return _ret(out, scalar)

    def log_evaluate(self, t):
        """log A(t); -inf where A vanishes, +inf where A is infinite."""
        raise NotImplementedError

    def derivative(self, t):
        """The left-continuous density a(t) with A(t) = int_0^t a."""
        raise NotImplementedError

    def log_derivative(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore"):
            out = np.log(np.maximum(self.derivative(t), 0.0))
        return _ret(out, scalar)

    def inverse(self, v):
        """Generalized right-continuous inverse, sup{t : A(t) <= v}."""
        v, scalar = _as_array(v)
        with np.errstate(divide="ignore"):
            lv = np.log(np.maximum(v, 0.0))
        out = monotone_inverse(
            self.log_evaluate, lv, lo=1e-30, hi=min(1e30, self.t_infinity)
        )
        out = np.minimum(out, self.t_infinity)
        return _ret(np.atleast_1d(out), scalar) if scalar else out

    def descriptor(self):
        """Serializable description; see :func:`to_text`."""
        return {"kind": "tabulated", "params": {}, "table": _dump_table(self)}


class PowerYoung(YoungFunction):
    """A(t) = coeff * t**p with p >= 1."""

    kind = "power"

    def __init__(self, p, coeff=1.0):
        if p < 1 or coeff <= 0:
            raise ParameterError("power Young function needs p >= 1, coeff > 0")
        self.p = float(p)
        self.coeff = float(coeff)

    def log_evaluate(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore"):
            out = np.log(self.coeff) + self.p * np.log(t)
        return _ret(out, scalar)

    def derivative(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore"):
            out = self.coeff * self.p * t ** (self.p - 1.0)
        return _ret(out, scalar)

    def inverse(self, v):
        v, scalar = _as_array(v)
        out = (np.maximum(v, 0.0) / self.coeff) ** (1.0 / self.p)
        return _ret(out, scalar)

    def descriptor(self):
        return {"kind": "power", "params": {"p": self.p, "coeff": self.coeff}}


class ExpPowerYoung(YoungFunction):
    """A(t) = coeff * t**q * exp(t**r), the exponential-growth catalog shape.

    Convexity requires q >= 1 and r > 0.
    """

    kind = "power_exp"

    def __init__(self, q, r, coeff=1.0):
        if q < 1 or r <= 0 or coeff <= 0:
            raise ParameterError("exp-power Young function needs q >= 1, r > 0")
        self.q = float(q)
        self.r = float(r)
        self.coeff = float(coeff)

    def log_evaluate(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.log(self.coeff) + self.q * np.log(t) + t**self.r
        return _ret(out, scalar)

    def derivative(self, t):
        t, scalar = _as_array(t)
        with np.errstate(over="ignore"):
            out = np.exp(self.log_derivative(t))
        return _ret(out, scalar)

    def log_derivative(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            la = (
                np.log(self.coeff)
                + (self.q - 1.0) * np.log(t)
                + np.log(self.q + self.r * t**self.r)
                + t**self.r
            )
            floor = -np.inf if self.q > 1 else np.log(self.coeff * self.q)
            out = np.where(t > 0, la, floor)
        return _ret(out, scalar)

    def descriptor(self):
        return {
            "kind": "power_exp",
            "params": {"q": self.q, "r": self.r, "coeff": self.coeff},
        }


class StepYoung(YoungFunction):
    """The L-infinity-type Young function: 0 up to a jump, infinite after.

    Arises as the conjugate of a linear Young function.
    """

    kind = "step"

    def __init__(self, t_jump=1.0):
        if t_jump <= 0:
            raise ParameterError("step Young function needs a positive jump point")
        self._jump = float(t_jump)

    @property
    def t_infinity(self):
        return self._jump

    def log_evaluate(self, t):
        t, scalar = _as_array(t)
        out = np.where(t >= self._jump, np.inf, -np.inf)
        return _ret(out, scalar)

    def derivative(self, t):
        t, scalar = _as_array(t)
        out = np.where(t >= self._jump, np.inf, 0.0)
        return _ret(out, scalar)

    def inverse(self, v):
        v, scalar = _as_array(v)
        out = np.full(v.shape, self._jump)
        return _ret(out, scalar)

    def descriptor(self):
        return {"kind": "step", "params": {"t_jump": self._jump}}


class TabulatedYoung(YoungFunction):
    """Log-spaced table with monotone piecewise-power interpolation.

    ``ts`` and ``vals`` describe the finite, positive part of the function;
    an optional flat-zero prefix is kept as ``t_zero`` and the extended
    region as ``t_infinity``.  Optional density samples make ``derivative``
    exact at the nodes; otherwise the segment power slopes are used.
    """

    kind = "tabulated"

    def __init__(self, ts, vals, derivs=None, t_infinity=np.inf, t_zero=0.0,
                 near_zero_slope=None):
        ts = np.asarray(ts, dtype=float)
        vals = np.asarray(vals, dtype=float)
        with np.errstate(divide="ignore"):
            lv = np.where(vals > 0, np.log(np.maximum(vals, 1e-320)), -np.inf)
            lv = np.where(np.isposinf(vals), np.inf, lv)
            ld = None
            if derivs is not None:
                d = np.asarray(derivs, dtype=float)
                ld = np.where(d > 0, np.log(np.maximum(d, 1e-320)), -np.inf)
        self._init_from_logs(np.log(ts), lv, ld, t_infinity, t_zero, near_zero_slope)

    @classmethod
    def from_logs(cls, log_ts, log_vals, log_derivs=None, t_infinity=np.inf,
                  t_zero=0.0, near_zero_slope=None):
        """Build directly from log coordinates (overflow-free)."""
        obj = cls.__new__(cls)
        obj._init_from_logs(
            np.asarray(log_ts, dtype=float),
            np.asarray(log_vals, dtype=float),
            None if log_derivs is None else np.asarray(log_derivs, dtype=float),
            t_infinity,
            t_zero,
            near_zero_slope,
        )
        return obj

    def _init_from_logs(self, lt, lv, ld, t_infinity, t_zero, near_zero_slope):
        if lt.ndim != 1 or lt.shape != lv.shape or len(lt) < 2:
            raise ParameterError("table needs matching 1-d ts/vals with >= 2 nodes")
        if np.any(np.diff(lt) <= 0):
            raise ParameterError("table abscissae must be strictly increasing")

        # clip the infinite tail into t_infinity
        inf_mask = np.isposinf(lv)
        if np.any(inf_mask):
            first = int(np.argmax(inf_mask))
            t_infinity = min(t_infinity, np.exp(lt[first]))
            lt, lv = lt[:first], lv[:first]
            if ld is not None:
                ld = ld[:first]

        # absorb a flat-zero prefix into t_zero
        pos = np.isfinite(lv)
        if not np.any(pos):
            raise ParameterError("table has no positive values")
        first_pos = int(np.argmax(pos))
        if first_pos > 0:
            t_zero = max(t_zero, np.exp(lt[first_pos - 1]))
            lt, lv = lt[first_pos:], lv[first_pos:]
            if ld is not None:
                ld = ld[first_pos:]
        if len(lt) < 2:
            raise ParameterError("table has fewer than 2 positive nodes")

        self._lt = lt
        self._lv = np.maximum.accumulate(lv)
        self._slopes = np.diff(self._lv) / np.diff(self._lt)
        self._t_zero = float(t_zero)
        self._t_inf = float(t_infinity)
        self._s_lo = float(near_zero_slope) if near_zero_slope is not None else float(
            max(self._slopes[0], 1.0)
        )
        self._s_hi = float(max(self._slopes[-1], 1.0))
        self._ld = None if ld is None else np.maximum.accumulate(ld)

    @property
    def t_infinity(self):
        return self._t_inf

    @property
    def t_zero(self):
        return self._t_zero

    @property
    def table_ts(self):
        return np.exp(self._lt)

    @property
    def table_vals(self):
        return np.exp(self._lv)

    def log_evaluate(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            lt = np.log(np.maximum(t, 1e-320))
            out = np.interp(lt, self._lt, self._lv)
            below = lt < self._lt[0]
            if np.any(below):
                out = np.where(
                    below, self._lv[0] + self._s_lo * (lt - self._lt[0]), out
                )
            above = lt > self._lt[-1]
            if np.any(above):
                out = np.where(
                    above, self._lv[-1] + self._s_hi * (lt - self._lt[-1]), out
                )
            if self._t_zero > 0:
                # linear stub between the flat-zero prefix and the first node
                t0, t1 = self._t_zero, np.exp(self._lt[0])
                stub = (t > t0) & (t < t1)
                if np.any(stub):
                    frac = (t - t0) / (t1 - t0)
                    out = np.where(
                        stub, self._lv[0] + np.log(np.maximum(frac, 1e-320)), out
                    )
                out = np.where(t <= t0, -np.inf, out)
            out = np.where(t <= 0, -np.inf, out)
            out = np.where(t >= self._t_inf, np.inf, out)
        return _ret(out, scalar)

    def derivative(self, t):
        t, scalar = _as_array(t)
        with np.errstate(over="ignore"):
            out = np.exp(self.log_derivative(t))
        return _ret(out, scalar)

    def log_derivative(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lt = np.log(np.maximum(t, 1e-320))
            if self._ld is not None:
                la = np.interp(lt, self._lt, self._ld)
                lo_slope = (
                    (self._ld[1] - self._ld[0]) / (self._lt[1] - self._lt[0])
                    if len(self._ld) > 1
                    else 0.0
                )
                below = lt < self._lt[0]
                la = np.where(below, self._ld[0] + lo_slope * (lt - self._lt[0]), la)
                hi_slope = (
                    (self._ld[-1] - self._ld[-2]) / (self._lt[-1] - self._lt[-2])
                    if len(self._ld) > 1
                    else 0.0
                )
                above = lt > self._lt[-1]
                la = np.where(above, self._ld[-1] + hi_slope * (lt - self._lt[-1]), la)
            else:
                # left segment slope: a(t) = s * A(t) / t
                idx = np.clip(
                    np.searchsorted(self._lt, lt, side="left") - 1,
                    0,
                    len(self._slopes) - 1,
                )
                s = self._slopes[idx]
                s = np.where(lt < self._lt[0], self._s_lo, s)
                s = np.where(lt > self._lt[-1], self._s_hi, s)
                la = np.log(s) + self.log_evaluate(t) - lt
            la = np.where(t <= self._t_zero, -np.inf, la)
            la = np.where(t >= self._t_inf, np.inf, la)
        return _ret(la, scalar)

    def inverse(self, v):
        v, scalar = _as_array(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            lv = np.log(np.maximum(v, 1e-320))
            idx = np.searchsorted(self._lv, lv, side="right")
            idx = np.clip(idx, 1, len(self._lv) - 1)
            s = self._slopes[idx - 1]
            safe = np.where(np.abs(s) < 1e-14, 1.0, s)
            lt = self._lt[idx - 1] + (lv - self._lv[idx - 1]) / safe
            lt = np.where(np.abs(s) < 1e-14, self._lt[idx], lt)
            below = lv < self._lv[0]
            if self._t_zero > 0:
                t0, t1 = self._t_zero, np.exp(self._lt[0])
                frac = np.exp(np.minimum(lv - self._lv[0], 0.0))
                lt = np.where(below, np.log(t0 + (t1 - t0) * frac), lt)
            else:
                lt = np.where(below, self._lt[0] + (lv - self._lv[0]) / self._s_lo, lt)
            above = lv > self._lv[-1]
            lt = np.where(above, self._lt[-1] + (lv - self._lv[-1]) / self._s_hi, lt)
            out = np.exp(lt)
            out = np.where(v <= 0, self._t_zero, out)
            out = np.minimum(out, self._t_inf)
        return _ret(out, scalar)

    def descriptor(self):
        return {
            "kind": "tabulated",
            "params": {
                "t_infinity": None if np.isinf(self._t_inf) else self._t_inf,
                "t_zero": self._t_zero,
                "near_zero_slope": self._s_lo,
            },
            "table": [
                [_f17(t), _f17(v)]
                for t, v in zip(np.exp(self._lt), np.exp(self._lv))
            ],
        }


def young_from_density(density, lo=TABLE_LO, hi=TABLE_HI, num=TABLE_NODES,
                       t_infinity=np.inf):
    """Build a Young function by integrating a (numeric) density.

    The density is sampled on a log grid, forced non-decreasing by a
    running maximum, interpreted as piecewise log-linear, and integrated
    in closed form per segment.  The result is convex by construction and
    carries exact density samples.
    """
    ts = log_grid(lo, hi, num)
    d = np.asarray(density(ts), dtype=float)
    if np.any(~np.isfinite(d)) or np.any(d < 0):
        raise ParameterError("density must be finite and nonnegative on the grid")
    d = np.maximum.accumulate(d)
    if d[-1] <= 0:
        raise ParameterError("density vanishes identically on the grid")
    vals = integrate_monotone_density(ts, d)
    return TabulatedYoung(ts, vals, derivs=d, t_infinity=t_infinity)


def integrate_monotone_density(ts, d):
    """Cumulative integral of a non-decreasing density at the nodes.

    Uses exact integration of the piecewise-power interpolant; the head
    below ts[0] extends the first positive segment's power law (the
    density is monotone, so the head exponent is nonnegative and the
    head always converges).
    """
    first = int(np.argmax(d > 0))
    lt = np.log(ts)
    with np.errstate(divide="ignore"):
        ld = np.where(d > 0, np.log(np.maximum(d, 1e-320)), -np.inf)
    if first < len(ts) - 1:
        m0 = max((ld[first + 1] - ld[first]) / (lt[first + 1] - lt[first]), 0.0)
    else:
        m0 = 0.0
    head = d[first] * ts[first] / (m0 + 1.0)
    body = cumulative_power_integral(ts[first:], d[first:])
    vals = np.zeros_like(ts)
    vals[first:] = head + body
    return vals


def _hermite_log_blend(x, x0, x1, y0, y1, m0, m1):
    """Cubic Hermite in log-log coordinates, slopes clamped monotone."""
    secant = (y1 - y0) / (x1 - x0)
    if secant <= 0:
        return np.full_like(x, y0)
    m0 = min(max(m0, 0.0), 3.0 * secant)
    m1 = min(max(m1, 0.0), 3.0 * secant)
    s = (x - x0) / (x1 - x0)
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    return h00 * y0 + h10 * (x1 - x0) * m0 + h01 * y1 + h11 * (x1 - x0) * m1


def two_branch_density(density_near_zero, density_near_inf, t_lo=0.5, t_hi=2.0):
    """Join two branch densities with a monotone C1 blend on [t_lo, t_hi].

    The blend is a cubic Hermite in (log t, log a) matched to the branch
    values and log-slopes at the junctions; a running maximum downstream
    guarantees monotonicity even for awkward parameters.
    """
    x0, x1 = np.log(t_lo), np.log(t_hi)
    eps = 1e-4
    a0 = float(density_near_zero(np.array([t_lo]))[0])
    a1 = float(density_near_inf(np.array([t_hi]))[0])
    a0 = max(a0, 1e-300)
    a1 = max(a1, a0)
    m0 = (
        np.log(max(density_near_zero(np.array([t_lo]))[0], 1e-300))
        - np.log(max(density_near_zero(np.array([t_lo * (1 - eps)]))[0], 1e-300))
    ) / (x0 - np.log(t_lo * (1 - eps)))
    m1 = (
        np.log(max(density_near_inf(np.array([t_hi * (1 + eps)]))[0], 1e-300))
        - np.log(a1)
    ) / (np.log(t_hi * (1 + eps)) - x1)

    def density(t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        lo = t <= t_lo
        hi = t >= t_hi
        mid = ~(lo | hi)
        if np.any(lo):
            out[lo] = density_near_zero(t[lo])
        if np.any(hi):
            out[hi] = np.maximum(density_near_inf(t[hi]), a1)
        if np.any(mid):
            ly = _hermite_log_blend(
                np.log(t[mid]), x0, x1, np.log(a0), np.log(a1), m0, m1
            )
            out[mid] = np.exp(ly)
        return out

    return density


# ---------------------------------------------------------------------------
# serialization


def _f17(x):
    return float("%.17g" % x)


def _dump_table(A, lo=1e-9, hi=1e9, num=512):
    """Two-column [t, A(t)] dump for functions without a closed form."""
    hi = min(hi, A.t_infinity * (1 - 1e-12))
    ts = np.geomspace(lo, hi, num)
    vals = np.asarray(A.evaluate(ts), dtype=float)
    keep = np.isfinite(vals) & (vals > 0)
    return [[_f17(t), _f17(v)] for t, v in zip(ts[keep], vals[keep])]


def to_descriptor(A):
    return A.descriptor()


def to_text(A):
    """Structured text descriptor of a Young function (JSON)."""
    return json.dumps(A.descriptor(), sort_keys=True)


def from_descriptor(desc):
    kind = desc["kind"]
    params = desc.get("params", {})
    if kind == "power":
        return PowerYoung(params["p"], params.get("coeff", 1.0))
    if kind == "power_exp":
        return ExpPowerYoung(params["q"], params["r"], params.get("coeff", 1.0))
    if kind == "power_log":
        from ..nonlinearity import power_log_young

        return power_log_young(
            params["q0"], params["b0"], params["q1"], params["b1"]
        )
    if kind == "step":
        return StepYoung(params["t_jump"])
    if kind == "tabulated":
        table = np.asarray(desc["table"], dtype=float)
        t_inf = params.get("t_infinity")
        return TabulatedYoung(
            table[:, 0],
            table[:, 1],
            t_infinity=np.inf if t_inf is None else t_inf,
            t_zero=params.get("t_zero", 0.0),
            near_zero_slope=params.get("near_zero_slope"),
        )
    raise ParameterError("unknown Young-function kind %r" % kind)


def from_text(text):
    return from_descriptor(json.loads(text))


# ---------------------------------------------------------------------------
# invariant checking


def check_young_invariants(A, ts=None, lambdas=(1.0, 1.5, 2.0, 4.0, 10.0)):
    """Worst-case margins of the defining Young-function inequalities.

    Returns a dict of signed margins (nonnegative = holds) for:
    value at 0, monotonicity of A and of A(t)/t, the density sandwich
    A(t) <= t a(t) <= A(2t), and super-homogeneity A(l t) >= l A(t).
    All comparisons run in the log domain so exponential-growth functions
    do not overflow.
    """
    if ts is None:
        ts = log_grid(1e-8, min(1e8, A.t_infinity / 4.0), 200)
    ts = np.asarray(ts, dtype=float)
    la = A.log_evaluate(ts)
    finite = np.isfinite(la)
    out = {"zero_value": -abs(float(np.asarray(A.evaluate(0.0))))}

    d = np.diff(la[finite])
    out["monotone"] = float(np.min(d)) if len(d) else 0.0
    ratio = la[finite] - np.log(ts[finite])
    dr = np.diff(ratio)
    out["ratio_monotone"] = float(np.min(dr)) if len(dr) else 0.0

    with np.errstate(divide="ignore", over="ignore"):
        lta = np.log(ts) + np.log(np.maximum(A.derivative(ts), 1e-320))
        la2 = A.log_evaluate(2.0 * ts)
    m = finite & np.isfinite(lta)
    out["density_lower"] = float(np.min((lta - la)[m])) if np.any(m) else 0.0
    m2 = m & (np.isfinite(la2) | (la2 == np.inf))
    diff_hi = np.where(la2 == np.inf, np.inf, la2 - lta)
    out["density_upper"] = float(np.min(diff_hi[m2])) if np.any(m2) else 0.0

    worst = np.inf
    for lam in lambdas:
        if lam < 1:
            continue
        lal = A.log_evaluate(lam * ts)
        dd = np.where(lal == np.inf, np.inf, lal - (np.log(lam) + la))
        sel = finite & ~np.isnan(dd)
        if np.any(sel):
            worst = min(worst, float(np.min(dd[sel])))
    out["super_homogeneous"] = worst if np.isfinite(worst) else 0.0
    return out
