"""Derived constructions on Young functions.

Covers the conjugate, the optimal Sobolev conjugate of fractional order,
the datum-space transform built from the density composed with the
inverse, the (n+1)/n power lift used for half-space extension bounds, and
the Holder-companion function with its auxiliary monotone maps.
"""

import numpy as np

from ..errors import ParameterError, InternalConsistencyError
from ..quadrature import (
    TABLE_HI,
    TABLE_LO,
    TABLE_NODES,
    cumulative_power_integral_log,
    log_grid,
    monotone_inverse,
    power_law_head,
    require_convergent_head,
    tail_integral,
)
from .base import TabulatedYoung, YoungFunction, integrate_monotone_density, _as_array, _ret


class MonotoneMap:
    """Non-decreasing positive map stored in log-log coordinates.

    Provides vectorized evaluation (with power-law extension beyond the
    table) and the generalized right-continuous inverse.
    """

    def __init__(self, ts=None, vals=None, log_ts=None, log_vals=None):
        if log_ts is None:
            log_ts = np.log(np.asarray(ts, dtype=float))
            log_vals = np.log(np.asarray(vals, dtype=float))
        self._lt = np.asarray(log_ts, dtype=float)
        self._lv = np.maximum.accumulate(np.asarray(log_vals, dtype=float))
        self._slopes = np.diff(self._lv) / np.diff(self._lt)
        self._s_lo = max(self._slopes[0], 0.0)
        self._s_hi = max(self._slopes[-1], 0.0)

    def __call__(self, t):
        t, scalar = _as_array(t)
        with np.errstate(divide="ignore"):
            lt = np.log(np.maximum(t, 1e-320))
        lv = np.interp(lt, self._lt, self._lv)
        lv = np.where(lt < self._lt[0], self._lv[0] + self._s_lo * (lt - self._lt[0]), lv)
        lv = np.where(lt > self._lt[-1], self._lv[-1] + self._s_hi * (lt - self._lt[-1]), lv)
        out = np.where(t <= 0, 0.0, np.exp(lv))
        return _ret(out, scalar)

    def inverse(self, v):
        v, scalar = _as_array(v)
        with np.errstate(divide="ignore"):
            lv = np.log(np.maximum(v, 1e-320))
        idx = np.clip(np.searchsorted(self._lv, lv, side="right"), 1, len(self._lv) - 1)
        s = self._slopes[idx - 1]
        safe = np.where(np.abs(s) < 1e-14, 1.0, s)
        lt = self._lt[idx - 1] + (lv - self._lv[idx - 1]) / safe
        lt = np.where(np.abs(s) < 1e-14, self._lt[idx], lt)
        below = lv < self._lv[0]
        lt = np.where(
            below,
            self._lt[0] + (lv - self._lv[0]) / max(self._s_lo, 1e-14),
            lt,
        )
        above = lv > self._lv[-1]
        lt = np.where(
            above,
            self._lt[-1] + (lv - self._lv[-1]) / max(self._s_hi, 1e-14),
            lt,
        )
        out = np.where(v <= 0, 0.0, np.exp(lt))
        return _ret(out, scalar)


# ---------------------------------------------------------------------------
# conjugate


def _curvature_refine(sampler, ts, d, tol=2e-6, cap=40):
    """Insert nodes where log-log interpolation would miss the density.

    Estimates per-segment interpolation error from the discrete curvature
    of (log t, log d) and subdivides segments whose estimate exceeds
    ``tol``.  Keeps tables of steep (exponential-range) densities accurate
    without a uniform node explosion.
    """
    lt = np.log(ts)
    with np.errstate(divide="ignore"):
        ld = np.where(d > 0, np.log(np.maximum(d, 1e-320)), -np.inf)
    fin = np.isfinite(ld)
    if fin.sum() < 8:
        return ts, d
    du = np.diff(lt)
    with np.errstate(invalid="ignore"):
        slope = np.diff(ld) / du
        slope = np.where(np.isfinite(slope), slope, 0.0)
        curv = np.abs(np.diff(slope)) / (0.5 * (du[:-1] + du[1:]))
    seg_curv = np.concatenate([[0.0], np.maximum(curv, 0.0), [0.0]])
    seg_curv = np.maximum(seg_curv[:-1], seg_curv[1:])
    err = seg_curv * du**2 / 8.0
    bad = np.where(err > tol)[0]
    if len(bad) == 0:
        return ts, d
    extra = []
    for i in bad:
        k = int(min(cap, np.ceil(np.sqrt(err[i] / tol))))
        extra.append(np.exp(np.linspace(lt[i], lt[i + 1], k + 2)[1:-1]))
    new_ts = np.unique(np.concatenate([ts] + extra))
    new_d = np.asarray(sampler(new_ts))
    new_d = np.where(new_d <= 1.5e-30, 0.0, new_d)
    return new_ts, new_d


def conjugate(A, lo=TABLE_LO, hi=TABLE_HI, num=TABLE_NODES):
    """Young conjugate, integrated from the inverse density.

    The conjugate's density is the generalized left-continuous inverse of
    the density of ``A``, obtained by monotone bisection; integrating it
    yields the conjugate.  The whole pipeline runs in the log domain so
    exponential-growth inputs stay representable.  The conjugate is
    infinite beyond the supremum of the density of ``A``; that threshold
    is detected and recorded as ``t_infinity``.
    """
    bracket_hi = min(1e290, A.t_infinity * (1 - 1e-12))

    def inv_density(tau):
        out = monotone_inverse(A.derivative, tau, lo=1e-30, hi=bracket_hi, kind="left")
        return np.asarray(out)

    # the conjugate's argument is a density value, so its natural grid is
    # the density's range (exponential-growth functions need far more than
    # the standard span); density curvature lives at moderate arguments,
    # so the grid is dense there and sparse on any astronomic tail
    t_top = min(hi, A.t_infinity * (1 - 1e-12))
    ld_lo = float(np.asarray(A.log_derivative(lo)))
    ld_hi = float(np.asarray(A.log_derivative(t_top)))
    grid_lo = np.clip(1e-3 * np.exp(max(ld_lo, -690.0)), 1e-28, lo)
    grid_hi = np.clip(np.exp(min(ld_hi, 690.0)), hi, 1e300)
    # base grid: dense over the working span, log-log-spaced on any
    # astronomic tail (matches the (log t)^k curvature of inverse
    # densities of exponential-growth functions)
    if grid_hi > 1e12:
        tail = np.exp(np.geomspace(np.log(1.2e12), np.log(grid_hi), 3072))
        base = np.concatenate([np.geomspace(grid_lo, 1e12, num), tail])
    else:
        base = np.geomspace(grid_lo, grid_hi, num)
    # parametric nodes s = a(v): consecutive density values then have a
    # bounded log ratio, which keeps the interpolation error of steep
    # (exponential-growth) inverse densities uniformly small
    v_hi = min(1e12, bracket_hi)
    v = np.geomspace(1e-12, v_hi, num)
    if bracket_hi > 1e13:
        v = np.concatenate(
            [v, np.exp(np.geomspace(np.log(1.2e12), np.log(bracket_hi), 3072))]
        )
    with np.errstate(over="ignore"):
        ls_par = np.asarray(A.log_derivative(v))
    ok = np.isfinite(ls_par) & (ls_par > np.log(grid_lo)) & (ls_par < np.log(grid_hi))
    ts = np.concatenate([np.log(base), ls_par[ok]])
    ts = np.exp(np.unique(np.round(ts / 1e-9) * 1e-9))

    d = inv_density(ts)
    d = np.where(d <= 1.5e-30, 0.0, d)  # bracket-floor artifacts are zeros
    ts, d = _curvature_refine(inv_density, ts, d)
    t_inf = np.inf
    if A.t_infinity == np.inf:
        pegged = d >= 0.999 * bracket_hi
        if np.any(pegged):
            first = int(np.argmax(pegged))
            # a density that is flat at the top of the searchable range has
            # a finite supremum: genuine jump to infinity.  An unbounded
            # density merely ran past the representable range; truncate and
            # let the table extrapolate.
            g1 = float(np.asarray(A.log_derivative(bracket_hi * 0.099)))
            g2 = float(np.asarray(A.log_derivative(bracket_hi * 0.99)))
            if g2 - g1 < 1e-6:
                t_inf = ts[first]
                if np.all(d[:first] == 0.0):
                    from .base import StepYoung

                    return StepYoung(t_inf)
            if first < 2:
                raise ParameterError("conjugate is infinite on the whole grid")
            ts, d = ts[:first], d[:first]

    lt = np.log(ts)
    with np.errstate(divide="ignore"):
        ld = np.where(d > 0, np.log(np.maximum(d, 1e-320)), -np.inf)
    ld = np.maximum.accumulate(ld)
    first_pos = int(np.argmax(np.isfinite(ld)))
    if first_pos >= len(ts) - 1:
        raise ParameterError("conjugate density vanishes on the whole grid")
    lt_p, ld_p = lt[first_pos:], ld[first_pos:]
    m0 = max((ld_p[1] - ld_p[0]) / (lt_p[1] - lt_p[0]), 0.0)
    lhead = ld_p[0] + lt_p[0] - np.log1p(m0)
    lvals = np.logaddexp(
        cumulative_power_integral_log(np.exp(lt_p), ld_p), lhead
    )
    if first_pos > 0:
        lt_p = np.concatenate([lt[:first_pos], lt_p])
        lvals = np.concatenate([np.full(first_pos, -np.inf), lvals])
        ld_p = np.concatenate([np.full(first_pos, -np.inf), ld_p])
    return TabulatedYoung.from_logs(lt_p, lvals, log_derivs=ld_p, t_infinity=t_inf)


# ---------------------------------------------------------------------------
# Sobolev conjugate


class SobolevConjugateYoung(TabulatedYoung):
    """Sobolev conjugate; keeps the underlying change-of-variable map.

    ``h_map`` is the monotone map H with conjugate(s) = base(H^{-1}(s)).
    """

    def __init__(self, *args, **kwargs):  # constructed via from_parts
        super().__init__(*args, **kwargs)

    @classmethod
    def from_parts(cls, log_ts, log_vals, log_derivs, t_infinity, h_map, base,
                   dim, order):
        obj = cls.from_logs(log_ts, log_vals, log_derivs=log_derivs,
                            t_infinity=t_infinity)
        obj.h_map = h_map
        obj.base = base
        obj.dim = dim
        obj.order = order
        return obj


def sobolev_conjugate(A, n, alpha, lo=TABLE_LO, hi=TABLE_HI, num=TABLE_NODES):
    """Optimal Sobolev conjugate of order ``alpha`` in dimension ``n``.

    Builds H(t) = (int_0^t (tau/A(tau))^{alpha/(n-alpha)} dtau)^{(n-alpha)/n}
    and returns A o H^{-1} as a tabulated Young function.  When the
    integral converges at infinity the result is infinite beyond the
    total, reflected in ``t_infinity``.

    Raises DivergentIntegralError when the integral diverges at 0.
    """
    if not (0 < alpha < n):
        raise ParameterError("order alpha must lie in (0, n)")
    e = alpha / (n - alpha)
    outer = (n - alpha) / n

    def phi(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lphi = e * (np.log(t) - A.log_evaluate(t))
        return np.exp(lphi)

    hi_eff = min(hi, A.t_infinity * (1 - 1e-12))
    ts = log_grid(lo, hi_eff, num)
    head, _sigma = require_convergent_head(phi, ts[0], "Sobolev-conjugate integrand")

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        lphi = e * (np.log(ts) - A.log_evaluate(ts))
    if np.any(np.isnan(lphi)) or np.any(np.isposinf(lphi)):
        raise ParameterError("base function vanishes inside the grid range")
    lcum = cumulative_power_integral_log(ts, lphi)
    lcum = np.logaddexp(lcum, np.log(head))
    lH = outer * lcum

    # extended-value tail: if the integrand is integrable at infinity the
    # conjugate is infinite beyond the total integral
    tail, _ = tail_integral(phi, ts[-1])
    if np.isfinite(tail):
        total = np.exp(lcum[-1]) + tail
        t_inf_result = total**outer
    else:
        t_inf_result = np.inf

    la = A.log_evaluate(ts)
    # H'(t) = d/dt cum^outer = outer * cum^{outer-1} * phi(t)
    lH_prime = np.log(outer) + (outer - 1.0) * lcum + lphi
    ld = A.log_derivative(ts) - lH_prime

    keep = np.isfinite(lH) & np.isfinite(la)
    h_map = MonotoneMap(log_ts=np.log(ts[keep]), log_vals=lH[keep])
    return SobolevConjugateYoung.from_parts(
        lH[keep], la[keep], ld[keep], t_inf_result, h_map, A, n, alpha
    )


# ---------------------------------------------------------------------------
# datum-space transform


def datum_young(A, n, ell, lo=TABLE_LO, hi=TABLE_HI, num=TABLE_NODES):
    """Young function with density a(A^{-1}(r))^{n/ell - 1}.

    This is the natural datum space for the boundary problem whose
    nonlinearity is bounded through ``A``; its Sobolev conjugate of order
    ``ell`` is equivalent to int_0^{t^{n/(n-ell)}} a(s)^{n/ell} ds.
    """
    if A.t_infinity < np.inf:
        raise ParameterError("datum transform requires a finite-valued Young function")
    w = n / ell - 1.0
    ts = log_grid(lo, hi, num)
    r_inv = np.asarray(A.inverse(ts))
    with np.errstate(divide="ignore", over="ignore"):
        ld = w * np.asarray(A.log_derivative(r_inv))
    d = np.exp(ld)
    if np.any(~np.isfinite(d)):
        raise ParameterError("density of the datum transform is not finite")
    d = np.maximum.accumulate(d)
    vals = integrate_monotone_density(ts, d)
    return TabulatedYoung(ts, vals, derivs=d)


# ---------------------------------------------------------------------------
# power lift (extension target)


class PowerLiftYoung(YoungFunction):
    """A(t)**beta for beta >= 1; preserves the Young invariants."""

    kind = "power_lift"

    def __init__(self, base, beta):
        if beta < 1:
            raise ParameterError("power lift needs beta >= 1")
        self.base = base
        self.beta = float(beta)

    @property
    def t_infinity(self):
        return self.base.t_infinity

    def log_evaluate(self, t):
        t, scalar = _as_array(t)
        out = self.beta * np.asarray(self.base.log_evaluate(t))
        return _ret(out, scalar)

    def derivative(self, t):
        t, scalar = _as_array(t)
        with np.errstate(over="ignore"):
            out = np.exp(self.log_derivative(t))
        return _ret(out, scalar)

    def log_derivative(self, t):
        t, scalar = _as_array(t)
        la = np.asarray(self.base.log_evaluate(t))
        ld = np.asarray(self.base.log_derivative(t))
        out = np.log(self.beta) + (self.beta - 1.0) * la + ld
        out = np.where(np.isneginf(la), -np.inf, out)
        return _ret(out, scalar)

    def inverse(self, v):
        v, scalar = _as_array(v)
        out = self.base.inverse(np.maximum(v, 0.0) ** (1.0 / self.beta))
        return _ret(np.asarray(out), scalar)

    def descriptor(self):
        from .base import _dump_table  # lazy; tabulated dump of the lift

        return {"kind": "tabulated", "params": {}, "table": _dump_table(self)}


def extension_target(A, n):
    """The Young function A(t)^{(n+1)/n} governing half-space extensions.

    Rejects extended-valued input: the pipeline that consumes this
    construction is only defined for finite-valued Young functions.
    """
    if A.t_infinity < np.inf:
        raise ParameterError("extension target requires a finite-valued Young function")
    return PowerLiftYoung(A, (n + 1.0) / n)


# ---------------------------------------------------------------------------
# Holder companion


class HolderCompanionYoung(TabulatedYoung):
    """Companion Young function for the product Holder inequality.

    Carries the auxiliary monotone maps: ``hat_h`` built from the inverse
    density and ``bar_h`` = t / hat_h(t).
    """

    @classmethod
    def from_parts(cls, log_ts, log_vals, log_derivs, hat_h, bar_h):
        obj = cls.from_logs(log_ts, log_vals, log_derivs=log_derivs)
        obj.hat_h = hat_h
        obj.bar_h = bar_h
        return obj


def holder_companion(A, n, alpha, lo=TABLE_LO, hi=TABLE_HI, num=TABLE_NODES):
    """Build B(t) = int_0^t A(bar_h^{-1}(s))/s ds with bar_h = t/hat_h(t).

    ``hat_h`` is the density-based variant of the Sobolev integral,
    hat_h(t) = (int_0^t a(tau)^{-alpha/(n-alpha)} dtau)^{(n-alpha)/n}.
    The monotonicity of ``bar_h`` is a theorem; a numerically decreasing
    bar_h therefore raises InternalConsistencyError.
    """
    if not (0 < alpha < n):
        raise ParameterError("order alpha must lie in (0, n)")
    e = alpha / (n - alpha)
    outer = (n - alpha) / n

    def psi(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lp = -e * np.asarray(A.log_derivative(t))
        return np.exp(lp)

    hi_eff = min(hi, A.t_infinity * (1 - 1e-12))
    ts = log_grid(lo, hi_eff, num)
    head, _sigma = require_convergent_head(psi, ts[0], "inverse-density integrand")

    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        lpsi = -e * np.asarray(A.log_derivative(ts))
    lcum = np.logaddexp(cumulative_power_integral_log(ts, lpsi), np.log(head))
    l_hat = outer * lcum
    hat_h = MonotoneMap(log_ts=np.log(ts), log_vals=l_hat)

    l_bar = np.log(ts) - l_hat
    if np.any(np.diff(l_bar) < -1e-7):
        raise InternalConsistencyError(
            "bar_h came out decreasing; quadrature defect in the companion build"
        )
    l_bar = np.maximum.accumulate(l_bar)
    bar_h = MonotoneMap(log_ts=np.log(ts), log_vals=l_bar)

    # integrand A(bar_h^{-1}(s))/s on the range of bar_h
    s_grid = np.geomspace(np.exp(l_bar[0]), np.exp(l_bar[-1]), num)
    t_of_s = bar_h.inverse(s_grid)
    with np.errstate(divide="ignore", over="ignore"):
        l_beta = np.asarray(A.log_evaluate(t_of_s)) - np.log(s_grid)
    head_b, sigma_b = power_law_head(
        lambda s: np.exp(np.asarray(A.log_evaluate(bar_h.inverse(s))) - np.log(s)),
        s_grid[0],
    )
    if not np.isfinite(head_b):
        raise InternalConsistencyError(
            "companion integrand not integrable at 0 (fitted exponent %.3f)" % sigma_b
        )
    l_vals = np.logaddexp(
        cumulative_power_integral_log(s_grid, l_beta), np.log(max(head_b, 1e-320))
    )
    return HolderCompanionYoung.from_parts(
        np.log(s_grid), l_vals, np.maximum.accumulate(l_beta), hat_h, bar_h
    )
