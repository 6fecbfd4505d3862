"""Quadrature and root-finding utilities used by the Young-function calculus.

All integrals in this package run over (0, t] with power-like endpoint
behaviour.  Integrands are sampled on dense log-spaced grids, interpreted
as piecewise powers (log-log linear interpolation), and integrated in
closed form per segment; heads below the first node come from a local
power-law fit.  A log-domain variant keeps exponential-growth integrands
out of overflow.
"""

import numpy as np

from .errors import BracketError, DivergentIntegralError, QuadratureError

TABLE_LO = 1e-9
TABLE_HI = 1e9
TABLE_NODES = 4096

BISECT_ITERS = 64


def log_grid(lo=TABLE_LO, hi=TABLE_HI, num=TABLE_NODES):
    """Log-spaced tabulation nodes."""
    return np.geomspace(lo, hi, num)


def _segment_log_integrals(lt, lf):
    """log of the per-segment integrals of the piecewise-power interpolant.

    Segment model: f(t) = f_i (t/t_i)^m, so the integral over [t_i, t_{i+1}]
    is f_i t_i (r^{m+1} - 1)/(m+1) with r = t_{i+1}/t_i.  Everything is
    assembled in the log domain.
    """
    dlt = np.diff(lt)
    m = np.diff(lf) / dlt
    mp1 = m + 1.0
    x = mp1 * dlt  # (m+1) log r
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # log((e^x - 1)/mp1), stable across x ~ 0 and large |x|
        gen = np.where(
            x > 30.0,
            x - np.log(np.abs(mp1)),
            np.log(np.abs(np.expm1(np.where(x > 30.0, 0.0, x)))) - np.log(np.abs(mp1)),
        )
        flat = np.abs(mp1) < 1e-12
        gen = np.where(flat, np.log(dlt), gen)
    return lf[:-1] + lt[:-1] + gen


def cumulative_power_integral(ts, fvals):
    """Cumulative integral of positive samples at the nodes, 0 at ts[0]."""
    lcum = cumulative_power_integral_log(ts, np.log(np.maximum(fvals, 1e-320)))
    out = np.exp(lcum)
    out[0] = 0.0
    return out


def cumulative_power_integral_log(ts, log_fvals):
    """Log of the cumulative integral at the nodes; -inf at ts[0].

    Nodes where the integrand vanishes (log value <= -700) contribute
    nothing; the interpolant treats the gap as zero.
    """
    ts = np.asarray(ts, dtype=float)
    lf = np.asarray(log_fvals, dtype=float)
    lt = np.log(ts)
    lseg = _segment_log_integrals(lt, lf)
    dead = (lf[:-1] < -700.0) & (lf[1:] < -700.0)
    lseg = np.where(dead, -np.inf, lseg)
    if np.any(np.isnan(lseg)):
        where = ts[:-1][np.isnan(lseg)][0]
        raise QuadratureError("segment integral undefined near t=%.3e" % where,
                              where=float(where))
    return np.concatenate([[-np.inf], np.logaddexp.accumulate(lseg)])


def power_law_head(f, t0, n_probe=8):
    """Integral of ``f`` over (0, t0] by a local power-law fit.

    Probes the decade below ``t0``, fits f ~ f(t0) (t/t0)^sigma, and
    integrates the fit.  Returns ``(head, sigma)``; the head is ``inf``
    when the fitted exponent makes the integral diverge.
    """
    probes = np.geomspace(t0 / 10.0, t0, n_probe)
    vals = np.asarray(f(probes), dtype=float)
    if np.any(~np.isfinite(vals)) or np.any(vals < 0):
        raise QuadratureError("head probe produced non-finite values", where=t0)
    if np.all(vals == 0):
        return 0.0, 0.0
    if np.any(vals <= 0):
        return float(np.trapezoid(vals, probes)), 0.0
    sigma = float(np.polyfit(np.log(probes), np.log(vals), 1)[0])
    if sigma <= -1.0:
        return np.inf, sigma
    return float(vals[-1] * t0 / (sigma + 1.0)), sigma


def require_convergent_head(f, t0, what):
    head, sigma = power_law_head(f, t0)
    if not np.isfinite(head):
        raise DivergentIntegralError(
            "%s diverges at 0 (fitted local exponent %.4f <= -1)" % (what, sigma)
        )
    return head, sigma


def tail_integral(f, t_end):
    """Tail integral over [t_end, inf) by a power-law fit; inf if divergent."""
    probes = np.geomspace(t_end / 10.0, t_end, 8)
    vals = np.asarray(f(probes), dtype=float)
    if np.any(vals <= 0) or np.any(~np.isfinite(vals)):
        return np.inf, 0.0
    sigma = float(np.polyfit(np.log(probes), np.log(vals), 1)[0])
    if sigma >= -1.0 - 1e-9:
        return np.inf, sigma
    return float(vals[-1] * t_end / (-sigma - 1.0)), sigma


def monotone_inverse(f, v, lo=1e-30, hi=1e30, kind="right", iters=BISECT_ITERS):
    """Generalized inverse of a non-decreasing map by bisection in log t.

    kind='right' returns sup{t : f(t) <= v} (right-continuous inverse);
    kind='left' returns inf{t : f(t) >= v} (left-continuous inverse).
    Results are clamped to [lo, hi]; callers supply brackets wide enough
    for the values they care about.  Works on arrays of ``v``.
    """
    v = np.asarray(v, dtype=float)
    scalar = v.ndim == 0
    v = np.atleast_1d(v).astype(float)
    llo = np.full(v.shape, np.log(lo))
    lhi = np.full(v.shape, np.log(hi))
    if kind not in ("right", "left"):
        raise ValueError("kind must be 'right' or 'left'")
    for _ in range(iters):
        mid = 0.5 * (llo + lhi)
        fm = np.asarray(f(np.exp(mid)), dtype=float)
        take_lo = fm <= v if kind == "right" else fm < v
        llo = np.where(take_lo, mid, llo)
        lhi = np.where(take_lo, lhi, mid)
    out = np.exp(llo if kind == "right" else lhi)
    return float(out[0]) if scalar else out


def bisect_predicate(pred, lo, hi, iters=BISECT_ITERS):
    """Smallest x in [lo, hi] with pred(x) True, for a monotone predicate.

    Bisection runs in log space; raises BracketError when the predicate
    does not change across the bracket.
    """
    if not pred(hi):
        raise BracketError("predicate false at bracket top %.3e" % hi)
    if pred(lo):
        return lo
    llo, lhi = np.log(lo), np.log(hi)
    for _ in range(iters):
        mid = 0.5 * (llo + lhi)
        if pred(np.exp(mid)):
            lhi = mid
        else:
            llo = mid
    return float(np.exp(lhi))


def gauss_nodes(m, a, b):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def loglog_slope(ts, vals):
    """Least-squares slope of log(vals) against log(ts)."""
    return float(np.polyfit(np.log(ts), np.log(vals), 1)[0])


def fit_power_with_log(ts, log_vals):
    """Fit log v = s log t + g log|log t| + c, for t bounded away from 1.

    Returns (s, g).  ``log_vals`` come in directly so callers can use
    overflow-free log evaluation.
    """
    ts = np.asarray(ts, dtype=float)
    lt = np.log(ts)
    llt = np.log(np.abs(lt))
    A = np.column_stack([lt, llt, np.ones_like(lt)])
    coef, *_ = np.linalg.lstsq(A, np.asarray(log_vals, dtype=float), rcond=None)
    return float(coef[0]), float(coef[1])
