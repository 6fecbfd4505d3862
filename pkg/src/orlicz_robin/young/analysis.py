"""Growth classification, asymptotic indices, and comparison scans.

Everything here is empirical: scans run over configurable log ranges and
report witnesses, never proofs.  The near-0 / near-infinity split sits at
t = 1 by package convention (the underlying thresholds are existential;
the convention is exposed, not guessed).
"""

from dataclasses import dataclass, field

import numpy as np

from .calculus import sobolev_conjugate

SCAN_DECADES = 6


def scan_grid(range_kind="global", decades=SCAN_DECADES, points=600):
    """Sample grid for a named scan range; the regime split sits at t=1."""
    if range_kind == "global":
        return np.geomspace(10.0 ** (-decades), 10.0**decades, points)
    if range_kind == "near-zero":
        return np.geomspace(10.0 ** (-decades), 1.0, points)
    if range_kind == "near-infinity":
        return np.geomspace(1.0, 10.0**decades, points)
    raise ValueError("range_kind must be global, near-zero, or near-infinity")


@dataclass
class GrowthReport:
    """Empirical doubling constants and density ratios on a scan range.

    The constants are suprema/infima over the scan; ``diverging`` records
    that the doubling ratio was still growing at a scan boundary, in
    which case the scanned supremum is not a genuine constant.
    """

    delta2_constant: float  # least c with A(2t) <= c A(t) seen on the scan
    nabla2_constant: float  # greatest c with A(2t) >= c A(t) on the scan
    sup_ratio: float        # sup of t a(t) / A(t)
    inf_ratio: float        # inf of t a(t) / A(t)
    range_kind: str
    diverging: bool = False

    @property
    def in_delta2(self):
        return (
            np.isfinite(self.sup_ratio)
            and np.isfinite(self.delta2_constant)
            and not self.diverging
        )

    @property
    def in_nabla2(self):
        return self.inf_ratio > 1.0 + 1e-9


def growth_report(A, range_kind="global", decades=SCAN_DECADES, points=600):
    """Scan doubling behaviour and the density ratio t a(t)/A(t)."""
    ts = scan_grid(range_kind, decades, points)
    ts = ts[ts < A.t_infinity / 2.0]
    la = np.asarray(A.log_evaluate(ts))
    la2 = np.asarray(A.log_evaluate(2.0 * ts))
    ok = np.isfinite(la)
    with np.errstate(over="ignore", invalid="ignore"):
        doubling = np.where(np.isposinf(la2), np.inf, np.exp(la2 - la))
        lr = np.log(ts) + np.asarray(A.log_derivative(ts)) - la
        ratio = np.exp(lr)
    doubling = doubling[ok]
    ratio = ratio[ok & np.isfinite(lr)]

    # a doubling ratio still climbing through the last decade of the scan
    # marks the scanned supremum as a trend, not a constant
    diverging = False
    if len(doubling) > 20:
        cut = len(doubling) - max(8, len(doubling) // decades if decades else 8)
        top, body = doubling[cut:], doubling[:cut]
        if np.all(np.isfinite(top)) and np.all(np.isfinite(body)):
            diverging = bool(np.max(top) > 1.2 * np.max(body))
        else:
            diverging = True

    return GrowthReport(
        delta2_constant=float(np.max(doubling)),
        nabla2_constant=float(np.min(doubling)),
        sup_ratio=float(np.max(ratio)) if len(ratio) else np.inf,
        inf_ratio=float(np.min(ratio)) if len(ratio) else 1.0,
        range_kind=range_kind,
        diverging=diverging,
    )


@dataclass
class IndexReport:
    """Matuszewska-type asymptotic exponent estimates.

    ``upper``/``lower`` are the global indices, ``upper_zero``/``lower_zero``
    the near-zero ones.  ``uncertain`` flags a non-settled extrapolation;
    the estimates are still reported.
    """

    upper: float
    lower: float
    upper_zero: float
    lower_zero: float
    lambda_grid: np.ndarray = field(repr=False)
    uncertain: bool = False


def _log_eval(A, ts):
    if hasattr(A, "log_evaluate"):
        return np.asarray(A.log_evaluate(ts))
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(A(ts), dtype=float))


def _sup_quotient(A, lam, ts, cap=None):
    """log sup_t A(lam t)/A(t) over the sample grid.

    With ``cap`` set, both t and lam*t stay below it: that is how the
    near-zero limsup is approximated (shrink first, then take the sup).
    """
    if cap is not None:
        ts = ts[(ts <= cap) & (lam * ts <= cap)]
        if len(ts) == 0:
            return np.nan
    la = _log_eval(A, ts)
    lal = _log_eval(A, lam * ts)
    d = lal - la
    d = d[~np.isnan(d)]
    return np.max(d) if len(d) else np.nan


def _extrapolate(qs, lams):
    """Limit of q(lambda) as 1/log(lambda) -> 0, by linear least squares.

    A sequence still growing superlinearly at the top is reported as an
    infinite limit (divergence).
    """
    keep = np.isfinite(qs)
    if keep.sum() < 3:
        return np.inf, True
    q = qs[keep]
    if np.any(np.isposinf(q)):
        return np.inf, False
    if len(q) >= 4 and q[-1] > 2.0 * q[len(q) // 2] + 1.0:
        return np.inf, False
    x = 1.0 / np.log(lams[keep])
    coef = np.polyfit(x[-8:], q[-8:], 1)
    tail = q[-3:]
    settled = np.max(np.abs(np.diff(tail))) < 0.05 * max(1.0, abs(coef[1]))
    return float(coef[1]), not settled


def matuszewska_indices(A, max_pow=20, decades=8, points=400):
    """Estimate the four asymptotic power indices of a positive function.

    Evaluates log(sup_t A(lam t)/A(t))/log(lam) on a geometric lambda grid
    up to 2**max_pow and extrapolates in 1/log(lambda).  Divergent
    quotients (extended-valued or super-power growth) yield infinite
    upper indices.
    """
    lams = 2.0 ** np.arange(2, max_pow + 1)
    t_hi = min(10.0**decades, getattr(A, "t_infinity", np.inf) / (2.0**max_pow))
    ts_global = np.geomspace(10.0 ** (-decades), max(t_hi, 1e-4), points)
    ts_zero = np.geomspace(1e-14, 1e-2, points)

    out = []
    uncertain = False
    for ts, cap in ((ts_global, None), (ts_zero, 1e-2)):
        up_q, lo_q = [], []
        for lam in lams:
            s_up = _sup_quotient(A, lam, ts, cap)
            s_lo = _sup_quotient(A, 1.0 / lam, ts, cap)
            up_q.append(s_up / np.log(lam))
            lo_q.append(s_lo / np.log(1.0 / lam))
        up_q, lo_q = np.asarray(up_q), np.asarray(lo_q)
        up, u1 = _extrapolate(up_q, lams)
        lo, u2 = _extrapolate(lo_q, lams)
        uncertain = uncertain or u1 or u2
        out.extend([up, lo])

    return IndexReport(
        upper=out[0], lower=out[1], upper_zero=out[2], lower_zero=out[3],
        lambda_grid=lams, uncertain=uncertain,
    )


def check_density_regularity(A, t_lo=1e-6, t_hi=1e3, points=400, c_max=2.0**24):
    """Search the least c with g(2t) <= c g(t) and 2 g(t) <= g(c t).

    Here g = a o A^{-1}; both inequalities are required on the scan range.
    Returns (c_witness, holds); c_witness is None when the geometric grid
    up to ``c_max`` is exhausted.
    """
    ts = np.geomspace(t_lo, t_hi, points)

    def g_log(u):
        return np.asarray(A.log_derivative(np.asarray(A.inverse(u))))

    lg = g_log(ts)
    lg2 = g_log(2.0 * ts)
    ok = np.isfinite(lg) & np.isfinite(lg2)
    if not np.any(ok):
        return None, False
    c1 = float(np.exp(np.max(lg2[ok] - lg[ok])))

    cs = 2.0 ** (np.arange(0, int(np.log2(c_max)) * 8 + 1) / 8.0)
    lo_i, hi_i = 0, len(cs) - 1

    def cond2(c):
        return bool(np.all(g_log(c * ts)[ok] >= np.log(2.0) + lg[ok]))

    if not cond2(cs[hi_i]):
        return None, False
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if cond2(cs[mid]):
            hi_i = mid
        else:
            lo_i = mid + 1
    c2 = float(cs[hi_i])
    witness = max(c1, c2)
    return (witness, True) if witness <= c_max else (None, False)


def check_sobolev_ratio(base, other, n, ell, t_lo=1e-8, t_hi=1e8, points=400):
    """Empirical constant in the paired Sobolev-conjugate inverse ratio.

    Scans kappa(t) = [other_c^{-1}(t)/other^{-1}(t)] * [base^{-1}(t)/
    base_c^{-1}(t)] where _c denotes the order-``ell`` Sobolev conjugate.
    Returns (kappa_witness, holds); fails when the ratio is still growing
    at the top of the grid.
    """
    base_c = sobolev_conjugate(base, n, ell)
    other_c = sobolev_conjugate(other, n, ell)
    ts = np.geomspace(t_lo, t_hi, points)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (
            np.log(np.asarray(other_c.inverse(ts)))
            - np.log(np.asarray(other.inverse(ts)))
            + np.log(np.asarray(base.inverse(ts)))
            - np.log(np.asarray(base_c.inverse(ts)))
        )
    r = r[np.isfinite(r)]
    if len(r) == 0:
        return np.inf, False
    kappa = float(np.exp(np.max(r)))
    tail = r[-max(8, points // 10):]
    growing = len(tail) > 4 and (tail[-1] - tail[0]) > 0.05
    return kappa, bool(np.isfinite(kappa) and not growing)


def equivalence_constant(A, B, ts=None, c_max=1e6, per_decade=8):
    """Least c <= c_max with B(t) <= A(ct) and A(t) <= B(ct) on the scan.

    Returns (c, True) or (None, False); this is the package's working
    definition of Young-function equivalence.
    """
    if ts is None:
        ts = scan_grid("global")
    la = _log_eval(A, ts)
    lb = _log_eval(B, ts)
    cs = 2.0 ** (np.arange(0, int(np.log2(c_max)) * per_decade + 1) / per_decade)
    for c in cs:
        lac = _log_eval(A, c * ts)
        lbc = _log_eval(B, c * ts)
        if np.all(lb <= lac + 1e-9) and np.all(la <= lbc + 1e-9):
            return float(c), True
    return None, False


def dominates(A, B, c, ts=None):
    """Check B(t) <= A(c t) on the scan range."""
    if ts is None:
        ts = scan_grid("global")
    return bool(np.all(_log_eval(B, ts) <= _log_eval(A, c * ts) + 1e-9))
