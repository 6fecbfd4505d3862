"""Luxemburg norms of gridded functions.

The modular of a sample array is sum A(|g|/lambda) * cell_volume; the norm
is the infimum of lambda bringing the modular to 1 or below, found by
bisection in log lambda.  Infinite values of A propagate through the
modular, so extended-valued Young functions work unchanged.
"""

import numpy as np

from ..errors import BracketError, UnboundedNormError

NORM_RTOL = 1e-12
_LAMBDA_FLOOR = 1e-300
_LAMBDA_CEIL = 1e30


def modular(values, cell_volume, A, lam=1.0):
    """sum A(|values| / lam) * cell_volume with saturating infinity.

    ``cell_volume`` is a scalar for uniform measures or an array
    broadcastable to ``values`` (slab grids carry non-uniform vertical
    steps).
    """
    v = np.abs(np.asarray(values, dtype=float))
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.asarray(A.evaluate(v / lam), dtype=float)
    if np.any(np.isposinf(out)):
        return np.inf
    if np.ndim(cell_volume) == 0:
        return float(np.sum(out) * cell_volume)
    return float(np.sum(out * np.broadcast_to(cell_volume, out.shape)))


def luxemburg_norm(g, A, cell_volume=None, rtol=NORM_RTOL):
    """Luxemburg norm of ``g`` under the Young function ``A``.

    ``g`` is either an object with ``values`` and ``cell_volume``
    attributes (a grid or slab field) or a plain array with
    ``cell_volume`` passed explicitly.  Returns 0 for identically zero
    input.  Raises UnboundedNormError when no bracket lambda below the
    ceiling brings the modular under 1, and BracketError when the
    bracket search degenerates.
    """
    if cell_volume is None:
        values = g.values
        cell_volume = g.cell_volume
    else:
        values = g
    v = np.abs(np.asarray(values, dtype=float))
    vmax = float(np.max(v)) if v.size else 0.0
    if vmax == 0.0:
        return 0.0
    if not np.isfinite(vmax):
        raise BracketError("input contains non-finite values")

    def small_enough(lam):
        return modular(v, cell_volume, A, lam) <= 1.0

    lam = max(vmax, _LAMBDA_FLOOR)
    if small_enough(lam):
        hi = lam
        lo = lam
        while small_enough(lo):
            lo /= 16.0
            if lo < _LAMBDA_FLOOR:
                return lo  # modular stays small all the way down
    else:
        lo = lam
        hi = lam
        while not small_enough(hi):
            hi *= 16.0
            if hi > _LAMBDA_CEIL:
                raise UnboundedNormError(
                    "modular exceeds 1 for every lambda up to %.1e" % _LAMBDA_CEIL
                )

    llo, lhi = np.log(lo), np.log(hi)
    while lhi - llo > rtol:
        mid = 0.5 * (llo + lhi)
        if small_enough(np.exp(mid)):
            lhi = mid
        else:
            llo = mid
    return float(np.exp(lhi))
