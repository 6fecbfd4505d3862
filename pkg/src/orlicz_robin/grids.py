"""Uniform grids on truncated boxes and slab fields over them.

A ``GridFunction`` samples a function of n variables at the nodes
x_i = -L + i h, i = 0..N-1, h = 2L/N, per axis (the +L face is absent,
matching the periodic padding used by the convolution machinery).  A
``SlabField`` stacks grid samples over strictly positive heights.

The text dump format is a single header line ``ORJ1 n N L h1 h2 ...``
followed by one block of row-major values per level (the boundary level
first when present), 17 significant digits per value.
"""

import io
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

EDGE_SHELL_FRACTION = 0.1
EDGE_DECAY_RATIO = 1e-8


@dataclass(frozen=True)
class GridFunction:
    """Samples of a real function on the uniform box grid."""

    n: int
    L: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != self.n or any(s != v.shape[0] for s in v.shape):
            raise ParameterError("values must be an N^n array")
        if v.shape[0] % 2 != 0:
            raise ParameterError("N must be even")
        if not np.all(np.isfinite(v)):
            raise ParameterError("grid values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def N(self):
        return self.values.shape[0]

    @property
    def h(self):
        return 2.0 * self.L / self.N

    @property
    def cell_volume(self):
        return self.h**self.n

    def axes(self):
        """Per-axis node coordinates."""
        return [-self.L + self.h * np.arange(self.N)] * self.n

    def meshgrid(self):
        return np.meshgrid(*self.axes(), indexing="ij")

    def with_values(self, values):
        return GridFunction(self.n, self.L, values)

    def edge_max_ratio(self):
        """max |f| on the outer shell relative to the global max."""
        vmax = float(np.max(np.abs(self.values)))
        if vmax == 0:
            return 0.0
        mask = edge_shell_mask(self.n, self.N, self.L)
        return float(np.max(np.abs(self.values[mask])) / vmax)

    def decays_at_edges(self):
        return self.edge_max_ratio() < EDGE_DECAY_RATIO


def edge_shell_mask(n, N, L):
    """Boolean mask of the outer shell (|x|_inf above (1-shell) L)."""
    ax = -L + (2.0 * L / N) * np.arange(N)
    near = np.abs(ax) >= (1.0 - EDGE_SHELL_FRACTION) * L
    mask = np.zeros((N,) * n, dtype=bool)
    for d in range(n):
        sl = [None] * n
        sl[d] = slice(None)
        mask |= near[tuple(sl)]
    return mask


def grid_from_function(fn, n, N, L):
    """Sample a callable of stacked coordinates (shape (n, ...))."""
    g = GridFunction(n, L, np.zeros((N,) * n))
    coords = np.stack(g.meshgrid())
    return g.with_values(np.asarray(fn(coords), dtype=float))


def gaussian_datum(n, N, L, center=None, width=1.0, amplitude=1.0):
    """Centered (or shifted) Gaussian bump sample."""
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)

    def fn(x):
        r2 = sum((x[d] - center[d]) ** 2 for d in range(n))
        return amplitude * np.exp(-r2 / (2.0 * width**2))

    return grid_from_function(fn, n, N, L)


def ring_datum(n, N, L, radius=2.0, width=0.5, amplitude=1.0):
    """Radial ring bump at |x| = radius."""

    def fn(x):
        r = np.sqrt(sum(x[d] ** 2 for d in range(n)))
        return amplitude * np.exp(-((r - radius) ** 2) / (2.0 * width**2))

    return grid_from_function(fn, n, N, L)


@dataclass(frozen=True)
class SlabField:
    """Samples on grid x heights, heights strictly positive ascending."""

    n: int
    L: float
    heights: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)  # shape (len(heights),) + (N,)*n

    def __post_init__(self):
        hts = np.asarray(self.heights, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if len(hts) and (np.any(hts <= 0) or np.any(np.diff(hts) <= 0)):
            raise ParameterError("heights must be positive and strictly increasing")
        if v.shape[0] != len(hts):
            raise ParameterError("one value block per height required")
        if len(hts) and v.ndim != self.n + 1:
            raise ParameterError("value blocks must be N^n arrays")
        object.__setattr__(self, "heights", hts)
        object.__setattr__(self, "values", v)

    @property
    def N(self):
        return self.values.shape[1] if self.values.ndim > 1 else 0

    @property
    def h(self):
        return 2.0 * self.L / self.N

    @property
    def cell_volume(self):
        """Slab cell measure: in-plane cell times the local height step."""
        steps = height_steps(self.heights)
        shape = (len(self.heights),) + (1,) * self.n
        return self.h**self.n * steps.reshape(shape)

    def level(self, k):
        return GridFunction(self.n, self.L, self.values[k])


def height_steps(heights):
    """Trapezoid-style vertical weights for slab integrals, from 0 upward."""
    hts = np.asarray(heights, dtype=float)
    if len(hts) == 0:
        return np.zeros(0)
    edges = np.concatenate([[0.0], 0.5 * (hts[1:] + hts[:-1]), [hts[-1]]])
    return np.diff(edges)


def slab_luxemburg_norm(field_values, slab, A):
    """Luxemburg norm over the slab with the non-uniform vertical measure.

    ``field_values`` may be the slab's own values or any array of the same
    shape (gradient magnitudes, say).
    """
    from .young.norms import luxemburg_norm

    return luxemburg_norm(
        np.asarray(field_values, dtype=float), A, cell_volume=slab.cell_volume
    )


# ---------------------------------------------------------------------------
# text formats


def _fmt(x):
    return "%.17g" % x


def dump_field(obj, path_or_buf):
    """Write a GridFunction or SlabField in the ORJ1 text format."""
    if isinstance(obj, GridFunction):
        n, N, L, heights = obj.n, obj.N, obj.L, []
        blocks = [obj.values]
    else:
        n, N, L = obj.n, obj.N, obj.L
        heights = list(obj.heights)
        blocks = [obj.values[k] for k in range(len(heights))]
    out = io.StringIO()
    head = ["ORJ1", str(n), str(N), _fmt(L)] + [_fmt(t) for t in heights]
    out.write(" ".join(head) + "\n")
    for block in blocks:
        for row in block.reshape(-1, N):
            out.write(" ".join(_fmt(x) for x in row) + "\n")
        out.write("\n")
    text = out.getvalue()
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        atomic_write_text(path_or_buf, text)


def load_field(path_or_buf):
    """Read an ORJ1 dump back into a GridFunction or SlabField."""
    if hasattr(path_or_buf, "read"):
        text = path_or_buf.read()
    else:
        with open(path_or_buf, "r", encoding="ascii") as fh:
            text = fh.read()
    lines = text.splitlines()
    head = lines[0].split()
    if head[0] != "ORJ1":
        raise ParameterError("not an ORJ1 dump")
    n, N, L = int(head[1]), int(head[2]), float(head[3])
    heights = np.array([float(x) for x in head[4:]])
    nums = []
    for line in lines[1:]:
        if line.strip():
            nums.extend(float(x) for x in line.split())
    data = np.asarray(nums, dtype=float)
    if len(heights) == 0:
        return GridFunction(n, L, data.reshape((N,) * n))
    return SlabField(n, L, heights, data.reshape((len(heights),) + (N,) * n))


def slice_csv(obj, path_or_buf, axis=0, index=None, level=0):
    """Write a 1-d slice as CSV (coordinate, value)."""
    if isinstance(obj, SlabField):
        grid = obj.level(level)
    else:
        grid = obj
    N = grid.N
    index = N // 2 if index is None else index
    ax = grid.axes()[axis]
    sl = [index] * grid.n
    sl[axis] = slice(None)
    vals = grid.values[tuple(sl)]
    out = io.StringIO()
    out.write("x,value\n")
    for x, v in zip(ax, vals):
        out.write("%s,%s\n" % (_fmt(x), _fmt(v)))
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(out.getvalue())
    else:
        atomic_write_text(path_or_buf, out.getvalue())


def atomic_write_text(path, text):
    """Write text to ``path`` via a temp file and rename."""
    tmp = "%s.tmp%d" % (path, os.getpid())
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(text)
    os.replace(tmp, path)
