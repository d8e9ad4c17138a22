"""Model geometries (interval, rectangle), space-time grids and grid functions.

Only uniform tensor grids on an interval [0, L] or a rectangle
[0, Lx] x [0, Ly] are supported; the boundary is the endpoint pair or the
four edges, with axis-aligned outward normals.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class DomainKind(Enum):
    INTERVAL = "interval"
    RECTANGLE = "rectangle"


@dataclass(frozen=True)
class DomainSpec:
    kind: DomainKind
    lengths: tuple[float, ...]

    def __post_init__(self):
        expected = 1 if self.kind is DomainKind.INTERVAL else 2
        if len(self.lengths) != expected:
            raise ValueError(
                f"{self.kind.value} domain needs {expected} length(s), "
                f"got {len(self.lengths)}"
            )
        if any(L <= 0 for L in self.lengths):
            raise ValueError(f"domain lengths must be positive, got {self.lengths}")

    @property
    def dimension(self) -> int:
        return len(self.lengths)


def interval(L: float = 1.0) -> DomainSpec:
    return DomainSpec(DomainKind.INTERVAL, (float(L),))


def rectangle(Lx: float = 1.0, Ly: float = 1.0) -> DomainSpec:
    return DomainSpec(DomainKind.RECTANGLE, (float(Lx), float(Ly)))


@dataclass(frozen=True)
class GridSpec:
    nx: int
    nt: int
    T: float
    ny: int = 0  # ignored for interval domains

    def __post_init__(self):
        if self.nx < 3:
            raise ValueError(f"nx must be >= 3, got {self.nx}")
        if self.nt < 2:
            raise ValueError(f"nt must be >= 2, got {self.nt}")
        if self.T <= 0:
            raise ValueError(f"T must be positive, got {self.T}")

    @property
    def dt(self) -> float:
        return self.T / self.nt


@dataclass(frozen=True)
class BoundaryPoint:
    """A boundary node together with its outward normal."""

    node: int
    normal: tuple[float, ...]


@dataclass(frozen=True)
class GridIndex:
    """Node coordinates and boundary/interior classification for a tensor grid.

    Immutable after construction; safe for concurrent read.
    """

    domain: DomainSpec
    grid: GridSpec
    axes: tuple[np.ndarray, ...]          # per-axis node coordinates
    nodes: np.ndarray                     # (n_nodes, dim) coordinates
    boundary_mask: np.ndarray             # bool, (n_nodes,)
    times: np.ndarray                     # (nt+1,) time nodes
    boundary_points: tuple[BoundaryPoint, ...] = field(default=())
    boundary_weights: np.ndarray = field(default=None)  # surface quadrature weights

    @property
    def interior_mask(self) -> np.ndarray:
        return ~self.boundary_mask

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def h(self) -> tuple[float, ...]:
        spec = self.grid
        if self.domain.dimension == 1:
            return (self.domain.lengths[0] / (spec.nx - 1),)
        return (self.domain.lengths[0] / (spec.nx - 1),
                self.domain.lengths[1] / (spec.ny - 1))

    def node_index(self, *idx: int) -> int:
        if self.domain.dimension == 1:
            return idx[0]
        return idx[0] * self.grid.ny + idx[1]

    def boundary_point_at(self, coords) -> BoundaryPoint:
        """Boundary point nearest to the given physical coordinates."""
        coords = np.atleast_1d(np.asarray(coords, dtype=float))
        best = min(self.boundary_points,
                   key=lambda bp: np.sum((self.nodes[bp.node] - coords) ** 2))
        return best


def build_grid(domain: DomainSpec, grid: GridSpec) -> GridIndex:
    """Build node coordinates, boundary enumeration and masks.

    Node coordinates are exactly i*h to machine precision.  Boundary
    surface weights are trapezoid weights per edge, with corner nodes of
    the rectangle carrying half weight on each incident edge.
    """
    times = np.linspace(0.0, grid.T, grid.nt + 1)
    if domain.dimension == 1:
        L = domain.lengths[0]
        h = L / (grid.nx - 1)
        x = np.arange(grid.nx) * h
        nodes = x[:, None]
        bmask = np.zeros(grid.nx, dtype=bool)
        bmask[0] = bmask[-1] = True
        bpoints = (BoundaryPoint(0, (-1.0,)), BoundaryPoint(grid.nx - 1, (1.0,)))
        # 1D boundary: counting measure on the two endpoints
        bweights = np.array([1.0, 1.0])
        return GridIndex(domain, grid, (x,), nodes, bmask, times, bpoints, bweights)

    if grid.ny < 3:
        raise ValueError(f"ny must be >= 3, got {grid.ny}")
    Lx, Ly = domain.lengths
    hx = Lx / (grid.nx - 1)
    hy = Ly / (grid.ny - 1)
    x = np.arange(grid.nx) * hx
    y = np.arange(grid.ny) * hy
    X, Y = np.meshgrid(x, y, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    bmask = np.zeros((grid.nx, grid.ny), dtype=bool)
    bmask[0, :] = bmask[-1, :] = True
    bmask[:, 0] = bmask[:, -1] = True
    bmask = bmask.ravel()

    bpoints = []
    bweights = []
    for flat in np.nonzero(bmask)[0]:
        ix, iy = divmod(flat, grid.ny)
        nrm = np.zeros(2)
        w = 0.0
        if ix == 0:
            nrm[0] -= 1.0
            w += hy * (0.5 if iy in (0, grid.ny - 1) else 1.0)
        if ix == grid.nx - 1:
            nrm[0] += 1.0
            w += hy * (0.5 if iy in (0, grid.ny - 1) else 1.0)
        if iy == 0:
            nrm[1] -= 1.0
            w += hx * (0.5 if ix in (0, grid.nx - 1) else 1.0)
        if iy == grid.ny - 1:
            nrm[1] += 1.0
            w += hx * (0.5 if ix in (0, grid.nx - 1) else 1.0)
        n = np.linalg.norm(nrm)
        nrm = nrm / n if n > 0 else nrm
        bpoints.append(BoundaryPoint(int(flat), tuple(nrm)))
        bweights.append(w)
    return GridIndex(domain, grid, (x, y), nodes, bmask, times,
                     tuple(bpoints), np.array(bweights))


@dataclass(frozen=True)
class GridFunction:
    """Values of a space-time function sampled on a GridIndex.

    values has shape (n_nodes, nt+1); all entries finite.
    """

    values: np.ndarray
    index: GridIndex

    def __post_init__(self):
        expected = (self.index.n_nodes, self.index.grid.nt + 1)
        if self.values.shape != expected:
            raise ValueError(
                f"values shape {self.values.shape} != expected {expected}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("GridFunction values must be finite")

    def at_time(self, k: int) -> np.ndarray:
        return self.values[:, k]


def sample_function(expr, index: GridIndex, time_dependent: bool = False) -> GridFunction:
    """Sample a scalar field on every node (and time node, if time-dependent).

    expr is called as expr(x[, y]) or expr(x[, y], t).  Non-finite samples
    are rejected with an error naming the offending node.
    """
    nt1 = index.grid.nt + 1
    vals = np.empty((index.n_nodes, nt1))
    for i, node in enumerate(index.nodes):
        coords = tuple(node)
        if time_dependent:
            for k, t in enumerate(index.times):
                vals[i, k] = expr(*coords, t)
        else:
            vals[i, :] = expr(*coords)
    bad = np.argwhere(~np.isfinite(vals))
    if bad.size:
        i, k = bad[0]
        raise ValueError(
            f"non-finite sample at node {i} (x={index.nodes[i]}), "
            f"t={index.times[k]}")
    return GridFunction(vals, index)


def dump_grid_function_csv(gf: GridFunction, path) -> None:
    """CSV dump: one row per (node, time), columns x[,y],t,value."""
    dim = gf.index.domain.dimension
    header = (["x", "t", "value"] if dim == 1 else ["x", "y", "t", "value"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, node in enumerate(gf.index.nodes):
            for k, t in enumerate(gf.index.times):
                row = [f"{c:.17g}" for c in node]
                row += [f"{t:.17g}", f"{gf.values[i, k]:.17g}"]
                writer.writerow(row)


def space_weights(index: GridIndex) -> np.ndarray:
    """Trapezoid quadrature weights over the domain interior, per node."""
    if index.domain.dimension == 1:
        h = index.h[0]
        w = np.full(index.n_nodes, h)
        w[0] = w[-1] = h / 2
        return w
    hx, hy = index.h
    wx = np.full(index.grid.nx, hx)
    wx[0] = wx[-1] = hx / 2
    wy = np.full(index.grid.ny, hy)
    wy[0] = wy[-1] = hy / 2
    return np.outer(wx, wy).ravel()
