"""Phase-space geometry, Gauss-Legendre quadrature, and nodal/modal basis algebra.

The computational domain is a periodic box [x_min, x_max] x [v_min, v_max]
split into uniform cells along each dimension.  Two discretizations share
this module:

* discontinuous Galerkin ("dg_nodes" layout): each cell carries a polynomial
  of degree ``l``; the stored degrees of freedom are the function values at
  the l+1 Gauss-Legendre nodes of the cell.  Modal (Legendre) coefficients
  are obtained transiently by quadrature.
* interpolatory spline ("equidistant" layout): the degrees of freedom are
  plain function values on a uniform grid, one point per cell.

The Legendre polynomials used here are orthonormal on the reference cell
(-1, 1), i.e. p_k = sqrt((2k+1)/2) * P_k, so that the L2 projection of a
function onto the cell-wise polynomial space is plain truncation of its
coefficient vector and sum-of-squares identities hold verbatim in code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_DEGREE = 8

#: sentinel used for the degree fields of an equidistant (spline) grid
SPLINE = "spline"

DG_NODES = "dg_nodes"
EQUIDISTANT = "equidistant"


class ConfigurationError(ValueError):
    """Raised for invalid grid, basis, or scenario configuration."""


def legendre_values(degree: int, x: np.ndarray) -> np.ndarray:
    """Evaluate the orthonormal Legendre polynomials p_0..p_degree at ``x``.

    Returns an array of shape ``x.shape + (degree+1,)``.  Uses the
    three-term recurrence (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}, then
    rescales each P_k by sqrt((2k+1)/2).
    """
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (degree + 1,))
    pkm1 = np.ones_like(x)
    out[..., 0] = pkm1
    if degree >= 1:
        pk = x.copy()
        out[..., 1] = pk
        for k in range(1, degree):
            pkp1 = ((2 * k + 1) * x * pk - k * pkm1) / (k + 1)
            out[..., k + 1] = pkp1
            pkm1, pk = pk, pkp1
    scale = np.sqrt((2 * np.arange(degree + 1) + 1) / 2.0)
    return out * scale


def gauss_legendre(n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n_points``-point Gauss-Legendre rule on (-1, 1).

    Newton iteration on P_n with Chebyshev initial guesses; the result is
    symmetrized so that nodes and weights are exactly mirror-images in
    floating point.  Exact for polynomials of degree <= 2n-1.
    """
    if n_points == 1:
        return np.array([0.0]), np.array([2.0])

    def _legendre_pair(n, x):
        """P_n(x) and P_{n-1}(x) by the three-term recurrence."""
        pkm1 = np.ones_like(x)
        pk = x.copy()
        for k in range(1, n):
            pkm1, pk = pk, ((2 * k + 1) * x * pk - k * pkm1) / (k + 1)
        return pk, pkm1

    i = np.arange(n_points)
    x = np.cos(np.pi * (i + 0.75) / (n_points + 0.5))
    for _ in range(100):
        p, pm1 = _legendre_pair(n_points, x)
        # P'_n = n (x P_n - P_{n-1}) / (x^2 - 1)
        dp = n_points * (x * p - pm1) / (x * x - 1.0)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    p, pm1 = _legendre_pair(n_points, x)
    dp = n_points * (x * p - pm1) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    # enforce exact mirror symmetry so that +-v node pairs are bitwise negatives
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


@dataclass(frozen=True)
class CellBasis:
    """Quadrature rule and modal/nodal transforms on the reference cell (-1, 1).

    ``vandermonde[m, k] = p_k(node_m)`` maps Legendre coefficients to node
    values; ``to_legendre = vandermonde^T diag(weights)`` is its exact
    inverse by Gauss-Legendre quadrature (the integrands p_j p_k have
    degree <= 2*degree, within the exactness range of the rule).
    """

    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    vandermonde: np.ndarray
    to_legendre: np.ndarray

    def node_values_to_coeffs(self, values: np.ndarray) -> np.ndarray:
        return values @ self.to_legendre.T

    def coeffs_to_node_values(self, coeffs: np.ndarray) -> np.ndarray:
        return coeffs @ self.vandermonde.T


@lru_cache(maxsize=None)
def make_basis(degree: int) -> CellBasis:
    """Build the Gauss-Legendre nodal basis of the given polynomial degree."""
    if not 0 <= degree <= MAX_DEGREE:
        raise ConfigurationError(f"polynomial degree must be in [0, {MAX_DEGREE}], got {degree}")
    nodes, weights = gauss_legendre(degree + 1)
    vand = legendre_values(degree, nodes)
    to_leg = vand.T * weights
    b = CellBasis(degree=degree, nodes=nodes, weights=weights,
                  vandermonde=vand, to_legendre=to_leg)
    b.nodes.setflags(write=False)
    b.weights.setflags(write=False)
    b.vandermonde.setflags(write=False)
    b.to_legendre.setflags(write=False)
    return b


def nodes_to_legendre(cell_values: np.ndarray, basis: CellBasis) -> np.ndarray:
    """Orthonormal-Legendre coefficients of the polynomial with the given node values.

    Works on the last axis; exact for polynomials of degree <= basis.degree.
    """
    cell_values = np.asarray(cell_values, dtype=float)
    if cell_values.shape[-1] != basis.degree + 1:
        raise ValueError(f"expected {basis.degree + 1} node values, got {cell_values.shape[-1]}")
    return basis.node_values_to_coeffs(cell_values)


def legendre_to_nodes(coeffs: np.ndarray, basis: CellBasis) -> np.ndarray:
    """Evaluate a Legendre expansion at the Gauss-Legendre nodes (inverse of nodes_to_legendre)."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[-1] != basis.degree + 1:
        raise ValueError(f"expected {basis.degree + 1} coefficients, got {coeffs.shape[-1]}")
    return basis.coeffs_to_node_values(coeffs)


def _dim_dofs(lo: float, hi: float, n_cells: int, degree) -> tuple[np.ndarray, np.ndarray]:
    """DoF coordinates and integration weights for one periodic dimension.

    Equidistant DoFs sit at interval midpoints, not endpoints: a point
    placed exactly on the periodic seam v_min == v_max would be its own
    mirror image under v -> -v while carrying the one-sided coordinate
    value, which breaks the reflection symmetry that protects the odd
    velocity moments.  Midpoint placement keeps the DoF set symmetric (as
    the interior Gauss-Legendre nodes of the dG layout already are).
    """
    h = (hi - lo) / n_cells
    if degree == SPLINE:
        coords = lo + h * (0.5 + np.arange(n_cells))
        weights = np.full(n_cells, h)
    else:
        basis = make_basis(degree)
        left = lo + h * np.arange(n_cells)
        coords = (left[:, None] + 0.5 * h * (1.0 + basis.nodes[None, :])).ravel()
        weights = np.tile(0.5 * h * basis.weights, n_cells)
    return coords, weights


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Tensor-product periodic grid over (x, v) with per-dimension degree.

    ``degree_x``/``degree_v`` are the cell polynomial degrees for the dG
    layout, or the sentinel string ``"spline"`` for the equidistant layout
    (in which case a "cell" is one grid interval and there is one DoF per
    cell).  Immutable after construction.
    """

    x_min: float
    x_max: float
    v_min: float
    v_max: float
    n_cells_x: int
    n_cells_v: int
    degree_x: int | str
    degree_v: int | str

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.v_max > self.v_min):
            raise ConfigurationError("domain bounds must be ordered")
        if self.n_cells_x < 1 or self.n_cells_v < 1:
            raise ConfigurationError("cell counts must be positive")
        degs = (self.degree_x, self.degree_v)
        if (degs[0] == SPLINE) != (degs[1] == SPLINE):
            raise ConfigurationError("degree sentinel 'spline' must be used for both dimensions")
        if degs[0] != SPLINE:
            for d in degs:
                if not isinstance(d, (int, np.integer)) or not 0 <= d <= MAX_DEGREE:
                    raise ConfigurationError(f"polynomial degree must be in [0, {MAX_DEGREE}], got {d}")
        if degs[0] == SPLINE and (self.n_cells_x < 4 or self.n_cells_v < 4):
            raise ConfigurationError("spline grids need at least 4 points per dimension")
        xd, xw = _dim_dofs(self.x_min, self.x_max, self.n_cells_x, self.degree_x)
        vd, vw = _dim_dofs(self.v_min, self.v_max, self.n_cells_v, self.degree_v)
        for name, arr in (("_x_dofs", xd), ("_x_weights", xw), ("_v_dofs", vd), ("_v_weights", vw)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def dg(cls, x_span, v_span, n_cells_x, n_cells_v, degree_x, degree_v=None):
        if degree_v is None:
            degree_v = degree_x
        return cls(x_span[0], x_span[1], v_span[0], v_span[1],
                   n_cells_x, n_cells_v, degree_x, degree_v)

    @classmethod
    def spline(cls, x_span, v_span, n_points_x, n_points_v):
        return cls(x_span[0], x_span[1], v_span[0], v_span[1],
                   n_points_x, n_points_v, SPLINE, SPLINE)

    @property
    def is_dg(self) -> bool:
        return self.degree_x != SPLINE

    @property
    def layout(self) -> str:
        return DG_NODES if self.is_dg else EQUIDISTANT

    @property
    def h_x(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells_x

    @property
    def h_v(self) -> float:
        return (self.v_max - self.v_min) / self.n_cells_v

    @property
    def length_x(self) -> float:
        return self.x_max - self.x_min

    @property
    def length_v(self) -> float:
        return self.v_max - self.v_min

    @property
    def n_dof_x(self) -> int:
        return self.n_cells_x * (self.degree_x + 1) if self.is_dg else self.n_cells_x

    @property
    def n_dof_v(self) -> int:
        return self.n_cells_v * (self.degree_v + 1) if self.is_dg else self.n_cells_v

    @property
    def x_dofs(self) -> np.ndarray:
        """Position coordinates of the DoF columns."""
        return self._x_dofs

    @property
    def v_dofs(self) -> np.ndarray:
        """Velocity coordinates of the DoF rows."""
        return self._v_dofs

    @property
    def x_weights(self) -> np.ndarray:
        """1D integration weights such that integral over x = sum(x_weights * values)."""
        return self._x_weights

    @property
    def v_weights(self) -> np.ndarray:
        return self._v_weights

    @property
    def basis_x(self) -> CellBasis:
        if not self.is_dg:
            raise ConfigurationError("equidistant grid has no cell basis")
        return make_basis(self.degree_x)

    @property
    def basis_v(self) -> CellBasis:
        if not self.is_dg:
            raise ConfigurationError("equidistant grid has no cell basis")
        return make_basis(self.degree_v)

    @property
    def dx_equidistant(self) -> float:
        """Spacing of the globally equidistant position grid used by the field solve."""
        return self.h_x / (self.degree_x + 1) if self.is_dg else self.h_x

    @property
    def x_equidistant(self) -> np.ndarray:
        """The equidistant position grid (uniform spacing, half-spacing offset).

        For a dG grid each cell contributes the midpoints of its degree+1
        equal subintervals, which line up into a single uniform grid of
        spacing h_x/(degree_x+1).  For an equidistant grid these are the
        DoF positions themselves; both start half a spacing above x_min.
        """
        d = self.dx_equidistant
        return self.x_min + d * (0.5 + np.arange(self.n_dof_x))

    @property
    def dv_effective(self) -> float:
        """Effective velocity resolution: DoF spacing of the v grid."""
        return self.h_v / (self.degree_v + 1) if self.is_dg else self.h_v


@dataclass(frozen=True)
class DistributionField:
    """The discrete particle density f at its scheme-specific degrees of freedom.

    ``values[j, i]`` is f at velocity DoF j and position DoF i.  Instances
    are immutable; transport operations return new fields.
    """

    grid: PhaseSpaceGrid
    layout: str
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if self.layout not in (DG_NODES, EQUIDISTANT):
            raise ConfigurationError(f"unknown layout {self.layout!r}")
        if self.layout != self.grid.layout:
            raise ConfigurationError(f"layout {self.layout!r} does not match grid layout {self.grid.layout!r}")
        expected = (self.grid.n_dof_v, self.grid.n_dof_x)
        if self.values.shape != expected:
            raise ConfigurationError(f"values shape {self.values.shape} does not match grid DoFs {expected}")
        if not np.all(np.isfinite(self.values)):
            raise FloatingPointError("distribution field contains non-finite values")

    def with_values(self, values: np.ndarray, time: float | None = None) -> "DistributionField":
        return DistributionField(self.grid, self.layout, values,
                                 self.time if time is None else time)

    @classmethod
    def from_function(cls, grid: PhaseSpaceGrid, func, time: float = 0.0) -> "DistributionField":
        """Sample ``func(x, v)`` at the grid's DoF locations."""
        x = grid.x_dofs[None, :]
        v = grid.v_dofs[:, None]
        shape = (grid.n_dof_v, grid.n_dof_x)
        values = np.broadcast_to(np.asarray(func(x, v), dtype=float), shape).copy()
        return cls(grid, grid.layout, values, time)

    def mass(self) -> float:
        """Total phase-space integral of f under the grid's quadrature."""
        return float(self.grid.v_weights @ self.values @ self.grid.x_weights)
