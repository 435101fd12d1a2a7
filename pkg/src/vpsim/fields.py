"""Charge density, spectral Poisson solve, and the dG/equidistant transfer layer.

The electrostatic field on the periodic position grid satisfies
E' = rho - background with zero mean, solved exactly in Fourier space:
E_hat(m) = rho_hat(m) / (i k_m) for m != 0 with k_m = 2 pi m / L, and
E_hat(0) = 0.  The background never enters the solve (it only affects the
zero mode, which is dropped); it is used for the neutrality check that
guards against broken mass conservation upstream.

The dG degrees of freedom live at Gauss-Legendre nodes, so before the FFT
the cell polynomials are evaluated on a globally equidistant grid (the
midpoints of degree+1 equal subintervals of each cell), and the computed
field is brought back to the nodes by cell-wise polynomial interpolation of
the same degree.  This round trip is exact on cell polynomials of degree
<= l but not in general, and it is the one place where the discrete total
current picks up an error in the acceleration step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import CellBasis, DistributionField, DG_NODES, legendre_values, make_basis

NEUTRALITY_TOL = 1e-10


class NeutralityError(RuntimeError):
    """Total charge does not match the neutralizing background."""


@dataclass(frozen=True)
class ChargeDensity:
    """Velocity integral of f on the position DoFs of its backend."""

    values: np.ndarray
    layout: str
    length: float
    dx_equidistant: float
    weights: np.ndarray
    basis: CellBasis | None = None

    def integral(self) -> float:
        """Total charge under the backend's own quadrature (equals the mass of f)."""
        return float(self.weights @ self.values)


@dataclass(frozen=True)
class ElectricField1D:
    """Zero-mean periodic field on the equidistant grid and at the position DoFs.

    For the equidistant layout the two value arrays coincide; for the dG
    layout ``values_at_dof`` holds the field interpolated to the
    Gauss-Legendre nodes.
    """

    values_equidistant: np.ndarray
    values_at_dof: np.ndarray
    dx: float
    mean: float = 0.0

    def energy(self) -> float:
        """Field energy integral E^2/2 dx on the equidistant grid."""
        return 0.5 * self.dx * float(self.values_equidistant @ self.values_equidistant)


def density(f: DistributionField) -> ChargeDensity:
    """Charge density rho(x_i) = integral of f(x_i, v) dv by the grid quadrature."""
    g = f.grid
    vals = g.v_weights @ f.values
    return ChargeDensity(values=vals, layout=f.layout, length=g.length_x,
                         dx_equidistant=g.dx_equidistant, weights=g.x_weights,
                         basis=g.basis_x if f.layout == DG_NODES else None)


@lru_cache(maxsize=None)
def _transfer_matrices(degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell matrices (node values -> equidistant values, and back).

    The equidistant points of a cell sit at reference coordinates
    xi_m = -1 + (2m+1)/(degree+1); the return transfer interpolates the
    unique degree-l polynomial through those points and evaluates it at the
    Gauss-Legendre nodes.
    """
    basis = make_basis(degree)
    k = degree + 1
    xi_eq = -1.0 + (2.0 * np.arange(k) + 1.0) / k
    p_eq = legendre_values(degree, xi_eq)
    to_eq = p_eq @ basis.to_legendre
    to_nodes = basis.vandermonde @ np.linalg.inv(p_eq)
    return to_eq, to_nodes


def dg_to_equidistant(values: np.ndarray, basis: CellBasis) -> np.ndarray:
    """Evaluate cell polynomials (node values, last axis) on the equidistant grid."""
    to_eq, _ = _transfer_matrices(basis.degree)
    k = basis.degree + 1
    v = np.asarray(values, dtype=float)
    shaped = v.reshape(v.shape[:-1] + (-1, k))
    return (shaped @ to_eq.T).reshape(v.shape)


def equidistant_to_dg(values: np.ndarray, basis: CellBasis) -> np.ndarray:
    """Interpolate equidistant samples (last axis) back to Gauss-Legendre node values."""
    _, to_nodes = _transfer_matrices(basis.degree)
    k = basis.degree + 1
    v = np.asarray(values, dtype=float)
    shaped = v.reshape(v.shape[:-1] + (-1, k))
    return (shaped @ to_nodes.T).reshape(v.shape)


def poisson_equidistant(rho: np.ndarray, length: float, background: float = 1.0,
                        check_neutrality: bool = True) -> np.ndarray:
    """Solve E' = rho - background spectrally on a uniform periodic grid.

    Raises NeutralityError if the integrated charge imbalance exceeds
    NEUTRALITY_TOL; a violation means mass conservation broke upstream, not
    that the solve should proceed.  The Nyquist mode (even n) is dropped:
    its derivative has no consistent single-sided representation.
    """
    rho = np.asarray(rho, dtype=float)
    n = rho.size
    if check_neutrality:
        imbalance = (float(rho.mean()) - background) * length
        if abs(imbalance) > NEUTRALITY_TOL * max(1.0, abs(background) * length):
            raise NeutralityError(
                f"charge imbalance {imbalance:.3e} exceeds tolerance; "
                f"density is not neutral against background {background!r}")
    rho_hat = np.fft.rfft(rho)
    k = 2.0 * np.pi * np.arange(rho_hat.size) / length
    e_hat = np.zeros_like(rho_hat)
    e_hat[1:] = rho_hat[1:] / (1j * k[1:])
    if n % 2 == 0:
        e_hat[-1] = 0.0
    return np.fft.irfft(e_hat, n=n)


def compute_field(f: DistributionField, background: float = 1.0) -> ElectricField1D:
    """Full field solve for a distribution: density, transfer, FFT inversion, transfer back."""
    return solve_poisson(density(f), background=background)


def solve_poisson(rho: ChargeDensity, background: float = 1.0) -> ElectricField1D:
    """Electric field of a charge density, handling the dG grid transfer if needed.

    The neutrality guard integrates the density with its own (native)
    quadrature so that it passes exactly as long as the mass of f is
    conserved; the equidistant samples of a dG density carry an O(h^(l+1))
    transfer error in their plain sum that must not trip it.
    """
    imbalance = rho.integral() - background * rho.length
    if abs(imbalance) > NEUTRALITY_TOL * max(1.0, abs(background) * rho.length):
        raise NeutralityError(
            f"charge imbalance {imbalance:.3e} exceeds tolerance; "
            f"density is not neutral against background {background!r}")
    if rho.layout == DG_NODES:
        rho_eq = dg_to_equidistant(rho.values, rho.basis)
    else:
        rho_eq = rho.values
    e_eq = poisson_equidistant(rho_eq, rho.length, background, check_neutrality=False)
    if rho.layout == DG_NODES:
        e_dof = equidistant_to_dg(e_eq, rho.basis)
    else:
        e_dof = e_eq
    return ElectricField1D(values_equidistant=e_eq, values_at_dof=e_dof,
                           dx=rho.dx_equidistant, mean=float(e_eq.mean()))


def resample_periodic(values: np.ndarray, length: float, offset: float,
                      x_new: np.ndarray) -> np.ndarray:
    """Evaluate the trigonometric interpolant of uniform periodic samples.

    ``values[s]`` are samples at offset + s * length/n.  Spectrally exact
    for band-limited data; used to compare fields living on differently
    offset uniform grids.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    v_hat = np.fft.rfft(values) / n
    m = np.arange(v_hat.size)
    if n % 2 == 0:
        v_hat = v_hat.copy()
        v_hat[-1] *= 0.5  # split the Nyquist mode symmetrically
    phase = np.exp(2j * np.pi * np.multiply.outer(np.asarray(x_new) - offset, m) / length)
    coeff = np.where(m == 0, 1.0, 2.0)
    return np.real(phase @ (coeff * v_hat))
