"""Tracked invariants of a run and the analysis helpers built on them.

All integrals are taken with the backend's own quadrature: Gauss-Legendre
weights with cell Jacobians for the dG layout, plain h_x*h_v Riemann sums
for the equidistant layout (where that sum equals the exact integral of the
spline interpolant).  The entropy uses the clipped integrand

    s(g) = g log g  where g > 0,  else 0,

so it stays defined when the transport scheme produces negative values;
the convention 0 log 0 = 0 applies.
"""

from __future__ import annotations

from dataclasses import dataclass, fields as dataclass_fields

import numpy as np

from .fields import ElectricField1D
from .grid import DistributionField, EQUIDISTANT, PhaseSpaceGrid
from .spline import _cyclic_tridiagonal_16

#: denominator floor for relative errors of quantities that start near zero
ERROR_FLOOR = 1e-30

#: |q(0)| below this is treated as "initially zero" and reported absolutely
ABSOLUTE_CUTOFF = 1e-8

INVARIANT_NAMES = ("mass", "current", "kinetic", "electric",
                   "total_energy", "entropy", "l1", "l2", "min_value")


@dataclass(frozen=True)
class InvariantRecord:
    """One time sample of every tracked invariant."""

    t: float
    mass: float
    current: float
    kinetic: float
    electric: float
    total_energy: float
    entropy: float
    l1: float
    l2: float
    min_value: float

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f.name) for f in dataclass_fields(self))


#: overlap integrals of the cardinal cubic B-spline with its lag-j neighbor
_BSPLINE_GRAM = np.array([151.0 / 315.0, 397.0 / 1680.0, 1.0 / 42.0, 1.0 / 5040.0])


def _spline_l2(values: np.ndarray, h_x: float, h_v: float) -> float:
    """Exact L2 norm of the tensor-product cubic-spline interpolant.

    The dG quadrature sum equals the true L2 norm of the cell polynomials,
    but the plain grid sum of an equidistant field does not equal the norm
    of its spline interpolant; the interpolant norm is the quantity whose
    oscillation distinguishes the spline transport from the dG projection,
    so it is what gets recorded.  Computed as omega^T (G_x tensor G_v)
    omega with the banded cyclic B-spline Gram matrices.
    """
    omega = _cyclic_tridiagonal_16(values.T).T
    omega = _cyclic_tridiagonal_16(omega)

    def gram_apply(a: np.ndarray, axis: int) -> np.ndarray:
        out = _BSPLINE_GRAM[0] * a
        for j in (1, 2, 3):
            out = out + _BSPLINE_GRAM[j] * (np.roll(a, j, axis=axis)
                                            + np.roll(a, -j, axis=axis))
        return out

    quad = np.sum(omega * gram_apply(gram_apply(omega, 0), 1))
    return float(np.sqrt(h_x * h_v * quad))


def invariants(f: DistributionField, E: ElectricField1D) -> InvariantRecord:
    """Compute all tracked invariants of a distribution and its field."""
    g = f.grid
    wv, wx = g.v_weights, g.x_weights
    vals = f.values
    col = vals @ wx                       # x-integrated profile per velocity row
    mass = float(wv @ col)
    current = float((wv * g.v_dofs) @ col)
    kinetic = float(0.5 * (wv * g.v_dofs ** 2) @ col)
    electric = E.energy()
    l1 = float(wv @ np.abs(vals) @ wx)
    if f.layout == EQUIDISTANT:
        l2 = _spline_l2(vals, g.h_x, g.h_v)
    else:
        l2 = float(np.sqrt(wv @ (vals * vals) @ wx))
    pos = vals > 0
    slog = np.zeros_like(vals)
    slog[pos] = vals[pos] * np.log(vals[pos])
    entropy = -float(wv @ slog @ wx)
    return InvariantRecord(t=f.time, mass=mass, current=current, kinetic=kinetic,
                           electric=electric, total_energy=kinetic + electric,
                           entropy=entropy, l1=l1, l2=l2,
                           min_value=float(vals.min()))


def error_series(records: list[InvariantRecord],
                 reference: InvariantRecord | None = None) -> dict[str, np.ndarray]:
    """Per-invariant drift relative to the reference record (default: first).

    Errors are |q(t) - q(0)| / max(|q(0)|, floor); a quantity whose
    reference value is essentially zero (the current in the Landau
    scenarios) is reported as a plain absolute error instead.  min_value is
    passed through unchanged, as are the sample times under key "t".
    """
    if not records:
        raise ValueError("need at least one record")
    ref = reference if reference is not None else records[0]
    out = {"t": np.array([r.t for r in records])}
    scale = max(abs(ref.mass), 1.0)
    for name in INVARIANT_NAMES:
        series = np.array([getattr(r, name) for r in records])
        if name == "min_value":
            out[name] = series
            continue
        q0 = getattr(ref, name)
        if name == "current" and abs(q0) < ABSOLUTE_CUTOFF * scale:
            out[name] = np.abs(series - q0)
        else:
            out[name] = np.abs(series - q0) / max(abs(q0), ERROR_FLOOR)
    return out


def fit_damping_rate(times: np.ndarray, electric_energy: np.ndarray,
                     t_window: tuple[float, float], envelope: str | bool = "auto") -> float:
    """Exponential decay rate of the field amplitude from an energy series.

    Least-squares slope of log(electric energy) over the window, divided by
    2 (the energy decays at twice the amplitude rate).  Returns the rate as
    a positive number for decay.

    A damped standing wave's energy behaves like exp(-2 g t) cos^2(w t), so
    a straight fit through all samples is dragged far off by the deep dips
    at the zeros of the oscillation; with ``envelope`` on (or "auto", when
    the window holds at least three interior maxima) the fit runs through
    the local maxima of the series, which trace the decay envelope.  A
    monotone series such as a pure exponential has no interior maxima and
    is always fit through every sample.
    """
    times = np.asarray(times, dtype=float)
    electric_energy = np.asarray(electric_energy, dtype=float)
    lo, hi = t_window
    sel = (times >= lo) & (times <= hi)
    if not np.any(sel):
        raise ValueError(f"no samples inside window {t_window}")
    e = electric_energy[sel]
    if np.any(e <= 0):
        raise ValueError("electric energy must be positive throughout the fit window")
    t = times[sel]
    if envelope is True or envelope == "auto":
        interior = np.flatnonzero((e[1:-1] > e[:-2]) & (e[1:-1] > e[2:])) + 1
        if len(interior) >= 3:
            t, e = t[interior], e[interior]
        elif envelope is True:
            raise ValueError("fewer than 3 energy maxima inside the fit window")
    slope = np.polyfit(t, np.log(e), 1)[0]
    return -0.5 * float(slope)


def recurrence_time(grid: PhaseSpaceGrid, k: float) -> float:
    """Free-streaming phase-coherence time 2 pi / (k * dv).

    dv is the effective velocity DoF spacing: h_v/(degree_v+1) for the dG
    layout and h_v for the equidistant layout.  At multiples of this time a
    perturbation of wavenumber k spuriously rephases on the discrete
    velocity grid and the damped field rebounds.
    """
    if k <= 0:
        raise ValueError("wavenumber must be positive")
    return 2.0 * np.pi / (k * grid.dv_effective)


def positivity_l1_violations(records: list[InvariantRecord],
                             threshold: float = 1e-13) -> list[tuple[float, float, float]]:
    """Records where f went negative but the L1 norm did NOT exceed the mass.

    A mass-conserving scheme that produces negative values must inflate the
    L1 norm; for runs from nonnegative data every sample with
    min_value < -threshold therefore must have l1 - mass > 0.  Returns the
    offending (t, min_value, l1 - mass) triples, empty when the property
    holds.
    """
    bad = []
    for r in records:
        if r.min_value < -threshold and not r.l1 - r.mass > 0:
            bad.append((r.t, r.min_value, r.l1 - r.mass))
    return bad


def entropy_violations(records: list[InvariantRecord],
                       slack: float = 1e-10) -> list[tuple[float, float]]:
    """Steps where the entropy decreased by more than the slack.

    Entropy growth is an observed property of the dG transport, not a
    proven one, so a violation is reported as a finding for inspection
    rather than raised as an error anywhere in the stepping path.
    """
    out = []
    scale = max(1.0, abs(records[0].entropy)) if records else 1.0
    for prev, cur in zip(records, records[1:]):
        drop = prev.entropy - cur.entropy
        if drop > slack * scale:
            out.append((cur.t, drop))
    return out


def l2_increase_count(records: list[InvariantRecord], slack: float = 1e-13) -> int:
    """Number of recorded steps where the L2 norm grew beyond the slack."""
    if not records:
        return 0
    tol = slack * records[0].l2
    return sum(1 for prev, cur in zip(records, records[1:]) if cur.l2 > prev.l2 + tol)
