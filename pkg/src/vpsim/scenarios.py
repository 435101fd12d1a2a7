"""Canonical initial conditions, the echo kick, and the filamentation filter.

Shipped configurations (domain [0, 4 pi] x [-6, 6] unless noted):

* nonlinear_landau:  f0 = (1/sqrt(2 pi)) exp(-v^2/2) (1 + 0.5 cos(x/2))
* linear_landau:     same with perturbation amplitude 0.01
* bump_on_tail:      f0 = (1/sqrt(2 pi)) (0.8 exp(-v^2/2)
                          + 0.2 exp(-4 (v-2.5)^2) (1 + 0.1 cos x))
* blob_expansion:    f0 = (1/(2 pi)) exp(-v^2/2) exp(-(x - L/2)^2/2)
* plasma_echo:       f0 = (1/sqrt(2 pi)) exp(-v^2/2) (1 + 1e-3 cos(k1 x)) on
                     [0, 200] x [-6, 6] with k1 = 12 pi/100, plus a second
                     perturbation (1e-3/sqrt(2 pi)) exp(-v^2/2) cos(k2 x),
                     k2 = 25 pi/100, injected at t = 200.  L = 200 is the
                     smallest box length commensurate with both k1 and k2.

Every perturbation wavenumber must fit the box (k L in 2 pi Z); this is
checked at load.  The blob's Gaussian in x is not exactly periodic; its
tails (~exp(-2 pi^2)) are accepted as-is.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fields import dg_to_equidistant, equidistant_to_dg
from .grid import ConfigurationError, DistributionField, DG_NODES, PhaseSpaceGrid

_NORM = 1.0 / np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class EchoKick:
    time: float
    amplitude: float
    wavenumber: float


@dataclass(frozen=True)
class FilterSettings:
    """Sharp spectral cutoff in v: zero mode indices above eta * n_v/2."""

    eta: float = 2.0 / 3.0
    cadence: int = 1

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ConfigurationError(f"filter eta must be in (0, 1], got {self.eta}")
        if self.cadence < 1:
            raise ConfigurationError("filter cadence must be >= 1")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    family: str                  # "landau" | "bump_on_tail" | "blob"
    x_min: float
    x_max: float
    v_min: float
    v_max: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    k: float = 0.0
    echo_kick: EchoKick | None = None
    filter: FilterSettings | None = None

    @property
    def length_x(self) -> float:
        return self.x_max - self.x_min

    def validate(self) -> "ScenarioConfig":
        if self.family not in ("landau", "bump_on_tail", "blob"):
            raise ConfigurationError(f"unknown scenario family {self.family!r}")
        for label, k in (("perturbation", self.k),
                         ("echo kick", self.echo_kick.wavenumber if self.echo_kick else 0.0)):
            if k:
                cycles = k * self.length_x / (2.0 * np.pi)
                if abs(cycles - round(cycles)) > 1e-9:
                    raise ConfigurationError(
                        f"{label} wavenumber {k} is incommensurate with the box "
                        f"(k L / 2 pi = {cycles})")
        return self


SCENARIOS: dict[str, ScenarioConfig] = {
    "nonlinear_landau": ScenarioConfig(
        name="nonlinear_landau", family="landau",
        x_min=0.0, x_max=4.0 * np.pi, v_min=-6.0, v_max=6.0,
        alpha=0.5, k=0.5),
    "linear_landau": ScenarioConfig(
        name="linear_landau", family="landau",
        x_min=0.0, x_max=4.0 * np.pi, v_min=-6.0, v_max=6.0,
        alpha=1e-2, k=0.5),
    "bump_on_tail": ScenarioConfig(
        name="bump_on_tail", family="bump_on_tail",
        x_min=0.0, x_max=4.0 * np.pi, v_min=-6.0, v_max=6.0,
        alpha=0.8, beta=0.2, gamma=0.1, k=1.0),
    "blob_expansion": ScenarioConfig(
        name="blob_expansion", family="blob",
        x_min=0.0, x_max=4.0 * np.pi, v_min=-6.0, v_max=6.0),
    "plasma_echo": ScenarioConfig(
        name="plasma_echo", family="landau",
        x_min=0.0, x_max=200.0, v_min=-6.0, v_max=6.0,
        alpha=1e-3, k=12.0 * np.pi / 100.0,
        echo_kick=EchoKick(time=200.0, amplitude=1e-3,
                           wavenumber=25.0 * np.pi / 100.0)),
}


def scenario(name: str, **overrides) -> ScenarioConfig:
    """Look up a shipped configuration, optionally overriding fields."""
    try:
        cfg = SCENARIOS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(SCENARIOS))}") from None
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg.validate()


def _ic_function(config: ScenarioConfig):
    a, b, g, k = config.alpha, config.beta, config.gamma, config.k
    if config.family == "landau":
        return lambda x, v: _NORM * np.exp(-0.5 * v ** 2) * (1.0 + a * np.cos(k * x))
    if config.family == "bump_on_tail":
        return lambda x, v: _NORM * (a * np.exp(-0.5 * v ** 2)
                                     + b * np.exp(-4.0 * (v - 2.5) ** 2)
                                     * (1.0 + g * np.cos(k * x)))
    center = 0.5 * (config.x_min + config.x_max)
    return lambda x, v: (1.0 / (2.0 * np.pi)) * np.exp(-0.5 * v ** 2) \
        * np.exp(-0.5 * (x - center) ** 2)


def initial_condition(config: ScenarioConfig, grid: PhaseSpaceGrid) -> DistributionField:
    """Sample the scenario's initial distribution at the grid's DoF locations."""
    config.validate()
    for attr in ("x_min", "x_max", "v_min", "v_max"):
        if abs(getattr(config, attr) - getattr(grid, attr)) > 1e-12 * max(1.0, config.length_x):
            raise ConfigurationError(
                f"grid {attr}={getattr(grid, attr)} does not match scenario "
                f"{attr}={getattr(config, attr)}")
    return DistributionField.from_function(grid, _ic_function(config))


def apply_echo_kick(f: DistributionField, kick: EchoKick) -> DistributionField:
    """Add the second echo perturbation (amp/sqrt(2 pi)) exp(-v^2/2) cos(k2 x)."""
    g = f.grid
    bump = kick.amplitude * _NORM * np.multiply.outer(
        np.exp(-0.5 * g.v_dofs ** 2), np.cos(kick.wavenumber * g.x_dofs))
    return f.with_values(f.values + bump)


def filament_filter(f: DistributionField, eta: float) -> DistributionField:
    """Remove high velocity frequencies: per position column, Fourier transform
    along v and zero every mode with index above eta * n_v/2.

    The dG layout is filtered through the equidistant transfer layer (per
    column: evaluate, cut, interpolate back).  Mode 0 is untouched, so the
    column sums on the equidistant representation are preserved exactly and
    the truncation can only shrink the discrete L2 norm there; both are
    asserted on every application.
    """
    if not 0.0 < eta <= 1.0:
        raise ConfigurationError(f"filter eta must be in (0, 1], got {eta}")
    g = f.grid
    if f.layout == DG_NODES:
        work = dg_to_equidistant(np.ascontiguousarray(f.values.T), g.basis_v).T
    else:
        work = f.values
    n_v = work.shape[0]
    spec = np.fft.rfft(work, axis=0)
    mode = np.arange(spec.shape[0])
    spec[mode > eta * (n_v / 2.0), :] = 0.0
    cut = np.fft.irfft(spec, n=n_v, axis=0)

    col_scale = np.max(np.abs(work.sum(axis=0))) + 1.0
    if np.max(np.abs(cut.sum(axis=0) - work.sum(axis=0))) > 1e-12 * col_scale:
        raise FloatingPointError("filter changed the mode-0 content of a column")
    if float(np.sum(cut * cut)) > float(np.sum(work * work)) * (1.0 + 1e-12):
        raise FloatingPointError("filter increased the discrete L2 norm")

    if f.layout == DG_NODES:
        new_values = equidistant_to_dg(np.ascontiguousarray(cut.T), g.basis_v).T
        new_values = np.ascontiguousarray(new_values)
    else:
        new_values = cut
    return f.with_values(new_values)


def make_filter_hook(settings: FilterSettings):
    """Per-step hook applying the filter at the configured cadence."""

    def hook(f: DistributionField, step_index: int) -> DistributionField:
        if step_index % settings.cadence == 0:
            return filament_filter(f, settings.eta)
        return f

    return hook


def make_echo_event(kick: EchoKick):
    """(time, transform) pair for the run loop's event list."""
    return (kick.time, lambda f: apply_echo_kick(f, kick))
