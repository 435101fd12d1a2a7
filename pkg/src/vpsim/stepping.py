"""Lie and Strang split-step time integrators for the Vlasov-Poisson system.

One step alternates the two exactly solvable sub-flows

    A: f(x, v) <- f(x - tau v, v)          (free streaming)
    B: f(x, v) <- f(x, v - tau E(x))       (acceleration, E frozen)

where E is solved once per step from the charge density of the
distribution entering the B sub-step.  Lie composition B(tau) A(tau) is
first order; the symmetric Strang composition A(tau/2) B(tau) A(tau/2) is
second order at essentially the same cost.  Both are free of a CFL
restriction; tau is limited only by accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import dg, spline
from .diagnostics import InvariantRecord, invariants
from .fields import NeutralityError, compute_field
from .grid import DistributionField, DG_NODES

SCHEMES = ("lie", "strang")

DG = "dg"
SPLINE_BACKEND = "spline"


@dataclass(frozen=True)
class StepperState:
    f: DistributionField
    t: float
    step_index: int
    backend: str


def _transport(f: DistributionField):
    if f.layout == DG_NODES:
        return dg.advect_x, dg.advect_v
    return spline.advect_x_spline, spline.advect_v_spline


def backend_of(f: DistributionField) -> str:
    return DG if f.layout == DG_NODES else SPLINE_BACKEND


def initial_state(f: DistributionField) -> StepperState:
    return StepperState(f=f, t=f.time, step_index=0, backend=backend_of(f))


def step(state: StepperState, tau: float, scheme: str = "strang",
         background: float = 1.0) -> StepperState:
    """Advance the distribution by one split step of size tau."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown splitting scheme {scheme!r}")
    adv_x, adv_v = _transport(state.f)
    f = state.f
    if scheme == "lie":
        f = adv_x(f, tau)
        E = compute_field(f, background)
        f = adv_v(f, E, tau)
    else:
        f = adv_x(f, 0.5 * tau)
        E = compute_field(f, background)
        f = adv_v(f, E, tau)
        f = adv_x(f, 0.5 * tau)
    if not np.all(np.isfinite(f.values)):
        raise FloatingPointError(f"non-finite values after step {state.step_index + 1}")
    t_new = state.t + tau
    return StepperState(f=f.with_values(f.values, time=t_new), t=t_new,
                        step_index=state.step_index + 1, backend=state.backend)


@dataclass
class RunResult:
    state: StepperState
    records: list[InvariantRecord]
    background: float


def run(f0: DistributionField, tau: float, t_final: float, scheme: str = "strang",
        *,
        background: float | None = None,
        record_every: int = 1,
        events: Iterable[tuple[float, Callable[[DistributionField], DistributionField]]] = (),
        per_step: Callable[[DistributionField, int], DistributionField] | None = None,
        on_record: Callable[[StepperState, InvariantRecord], None] | None = None) -> RunResult:
    """Integrate from f0 to t_final, recording invariants every k-th step.

    The final step is truncated so the run lands exactly on t_final.  The
    neutralizing background defaults to the initial mean charge density, so
    the per-solve neutrality check is exactly a mass-conservation guard.

    ``events`` are (time, transform) pairs applied once, right after the
    first step whose end time reaches the event time (an event at t=0 is
    applied before stepping).  ``per_step`` is applied after every full
    step (filtering hooks); both receive and return a DistributionField.
    Records always include the initial and final states.
    """
    if t_final < f0.time:
        raise ValueError("t_final lies before the initial time")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    if background is None:
        background = f0.mass() / f0.grid.length_x

    pending = sorted(events, key=lambda ev: ev[0])
    state = initial_state(f0)
    eps = 1e-9 * max(1.0, abs(t_final))
    while pending and pending[0][0] <= state.t + eps:
        state = StepperState(f=pending.pop(0)[1](state.f), t=state.t,
                             step_index=state.step_index, backend=state.backend)

    records: list[InvariantRecord] = []

    def _record(st: StepperState):
        rec = invariants(st.f, compute_field(st.f, background))
        records.append(rec)
        if on_record is not None:
            on_record(st, rec)

    _record(state)

    total = t_final - f0.time
    n_full = int(np.floor(total / tau + 1e-9))
    remainder = total - n_full * tau
    if remainder < 1e-12 * max(1.0, abs(t_final)):
        remainder = 0.0
    taus = [tau] * n_full + ([remainder] if remainder else [])

    t0 = f0.time
    for i, dt in enumerate(taus):
        try:
            state = step(state, dt, scheme, background)
        except NeutralityError as exc:
            raise NeutralityError(f"step {i + 1} (t={state.t + dt:g}): {exc}") from exc
        # exact time bookkeeping: t = t0 + (i+1) tau for the uniform part
        t_now = t_final if i == len(taus) - 1 else t0 + (i + 1) * tau
        state = StepperState(f=state.f.with_values(state.f.values, time=t_now),
                             t=t_now, step_index=state.step_index, backend=state.backend)
        while pending and pending[0][0] <= state.t + eps:
            state = StepperState(f=pending.pop(0)[1](state.f), t=state.t,
                                 step_index=state.step_index, backend=state.backend)
        if per_step is not None:
            f_new = per_step(state.f, state.step_index)
            if f_new is not state.f:
                state = StepperState(f=f_new, t=state.t, step_index=state.step_index,
                                     backend=state.backend)
        if state.step_index % record_every == 0 or i == len(taus) - 1:
            _record(state)

    return RunResult(state=state, records=records, background=background)
