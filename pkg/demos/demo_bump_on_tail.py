"""Bump-on-tail instability: a beam-driven vortex growing out of a tiny seed.

The shipped initial condition perturbs the beam at k = 1, which Landau
theory says is damped (rate -0.27); the linearly unstable mode of this
equilibrium is the box fundamental k = 1/2 (growth rate +0.0266 from the
kinetic dispersion relation).  Left alone that mode grows out of rounding
noise and the vortex appears extremely late, so this demo seeds it with a
tiny mass-neutral kick and watches both field modes: the seeded k = 1
content damps and spuriously recurs, while the k = 1/2 amplitude climbs at
the theoretical rate until trapping saturates it.

Run:  python demos/demo_bump_on_tail.py
"""

import os

import matplotlib
matplotlib.use("svg")
import matplotlib.pyplot as plt
import numpy as np

import vpsim as vp

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

cfg = vp.scenario("bump_on_tail")
g = vp.PhaseSpaceGrid.dg((cfg.x_min, cfg.x_max), (cfg.v_min, cfg.v_max), 32, 32, 3, 3)
f0 = vp.initial_condition(cfg, g)
f0 = vp.apply_echo_kick(f0, vp.EchoKick(time=0.0, amplitude=1e-6, wavenumber=0.5))

times, fundamental, seeded = [], [], []

def record_modes(state, record):
    e = vp.compute_field(state.f, state.f.mass() / g.length_x)
    spec = np.abs(np.fft.rfft(e.values_equidistant)) / g.n_dof_x
    times.append(state.t)
    fundamental.append(spec[1])   # k = 1/2 on the 4 pi box
    seeded.append(spec[2])        # k = 1

res = vp.run(f0, tau=0.1, t_final=500.0, record_every=2, on_record=record_modes)
t = np.array(times)
fund = np.array(fundamental)

sel = (t >= 100) & (t <= 300)
rate = np.polyfit(t[sel], np.log(fund[sel]), 1)[0]
err = vp.error_series(res.records)
print(f"measured growth rate of the k = 1/2 mode: {rate:+.4f}  "
      f"(dispersion relation: +0.0266)")
print(f"current error (transfer-layer artifact):  {err['current'].max():.2e}")
print(f"initial current: {res.records[0].current:.4f}  "
      f"(analytic pi/sqrt(2) = {np.pi / np.sqrt(2):.4f})")

fig, ax = plt.subplots(figsize=(8, 4.2))
ax.semilogy(t, fund, lw=0.9, label="|E| at k = 1/2 (unstable)")
ax.semilogy(t, seeded, lw=0.9, label="|E| at k = 1 (damped, recurs)")
ax.semilogy(t[sel], fund[sel][0] * np.exp(0.0266 * (t[sel] - t[sel][0])), "k--",
            lw=0.8, label="exp(0.0266 t)")
ax.set_xlabel("t")
ax.set_ylabel("field mode amplitude")
ax.set_title("Bump-on-tail, dG4 at 128 DoF, fundamental seeded at 1e-6")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(os.path.join(OUT, "bump_on_tail.svg"))
print(f"wrote {OUT}/bump_on_tail.svg")
