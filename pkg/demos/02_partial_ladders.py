"""
Climbing the ladder one rung at a time
======================================

Adding drives at w(S->S-1), w(S-1->S-2), ... down to w(S'->S'-1) opens a
path from m = S down to m = S'-1.  The deeper the ladder, the further <Sz>
swings; with all 2S components the spin crosses the barrier completely.

Run:  python demos/02_partial_ladders.py
"""

import numpy as np

from spinladder import IntegratorConfig, StaticModel, evolve, ladder_protocol
from spinladder.integrator import sz_series
from spinladder.spin import basis_state

S, D, H = 10, 0.1, 0.005
model = StaticModel(S, D, hz=0.1)
psi0 = basis_state(S, S)
cfg = IntegratorConfig(t_max=3000.0)

curves = {}
for s_prime in (10, 9, 8, 5, 0, -5, -9):
    p = ladder_protocol(model, s_prime, H)
    traj = evolve(p, psi0, cfg)
    sz = sz_series(traj, model.spin.m_values())
    curves[s_prime] = (traj.times, sz)
    print(f"S'={s_prime:+3d}  {len(p.frequency_list):2d} components   min Sz = {sz.min():+7.3f}"
          f"   (lowest reachable level {s_prime - 1:+d})")

# partial ladders stop short of S'-1: the levels in the ladder do not mix evenly,
# so the population never piles up entirely on the last rung

# %%
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for s_prime, (t, sz) in curves.items():
        ax.plot(t, sz / S, label=f"S'={s_prime}")
    ax.set_xlabel("t")
    ax.set_ylabel("Sz/S")
    ax.legend(fontsize=7, ncol=2)
    fig.savefig("demo02_partial_ladders.png", dpi=120)
    print("saved demo02_partial_ladders.png")
