"""
Full reversal through the compact kernel
========================================

With every component present the sum of 2S sines and cosines collapses to
f(t) = sin(2DSt)/sin(Dt) times one carrier at Hz.  In the frame rotating at
Hz the Hamiltonian is -D Sz^2 - h f(t) Sy and Hz disappears altogether.

Run:  python demos/03_full_ladder_reversal.py
"""

import numpy as np

from spinladder import (
    IntegratorConfig,
    StaticModel,
    eval_f,
    evolve,
    full_gqoab_protocol,
    ladder_protocol,
    make_operators,
    observables,
    reversal_period,
)
from spinladder.spin import basis_state

S, D, H = 10, 0.1, 0.005

# f(t) is a train of sharp peaks of height 2S every pi/D, sign alternating for integer S
t = np.linspace(0, 100, 2001)
f = eval_f(S, D, t)
print("f(0) = %.3f, f(pi/D) = %.3f, mean |f| = %.3f" % (f[0], eval_f(S, D, np.pi / D), np.abs(f).mean()))

# %%
# lab frame with the explicit sum against rotating frame with the kernel, Hz = 0.1
psi0 = basis_state(S, S)
cfg = IntegratorConfig(t_max=3000.0)
lab = evolve(ladder_protocol(StaticModel(S, D, 0.1), -9, H), psi0, cfg)
rot = evolve(full_gqoab_protocol(StaticModel(S, D, 0.1), H, frame="rotating"), psi0, cfg)
ops = make_operators(S)
obs_lab, obs_rot = observables(lab, ops), observables(rot, ops)
print("max |Sz_lab - Sz_rot| = %.2e" % np.abs(obs_lab.sz - obs_rot.sz).max())

est = reversal_period(obs_rot, H)
print("min Sz/S = %.4f,  period = %.1f  (2 pi / h = %.1f)" % (obs_rot.sz.min() / S, est.period, 2 * np.pi / H))

# the spin does not stay a rigid vector on the way over: s_f = |<S>|^2 drops mid-way
sf = obs_rot.reduced("s_fidelity")
print("s_f/S^2 ranges over %.3f .. %.3f while <S^2> stays %.9f"
      % (sf.min(), sf.max(), obs_rot.s_total.max() / (S * (S + 1))))

# %%
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9, 3.2))
    ax0.plot(t, f)
    ax0.set_xlabel("t")
    ax0.set_ylabel("f(t)")
    ax1.plot(rot.times, obs_rot.sx / S, lw=0.3, label="Sx/S")
    ax1.plot(rot.times, obs_rot.sz / S, lw=2, label="Sz/S")
    ax1.plot(rot.times, sf, lw=2, label="s_f/S^2")
    ax1.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig("demo03_full_ladder.png", dpi=120)
    print("saved demo03_full_ladder.png")
