"""
Rabi limit and how the reversal period scales
=============================================

At D = 0 all transitions coincide at Hz and the ladder becomes one flat
drive of amplitude 2S h: an ordinary rigid Rabi rotation with period
2 pi / (2S h).  For D > 0 the period is set by h alone, close to 2 pi / h
whatever D or S.

Run:  python demos/04_rabi_and_scaling.py     (about a minute)
"""

import numpy as np

from spinladder import IntegratorConfig, StaticModel, evolve, full_gqoab_protocol, make_operators, observables
from spinladder import rabi_protocol, reversal_period
from spinladder.spin import basis_state

H = 0.005

# S = 1/2 and S = 10 at D = 0
for s in (0.5, 10):
    p = rabi_protocol(s, hz=0.1, h_ac=H)
    amp = p.effective_amplitude
    traj = evolve(p, basis_state(s, s), IntegratorConfig(t_max=1.6 * 2 * np.pi / amp))
    obs = observables(traj, make_operators(s))
    est = reversal_period(obs, amp)
    print(f"D=0, S={s:>4}: period {est.period:9.2f}   2pi/(2S h) = {2 * np.pi / amp:9.2f}"
          f"   s_f/S^2 stays at {obs.reduced('s_fidelity').min():.6f}")

# %%
def period(s, d, h):
    p = full_gqoab_protocol(StaticModel(s, d), h)
    traj = evolve(p, basis_state(s, s), IntegratorConfig(t_max=round(1.6 * 2 * np.pi / h, 6)))
    return reversal_period(observables(traj, make_operators(s)), h).period


print("\nperiod * h for S=10, D=0.1")
for h in (0.005, 0.01, 0.02):
    print(f"  h={h:<6} T*h = {period(10, 0.1, h) * h:.4f}")

print("\nperiod for h=0.005 across D and S  (2 pi / h = %.1f)" % (2 * np.pi / H))
for s, d in [(10, 0.1), (10, 0.5), (5, 0.1), (9.5, 0.1)]:
    print(f"  S={s:<4} D={d:<4} T = {period(s, d, H):.2f}")
