"""
A spin in a double well, hit with one resonant drive
=====================================================

The easy-axis term -D Sz^2 puts m = +S and m = -S at the bottom of two wells
separated by a barrier of height D S^2.  A single circularly polarised field
tuned to the m = S -> S-1 transition only rocks the spin between the two
lowest levels of one well.

Run:  python demos/01_barrier_and_one_drive.py
"""

import numpy as np

from spinladder import (
    IntegratorConfig,
    StaticModel,
    barrier_profile,
    evolve,
    make_operators,
    observables,
    single_resonance_protocol,
    transition_frequency,
)
from spinladder.spin import basis_state

# S = 10, D = 0.1, no longitudinal field
model = StaticModel(10, 0.1)
prof = barrier_profile(model)
for m, e in prof.pairs()[::4]:
    print(f"m={m:+5.1f}   E - E_min = {e:6.2f}")
print("barrier height", prof.energy.max())

# every transition has its own frequency, so one drive addresses one pair
print("w(10->9) =", transition_frequency(model, 10), "  w(9->8) =", transition_frequency(model, 9))

# %%
# Drive only 10 -> 9 and watch <Sz> and <Sx>
proto = single_resonance_protocol(model, 10, h_ac=0.005)
traj = evolve(proto, basis_state(10, 10), IntegratorConfig(t_max=3000.0))
obs = observables(traj, make_operators(10))

print("Sz range  %.4f .. %.4f" % (obs.sz.min(), obs.sz.max()))
print("max |Sx|  %.4f   (two-level estimate sqrt(2S)/2 = %.4f)" % (abs(obs.sx).max(), np.sqrt(20) / 2))
# the flip 10 -> 9 is faster than pi/h because of the sqrt(2S) matrix element
t_two_level = np.pi / (0.005 * np.sqrt(20))
first = obs.times < 2 * t_two_level
t_flip = obs.times[first][np.argmin(obs.sz[first])]
print("first flip at t = %.1f, pi/(h sqrt(2S)) = %.1f" % (t_flip, t_two_level))

# %%
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9, 3.2))
    ax0.plot(prof.m, prof.energy, "o-")
    ax0.set_xlabel("m")
    ax0.set_ylabel("E_m - E_min")
    ax1.plot(obs.times, obs.sx / 10, lw=0.5, label="Sx/S")
    ax1.plot(obs.times, obs.sz / 10, lw=2, label="Sz/S")
    ax1.set_xlabel("t")
    ax1.legend()
    fig.tight_layout()
    fig.savefig("demo01_single_resonance.png", dpi=120)
    print("saved demo01_single_resonance.png")
