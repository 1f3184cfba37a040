"""Velocity profiles from random jerk sequences.

Draws a batch of profiles for one vehicle and shows how the clamped
integration keeps every sample inside the physical limits: no reversing, no
speeding past v_max, accelerations within bounds.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from coopplan import Limits, SamplingConfig, sample_profiles
from coopplan.kinematics import LongState

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

limits = Limits(v_max=11.5, a_min=-8.0, a_max=3.0, j_min=-10.0, j_max=10.0)
config = SamplingConfig(seed=4, profiles_per_vehicle=60,
                        jerk_levels=(-4.0, -2.0, -1.0, 0.0, 1.0, 2.0),
                        horizon=12.0, jerk_hold_steps=8)
profiles = sample_profiles(LongState(0.0, 10.0, 0.0), config, limits)

v_all = np.stack([p.v for p in profiles])
print(f"{len(profiles)} profiles, speed range "
      f"[{v_all.min():.2f}, {v_all.max():.2f}] m/s "
      f"(limits 0 .. {limits.v_max})")
print(f"distance spread after {config.horizon:.0f} s: "
      f"{min(p.s[-1] for p in profiles):.1f} .. "
      f"{max(p.s[-1] for p in profiles):.1f} m")

fig, (ax_v, ax_s) = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
t = profiles[0].times
for p in profiles:
    ax_v.plot(t, p.v, lw=0.8, alpha=0.5)
    ax_s.plot(t, p.s, lw=0.8, alpha=0.5)
ax_v.axhline(limits.v_max, color="red", ls="--", lw=1)
ax_v.set_ylabel("v (m/s)")
ax_s.set_ylabel("s (m)")
ax_s.set_xlabel("t (s)")
fig.savefig(OUT / "02_sampled_profiles.png", dpi=120)
print(f"wrote {OUT / '02_sampled_profiles.png'}")
