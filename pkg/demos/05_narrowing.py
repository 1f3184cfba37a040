"""Passing a narrowing, with and without right of way.

Without signs the vehicle closer to the narrowing passes first; a sign
giving the farther vehicle priority overrules the globally most comfortable
order and shifts the optimum.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from coopplan import builtin_scenarios, plan
from coopplan.kinematics import zone_crossing_times

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

fig, axes = plt.subplots(1, 2, figsize=(11, 4.5), sharey=True)
for ax, name in zip(axes, ("narrowing_unsigned", "narrowing_row")):
    scenario = builtin_scenarios()[name]
    result = plan(scenario)
    assert result.selected
    zone = result.zones[(0, 1)]
    entries = {}
    for i, (veh, traj) in enumerate(zip(scenario.vehicles, result.ensemble)):
        interval = zone.interval_a if i == 0 else zone.interval_b
        entries[veh.id] = zone_crossing_times(traj, interval)[0]
        ax.plot(traj.times, traj.profile.s, label=veh.id)
        ax.axhspan(interval[0], interval[1], alpha=0.12, color="gray")
    first = min(entries, key=entries.get)
    print(f"{name}: {first} passes first "
          f"({', '.join(f'{k} enters {v:.2f} s' for k, v in entries.items())})")
    ax.set_title(f"{name} — {first} first")
    ax.set_xlabel("t (s)")
    ax.legend()
axes[0].set_ylabel("s along own path (m)")
fig.savefig(OUT / "05_narrowing_st.png", dpi=120)
print(f"wrote {OUT / '05_narrowing_st.png'}")
