"""Left turn at the T-junction, with and without right of way.

Plans both variants and plots the selected s-t curves with the collision
zone shaded. The turner's tight arc makes delaying it expensive, so even
without signs the main-road vehicle spaces itself around the turn; with the
right of way the turner's trajectory is pinned exactly to its solo optimum
and any interference would additionally pay the upscaled regulation costs.
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
for ax, name in zip(axes, ("t_junction_unsigned", "t_junction_row")):
    scenario = builtin_scenarios()[name]
    result = plan(scenario)
    assert result.selected
    zone = result.zones[(0, 1)]
    print(f"{name}: total cost {result.total_cost:.1f}")
    for i, (veh, traj) in enumerate(zip(scenario.vehicles, result.ensemble)):
        interval = zone.interval_a if i == 0 else zone.interval_b
        t_in, t_out = zone_crossing_times(traj, interval)
        print(f"  {veh.id}: in zone {t_in:.2f} .. {t_out:.2f} s, "
              f"cost {result.breakdowns[i].total:.1f}")
        ax.plot(traj.times, traj.profile.s, label=veh.id)
        ax.axhspan(interval[0], interval[1], alpha=0.12, color="gray")
    ax.set_title(name)
    ax.set_xlabel("t (s)")
    ax.legend()
axes[0].set_ylabel("s along own path (m)")
fig.savefig(OUT / "04_t_junction_st.png", dpi=120)
print(f"wrote {OUT / '04_t_junction_st.png'}")
