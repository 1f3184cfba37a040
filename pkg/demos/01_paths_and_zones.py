"""Paths and a-priori collision zones.

Builds the two T-junction paths, evaluates positions, headings and
curvature along them, and computes the arc-length intervals where the two
vehicles' footprints could ever meet. Writes a plot to demos/out/.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from coopplan import builtin_scenarios, collision_zone, eval_path

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

scenario = builtin_scenarios()["t_junction_unsigned"]
through, turner = (v.path for v in scenario.vehicles)

print(f"through path: {through.length:.1f} m, turner path: {turner.length:.1f} m")

# sample the turner's geometry: heading swings a quarter turn, curvature
# peaks at 1/R through the arc
s = np.linspace(0.0, turner.length, 400)
pos, psi, kappa = eval_path(turner, s)
print(f"turner curvature peak: {kappa.max():.4f} 1/m "
      f"(turn radius {1.0 / kappa.max():.1f} m)")

zone = collision_zone(through, turner)
print(f"collision zone on the through path: "
      f"[{zone.interval_a[0]:.2f}, {zone.interval_a[1]:.2f}] m")
print(f"collision zone on the turner path:  "
      f"[{zone.interval_b[0]:.2f}, {zone.interval_b[1]:.2f}] m")

fig, ax = plt.subplots(figsize=(8, 6))
for path, name, color in ((through, "through", "tab:blue"),
                          (turner, "turner", "tab:orange")):
    ax.plot(path.waypoints[:, 0], path.waypoints[:, 1], color=color,
            label=name)
za, _, _ = eval_path(through, np.linspace(*zone.interval_a, 50))
zb, _, _ = eval_path(turner, np.linspace(*zone.interval_b, 50))
ax.plot(za[:, 0], za[:, 1], lw=6, alpha=0.4, color="red")
ax.plot(zb[:, 0], zb[:, 1], lw=6, alpha=0.4, color="red",
        label="collision zone")
ax.set_aspect("equal")
ax.legend()
ax.set_xlabel("x (m)")
ax.set_ylabel("y (m)")
fig.savefig(OUT / "01_t_junction_geometry.png", dpi=120)
print(f"wrote {OUT / '01_t_junction_geometry.png'}")
