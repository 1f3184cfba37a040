"""The three-zone evaluation functional.

Sweeps a property value across its comfort, discomfort and infeasibility
zones and plots the composed cost curve: small quadratic costs around the
optimum, steeper quadratic growth past the discomfort boundary, exponential
blow-up toward the infeasible value. The curve is continuous everywhere and
pinned to the thresholds at the anchor points.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from coopplan import eval_functional
from coopplan.costs import EvaluationFunctionalParams

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

params = EvaluationFunctionalParams(
    f_opt=10.0, f_disc_plus=11.0, f_disc_minus=5.0,
    f_inf_plus=12.0, f_inf_minus=-1.0,
    margin_plus=0.5, margin_minus=1.0,
    cmargin_plus=1.0, cmargin_minus=5.0,
    t_comf=1.0, t_inf=1e6)

print(f"anchors: G({params.f_opt}) = "
      f"{eval_functional(params, params.f_opt).total:.1f}")
print(f"comfort at f_opt + cmargin: "
      f"{eval_functional(params, 11.0).comfort:.6f} (= t_comf)")
print(f"infeasibility at f_inf:     "
      f"{eval_functional(params, 12.0).infeasibility:.1f} (= t_inf)")

f = np.linspace(0.0, 12.4, 1200)
comfort, discomfort, infeasibility = params.components(f)

fig, ax = plt.subplots(figsize=(8, 5))
ax.semilogy(f, np.maximum(comfort, 1e-12), label="comfort")
ax.semilogy(f, np.maximum(comfort + discomfort, 1e-12), label="+ discomfort")
ax.semilogy(f, np.maximum(comfort + discomfort + infeasibility, 1e-12),
            label="+ infeasibility")
for x, name in ((params.f_opt, "optimum"), (params.f_disc_plus, "discomfort"),
                (params.f_inf_plus, "infeasible")):
    ax.axvline(x, color="gray", lw=0.7, ls=":")
    ax.text(x, 3e6, name, rotation=90, va="bottom", ha="right", fontsize=8)
ax.set_xlabel("property value f (here: speed, optimum 10 m/s)")
ax.set_ylabel("cost")
ax.legend(loc="upper left")
fig.savefig(OUT / "03_evaluation_functional.png", dpi=120)
print(f"wrote {OUT / '03_evaluation_functional.png'}")
