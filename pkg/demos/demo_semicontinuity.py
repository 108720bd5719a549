"""Mass can drop in the limit, but never jump up.

Each experiment builds a sequence of metrics converging to a limit in
local C^2 windows, computes every mass along the way, and checks
liminf mass_i >= mass of the limit.  Three sequences flatten out while
keeping (or growing) their mass: the drop is strictly positive.
"""

from afmass import cone_semicontinuity_experiment, run_semicontinuity_experiment

print("3-d experiments (n=3, indices 2,4,8,16)")
for kind in ("blow_up", "escaping", "shells", "constant"):
    rep = run_semicontinuity_experiment(kind, n=3, indices=(2, 4, 8, 16))
    print(f"  {kind:9s} verdict={rep.verdict}  drop={rep.drop:8.4f}"
          f"  fitted window exponent {rep.exponent:5.2f}"
          f" (expected {rep.expected_exponent:.0f})")
    print(f"            masses " + "  ".join(f"{m:.4f}" for m in rep.masses))

print()
print("2-d cone experiments (alpha = 0.7)")
for kind in ("blow_up", "escaping", "constant"):
    rep = cone_semicontinuity_experiment(kind, alpha=0.7)
    print(f"  {kind:9s} verdict={rep.verdict}  drop={rep.drop:6.4f}"
          f"  limit mass {rep.limit_mass:.4f}")
