"""
Two bubbles drifting apart.

Along s = {8,...,16}/theta the quotient of U + U[s] rises toward the level
2 - 2^{2/2*}, with the gap shrinking like the interaction Q(s).
"""
from hslab import families, params

p = params.make_params(4, 0.75)
reports = families.two_peak_report(p, None, families.default_ladder(p))
level = params.two_peak_level(4)

print("level 2 - 2^(2/2*) =", level)
for r, gap in zip(reports, families.level_gap(p, reports)):
    print(f"s={r.s:5.1f}  Q={r.Q:.3e}  quotient={r.quotient:.6f}  gap/Q={gap / r.Q:.4f}  ||v||^2*/Q coeff={r.power_coeff:.5f}")

# --- how fast the interactions decay for different exponent splits
rates = families.interaction_rates(p, [(1.0, 3.0), (2.0, 2.0)])
for key, entry in rates.items():
    print(key, "fitted slope", entry["fit"].slope, "predicted", entry["predicted_slope"])
