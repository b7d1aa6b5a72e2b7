"""
Closed-form constants and critical levels for a few (N, gamma).

Prints the sharp constants, the local level Lambda(gamma), the 2-peak and
hidden levels, and the thresholds gamma_c* and gamma_0.
"""
import numpy as np

from hslab import params

# --- one parameter point
p = params.make_params(4, 0.75)
print(p)
print("S       =", params.sobolev_constant(4))
print("S_gamma =", params.hardy_sobolev_constant(p))
print(params.critical_levels(p))

# --- Lambda across the admissible range; the kink sits at gamma_c*
N = 5
gmax = (N - 2) ** 2 / 4
for g in np.linspace(0.05, 0.95, 7) * gmax:
    print(f"gamma={g:6.3f}  Lambda={params.spectral_gap_formula(params.make_params(N, g)):.6f}")
print("gamma_c* =", params.gamma_c_star(N))

# --- N = 3: gamma_0 is explicit, and local < hidden only above it
t3 = params.gamma_thresholds(3)
print("N=3 thresholds:", t3)
scan = params.level_ordering_scan(3, 100)
print("first gamma where the ordering holds:", scan["gamma"][scan["holds"]][0])

# --- the f1/f2 positivity scans behind the level ordering
for N in (3, 4, 7, 10):
    print(N, params.positivity_scan(N, 2000))
