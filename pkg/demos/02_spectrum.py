"""
Low spectrum of the linearized problem on the cylinder.

The three lowest eigenvalues over sectors 0..6 give the numeric gap
1 - mu2/mu3, which should sit on the closed-form Lambda(gamma).
"""
from hslab import params, spectrum
from hslab.cylinder import default_grid

p = params.make_params(4, 0.75)
res = spectrum.spectral_gap_numeric(p, default_grid(p))
print("mu1, mu2, mu3:", res.mu1, res.mu2, res.mu3)
print("ratios to mu1:", res.ratios)
print("gap:", res.gap, " Lambda:", params.spectral_gap_formula(p), " mu3 in sector", res.mu3_sector)

# --- first entries of the global ordering: (mu, sector, index, multiplicity)
for row in res.global_order[:6]:
    print(row)

# --- sweep gamma; below gamma_c* the third level comes from degree 1
for row in spectrum.gap_sweep(4, n_gamma=5):
    print("gamma=%.4f  numeric=%.6f  formula=%.6f  sector=%d" % row)

# --- improved Hardy margins for fields without low modes
for k0 in range(4):
    print("k0 =", k0, " margin =", spectrum.improved_hardy_check(4, k0, default_grid(p)))
