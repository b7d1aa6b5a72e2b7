"""
A Sobolev bubble pushed far from the origin.

It stops feeling the Hardy term, so its quotient tends to 1 - S_gamma/S.
The second half shows why the R^N interaction exponent needs very small
dilations before it settles.
"""
import numpy as np

from hslab import euclidean, params

p = params.make_params(4, 0.75)
for z, hardy, m, q, target in euclidean.hidden_level_rows(p, (5.0, 10.0, 20.0, 50.0, 200.0)):
    print(f"z={z:6.1f}  hardy={hardy:.3e}  m={m:.3e}  quotient={q:.6f}  target={target:.6f}")

# --- exponent fits over successively deeper dilation windows
for hi, lo in [(-1, -3), (-3, -5), (-5, -7), (-7, -9)]:
    fit = euclidean.fit_rn_exponent(p, 1.0, 3.0, np.logspace(hi, lo, 9))
    print(f"lambda in [1e{lo}, 1e{hi}]: exponent {fit.exponent:.7f} (limit {p.eps:.1f})")
