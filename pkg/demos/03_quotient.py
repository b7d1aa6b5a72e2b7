"""
Deficit over squared distance for fields near the bubble.

Distances are computed twice: from the overlap functional, and by
minimizing over amplitude and translation directly.
"""
import numpy as np

from hslab import manifold, params
from hslab.cylinder import CylinderField, default_grid, hs_bubble

p = params.make_params(4, 0.75)
g = default_grid(p)
u = hs_bubble(p, g)

# --- the bubble is its own best approximation
print("m(U) =", manifold.m_functional(u))

# --- a radial perturbation and a non-radial one
bump = np.exp(-((g.t - 1.0) ** 2))
f = CylinderField.radial(p, g, u.sector(0) + 0.3 * bump)
rep = manifold.be_quotient(f)
print("radial:     quotient=%.6f  dist2=%.6e  direct=%.6e" % (rep.quotient, rep.dist2, rep.dist2_direct))

h = CylinderField.from_sectors(p, g, {0: u.sector(0), 1: 0.3 * bump})
rep = manifold.be_quotient(h)
print("degree one: quotient=%.6f  dist2=%.6e  direct=%.6e" % (rep.quotient, rep.dist2, rep.dist2_direct))

# --- the quotient does not see the amplitude
print([manifold.quotient_value(c * f) for c in (0.1, 1.0, 10.0)])
