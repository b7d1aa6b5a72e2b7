"""
Descent on the radial quotient, and the threshold it implies.

The estimate is an upper bound for the radial constant.  Transported
between gamma values by the theta-rescaling it should not move.
"""
from hslab import optimize, params
from hslab.cylinder import default_grid

ests = {}
for g in (0.6, 0.75, 0.9):
    p = params.make_params(4, g)
    res = optimize.minimize_radial_quotient(p, default_grid(p))
    ests[g] = res
    print(f"gamma={g}: c_rad <= {res.c_rad_estimate:.8f}  after {res.iterations} steps, restarts={res.restarts}")
    print("   ", optimize.bound_check(p, res.c_rad_estimate))

# --- move the gamma = 0.75 minimizer to the other two parameters
for g in (0.6, 0.9):
    print("transported to", g, optimize.transported_quotient(ests[0.75], params.make_params(4, g)))

# --- where Lambda(gamma) meets the estimate
print(optimize.gamma0_from_estimate(4, ests[0.75].c_rad_estimate))
