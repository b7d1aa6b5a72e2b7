"""Numerical laboratory for the stability of the Hardy-Sobolev inequality.

Modules:
    params     closed-form constants, thresholds and critical levels
    cylinder   sector-wise fields on R x S^{N-1}, norms, the HS bubble
    manifold   overlap functional, distance to the extremizers, the quotient
    spectrum   linearized eigenproblem and the numeric spectral gap
    families   two-bubble fields and interaction integrals on the cylinder
    optimize   descent on the radial quotient and the gamma_0 solve
    euclidean  quadratures in R^N
    cli        the ``hslab`` command
"""

from .params import Params, make_params

__all__ = ["Params", "make_params"]
__version__ = "0.1.0"
