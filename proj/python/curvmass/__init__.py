"""p-harmonic mass-type invariants on rotationally symmetric 3-manifolds.

Thin re-export of the compiled extension; see the C++ headers for the full
surface.  The main operations:

    profile(kind, **params)        -- build a radial profile
    coefficients_closed_form(lam, p)
    coefficients_ode(lam, p, t_start=-20, t_end=20)
    mass_profile(profile, lam, p, t_grid) -> list of row dicts
    polarized_mass(profile, lam, p) -> breakdown dict
    one_harmonic_mass(lam, t_star), sds_t_star(lam, m)
    hawking_mass(area, willmore, lam)
    verify(checks=[], threads=0)   -- run the verification suite
"""

from ._curvmass import *  # noqa: F401,F403
from ._curvmass import __doc__ as _core_doc  # noqa: F401
