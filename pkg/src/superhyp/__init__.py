"""Exact Grassmann arithmetic, the extended Wigner action of OSp(1|2) and super hyperbolic geometry."""

from .grassmann import AlgebraContext, GaussianRational, GrassmannNumber
from .minkowski import SuperPoint, act, act_explicit, quadratic_form, theta
from .supermatrix import SuperMatrix, lift_sl2, make_u, random_osp, sm_mul

__all__ = [
    "AlgebraContext", "GaussianRational", "GrassmannNumber",
    "SuperPoint", "act", "act_explicit", "quadratic_form", "theta",
    "SuperMatrix", "lift_sl2", "make_u", "random_osp", "sm_mul",
]
