"""Exact-arithmetic toolkit for Artin-Schreier tower covers and finite
p-subgroups of the Nottingham group over F_q, p >= 5.
"""

from .field import field_make
from .kernels import IMPL as KERNEL_IMPL
from .series import LaurentSeries

__version__ = "0.1.0"
__all__ = [
    "field_make",
    "LaurentSeries",
    "KERNEL_IMPL",
    "NottinghamElement",
    "build_phi",
    "nott_order",
    "ramification_break",
    "NumericalSemigroup",
    "module_basis",
    "AdditivePolynomial",
    "additive_from_span",
    "additive_from_moore",
    "TowerSpec",
    "TowerElement",
    "FiniteGroup",
    "GroupAction",
    "compat_check",
    "rescale_generator",
    "representation_jumps",
    "solve_compatible_cocycles",
    "LinearizedModule",
    "Cocycle",
    "h1_cyclic",
    "coboundary_test",
    "expand_as_cover",
    "verify_action_transport",
    "__version__",
]

from .additive import (AdditivePolynomial, additive_from_moore,  # noqa: E402
                       additive_from_span)
from .cohomology import (Cocycle, LinearizedModule,  # noqa: E402
                         coboundary_test, h1_cyclic)
from .covers import expand_as_cover, verify_action_transport  # noqa: E402
from .nottingham import (NottinghamElement, build_phi,  # noqa: E402
                         nott_order, ramification_break)
from .semigroup import NumericalSemigroup, module_basis  # noqa: E402
from .tower import (FiniteGroup, GroupAction, TowerElement,  # noqa: E402
                    TowerSpec, compat_check, representation_jumps,
                    rescale_generator, solve_compatible_cocycles)
