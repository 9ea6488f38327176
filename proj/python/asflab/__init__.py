"""Exact computations on fundamental domains of affine Springer fibers.

Thin wrapper over the C++ core; see the package README for the CLI.
"""

_NAMES = [
    "ComputationError",
    "InvariantError",
    "datum_independence_check",
    "engine_version",
    "enumerate_levis",
    "fundamental_domain_count",
    "gm_count",
    "gm_validate",
    "gm_volume",
    "interpolate_q",
    "make_gamma",
    "minimal_form",
    "parabolic_sets",
    "root_valuation",
    "theta_coefficient",
    "transition_verify",
    "weighted_orbital",
]

try:
    from . import _asflab as _core
except ImportError:  # running against a bare build tree
    import _asflab as _core

globals().update({name: getattr(_core, name) for name in _NAMES})

__all__ = list(_NAMES)
