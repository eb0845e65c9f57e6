"""Stochastic reaction-diffusion lattice dynamics and small-noise analysis.

The heavy lifting lives in the compiled extension ``_latdev``: installed
wheels carry it inside this package, while CMake build trees place it next to
the package directory.
"""

try:
    from . import _latdev as _impl
except ImportError:  # build-tree layout
    import _latdev as _impl

_names = [
    "ConditionViolated",
    "Model",
    "OraclePreconditionViolated",
    "TargetMismatch",
    "TimeGrid",
    "Window",
    "additive_oracle",
    "apply_a",
    "apply_b",
    "apply_b_star",
    "apriori_bound",
    "dirichlet_energy",
    "endpoint_rate",
    "h1_probe",
    "laplace_inf_terminal_sq",
    "laplace_terminal_sq",
    "level_set_probe",
    "moment_sup_sq",
    "rate_estimate",
    "run_acceptance",
    "simulate",
    "skeleton_solve",
    "tail_probability",
    "weak_convergence_probe",
]

globals().update({name: getattr(_impl, name) for name in _names})
__version__ = _impl.__version__
__all__ = _names + ["__version__"]
