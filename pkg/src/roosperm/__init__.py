"""Exact and Roos-approximated permanents of rectangular nonnegative matrices,
with error intervals, applied to top-K data-association truncation.
"""
from ._backend import available as available_backends, kernels, set_backend, use_backend
from .assignment import (
    Assignment,
    AssignmentInfeasible,
    KBestResult,
    enumerate_all,
    munkres,
    murty_kbest,
)
from .matrices import (
    CostMatrix,
    LikelihoodMatrix,
    MatrixError,
    ThinMatrix,
    build_likelihood,
    gen_random,
    load,
    neg_log_cost,
    save,
    to_thin,
)
from .permanent import (
    PermanentInfeasible,
    PermanentValue,
    permanent_bruteforce,
    permanent_exact,
    permanent_ryser,
)
from .roos import (
    BoundedEstimate,
    RoosDiagnostics,
    approx_first,
    approx_second,
    diagnostics,
    eval_f,
    falling_factorial_ratio,
    kappa,
    theta_fast,
    theta_naive,
)
from .truncation import TruncationReport, truncation_report

__version__ = "0.1.0"

__all__ = [
    "available_backends",
    "kernels",
    "set_backend",
    "use_backend",
    "Assignment",
    "AssignmentInfeasible",
    "KBestResult",
    "enumerate_all",
    "munkres",
    "murty_kbest",
    "CostMatrix",
    "LikelihoodMatrix",
    "MatrixError",
    "ThinMatrix",
    "build_likelihood",
    "gen_random",
    "load",
    "neg_log_cost",
    "save",
    "to_thin",
    "PermanentInfeasible",
    "PermanentValue",
    "permanent_bruteforce",
    "permanent_exact",
    "permanent_ryser",
    "BoundedEstimate",
    "RoosDiagnostics",
    "approx_first",
    "approx_second",
    "diagnostics",
    "eval_f",
    "falling_factorial_ratio",
    "kappa",
    "theta_fast",
    "theta_naive",
    "TruncationReport",
    "truncation_report",
]
