"""Polyhedral multinomial distributions, their potential and Gaussian limits."""

from ._kernels import BACKEND
from .distribution import ExactPMF, MomentSummary, build_pmf, moments, sample, weight
from .errors import (
    BasisMismatchError,
    DomainError,
    InadmissibleSystemError,
    MismatchedSystemError,
    NearSingularError,
    NoConvergenceError,
    NotConvergedError,
    ParseError,
    PolymultError,
    ResourceLimitError,
)
from .geometry import (
    HalfSpaceSystem,
    PolytopeGeometry,
    ValidationReport,
    compute_geometry,
    enumerate_points,
    load_system,
    parse_system,
    validate,
)
from .harness import ConvergenceMetrics, DiscreteMeasure, compare, nu, nu_prime, sweep
from .limit import LimitGaussian, RatioCheck, density, limit_gaussian, ratio_check, ratio_sweep
from .lp import LPResult, solve_lp
from .potential import (
    MinimizerResult,
    PotentialContext,
    grad_L,
    hess_L,
    log_phi,
    make_context,
    minimize,
)

__version__ = "0.1.0"
