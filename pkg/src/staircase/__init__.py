"""Exact staircase calculus for fat-point postulation.

Staircases in N^d, Delta-specializations and collision chains, an algebraic
check of the flat limits behind them, and a prime-field rank oracle for the
dimension of degree-delta forms through fat points.
"""

from .collision import (
    ChainReport,
    DeltaChain,
    apply_chain,
    builtin_chain,
    check_fill_hole,
    induction_chain,
    search_chain,
    verify_key_lemma,
)
from .errors import *  # noqa: F401,F403
from .lattice import (
    HeightFunction,
    Staircase,
    cardinality,
    contains,
    height_function,
    make_staircase,
    parse,
    regular_staircase,
    serialize,
    shell,
    slice_at,
)
from .limit import (
    GradingForms,
    LineLimitProblem,
    build_line_problem,
    grading_forms,
    verify_limit_ideal,
    verify_line_limit,
)
from .ops import (
    Direction,
    LineBucket,
    delta_on_union,
    delta_order_less,
    delta_specialize,
    dilate,
    line_decompose,
    sum_along_axis,
    validate_direction,
)
from .postulation import (
    ConditionSystem,
    PostulationResult,
    VerificationReport,
    monomial_postulation,
    oracle_dimension,
    virtual_dimension,
    verify_eight_points,
    verify_strict_theorem,
    verify_vanishing_theorem,
)

__version__ = "0.1.0"
