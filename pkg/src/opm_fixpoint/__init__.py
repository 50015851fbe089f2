"""Coupled fixed points of mixed monotone maps on partially ordered metric spaces.

Finite spaces are checked exhaustively; real-vector spaces are sampled on a
grid. See the README for a tour.
"""

from .conditions import (
    ConditionReport,
    Grid,
    Witness,
    check_classical_condition,
    check_new_condition,
    check_remark_ratio,
    classical_holds_with,
    coupled_residual,
    delta,
    is_coupled_fixed_point,
    is_mixed_monotone,
)
from .errors import (
    ExprEvalError,
    ExprSyntaxError,
    FixpointError,
    GenerationError,
    MapError,
    PointError,
    SpaceError,
    StartConditionError,
    TraceError,
)
from .instance import Instance, InstanceFormatError, dump_instance, load_instance, parse_instance
from .maps import ExprMap, TableMap, validate_map
from .oracle import (
    CoupledFixedPointSet,
    RandomInstanceSpec,
    SeparationReport,
    StressSummary,
    append_archive,
    check_instance,
    enumerate_cfp,
    generate_instance,
    read_archive,
    separation_bound,
    stress_theorem,
)
from .solver import (
    CauchyReport,
    IterationTrace,
    StartCheck,
    beta_sequence,
    cauchy_bound_check,
    check_start,
    iterate,
)
from .spaces import (
    FiniteOrderedMetricSpace,
    Metric,
    RealVectorSpace,
    ValidationReport,
    Violation,
    comparable_quadruples,
    validate_metric,
    validate_order,
)

__version__ = "0.1.0"
