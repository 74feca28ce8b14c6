"""Locally fair balanced partitions of two-colored point sequences.

A partition cuts the sequence into contiguous parts whose sizes lie within
``(1 +- epsilon) * sigma``. Each part is won by its majority color (ties go
to blue) and the other points in it are unhappy. A partition is locally fair
when no allowable window holds enough same-colored unhappy points to form a
strict majority of at least ``beta * sigma`` points.
"""
from ._accel import backend, set_backend, use_backend
from .audit import (
    AuditReport,
    DeviatingGroup,
    HappinessIndex,
    Partition,
    audit,
    build_happiness,
    check_fair,
    find_deviating_groups,
    parse_partition,
)
from .constructive import (
    AlmostUniformPlan,
    AlphaPartition,
    ConstructionError,
    almost_uniform_partition,
    almost_uniform_plan,
    guarantee_check,
    partition_clustered,
)
from .core import (
    TIE_COLOR,
    BetaMode,
    Color,
    FairnessParams,
    FairPartError,
    InstanceFormatError,
    Instance,
    Interval,
    ParameterError,
    Topology,
    count_colors,
    deviation_threshold_met,
    format_rational,
    is_allowable,
    majority_color,
    measure,
    parse_instance,
    parse_rational,
    serialize_instance,
)
from .exact import OracleCapError, SolveResult, brute_force_solve, dp_solve, fair4, standalone_fair
from .generators import (
    Generated,
    GeneratorError,
    gen_adversarial,
    gen_clustered,
    gen_mostly_clustered,
    gen_multi_sigma_adversarial,
    gen_uniform_random,
)
from .render import render_ascii, render_svg

__version__ = "0.1.0"
