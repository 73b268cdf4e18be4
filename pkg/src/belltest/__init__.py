"""Local hidden-variable tests and Bell inequality enumeration for two-party experiments."""

from .errors import (
    BellTestError,
    CapacityError,
    ClassMismatchError,
    DegenerateInequalityError,
    DimensionError,
    EmptyPairError,
    InternalError,
    RangeError,
)
from .geometry import (
    HRepresentation,
    LinearInequality,
    affine_hull,
    canonicalize,
    evaluate,
    facet_enumeration,
    normalized_violation,
    verify_h_representation,
    vertex_enumeration,
)
from .locality import Local, Nonlocal, max_violation, test_locality, test_point, verify_local_model
from .model import (
    ExperimentClass,
    OutcomePattern,
    ProbabilityTable,
    SettingsSelection,
    decode_outcome,
    encode_outcome,
    joint_index,
    table_from_counts,
    validate_table,
)
from .strategies import (
    DeterministicStrategy,
    enumerate_vertices,
    strategy_count,
    strategy_distribution,
    strategy_from_index,
    strategy_to_index,
    vertex_of,
)

__version__ = "0.1.0"
