"""Rigidity of non-discrete PSL(2,R) representations with equal rotation numbers."""

from .core import (
    IDENTITY,
    BoundaryPoint,
    HalfPlanePoint,
    ProjectiveElement,
    abs_trace,
    boundary_act,
    classify,
    compose,
    conjugate_to_rotation,
    fixed_points,
    from_entries,
    inverse,
    mobius_act,
    rotation,
    rotation_number,
)
from .detect import find_infinite_order_elliptic, irrationality_test, is_elementary, jorgensen_value
from .rigidity import (
    Certificate,
    Inconclusive,
    RigidityParams,
    Witness,
    check_rigidity,
    normalize_pair,
    recover_conjugator,
    rotation_spectrum,
    trace_sequence,
    verify_abs_trace_equality,
)
from .words import Representation, Word, enumerate_ball, evaluate, parse_word, reduce

__version__ = "0.1.0"
