"""Reliability of B_{n-2} subnetworks in the bubble-sort network under random node faults."""

from .closed_forms import closed_form, cross_check_another_way, verify, verify_all
from .patterns import (
    BACK,
    ENDS,
    FRONT,
    Family,
    MergedConstraint,
    SubnetworkPattern,
    contains,
    enumerate_patterns,
    intersection_count_exponent,
    merge,
    vertex_set,
)
from .perm import CapacityError, factorial, neighbors
from .reliability import (
    Composition,
    ExponentKey,
    ReliabilityPolynomial,
    composition_polynomial,
    compositions,
    evaluate,
    monte_carlo,
    total_polynomial,
    union_exponent,
    union_size_explicit,
)

__version__ = "0.1.0"
