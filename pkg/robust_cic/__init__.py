"""
robust_cic: counterfactual distributions for changes-in-changes designs.

The library estimates the post-intervention distribution a treatment group would
have had without treatment, by learning the natural drift of a control group with
one of: coordinate-wise changes-in-changes, exact or entropic optimal transport,
or optimal transport on a robust one-dimensional subspace.
"""

from .errors import DimensionMismatchError, InvalidInputError, ParseError, RobustCicError, SolverError
from .estimators import (
    CounterfactualEstimate,
    cic_tensorized,
    evaluate,
    max_sliced_counterfactual,
    ot_counterfactual,
    rot_counterfactual,
    sinkhorn_counterfactual,
)
from .measures import EmpiricalMeasure, TransportPlan

__all__ = [
    "CounterfactualEstimate",
    "DimensionMismatchError",
    "EmpiricalMeasure",
    "InvalidInputError",
    "ParseError",
    "RobustCicError",
    "SolverError",
    "TransportPlan",
    "cic_tensorized",
    "evaluate",
    "max_sliced_counterfactual",
    "ot_counterfactual",
    "rot_counterfactual",
    "sinkhorn_counterfactual",
]
