"""Exact risk of single-qubit tomography estimators.

States are sequences: (x, z) for a rebit, (x, y, z) for a qubit. Estimators are named
as on the command line: "li", "cls", "mle", "hedged", "hedged-mle", optionally with an
explicit strength such as "hedged(0.1875)". Losses are "hs", "relent" and "infid".
"""

from ._core import (
    DegenerateLoss,
    Error,
    ImpossibleData,
    InvalidDataset,
    InvalidParameter,
    InvalidState,
    SolverFailure,
    UndefinedDifference,
    bayes_estimate,
    default_h,
    estimate,
    hedge_scan,
    loss,
    risk,
    scaled_difference,
    sweep,
)

__all__ = [
    "DegenerateLoss",
    "Error",
    "ImpossibleData",
    "InvalidDataset",
    "InvalidParameter",
    "InvalidState",
    "SolverFailure",
    "UndefinedDifference",
    "bayes_estimate",
    "default_h",
    "estimate",
    "hedge_scan",
    "loss",
    "risk",
    "scaled_difference",
    "sweep",
]
