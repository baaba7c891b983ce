"""Verification checks"""

from .verification_engine import (
    CHECK_GROUPS,
    VerificationEngine,
    chain_to_dict,
    edge_label,
    numeric_failure,
)

__all__ = [
    "CHECK_GROUPS",
    "VerificationEngine",
    "chain_to_dict",
    "edge_label",
    "numeric_failure",
]
