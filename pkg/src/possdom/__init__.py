"""Possibility domains in judgment aggregation: decision procedures and
machine-checked witness aggregators."""

from .classify import Classification, classify_possibility, classify_uniform, full_report
from .core import AggregatorWitness, Domain, Kind, check_kind, is_dictatorial, validate_domain, verify_aggregator
from .hx import build_hx, find_binary_nondictatorial, is_totally_blocked, strongly_connected_components
from .polysearch import (
    find_majority_aggregator,
    find_minority_aggregator,
    find_wnu_aggregator,
    is_affine_boolean,
)
from .search import BudgetExhausted

__all__ = [
    "AggregatorWitness",
    "BudgetExhausted",
    "Classification",
    "Domain",
    "Kind",
    "build_hx",
    "check_kind",
    "classify_possibility",
    "classify_uniform",
    "find_binary_nondictatorial",
    "find_majority_aggregator",
    "find_minority_aggregator",
    "find_wnu_aggregator",
    "full_report",
    "is_affine_boolean",
    "is_dictatorial",
    "is_totally_blocked",
    "strongly_connected_components",
    "validate_domain",
    "verify_aggregator",
]
