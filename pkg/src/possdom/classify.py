"""Top-level verdicts: possibility, uniform possibility, total blockedness.

Verdict flags are tri-state: True, False, or None when a search ran out of
budget before deciding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import AggregatorWitness, Domain, Kind, check_kind, is_dictatorial, maj3, verify_aggregator, xor3
from .hx import build_hx, find_binary_nondictatorial, strongly_connected_components
from .polysearch import (
    componentwise,
    find_majority_aggregator,
    find_minority_aggregator,
    find_wnu_aggregator,
    is_affine_boolean,
)
from .search import DEFAULT_BUDGET, BudgetExhausted, SearchStats

WITNESS_ORDER = (Kind.BINARY, Kind.MAJORITY, Kind.MINORITY, Kind.WNU)


class InconsistentVerdict(AssertionError):
    pass


@dataclass(frozen=True)
class PossibilityVerdict:
    framework: str
    is_possibility: Optional[bool]
    is_totally_blocked: bool
    affine: Optional[bool]
    witnesses: tuple
    stats: dict


@dataclass(frozen=True)
class UniformVerdict:
    is_uniform_possibility: Optional[bool]
    witness: Optional[AggregatorWitness]
    stats: dict


@dataclass(frozen=True)
class Classification:
    framework: str
    is_possibility: Optional[bool]
    is_uniform_possibility: Optional[bool]
    is_totally_blocked: bool
    witnesses: tuple
    diagnostics: dict = field(default_factory=dict)


def framework(dom: Domain) -> str:
    return "boolean" if dom.is_boolean else "non-boolean"


def _checked(dom: Domain, w: AggregatorWitness) -> AggregatorWitness:
    if not verify_aggregator(dom, w):
        raise InconsistentVerdict(f"{w.kind.value} witness fails verification")
    if is_dictatorial(dom, w) is not None:
        raise InconsistentVerdict(f"{w.kind.value} witness is dictatorial")
    if not check_kind(dom, w, w.kind):
        raise InconsistentVerdict(f"{w.kind.value} witness fails its kind check")
    return w


def _forced(dom: Domain, kind: Kind) -> Optional[AggregatorWitness]:
    # Boolean issues have no three distinct positions, so maj/xor tables are forced
    w = componentwise(dom, maj3 if kind is Kind.MAJORITY else xor3, kind)
    return w if verify_aggregator(dom, w) else None


def _graph_stats(dom: Domain) -> tuple:
    g = build_hx(dom)
    scc = strongly_connected_components(g)
    stats = {"hx_vertices": len(g), "hx_edges": len(g.edges), "scc_count": scc.count}
    return g, scc, stats


def classify_possibility(
    dom: Domain,
    budget: int = DEFAULT_BUDGET,
    boolean_fast_path: bool = True,
    stats: Optional[SearchStats] = None,
) -> PossibilityVerdict:
    """Decide whether X admits a non-dictatorial aggregator.

    Boolean domains: affine, or a binary witness exists. Otherwise: a binary,
    majority or minority witness exists. Every witness found is kept.
    """
    stats = stats if stats is not None else SearchStats()
    g, scc, info = _graph_stats(dom)
    binary = find_binary_nondictatorial(dom, g)
    blocked = scc.count == 1
    if blocked != (binary is None):
        raise InconsistentVerdict("strong connectivity disagrees with binary synthesis")

    found = {Kind.BINARY: binary}
    unknown = False
    affine = None
    if boolean_fast_path and dom.is_boolean:
        affine = is_affine_boolean(dom)
        found[Kind.MAJORITY] = _forced(dom, Kind.MAJORITY)
        found[Kind.MINORITY] = _forced(dom, Kind.MINORITY)
        if affine != (found[Kind.MINORITY] is not None):
            raise InconsistentVerdict("affine check disagrees with componentwise xor")
    else:
        for kind, search in ((Kind.MAJORITY, find_majority_aggregator), (Kind.MINORITY, find_minority_aggregator)):
            try:
                found[kind] = search(dom, budget, stats)
            except BudgetExhausted:
                found[kind] = None
                unknown = True
        if dom.is_boolean:
            affine = found[Kind.MINORITY] is not None if not unknown else None

    witnesses = tuple(_checked(dom, found[k]) for k in WITNESS_ORDER if found.get(k) is not None)
    if witnesses:
        verdict = True
    else:
        verdict = None if unknown else False
    if affine is not None and verdict is not None and verdict != (affine or binary is not None):
        raise InconsistentVerdict("Boolean verdict is not 'affine or binary'")
    info["search_nodes"] = stats.nodes
    return PossibilityVerdict(framework(dom), verdict, blocked, affine, witnesses, info)


def classify_uniform(
    dom: Domain, budget: int = DEFAULT_BUDGET, stats: Optional[SearchStats] = None
) -> UniformVerdict:
    stats = stats if stats is not None else SearchStats()
    try:
        w = find_wnu_aggregator(dom, budget, stats)
    except BudgetExhausted:
        return UniformVerdict(None, None, {"search_nodes": stats.nodes})
    if w is not None:
        _checked(dom, w)
    return UniformVerdict(w is not None, w, {"search_nodes": stats.nodes})


def full_report(dom: Domain, budget: int = DEFAULT_BUDGET) -> Classification:
    stats = SearchStats()
    poss = classify_possibility(dom, budget, stats=stats)
    uni = classify_uniform(dom, budget, stats=stats)

    if uni.is_uniform_possibility and poss.is_possibility is False:
        raise InconsistentVerdict("uniform possibility without possibility")
    has_binary = any(w.kind is Kind.BINARY for w in poss.witnesses)
    if poss.is_totally_blocked and has_binary:
        raise InconsistentVerdict("totally blocked domain with a binary witness")
    if dom.is_boolean and poss.is_totally_blocked and poss.affine is False and poss.is_possibility is not False:
        raise InconsistentVerdict("blocked non-affine Boolean domain reported possible")

    possible = poss.is_possibility
    if possible is None and uni.is_uniform_possibility:
        # a weak near-unanimity aggregator is itself non-dictatorial
        possible = True
    witnesses = poss.witnesses + ((uni.witness,) if uni.witness is not None else ())
    diagnostics = dict(poss.stats)
    diagnostics["search_nodes"] = stats.nodes
    return Classification(
        framework=poss.framework,
        is_possibility=possible,
        is_uniform_possibility=uni.is_uniform_possibility,
        is_totally_blocked=poss.is_totally_blocked,
        witnesses=witnesses,
        diagnostics=diagnostics,
    )
