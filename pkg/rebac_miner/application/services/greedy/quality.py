"""Metricas de calidad de tuplas semilla y de reglas."""
from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable
from fractions import Fraction
from typing import NamedTuple

from rebac_miner.domain.complexity import tcpl, wsc_rule
from rebac_miner.domain.entities import Rule, SubjectPermission, WscWeights
from rebac_miner.domain.semantics import PermissionIndex, PolicyEvaluator


class SeedQuality(NamedTuple):
    perm_freq: int
    subject_freq: int
    tie_break: str


class RuleQuality(NamedTuple):
    coverage_per_wsc: Fraction | float
    num_constraints: int
    inv_tcpl: Fraction | float


def tuple_text(tup: SubjectPermission) -> str:
    return f"<{tup.subject}, {tup.resource}, {tup.action}>"


def seed_qualities(sp0: Iterable[SubjectPermission]) -> dict[SubjectPermission, SeedQuality]:
    tuples = list(sp0)
    permissions = Counter((t.resource, t.action) for t in tuples)
    subjects = Counter(t.subject for t in tuples)
    return {
        t: SeedQuality(permissions[(t.resource, t.action)], subjects[t.subject], tuple_text(t))
        for t in tuples
    }


def seed_quality(sp0: Iterable[SubjectPermission], tup: SubjectPermission) -> SeedQuality:
    return seed_qualities(sp0)[tup]


def seed_order(sp0: Iterable[SubjectPermission]) -> list[SubjectPermission]:
    """SP0 en orden descendente de calidad de semilla."""
    qualities = seed_qualities(sp0)
    return sorted(qualities, key=qualities.__getitem__, reverse=True)


def rule_quality(
    evaluator: PolicyEvaluator,
    rule: Rule,
    sp: PermissionIndex,
    weights: WscWeights,
) -> RuleQuality:
    covered = evaluator.covered_count(rule, sp)
    wsc = wsc_rule(rule, weights)
    if wsc == 0:
        coverage: Fraction | float = math.inf if covered else Fraction(0)
    else:
        coverage = Fraction(covered) / Fraction(wsc)
    length = tcpl(rule)
    # sin restricciones 1/TCPL no esta definido; se toma como el valor mas alto
    inverse: Fraction | float = math.inf if length == 0 else Fraction(1, length)
    return RuleQuality(coverage, len(rule.constraint), inverse)
