"""Funcion de aptitud de reglas frente a las tuplas aun no cubiertas (menor es mejor)."""
from __future__ import annotations

from typing import NamedTuple

from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.domain.entities import ID_FIELD, AtomicCondition, Rule
from rebac_miner.domain.semantics import PermissionIndex


class Fitness(NamedTuple):
    far: int
    frr: int
    id: int
    wsc: float
    # desempate determinista
    text: str


def _uses_id(condition: frozenset[AtomicCondition]) -> bool:
    return any(c.path == (ID_FIELD,) for c in condition)


def id_score(rule: Rule) -> int:
    return int(_uses_id(rule.subject_condition)) + int(_uses_id(rule.resource_condition))


def fitness(ctx: MiningContext, rule: Rule, uncovered: PermissionIndex) -> Fitness:
    covered = ctx.evaluator.covered_count(rule, uncovered)
    return Fitness(
        far=ctx.evaluator.meaning_size(rule) - covered,
        frr=len(uncovered) - covered,
        id=id_score(rule),
        wsc=ctx.wsc(rule),
        text=ctx.text(rule),
    )
