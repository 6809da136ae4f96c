"""Complejidad estructural ponderada (WSC) de condiciones, restricciones, reglas y politicas."""
from __future__ import annotations

from collections.abc import Iterable

from rebac_miner.domain.entities import AtomicCondition, AtomicConstraint, Rule, WscWeights

DEFAULT_WEIGHTS = WscWeights()


def wsc_condition(condition: Iterable[AtomicCondition]) -> int:
    return sum(len(c.path) + len(c.values) for c in condition)


def wsc_constraint(constraint: Iterable[AtomicConstraint]) -> int:
    return sum(len(c.subject_path) + len(c.resource_path) for c in constraint)


def tcpl(rule: Rule) -> int:
    """Longitud total de las rutas de la restriccion."""
    return wsc_constraint(rule.constraint)


def wsc_rule(rule: Rule, weights: WscWeights = DEFAULT_WEIGHTS) -> float:
    return (
        weights.w1 * wsc_condition(rule.subject_condition)
        + weights.w1 * wsc_condition(rule.resource_condition)
        + weights.w2 * wsc_constraint(rule.constraint)
        + weights.w3 * len(rule.actions)
    )


def wsc_policy(rules: Iterable[Rule], weights: WscWeights = DEFAULT_WEIGHTS) -> float:
    return sum(wsc_rule(rule, weights) for rule in rules)
