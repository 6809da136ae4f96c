"""Fusion de reglas por minima cota superior y por herencia."""
from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Callable

from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.application.services.greedy.quality import RuleQuality, rule_quality
from rebac_miner.domain.entities import Atom, AtomicCondition, Path, Rule
from rebac_miner.domain.enums import ConditionOperator

logger = logging.getLogger(__name__)


def _in_values(condition: frozenset[AtomicCondition]) -> dict[Path, frozenset[Atom]]:
    values: dict[Path, frozenset[Atom]] = {}
    for atomic in condition:
        if atomic.op is ConditionOperator.in_:
            current = values.get(atomic.path)
            values[atomic.path] = atomic.values if current is None else current & atomic.values
    return values


def condition_lub(
    first: frozenset[AtomicCondition], second: frozenset[AtomicCondition]
) -> frozenset[AtomicCondition]:
    """Union de valores en rutas `in` compartidas y conjuntos `contains` comunes."""
    first_values, second_values = _in_values(first), _in_values(second)
    merged = {
        AtomicCondition(path, ConditionOperator.in_, first_values[path] | second_values[path])
        for path in first_values.keys() & second_values.keys()
    }
    merged.update(
        c for c in first if c.op is ConditionOperator.contains and c in second
    )
    return frozenset(merged)


def merge_pair(first: Rule, second: Rule) -> Rule:
    return first.replace(
        subject_condition=condition_lub(first.subject_condition, second.subject_condition),
        resource_condition=condition_lub(first.resource_condition, second.resource_condition),
        actions=first.actions | second.actions,
    )


def merge_rules(ctx: MiningContext, rules: list[Rule]) -> bool:
    """Fusiona pares con mismos tipos y restriccion; modifica `rules` en sitio.

    Los pares se prueban en orden descendente de <max(q1, q2), min(q1, q2)> y el orden se
    recalcula despues de cada fusion exitosa.
    """
    failed: set[tuple[Rule, Rule]] = set()
    merged_any = False
    while True:
        qualities: dict[Rule, RuleQuality] = {
            rule: rule_quality(ctx.evaluator, rule, ctx.sp0, ctx.params.weights) for rule in rules
        }
        groups: dict[tuple, list[Rule]] = defaultdict(list)
        for rule in ctx.sort_rules(rules):
            groups[(rule.subject_type, rule.resource_type, rule.constraint)].append(rule)
        pairs: list[tuple[RuleQuality, RuleQuality, str, str, Rule, Rule]] = []
        for members in groups.values():
            for i, first in enumerate(members):
                for second in members[i + 1 :]:
                    if (first, second) in failed:
                        continue
                    q1, q2 = qualities[first], qualities[second]
                    pairs.append(
                        (max(q1, q2), min(q1, q2), ctx.text(first), ctx.text(second), first, second)
                    )
        # calidad descendente; a igual calidad, texto canonico ascendente
        pairs.sort(key=lambda item: (item[2], item[3]))
        pairs.sort(key=lambda item: (item[0], item[1]), reverse=True)
        for *_, first, second in pairs:
            merged = merge_pair(first, second)
            if ctx.is_valid(merged):
                rules[:] = [r for r in rules if r not in (first, second)]
                if merged not in rules:
                    rules.append(merged)
                logger.debug(
                    "Fusion: %s + %s -> %s", ctx.text(first), ctx.text(second), ctx.text(merged)
                )
                merged_any = True
                break
            failed.add((first, second))
        else:
            return merged_any


def _lift(
    ctx: MiningContext,
    rules: list[Rule],
    type_of: Callable[[Rule], str],
    with_type: Callable[[Rule, str], Rule],
    other_components: Callable[[Rule], tuple],
) -> bool:
    cm = ctx.class_model
    groups: dict[tuple, list[Rule]] = defaultdict(list)
    for rule in ctx.sort_rules(rules):
        groups[other_components(rule)].append(rule)
    for members in groups.values():
        if len(members) < 2:
            continue
        ancestors: set[str] = set()
        for rule in members:
            ancestors.update(cm.ancestors(type_of(rule)))
        # de la superclase mas general a la mas especifica
        for ancestor in sorted(ancestors, key=lambda name: (len(cm.ancestors(name)), name)):
            covered = [r for r in members if cm.is_subclass(type_of(r), ancestor)]
            if len(covered) < 2:
                continue
            lifted = with_type(covered[0], ancestor)
            if ctx.is_acceptable(lifted):
                rules[:] = [r for r in rules if r not in covered]
                if lifted not in rules:
                    rules.append(lifted)
                logger.debug("Fusion por herencia de %s reglas: %s", len(covered), ctx.text(lifted))
                return True
    return False


def _shared(rule: Rule) -> tuple:
    return (rule.subject_condition, rule.resource_condition, rule.constraint, rule.actions)


def merge_rules_inheritance(ctx: MiningContext, rules: list[Rule]) -> bool:
    """Reemplaza reglas que solo difieren en un tipo por una regla sobre una superclase comun."""
    changed = False
    while True:
        by_subject = _lift(
            ctx,
            rules,
            lambda r: r.subject_type,
            lambda r, t: r.replace(subject_type=t),
            lambda r: (r.resource_type, *_shared(r)),
        )
        by_resource = by_subject or _lift(
            ctx,
            rules,
            lambda r: r.resource_type,
            lambda r, t: r.replace(resource_type=t),
            lambda r: (r.subject_type, *_shared(r)),
        )
        if not by_resource:
            return changed
        changed = True
