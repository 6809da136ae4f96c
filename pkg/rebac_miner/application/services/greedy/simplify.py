"""Simplificacion de reglas: conjuntos, restricciones, acciones, constantes y ciclos."""
from __future__ import annotations

import logging
from itertools import combinations

from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.application.services.greedy.quality import RuleQuality, rule_quality
from rebac_miner.application.services.paths import condition_path_for
from rebac_miner.domain.entities import ID_FIELD, AtomicCondition, AtomicConstraint, Path, Rule
from rebac_miner.domain.enums import (
    PRIMITIVE_TYPES,
    ConditionOperator,
    ConstraintOperator,
    Multiplicity,
)
from rebac_miner.domain.rendering import format_condition
from rebac_miner.domain.semantics import op_from_mul

logger = logging.getLogger(__name__)

_SUBJECT, _RESOURCE = "subject", "resource"


def _quality(ctx: MiningContext, rule: Rule) -> RuleQuality:
    return rule_quality(ctx.evaluator, rule, ctx.sp0, ctx.params.weights)


def _conjunct_order(role_and_condition: tuple[str, AtomicCondition]) -> tuple:
    role, condition = role_and_condition
    path = condition.path
    return (
        len(condition.values),
        len(path),
        int(path == (ID_FIELD,)),
        format_condition(role, condition),
    )


def _without_conjuncts(rule: Rule, removed: set[tuple[str, AtomicCondition]]) -> Rule:
    return rule.replace(
        subject_condition=frozenset(
            c for c in rule.subject_condition if (_SUBJECT, c) not in removed
        ),
        resource_condition=frozenset(
            c for c in rule.resource_condition if (_RESOURCE, c) not in removed
        ),
    )


def eliminate_conjuncts(ctx: MiningContext, rule: Rule) -> Rule:
    """Quita conjuntos de las condiciones preservando validez."""
    conjuncts = sorted(
        [(_SUBJECT, c) for c in rule.subject_condition]
        + [(_RESOURCE, c) for c in rule.resource_condition],
        key=_conjunct_order,
        reverse=True,
    )
    if not conjuncts:
        return rule
    if len(conjuncts) > ctx.params.mcse:
        current = rule
        for conjunct in conjuncts:
            candidate = _without_conjuncts(current, {conjunct})
            if ctx.is_valid(candidate):
                current = candidate
        return current
    best, best_quality = rule, _quality(ctx, rule)
    for size in range(len(conjuncts), 0, -1):
        for subset in combinations(conjuncts, size):
            candidate = _without_conjuncts(rule, set(subset))
            if not ctx.is_valid(candidate):
                continue
            quality = _quality(ctx, candidate)
            if quality > best_quality:
                best, best_quality = candidate, quality
    return best


def eliminate_constraints(ctx: MiningContext, rule: Rule) -> Rule:
    """Quita restricciones atomicas preservando validez y maximizando la calidad."""
    constraints = sorted(
        rule.constraint, key=lambda c: (len(c.subject_path) + len(c.resource_path), repr(c))
    )
    if not constraints:
        return rule
    if len(constraints) > ctx.params.mcse:
        current = rule
        for constraint in reversed(constraints):
            candidate = current.replace(constraint=current.constraint - {constraint})
            if ctx.is_valid(candidate):
                current = candidate
        return current
    best, best_quality = rule, _quality(ctx, rule)
    for size in range(len(constraints), 0, -1):
        for subset in combinations(constraints, size):
            candidate = rule.replace(constraint=rule.constraint - set(subset))
            if not ctx.is_valid(candidate):
                continue
            quality = _quality(ctx, candidate)
            if quality > best_quality:
                best, best_quality = candidate, quality
    return best


def _subsumes(ctx: MiningContext, general: Rule, specific: Rule) -> bool:
    cm = ctx.class_model
    return (
        cm.is_subclass(specific.subject_type, general.subject_type)
        and cm.is_subclass(specific.resource_type, general.resource_type)
        and general.subject_condition <= specific.subject_condition
        and general.resource_condition <= specific.resource_condition
        and general.constraint <= specific.constraint
    )


def remove_overlapping_actions(ctx: MiningContext, rules: list[Rule]) -> bool:
    """Quita de una regla las acciones que otra regla mas general ya concede."""
    changed = False
    for rule in ctx.sort_rules(rules):
        if rule not in rules:
            continue
        redundant = {
            action
            for other in rules
            if other != rule and _subsumes(ctx, other, rule)
            for action in other.actions & rule.actions
        }
        if redundant:
            _replace(rules, rule, rule.replace(actions=rule.actions - redundant))
            logger.debug("Acciones solapadas %s quitadas de %s", sorted(redundant), ctx.text(rule))
            changed = True
    return changed


def remove_uncovering_actions(ctx: MiningContext, rules: list[Rule]) -> bool:
    """Quita una accion si todas sus tuplas en la regla las cubren otras reglas."""
    changed = False
    evaluator = ctx.evaluator
    for rule in ctx.sort_rules(rules):
        current = rule
        for action in sorted(rule.actions):
            others = [r for r in rules if r != current and action in r.actions]
            covered_elsewhere = all(
                any(pair in evaluator.pair_meaning(other) for other in others)
                for pair in evaluator.pair_meaning(current)
            )
            if covered_elsewhere:
                reduced = current.replace(actions=current.actions - {action})
                _replace(rules, current, reduced)
                logger.debug("Accion %s innecesaria en %s", action, ctx.text(current))
                current = reduced
                changed = True
    return changed


def _replace(rules: list[Rule], old: Rule, new: Rule) -> None:
    """Sustituye `old` por `new`; una regla sin acciones desaparece de la politica."""
    rules[:] = [r for r in rules if r != old]
    if new.actions and new not in rules:
        rules.append(new)


def _singleton_constants(condition: frozenset[AtomicCondition]) -> dict[Path, AtomicCondition]:
    return {
        c.path: c
        for c in condition
        if c.op is ConditionOperator.in_ and len(c.values) == 1
    }


def propagate_constants(ctx: MiningContext, rule: Rule) -> Rule:
    """Cambia `p = c` con `p = p'` por la condicion `p' = c` del otro lado.

    Solo se aplica cuando la complejidad de la regla no aumenta.
    """
    cm = ctx.class_model
    for constraint in sorted(rule.constraint, key=repr):
        if constraint.op is not ConstraintOperator.equal:
            continue
        subject_path = condition_path_for(cm, rule.subject_type, constraint.subject_path)
        resource_path = condition_path_for(cm, rule.resource_type, constraint.resource_path)
        subject_constants = _singleton_constants(rule.subject_condition)
        resource_constants = _singleton_constants(rule.resource_condition)
        candidates: list[Rule] = []
        if subject_path in subject_constants:
            value = subject_constants[subject_path].value
            candidates.append(
                rule.replace(
                    resource_condition=rule.resource_condition
                    | {AtomicCondition(resource_path, ConditionOperator.in_, value)},
                    constraint=rule.constraint - {constraint},
                )
            )
        if resource_path in resource_constants:
            value = resource_constants[resource_path].value
            candidates.append(
                rule.replace(
                    subject_condition=rule.subject_condition
                    | {AtomicCondition(subject_path, ConditionOperator.in_, value)},
                    constraint=rule.constraint - {constraint},
                )
            )
        for candidate in candidates:
            if ctx.wsc(candidate) <= ctx.wsc(rule) and ctx.is_acceptable(candidate):
                logger.debug("Propagacion de constante en %s", ctx.text(rule))
                return propagate_constants(ctx, candidate)
    return rule


def _cycles(ctx: MiningContext, anchor: str, path: Path) -> list[Path]:
    """Rutas obtenidas al cortar un tramo que vuelve a la misma clase."""
    classes = ctx.class_model.resolve_path(anchor, path).classes
    shortened: list[Path] = []
    for i in range(len(classes)):
        if classes[i] in PRIMITIVE_TYPES:
            continue
        for j in range(i + 1, len(classes)):
            if classes[j] == classes[i]:
                shortened.append(path[:i] + path[j:])
    return shortened


def _retarget_condition(
    ctx: MiningContext, anchor: str, condition: AtomicCondition, path: Path
) -> AtomicCondition | None:
    info = ctx.class_model.resolve_path(anchor, path)
    if info.multiplicity is Multiplicity.many:
        if condition.op is ConditionOperator.contains:
            return AtomicCondition(path, condition.op, condition.value)
        if len(condition.values) == 1:
            return AtomicCondition(path, ConditionOperator.contains, next(iter(condition.values)))
        return None
    if condition.op is ConditionOperator.in_:
        return AtomicCondition(path, condition.op, condition.value)
    return AtomicCondition(path, ConditionOperator.in_, frozenset({condition.value}))


def _cycle_free_variants(ctx: MiningContext, rule: Rule) -> list[Rule]:
    cm = ctx.class_model
    variants: list[Rule] = []
    for field_name, anchor in (
        ("subject_condition", rule.subject_type),
        ("resource_condition", rule.resource_type),
    ):
        condition: frozenset[AtomicCondition] = getattr(rule, field_name)
        for atomic in sorted(condition, key=repr):
            for path in _cycles(ctx, anchor, atomic.path):
                if not path:
                    continue
                replacement = _retarget_condition(ctx, anchor, atomic, path)
                if replacement is not None:
                    variants.append(
                        rule.replace(**{field_name: (condition - {atomic}) | {replacement}})
                    )
    for constraint in sorted(rule.constraint, key=repr):
        subject_path, resource_path = constraint.subject_path, constraint.resource_path
        shortened: list[tuple[Path, Path]] = [
            (p, resource_path) for p in _cycles(ctx, rule.subject_type, subject_path)
        ] + [(subject_path, p) for p in _cycles(ctx, rule.resource_type, resource_path)]
        for subject_path, resource_path in shortened:
            op = op_from_mul(
                cm.resolve_path(rule.subject_type, subject_path).multiplicity,
                cm.resolve_path(rule.resource_type, resource_path).multiplicity,
            )
            replacement = AtomicConstraint(subject_path, op, resource_path)
            changed = (rule.constraint - {constraint}) | {replacement}
            variants.append(rule.replace(constraint=changed))
    return variants


def remove_cycles(ctx: MiningContext, rules: list[Rule], rule: Rule) -> Rule:
    """Elimina ciclos de rutas si la regla sigue valida y la politica sigue cubriendo SP0."""
    current = rule
    progress = True
    while progress:
        progress = False
        for variant in _cycle_free_variants(ctx, current):
            if ctx.is_acceptable(variant) and ctx.still_covers(rules, current, variant):
                logger.debug("Ciclo eliminado: %s -> %s", ctx.text(current), ctx.text(variant))
                _replace(rules, current, variant)
                current = variant
                progress = True
                break
    return current


def simplify_rules(ctx: MiningContext, rules: list[Rule]) -> bool:
    """Aplica los pasos de simplificacion a todas las reglas; modifica `rules` en sitio."""
    changed = False
    for rule in ctx.sort_rules(rules):
        simplified = eliminate_constraints(ctx, eliminate_conjuncts(ctx, rule))
        if simplified != rule:
            _replace(rules, rule, simplified)
            changed = True
    changed |= remove_overlapping_actions(ctx, rules)
    changed |= remove_uncovering_actions(ctx, rules)
    for rule in ctx.sort_rules(rules):
        propagated = propagate_constants(ctx, rule)
        if propagated != rule:
            _replace(rules, rule, propagated)
            changed = True
    for rule in ctx.sort_rules(rules):
        if rule in rules and remove_cycles(ctx, rules, rule) != rule:
            changed = True
    return changed
