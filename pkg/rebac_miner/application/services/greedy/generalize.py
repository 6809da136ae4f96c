"""Generalizacion de reglas agregando restricciones atomicas."""
from __future__ import annotations

from collections.abc import Sequence

from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.application.services.greedy.quality import rule_quality
from rebac_miner.application.services.paths import condition_path_for
from rebac_miner.domain.entities import AtomicCondition, AtomicConstraint, Path, Rule
from rebac_miner.domain.semantics import PermissionIndex


def _remove_path(
    condition: frozenset[AtomicCondition], path: Path
) -> tuple[frozenset[AtomicCondition], bool]:
    kept = frozenset(c for c in condition if c.path != path)
    return kept, len(kept) != len(condition)


def valid_extensions(
    ctx: MiningContext, rule: Rule, cc: Sequence[AtomicConstraint]
) -> tuple[tuple[AtomicConstraint, Rule], ...]:
    """Reglas validas que resultan de agregar una restriccion de `cc` a `rule`.

    Para cada restriccion se intenta quitar los conjuntos de ambos lados, luego solo el del
    sujeto y luego solo el del recurso; cada intento exige que la ruta aparezca en la
    condicion y que la regla resultante sea valida.
    """
    key = (rule, tuple(cc))
    cached = ctx.extensions.get(key)
    if cached is not None:
        return cached
    cm = ctx.class_model
    results: list[tuple[AtomicConstraint, Rule]] = []
    for constraint in cc:
        subject_path = condition_path_for(cm, rule.subject_type, constraint.subject_path)
        resource_path = condition_path_for(cm, rule.resource_type, constraint.resource_path)
        subject_kept, in_subject = _remove_path(rule.subject_condition, subject_path)
        resource_kept, in_resource = _remove_path(rule.resource_condition, resource_path)
        extended = rule.constraint | {constraint}
        attempts = (
            (in_subject and in_resource, subject_kept, resource_kept),
            (in_subject, subject_kept, rule.resource_condition),
            (in_resource, rule.subject_condition, resource_kept),
        )
        for applies, subject_condition, resource_condition in attempts:
            if not applies:
                continue
            candidate = rule.replace(
                subject_condition=subject_condition,
                resource_condition=resource_condition,
                constraint=extended,
            )
            if ctx.is_valid(candidate):
                results.append((constraint, candidate))
                break
    return ctx.extensions.put(key, tuple(results))


def generalize_rule(
    ctx: MiningContext,
    rule: Rule,
    cc: Sequence[AtomicConstraint],
    uncovered: PermissionIndex,
) -> Rule:
    """Mejor generalizacion de `rule` segun su calidad sobre `uncovered`."""
    # orden estable: a igual cobertura se conserva el orden de cc
    results = sorted(
        valid_extensions(ctx, rule, cc),
        key=lambda item: ctx.evaluator.covered_count(item[1], uncovered),
        reverse=True,
    )
    best = rule
    best_quality = rule_quality(ctx.evaluator, rule, uncovered, ctx.params.weights)
    remaining = [constraint for constraint, _ in results]
    for position, (_, generalized) in enumerate(results):
        further = generalize_rule(ctx, generalized, remaining[position + 1 :], uncovered)
        quality = rule_quality(ctx.evaluator, further, uncovered, ctx.params.weights)
        if quality > best_quality:
            best, best_quality = further, quality
    return best
