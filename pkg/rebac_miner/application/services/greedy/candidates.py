"""Restricciones candidatas y construccion de reglas candidatas a partir de semillas."""
from __future__ import annotations

import logging
from collections.abc import Collection, Sequence

from rebac_miner.application.services.greedy.conditions import compute_condition
from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.application.services.greedy.generalize import generalize_rule
from rebac_miner.domain.entities import AtomicConstraint, Rule
from rebac_miner.domain.semantics import PermissionIndex

logger = logging.getLogger(__name__)


def candidate_constraints(
    ctx: MiningContext, subject: str, resource: str
) -> tuple[AtomicConstraint, ...]:
    """Restricciones atomicas entre rutas de tipo referencia que satisface <subject, resource>."""
    key = (subject, resource)
    cached = ctx.pair_constraints.get(key)
    if cached is not None:
        return cached
    om = ctx.object_model
    candidates = ctx.type_constraints(om.type_of(subject), om.type_of(resource))
    satisfied = ctx.evaluator.satisfies_constraint
    return ctx.pair_constraints.put(
        key, tuple(c for c in candidates if satisfied(subject, resource, (c,)))
    )


def build_candidate_rule(
    ctx: MiningContext,
    subject_type: str,
    subjects: Collection[str],
    resource_type: str,
    resources: Collection[str],
    actions: Collection[str],
) -> Rule:
    """Regla sin restricciones cuyas condiciones caracterizan `subjects` y `resources`."""
    params = ctx.params
    return Rule(
        subject_type,
        compute_condition(ctx, subjects, subject_type, params.mspl),
        resource_type,
        compute_condition(ctx, resources, resource_type, params.mrpl),
        frozenset(),
        frozenset(actions),
    )


def add_candidate_rule(
    ctx: MiningContext,
    subject_type: str,
    subjects: Collection[str],
    resource_type: str,
    resources: Collection[str],
    cc: Sequence[AtomicConstraint],
    actions: Collection[str],
    uncovered: PermissionIndex,
    rules: list[Rule],
) -> Rule:
    rule = build_candidate_rule(ctx, subject_type, subjects, resource_type, resources, actions)
    generalized = generalize_rule(ctx, rule, cc, uncovered)
    if generalized not in rules:
        rules.append(generalized)
    for tup in ctx.evaluator.rule_meaning(generalized):
        uncovered.discard(tup)
    logger.debug("Regla candidata: %s", ctx.text(generalized))
    return generalized


def subjects_sharing_constraints(
    ctx: MiningContext, subject: str, resource: str, action: str, cc: Sequence[AtomicConstraint]
) -> list[str]:
    """Sujetos del mismo tipo que `subject` con permiso <resource, action> y las mismas
    restricciones candidatas respecto a `resource`."""
    om = ctx.object_model
    subject_type = om.type_of(subject)
    return [
        other
        for other in sorted(ctx.subjects_with(resource, action))
        if om.type_of(other) == subject_type
        and candidate_constraints(ctx, other, resource) == tuple(cc)
    ]
