"""Minero voraz: construccion de reglas candidatas, mejora y seleccion final."""
from __future__ import annotations

import logging
import time
from collections.abc import Iterable

from rebac_miner.application.dtos.params import GreedyParams
from rebac_miner.application.ports.miners import MiningOutcome
from rebac_miner.application.services.greedy.candidates import (
    add_candidate_rule,
    candidate_constraints,
    subjects_sharing_constraints,
)
from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.application.services.greedy.merge import merge_rules, merge_rules_inheritance
from rebac_miner.application.services.greedy.quality import rule_quality, seed_order
from rebac_miner.application.services.greedy.simplify import simplify_rules
from rebac_miner.domain.entities import AclPolicy, Rule
from rebac_miner.domain.semantics import PermissionIndex

logger = logging.getLogger(__name__)


def merge_and_simplify(ctx: MiningContext, rules: list[Rule]) -> None:
    """Repite fusion y simplificacion hasta que ninguna tenga efecto."""
    while True:
        merged = merge_rules(ctx, rules)
        simplified = simplify_rules(ctx, rules)
        if not (merged or simplified):
            return


def remove_redundant_rules(ctx: MiningContext, rules: list[Rule]) -> None:
    """Quita ρ mientras exista otra regla ρ' con ⟦ρ⟧ ⊆ ⟦ρ'⟧."""
    for rule in ctx.sort_rules(rules):
        if any(
            other != rule and ctx.evaluator.meaning_subset(rule, other) for other in rules
        ):
            rules.remove(rule)
            logger.debug("Regla redundante eliminada: %s", ctx.text(rule))


def improve_rules(ctx: MiningContext, rules: list[Rule]) -> None:
    merge_and_simplify(ctx, rules)
    merge_rules_inheritance(ctx, rules)
    merge_and_simplify(ctx, rules)
    remove_redundant_rules(ctx, rules)


def select_rules(ctx: MiningContext, rules: Iterable[Rule]) -> list[Rule]:
    """Mueve la regla de mayor calidad sobre lo no cubierto hasta cubrir SP0.

    A igual calidad gana el texto canonico menor; se descartan reglas que no cubren nada nuevo.
    """
    pending = ctx.sort_rules(rules)
    selected: list[Rule] = []
    uncovered = ctx.sp0.copy()
    while uncovered and pending:
        pending = [r for r in pending if ctx.evaluator.covered_count(r, uncovered) > 0]
        if not pending:
            break
        best = pending[0]
        best_quality = rule_quality(ctx.evaluator, best, uncovered, ctx.params.weights)
        for rule in pending[1:]:
            quality = rule_quality(ctx.evaluator, rule, uncovered, ctx.params.weights)
            if quality > best_quality:
                best, best_quality = rule, quality
        pending.remove(best)
        selected.append(best)
        for tup in ctx.evaluator.rule_meaning(best):
            uncovered.discard(tup)
    if uncovered:
        logger.error("Quedaron %s tuplas de SP0 sin cubrir tras la seleccion", len(uncovered))
    return selected


class GreedyMiner:
    def __init__(self, params: GreedyParams | None = None, *, cache_size: int = 200_000) -> None:
        self.params = params or GreedyParams()
        self.cache_size = cache_size

    def context(self, acl: AclPolicy) -> MiningContext:
        return MiningContext(acl, self.params, cache_size=self.cache_size)

    def candidate_rules(self, ctx: MiningContext) -> list[Rule]:
        """Fase 1: reglas candidatas validas que cubren SP0, procesando semillas por lotes."""
        om = ctx.object_model
        rules: list[Rule] = []
        uncovered = ctx.sp0.copy()
        order = seed_order(ctx.acl.sp0)
        batch: list[Rule] = []
        seeds_in_batch = 0
        for seed in order:
            if seed not in uncovered:
                continue
            subject, resource, action = seed
            cc = candidate_constraints(ctx, subject, resource)
            subject_type, resource_type = om.type_of(subject), om.type_of(resource)
            same_constraints = subjects_sharing_constraints(ctx, subject, resource, action, cc)
            add_candidate_rule(
                ctx, subject_type, same_constraints, resource_type, [resource],
                cc, [action], uncovered, batch,
            )
            actions = ctx.sp0.actions_for(subject, resource)
            add_candidate_rule(
                ctx, subject_type, [subject], resource_type, [resource],
                cc, sorted(actions), uncovered, batch,
            )
            seeds_in_batch += 1
            if seeds_in_batch >= ctx.params.batch_size:
                self._flush(ctx, batch, rules, uncovered)
                seeds_in_batch = 0
        self._flush(ctx, batch, rules, uncovered)
        return rules

    @staticmethod
    def _flush(
        ctx: MiningContext, batch: list[Rule], rules: list[Rule], uncovered: PermissionIndex
    ) -> None:
        if not batch:
            return
        merge_rules(ctx, batch)
        for rule in batch:
            if rule not in rules:
                rules.append(rule)
            for tup in ctx.evaluator.rule_meaning(rule):
                uncovered.discard(tup)
        logger.info("Lote de semillas procesado: %s reglas candidatas", len(rules))
        batch.clear()

    def mine(self, acl: AclPolicy) -> MiningOutcome:
        ctx = self.context(acl)
        phases: dict[str, float] = {}
        started = time.perf_counter()
        rules = self.candidate_rules(ctx)
        phases["candidates"] = time.perf_counter() - started
        logger.info("Fase 1: %s reglas candidatas", len(rules))

        started = time.perf_counter()
        improve_rules(ctx, rules)
        phases["improve"] = time.perf_counter() - started
        logger.info("Fase 2: %s reglas tras fusion y simplificacion", len(rules))

        started = time.perf_counter()
        selected = select_rules(ctx, rules)
        phases["select"] = time.perf_counter() - started
        logger.info(
            "Fase 3: %s reglas seleccionadas, WSC %s", len(selected), ctx.wsc_policy(selected)
        )
        return MiningOutcome(frozenset(selected), phases)


def simplify_policy(
    acl: AclPolicy, rules: Iterable[Rule], params: GreedyParams | None = None
) -> frozenset[Rule]:
    """Version simplificada de una politica escrita a mano (referencia de comparacion)."""
    ctx = MiningContext(acl, params or GreedyParams())
    working = ctx.sort_rules(rules)
    improve_rules(ctx, working)
    return frozenset(working)
