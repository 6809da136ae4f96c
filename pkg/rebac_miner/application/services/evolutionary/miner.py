"""Minero evolutivo: busqueda de una regla por semilla y mejora de la politica completa."""
from __future__ import annotations

import logging
import time

import numpy as np

from rebac_miner.application.dtos.params import EvoParams, GreedyParams
from rebac_miner.application.ports.miners import MiningOutcome
from rebac_miner.application.services.evolutionary.fitness import Fitness, fitness, id_score
from rebac_miner.application.services.evolutionary.grammar import RuleGrammar
from rebac_miner.application.services.evolutionary.operators import Individual, Operators
from rebac_miner.application.services.evolutionary.population import (
    initial_population,
    seed_rules,
)
from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.application.services.greedy.miner import merge_and_simplify
from rebac_miner.application.services.greedy.quality import seed_order
from rebac_miner.domain.entities import AclPolicy, Rule, SubjectPermission
from rebac_miner.domain.semantics import PermissionIndex
from rebac_miner.domain.well_formedness import is_well_formed

logger = logging.getLogger(__name__)

_SEARCH_MUTATIONS = ("single", "action", "simplify", "double")
_IMPROVE_OPERATORS = ("single", "double", "type_single", "type_double")


def narrow_types(ctx: MiningContext, rules: list[Rule]) -> bool:
    """Cambia el tipo de sujeto o recurso por una clase hija si SP0 sigue cubierto."""
    cm = ctx.class_model
    changed = False
    for rule in ctx.sort_rules(rules):
        if rule not in rules:
            continue
        for field_name in ("subject_type", "resource_type"):
            current: str = getattr(rule, field_name)
            narrowed = next(
                (
                    candidate
                    for candidate in (
                        rule.replace(**{field_name: child}) for child in cm.children(current)
                    )
                    if is_well_formed(cm, candidate) and ctx.still_covers(rules, rule, candidate)
                ),
                None,
            )
            if narrowed is not None:
                rules[:] = [r for r in rules if r != rule]
                if narrowed not in rules:
                    rules.append(narrowed)
                logger.debug("Tipo acotado: %s -> %s", ctx.text(rule), ctx.text(narrowed))
                changed = True
                break
    return changed


def merge_rules_and_simplify_with_narrowing(ctx: MiningContext, rules: list[Rule]) -> None:
    while True:
        merge_and_simplify(ctx, rules)
        if not narrow_types(ctx, rules):
            return


class EvolutionaryMiner:
    def __init__(
        self,
        params: EvoParams | None = None,
        greedy_params: GreedyParams | None = None,
        *,
        cache_size: int = 200_000,
    ) -> None:
        self.params = params or EvoParams()
        self.greedy_params = greedy_params or GreedyParams()
        self.cache_size = cache_size
        self.rng = np.random.default_rng(self.params.seed)

    # -- fase 1 -------------------------------------------------------------

    def _search_operator(self) -> str:
        params = self.params
        if self.rng.random() < params.crossover_probability:
            return "crossover"
        if params.classic_operators:
            return "single"
        weights = params.mutation_weights
        probabilities = np.array([getattr(weights, name) for name in _SEARCH_MUTATIONS])
        index = int(self.rng.choice(len(_SEARCH_MUTATIONS), p=probabilities / probabilities.sum()))
        return _SEARCH_MUTATIONS[index]

    def evolve_rule(
        self,
        ctx: MiningContext,
        operators: Operators,
        seed: SubjectPermission,
        uncovered: PermissionIndex,
    ) -> Rule | None:
        """Busqueda estacionaria; retorna la mejor regla si es valida."""
        params = self.params
        scores: dict[Rule, Fitness] = {}

        def score(individual: Individual) -> Fitness:
            cached = scores.get(individual.rule)
            if cached is None:
                cached = fitness(ctx, individual.rule, uncovered)
                scores[individual.rule] = cached
            return cached

        population = initial_population(ctx, operators, params, seed, uncovered)
        population.sort(key=score)
        allowed = ctx.sp0.actions_for(seed.subject, seed.resource)
        for _ in range(params.n_generations_search):
            operator = self._search_operator()
            size = min(params.n_tournament, len(population))
            picked = self.rng.choice(len(population), size=size, replace=False)
            tournament = sorted((population[int(i)] for i in picked), key=score)
            best = tournament[0]
            if operator == "crossover":
                second = tournament[1] if len(tournament) > 1 else best
                offspring = list(operators.crossover(best, second))
            elif operator == "single":
                offspring = [operators.single_mutation(best)]
            elif operator == "double":
                offspring = [operators.double_mutation(best)]
            elif operator == "action":
                offspring = [operators.action_mutation(best, seed, allowed)]
            else:
                offspring = [operators.simplify_mutation(best)]
            present = {ind.rule for ind in population}
            population.extend(ind for ind in offspring if ind.rule not in present)
            population.sort(key=score)
            del population[params.pop_size :]
        winner = population[0].rule
        return winner if ctx.is_valid(winner) else None

    def candidate_rules(self, ctx: MiningContext, operators: Operators) -> list[Rule]:
        rules: list[Rule] = []
        uncovered = ctx.sp0.copy()
        failures: dict[SubjectPermission, int] = {}
        for seed in seed_order(ctx.acl.sp0):
            while seed in uncovered:
                rule = self.evolve_rule(ctx, operators, seed, uncovered)
                if rule is None or ctx.evaluator.covered_count(rule, uncovered) == 0:
                    failures[seed] = failures.get(seed, 0) + 1
                    if failures[seed] < self.params.max_seed_failures:
                        continue
                    # la segunda regla semilla es valida y cubre la semilla
                    rule = seed_rules(ctx, seed, uncovered)[1]
                    logger.warning("Semilla %s aceptada con su regla voraz", tuple(seed))
                if rule not in rules:
                    rules.append(rule)
                for tup in ctx.evaluator.rule_meaning(rule):
                    uncovered.discard(tup)
                logger.debug("Regla aceptada: %s (%s sin cubrir)", ctx.text(rule), len(uncovered))
        return rules

    # -- fase 2 -------------------------------------------------------------

    def _improve_operator(self) -> str:
        if self.params.classic_operators:
            return "single"
        weights = self.params.improve_weights
        probabilities = np.array([getattr(weights, name) for name in _IMPROVE_OPERATORS])
        index = int(self.rng.choice(len(_IMPROVE_OPERATORS), p=probabilities / probabilities.sum()))
        return _IMPROVE_OPERATORS[index]

    def _mutant(self, operators: Operators, individual: Individual) -> Individual | None:
        operator = self._improve_operator()
        if operator.startswith("type_"):
            lifted = operators.type_mutation(individual.rule)
            if lifted is None:
                return None
            individual = lifted
        if operator.endswith("double"):
            return operators.double_mutation(individual)
        return operators.single_mutation(individual)

    def _replacement(
        self, ctx: MiningContext, rules: list[Rule], rule: Rule, mutant: Rule
    ) -> list[Rule] | None:
        """Politica con `mutant` en lugar de `rule` y de las reglas que subsume, si mejora."""
        if mutant in rules or not ctx.is_valid(mutant) or id_score(mutant) > id_score(rule):
            return None
        if not is_well_formed(ctx.class_model, mutant):
            return None
        evaluator = ctx.evaluator
        removed = {rule} | {r for r in rules if evaluator.meaning_subset(r, mutant)}
        candidate = [r for r in rules if r not in removed] + [mutant]
        if ctx.wsc_policy(candidate) >= ctx.wsc_policy(rules):
            return None
        for old in removed:
            for tup in evaluator.rule_meaning(old):
                if not any(evaluator.covers(r, tup) for r in candidate):
                    return None
        return candidate

    def improve_rules(self, ctx: MiningContext, operators: Operators, rules: list[Rule]) -> None:
        budget = self.params.n_generations_improve
        for original in ctx.sort_rules(rules):
            if original not in rules:
                continue
            current = operators.from_rule(original)
            if current is None:
                continue
            accepted = 0
            for generation in range(1, budget + 1):
                if generation == budget // 2 and accepted == 0:
                    break
                mutant = self._mutant(operators, current)
                if mutant is None:
                    continue
                replacement = self._replacement(ctx, rules, current.rule, mutant.rule)
                if replacement is None:
                    continue
                logger.debug("Mejora: %s -> %s", ctx.text(current.rule), ctx.text(mutant.rule))
                rules[:] = replacement
                current = mutant
                accepted += 1
        merge_rules_and_simplify_with_narrowing(ctx, rules)

    def mine(self, acl: AclPolicy) -> MiningOutcome:
        ctx = MiningContext(acl, self.greedy_params, cache_size=self.cache_size)
        operators = Operators(RuleGrammar(ctx), self.rng, self.params.max_condition_values)
        phases: dict[str, float] = {}

        started = time.perf_counter()
        rules = self.candidate_rules(ctx, operators)
        phases["search"] = time.perf_counter() - started
        logger.info("Fase 1: %s reglas, WSC %s", len(rules), ctx.wsc_policy(rules))

        started = time.perf_counter()
        self.improve_rules(ctx, operators, rules)
        phases["improve"] = time.perf_counter() - started
        logger.info("Fase 2: %s reglas, WSC %s", len(rules), ctx.wsc_policy(rules))
        return MiningOutcome(frozenset(rules), phases)
