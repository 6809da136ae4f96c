"""Poblacion inicial de la busqueda evolutiva de una regla para una tupla semilla."""
from __future__ import annotations

import numpy as np

from rebac_miner.application.dtos.params import EvoParams
from rebac_miner.application.services.evolutionary.derivation import (
    Node,
    action_node,
    condition_node,
    rule_tree,
)
from rebac_miner.application.services.evolutionary.grammar import RESOURCE, SUBJECT
from rebac_miner.application.services.evolutionary.operators import Individual, Operators
from rebac_miner.application.services.greedy.candidates import (
    build_candidate_rule,
    candidate_constraints,
    subjects_sharing_constraints,
)
from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.application.services.greedy.generalize import generalize_rule
from rebac_miner.domain.entities import Rule, SubjectPermission
from rebac_miner.domain.semantics import PermissionIndex

# limites de los recortes aleatorios de las reglas del metodo 1
MAX_KEPT_CONDITIONS = 7
MAX_KEPT_CONSTRAINTS = 3


def seed_rules(
    ctx: MiningContext, seed: SubjectPermission, uncovered: PermissionIndex
) -> tuple[Rule, Rule]:
    """Las dos reglas candidatas que el minero voraz construye para la semilla."""
    om = ctx.object_model
    subject, resource, action = seed
    cc = candidate_constraints(ctx, subject, resource)
    subject_type, resource_type = om.type_of(subject), om.type_of(resource)
    same = subjects_sharing_constraints(ctx, subject, resource, action, cc)
    first = generalize_rule(
        ctx,
        build_candidate_rule(ctx, subject_type, same, resource_type, [resource], [action]),
        cc,
        uncovered,
    )
    actions = sorted(ctx.sp0.actions_for(subject, resource))
    second = generalize_rule(
        ctx,
        build_candidate_rule(ctx, subject_type, [subject], resource_type, [resource], actions),
        cc,
        uncovered,
    )
    return first, second


def _trim(rng: np.random.Generator, items: frozenset, upper: int) -> frozenset:
    target = int(rng.integers(1, upper + 1))
    if len(items) <= target:
        return items
    ordered = sorted(items, key=repr)
    kept = rng.choice(len(ordered), size=target, replace=False)
    return frozenset(ordered[int(i)] for i in kept)


def _random_type(rng: np.random.Generator, ctx: MiningContext, name: str, keep: float) -> str:
    ancestors = ctx.class_model.ancestors(name)
    if not ancestors or rng.random() < keep:
        return name
    return ancestors[int(rng.integers(len(ancestors)))]


def _random_condition(operators: Operators, role: str, class_name: str) -> Node:
    """Condicion vacia, sobre una ruta de un solo valor o arbitraria, con igual probabilidad."""
    case = int(operators.rng.integers(3))
    if case == 0:
        return condition_node(operators.grammar, role, class_name, {})
    if case == 1:
        return operators.grower.single_valued_condition(role, class_name)
    return operators.grower.condition(role, class_name)


def initial_population(
    ctx: MiningContext,
    operators: Operators,
    params: EvoParams,
    seed: SubjectPermission,
    uncovered: PermissionIndex,
) -> list[Individual]:
    """Variantes de las reglas semilla (metodo 1) y reglas aleatorias (metodo 2)."""
    rng = operators.rng
    grammar = operators.grammar
    om = ctx.object_model
    population: list[Individual] = []
    seen: set[Rule] = set()
    budget = 4 * params.pop_size

    def add(individual: Individual | None) -> None:
        if individual is not None and individual.rule not in seen:
            seen.add(individual.rule)
            population.append(individual)

    for rule in seed_rules(ctx, seed, uncovered):
        add(operators.from_rule(rule))
    method1 = round(params.pop_size * params.method1_fraction)
    attempts = 0
    while population and len(population) < method1 and attempts < budget:
        attempts += 1
        base = population[int(rng.integers(len(population)))].rule
        variant = base.replace(
            subject_condition=_trim(rng, base.subject_condition, MAX_KEPT_CONDITIONS),
            resource_condition=_trim(rng, base.resource_condition, MAX_KEPT_CONDITIONS),
            constraint=_trim(rng, base.constraint, MAX_KEPT_CONSTRAINTS),
        )
        add(operators.from_rule(variant))

    attempts = 0
    keep = params.type_keep_probability
    while len(population) < params.pop_size and attempts < budget:
        attempts += 1
        subject_type = _random_type(rng, ctx, om.type_of(seed.subject), keep)
        resource_type = _random_type(rng, ctx, om.type_of(seed.resource), keep)
        tree = rule_tree(
            subject_type,
            resource_type,
            _random_condition(operators, SUBJECT, subject_type),
            _random_condition(operators, RESOURCE, resource_type),
            operators.grower.constraint(subject_type, resource_type),
            action_node(grammar, frozenset({seed.action})),
        )
        add(operators.individual(tree))

    # gramaticas muy pequenas pueden no dar popSize reglas distintas
    index = 0
    while population and len(population) < params.pop_size:
        population.append(population[index])
        index += 1
    return population
