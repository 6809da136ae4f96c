"""Pruebas del minero evolutivo con presupuestos pequenos."""
from __future__ import annotations

import numpy as np
import pytest

from rebac_miner.application.dtos.params import (
    EvoParams,
    GreedyParams,
    ImproveWeights,
    default_greedy_params,
)
from rebac_miner.application.services.evolutionary import EvolutionaryMiner
from rebac_miner.application.services.evolutionary.fitness import fitness, id_score
from rebac_miner.application.services.evolutionary.grammar import RuleGrammar
from rebac_miner.application.services.evolutionary.miner import narrow_types
from rebac_miner.application.services.evolutionary.operators import Operators
from rebac_miner.application.services.evolutionary.population import initial_population
from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.domain.entities import (
    AclPolicy,
    AtomicCondition,
    AtomicConstraint,
    SubjectPermission,
    make_rule,
)
from rebac_miner.domain.enums import ConditionOperator, ConstraintOperator
from rebac_miner.domain.semantics import is_consistent, is_valid
from rebac_miner.domain.well_formedness import is_well_formed
from rebac_miner.infrastructure.generators import get_generator

SAME_DEPT = AtomicConstraint(("dept",), ConstraintOperator.equal, ("dept",))

SMALL = EvoParams(
    pop_size=8,
    n_generations_search=15,
    n_tournament=3,
    n_generations_improve=10,
    seed=3,
)


def _operators(acl: AclPolicy, seed: int = 0) -> Operators:
    ctx = MiningContext(acl, GreedyParams())
    return Operators(RuleGrammar(ctx), np.random.default_rng(seed), 3)


def _id(*values: str) -> AtomicCondition:
    return AtomicCondition(("id",), ConditionOperator.in_, frozenset(values))


def test_improve_weights_must_sum_to_one() -> None:
    weights = ImproveWeights(single=0.5, double=0.2, type_single=0.0, type_double=0.0)

    with pytest.raises(ValueError, match="sumar 1"):
        EvoParams(improve_weights=weights)


def test_mutation_probability_is_not_a_separate_setting() -> None:
    with pytest.raises(ValueError, match="mutation_probability"):
        EvoParams(mutation_probability=0.9)


def test_crossover_probability_drives_search_operator() -> None:
    always = EvolutionaryMiner(SMALL.model_copy(update={"crossover_probability": 1.0}))
    never = EvolutionaryMiner(
        SMALL.model_copy(update={"crossover_probability": 0.0, "classic_operators": True})
    )

    assert {always._search_operator() for _ in range(20)} == {"crossover"}
    assert {never._search_operator() for _ in range(20)} == {"single"}


def test_fitness_against_uncovered_tuples(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())
    exact = make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT})
    everything = make_rule("User", "Doc", {"read"})
    only_first = ctx.sp0.copy()
    only_first.discard(SubjectPermission("u2", "doc2", "read"))

    assert fitness(ctx, exact, ctx.sp0)[:4] == (0, 0, 0, 3)
    assert fitness(ctx, everything, ctx.sp0)[:2] == (2, 0)
    # las tuplas ya cubiertas cuentan como falsas aceptaciones
    assert fitness(ctx, exact, only_first)[:2] == (1, 0)


def test_id_score_counts_both_sides() -> None:
    by_id = AtomicCondition(("id",), ConditionOperator.in_, frozenset({"x"}))
    rule = make_rule("User", "Doc", {"read"}, subject_condition={by_id})

    assert id_score(rule) == 1
    assert id_score(rule.replace(resource_condition=frozenset({by_id}))) == 2


def test_grammar_actions_come_from_sp0(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())

    assert RuleGrammar(ctx).actions == ("read",)


def test_simplify_mutation_removes_the_only_condition(dept_acl) -> None:
    operators = _operators(dept_acl)
    rule = make_rule(
        "User",
        "Doc",
        {"read"},
        subject_condition={
            AtomicCondition(("dept", "id"), ConditionOperator.in_, frozenset({"d1"}))
        },
    )
    individual = operators.from_rule(rule)
    assert individual is not None

    assert operators.simplify_mutation(individual).rule == make_rule("User", "Doc", {"read"})


def test_action_mutation_keeps_seed_action(dept_acl) -> None:
    operators = _operators(dept_acl)
    individual = operators.from_rule(make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT}))
    assert individual is not None
    seed = SubjectPermission("u1", "doc1", "read")

    for _ in range(10):
        individual = operators.action_mutation(individual, seed, {"read"})
        assert "read" in individual.rule.actions


def test_crossover_of_identical_parents(dept_acl) -> None:
    operators = _operators(dept_acl)
    parent = operators.from_rule(make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT}))
    assert parent is not None

    first, second = operators.crossover(parent, parent)

    assert first.rule == parent.rule
    assert second.rule == parent.rule


def test_mutations_stay_well_formed(dept_acl) -> None:
    operators = _operators(dept_acl, seed=11)
    individual = operators.from_rule(make_rule("User", "Doc", {"read"}))
    assert individual is not None

    for _ in range(25):
        individual = operators.double_mutation(operators.single_mutation(individual))
        assert is_well_formed(dept_acl.class_model, individual.rule)


def test_narrow_types_moves_to_the_only_child(staff_acl) -> None:
    ctx = MiningContext(staff_acl, GreedyParams())
    rules = [make_rule("Person", "Room", {"enter"})]

    assert narrow_types(ctx, rules)
    assert rules == [make_rule("Clinician", "Room", {"enter"})]
    # Doctor o Nurse por separado ya no cubren SP0
    assert not narrow_types(ctx, rules)


def test_empty_acl_mines_empty_policy(dept_acl) -> None:
    acl = AclPolicy(dept_acl.class_model, dept_acl.object_model, frozenset({"read"}), frozenset())

    assert EvolutionaryMiner(SMALL).mine(acl).rules == frozenset()


def test_department_acl_is_mined_consistently(dept_acl) -> None:
    outcome = EvolutionaryMiner(SMALL).mine(dept_acl)

    assert is_consistent(dept_acl, outcome.rules)
    assert set(outcome.phase_seconds) == {"search", "improve"}


def test_same_seed_same_policy(staff_acl_with_patients) -> None:
    first = EvolutionaryMiner(SMALL).mine(staff_acl_with_patients).rules
    second = EvolutionaryMiner(SMALL).mine(staff_acl_with_patients).rules

    assert first == second


def test_classic_operators_still_yield_consistent_policy(dept_acl) -> None:
    params = SMALL.model_copy(update={"classic_operators": True})

    assert is_consistent(dept_acl, EvolutionaryMiner(params).mine(dept_acl).rules)


def test_initial_population_contains_valid_rule_covering_seed(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())
    operators = Operators(RuleGrammar(ctx), np.random.default_rng(0), 3)
    seed = SubjectPermission("u1", "doc1", "read")

    population = initial_population(ctx, operators, SMALL, seed, ctx.sp0.copy())

    assert population
    assert any(
        ctx.is_valid(ind.rule) and ctx.evaluator.covers(ind.rule, seed) for ind in population
    )
    assert all(is_well_formed(dept_acl.class_model, ind.rule) for ind in population)


def test_improvement_only_accepts_lower_wsc(dept_acl) -> None:
    miner = EvolutionaryMiner(SMALL)
    ctx = MiningContext(dept_acl, GreedyParams())
    first = make_rule(
        "User", "Doc", {"read"}, subject_condition={_id("u1")}, constraint={SAME_DEPT}
    )
    second = make_rule(
        "User", "Doc", {"read"}, subject_condition={_id("u2")}, constraint={SAME_DEPT}
    )
    rules = [first, second]
    general = make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT})
    heavier = first.replace(
        resource_condition=frozenset(
            {AtomicCondition(("dept", "id"), ConditionOperator.in_, frozenset({"d1"}))}
        )
    )

    replacement = miner._replacement(ctx, rules, first, general)

    assert replacement == [general]
    assert ctx.wsc_policy(replacement) < ctx.wsc_policy(rules)
    assert miner._replacement(ctx, rules, first, heavier) is None


def test_improvement_never_raises_policy_wsc(staff_acl_with_patients) -> None:
    miner = EvolutionaryMiner(SMALL)
    ctx = MiningContext(staff_acl_with_patients, GreedyParams())
    operators = Operators(RuleGrammar(ctx), miner.rng, 3)
    rules = [
        make_rule("Doctor", "Room", {"enter"}),
        make_rule("Nurse", "Room", {"enter"}),
    ]
    before = ctx.wsc_policy(rules)

    miner.improve_rules(ctx, operators, rules)

    assert ctx.wsc_policy(rules) <= before
    assert is_consistent(staff_acl_with_patients, rules)


def test_failing_seed_falls_back_to_its_greedy_rule(dept_acl, monkeypatch) -> None:
    miner = EvolutionaryMiner(SMALL.model_copy(update={"max_seed_failures": 2}))
    ctx = MiningContext(dept_acl, GreedyParams())
    operators = Operators(RuleGrammar(ctx), miner.rng, 3)
    attempts: list[SubjectPermission] = []

    def never_finds(ctx, operators, seed, uncovered):
        attempts.append(seed)

    monkeypatch.setattr(miner, "evolve_rule", never_finds)
    rules = miner.candidate_rules(ctx, operators)

    assert len(ctx.uncovered(rules)) == 0
    assert len(attempts) == 2 * len(rules)


@pytest.mark.parametrize("name", ["emr", "healthcare", "project-mgmt", "university"])
def test_generated_policies_are_mined_consistently(name) -> None:
    generated = get_generator(name).generate(n=1, seed=4)

    rules = EvolutionaryMiner(SMALL, default_greedy_params(name)).mine(generated.acl).rules

    assert is_consistent(generated.acl, rules)
    om = generated.acl.object_model
    assert all(is_valid(om, rule, generated.acl.sp0) for rule in rules)
