"""Pruebas de los pasos del minero voraz sobre modelos de juguete."""
from __future__ import annotations

import math
from fractions import Fraction

from rebac_miner.application.dtos.params import GreedyParams, default_greedy_params
from rebac_miner.application.services.greedy.candidates import candidate_constraints
from rebac_miner.application.services.greedy.conditions import compute_condition
from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.application.services.greedy.generalize import generalize_rule, valid_extensions
from rebac_miner.application.services.greedy.merge import (
    condition_lub,
    merge_pair,
    merge_rules_inheritance,
)
from rebac_miner.application.services.greedy.quality import (
    RuleQuality,
    rule_quality,
    seed_order,
    seed_quality,
)
from rebac_miner.application.services.greedy.simplify import (
    eliminate_conjuncts,
    propagate_constants,
    remove_cycles,
    simplify_rules,
)
from rebac_miner.domain.entities import (
    AclPolicy,
    AtomicCondition,
    AtomicConstraint,
    ClassDeclaration,
    ClassModel,
    FieldDeclaration,
    ObjectModel,
    ObjectRecord,
    SubjectPermission,
    make_rule,
)
from rebac_miner.domain.enums import ConditionOperator, ConstraintOperator, Multiplicity
from rebac_miner.domain.semantics import PolicyEvaluator
from rebac_miner.infrastructure.generators import get_generator

ONE, MANY = Multiplicity.one, Multiplicity.many

SAME_DEPT = AtomicConstraint(("dept",), ConstraintOperator.equal, ("dept",))


def _in(path: tuple[str, ...], *values: str) -> AtomicCondition:
    return AtomicCondition(path, ConditionOperator.in_, frozenset(values))


def test_seed_quality_counts_permissions_and_subjects() -> None:
    sp0 = [
        SubjectPermission("s1", "r1", "read"),
        SubjectPermission("s2", "r1", "read"),
        SubjectPermission("s3", "r1", "read"),
        SubjectPermission("s1", "r2", "write"),
    ]

    assert seed_quality(sp0, sp0[0])[:2] == (3, 2)
    assert seed_quality(sp0, sp0[3])[:2] == (1, 2)
    assert seed_quality(sp0, sp0[1])[:2] == (3, 1)


def test_seed_order_is_total_and_descending() -> None:
    sp0 = [SubjectPermission(f"s{i}", "r", "read") for i in range(4)]
    sp0.append(SubjectPermission("s0", "other", "read"))

    order = seed_order(sp0)

    assert len(set(order)) == len(sp0)
    assert order[-1] == SubjectPermission("s0", "other", "read")


def test_rule_quality_components(staff_acl) -> None:
    ctx = MiningContext(staff_acl, GreedyParams())
    rule = make_rule("Clinician", "Room", {"enter", "lock", "clean"})

    quality = rule_quality(ctx.evaluator, rule, ctx.sp0, ctx.params.weights)

    assert quality.coverage_per_wsc == Fraction(2)
    assert quality.num_constraints == 0
    assert quality.inv_tcpl == math.inf


def test_rule_quality_tie_breakers() -> None:
    fewer = RuleQuality(Fraction(1), 1, Fraction(1, 2))
    more = RuleQuality(Fraction(1), 2, Fraction(1, 4))
    longer = RuleQuality(Fraction(1), 2, Fraction(1, 5))

    assert more > fewer
    assert more > longer


def test_candidate_constraints_only_keep_satisfied(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())

    assert SAME_DEPT in candidate_constraints(ctx, "u1", "doc1")
    assert SAME_DEPT not in candidate_constraints(ctx, "u1", "doc2")


def test_candidate_constraints_respect_total_path_length(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams(mtpl=1))

    assert candidate_constraints(ctx, "u1", "doc1") == ()


def test_compute_condition_without_id_when_attributes_suffice(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())

    condition = compute_condition(ctx, ["u1", "u2"], "User", 3)

    assert condition == {_in(("dept", "id"), "d1", "d2")}
    assert ctx.evaluator.condition_meaning("User", condition) == {"u1", "u2"}


def test_compute_condition_falls_back_to_id(staff_acl) -> None:
    ctx = MiningContext(staff_acl, GreedyParams())

    condition = compute_condition(ctx, ["doc1"], "Doctor", 3)

    assert _in(("id",), "doc1") in condition
    assert ctx.evaluator.condition_meaning("Doctor", condition) == {"doc1"}


def test_generalize_without_candidates_returns_rule(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())
    rule = make_rule("User", "Doc", {"read"}, subject_condition={_in(("id",), "u1")})

    assert generalize_rule(ctx, rule, (), ctx.sp0.copy()) == rule


def test_generalize_replaces_conjuncts_by_constraint(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())
    rule = make_rule(
        "User",
        "Doc",
        {"read"},
        subject_condition={_in(("dept", "id"), "d1")},
        resource_condition={_in(("dept", "id"), "d1")},
    )

    generalized = generalize_rule(ctx, rule, (SAME_DEPT,), ctx.sp0.copy())

    assert generalized == make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT})
    evaluator = ctx.evaluator
    assert evaluator.rule_meaning(rule) <= evaluator.rule_meaning(generalized)


def test_condition_lub_unions_in_values_and_intersects_contains() -> None:
    shared = AtomicCondition(("tags",), ConditionOperator.contains, "x")
    only_first = AtomicCondition(("tags",), ConditionOperator.contains, "y")

    merged = condition_lub(
        frozenset({_in(("p",), "a"), shared, only_first}),
        frozenset({_in(("p",), "b"), shared, _in(("q",), "c")}),
    )

    assert merged == {_in(("p",), "a", "b"), shared}


def test_merge_pair_meaning_is_superset(dept_model) -> None:
    first = make_rule("User", "Doc", {"read"}, subject_condition={_in(("id",), "u1")})
    second = make_rule("User", "Doc", {"write"}, subject_condition={_in(("id",), "u2")})
    evaluator = PolicyEvaluator(dept_model)

    merged = merge_pair(first, second)

    assert merged.subject_condition == {_in(("id",), "u1", "u2")}
    assert evaluator.rule_meaning(merged) >= (
        evaluator.rule_meaning(first) | evaluator.rule_meaning(second)
    )
    assert merge_pair(first, first) == first


def test_inheritance_merge_picks_most_general_valid_class(staff_acl) -> None:
    ctx = MiningContext(staff_acl, GreedyParams())
    rules = [make_rule("Doctor", "Room", {"enter"}), make_rule("Nurse", "Room", {"enter"})]

    assert merge_rules_inheritance(ctx, rules)
    assert rules == [make_rule("Person", "Room", {"enter"})]


def test_inheritance_merge_skips_invalid_superclass(staff_acl_with_patients) -> None:
    ctx = MiningContext(staff_acl_with_patients, GreedyParams())
    rules = [make_rule("Doctor", "Room", {"enter"}), make_rule("Nurse", "Room", {"enter"})]

    assert merge_rules_inheritance(ctx, rules)
    assert rules == [make_rule("Clinician", "Room", {"enter"})]


def test_simplify_removes_conjunct_implied_by_constraint(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())
    rules = [
        make_rule(
            "User",
            "Doc",
            {"read"},
            subject_condition={_in(("dept", "id"), "d1", "d2")},
            constraint={SAME_DEPT},
        )
    ]
    before = ctx.evaluator.policy_meaning(rules)

    assert simplify_rules(ctx, rules)
    assert rules == [make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT})]
    assert ctx.evaluator.policy_meaning(rules) == before


def test_simplify_removes_overlapping_actions(staff_acl) -> None:
    ctx = MiningContext(staff_acl, GreedyParams())
    general = make_rule("Clinician", "Room", {"enter"})
    rules = [general, make_rule("Doctor", "Room", {"enter"})]

    assert simplify_rules(ctx, rules)
    assert rules == [general]


def test_candidate_constraints_are_computed_once_per_pair(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())

    first = candidate_constraints(ctx, "u1", "doc1")

    assert ("u1", "doc1") in ctx.pair_constraints
    assert candidate_constraints(ctx, "u1", "doc1") is first


def test_compute_condition_is_reused_for_the_same_objects(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())

    first = compute_condition(ctx, ["u1", "u2"], "User", 3)

    assert compute_condition(ctx, ["u2", "u1"], "User", 3) is first


def test_valid_extensions_are_reused_by_generalization(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())
    rule = make_rule(
        "User",
        "Doc",
        {"read"},
        subject_condition={_in(("dept", "id"), "d1")},
        resource_condition={_in(("dept", "id"), "d1")},
    )
    extensions = valid_extensions(ctx, rule, (SAME_DEPT,))

    assert valid_extensions(ctx, rule, (SAME_DEPT,)) is extensions
    assert [constraint for constraint, _ in extensions] == [SAME_DEPT]
    assert generalize_rule(ctx, rule, (SAME_DEPT,), ctx.sp0.copy()) == extensions[0][1]


def test_emr_seed_candidate_constraints() -> None:
    generator = get_generator("emr")
    cm = generator.build_class_model()
    om = ObjectModel(
        cm,
        [
            ObjectRecord("Hospital", "hosp0"),
            ObjectRecord(
                "Physician",
                "phy0",
                {
                    "isTrainee": False,
                    "affiliation": "hosp0",
                    "supervisor": None,
                    "consultations": frozenset({"consult0"}),
                },
            ),
            ObjectRecord(
                "Patient",
                "pat0",
                {
                    "registrations": frozenset({"hosp0"}),
                    "consents": frozenset({"phy0"}),
                    "consultations": frozenset({"consult0"}),
                },
            ),
            ObjectRecord("Consultation", "consult0", {"physician": "phy0", "patient": "pat0"}),
        ],
    )
    acl = generator.extract_acl(om, generator.original_rules(cm))
    ctx = MiningContext(acl, default_greedy_params("emr"))
    own = AtomicConstraint((), ConstraintOperator.equal, ("physician",))
    registered = AtomicConstraint(
        ("affiliation",), ConstraintOperator.in_, ("patient", "registrations")
    )
    consented = AtomicConstraint(
        ("affiliation",), ConstraintOperator.in_, ("patient", "consents", "affiliation")
    )

    cc = candidate_constraints(ctx, "phy0", "consult0")

    assert SubjectPermission("phy0", "consult0", "createMedicalRecord") in acl.sp0
    assert {own, registered, consented} <= set(cc)


def test_eliminate_conjuncts_greedy_path_removes_all_redundant(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams(mcse=0))
    rule = make_rule(
        "User",
        "Doc",
        {"read"},
        subject_condition={_in(("dept", "id"), "d1", "d2"), _in(("id",), "u1", "u2")},
        constraint={SAME_DEPT},
    )

    assert eliminate_conjuncts(ctx, rule) == make_rule(
        "User", "Doc", {"read"}, constraint={SAME_DEPT}
    )


def test_propagate_constants_drops_constraint_between_equal_constants(dept_acl) -> None:
    ctx = MiningContext(dept_acl, GreedyParams())
    d1 = _in(("dept", "id"), "d1")
    both_sides = make_rule(
        "User",
        "Doc",
        {"read"},
        subject_condition={d1},
        resource_condition={d1},
        constraint={SAME_DEPT},
    )
    one_side = make_rule("User", "Doc", {"read"}, subject_condition={d1}, constraint={SAME_DEPT})

    assert propagate_constants(ctx, both_sides) == make_rule(
        "User", "Doc", {"read"}, subject_condition={d1}, resource_condition={d1}
    )
    # agregar la condicion del recurso aumentaria el WSC
    assert propagate_constants(ctx, one_side) == one_side


def _team_acl() -> AclPolicy:
    cm = ClassModel(
        [
            ClassDeclaration("Team", None, (FieldDeclaration("members", "Member", MANY),)),
            ClassDeclaration("Member", None, (FieldDeclaration("team", "Team", ONE),)),
            ClassDeclaration("Doc", None, (FieldDeclaration("team", "Team", ONE),)),
        ]
    )
    om = ObjectModel(
        cm,
        [
            ObjectRecord("Team", "t1", {"members": frozenset({"m1", "m2"})}),
            ObjectRecord("Team", "t2", {"members": frozenset({"m3"})}),
            ObjectRecord("Member", "m1", {"team": "t1"}),
            ObjectRecord("Member", "m2", {"team": "t1"}),
            ObjectRecord("Member", "m3", {"team": "t2"}),
            ObjectRecord("Doc", "doc1", {"team": "t1"}),
            ObjectRecord("Doc", "doc2", {"team": "t2"}),
        ],
    )
    sp0 = frozenset(
        SubjectPermission(s, r, "read")
        for s, r in (("m1", "doc1"), ("m2", "doc1"), ("m3", "doc2"))
    )
    return AclPolicy(cm, om, frozenset({"read"}), sp0)


def test_remove_cycles_shortens_path_that_returns_to_its_class() -> None:
    ctx = MiningContext(_team_acl(), GreedyParams())
    looping = make_rule(
        "Member",
        "Doc",
        {"read"},
        constraint={
            AtomicConstraint(("team", "members", "team"), ConstraintOperator.contains, ("team",))
        },
    )
    rules = [looping]
    direct = make_rule(
        "Member",
        "Doc",
        {"read"},
        constraint={AtomicConstraint(("team",), ConstraintOperator.equal, ("team",))},
    )

    assert remove_cycles(ctx, rules, looping) == direct
    assert rules == [direct]
    assert ctx.evaluator.rule_meaning(direct) == ctx.acl.sp0


def test_inheritance_merge_lifts_resources_to_grandparent() -> None:
    cm = ClassModel(
        [
            ClassDeclaration("User"),
            ClassDeclaration("Doc"),
            ClassDeclaration("Article", "Doc"),
            ClassDeclaration("Report", "Article"),
            ClassDeclaration("Memo", "Article"),
        ]
    )
    om = ObjectModel(
        cm,
        [
            ObjectRecord("User", "u1"),
            ObjectRecord("Report", "r1"),
            ObjectRecord("Memo", "m1"),
        ],
    )
    sp0 = frozenset({SubjectPermission("u1", "r1", "read"), SubjectPermission("u1", "m1", "read")})
    ctx = MiningContext(AclPolicy(cm, om, frozenset({"read"}), sp0), GreedyParams())
    rules = [make_rule("User", "Report", {"read"}), make_rule("User", "Memo", {"read"})]

    assert merge_rules_inheritance(ctx, rules)
    assert rules == [make_rule("User", "Doc", {"read"})]
