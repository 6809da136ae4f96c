"""Pruebas de navegacion, satisfaccion y significado de reglas."""
from __future__ import annotations

import numpy as np
import pytest

from rebac_miner.core.exceptions import PathTypeError
from rebac_miner.domain.entities import (
    AtomicCondition,
    AtomicConstraint,
    ClassDeclaration,
    ClassModel,
    FieldDeclaration,
    ObjectModel,
    ObjectRecord,
    Rule,
    SubjectPermission,
    make_rule,
)
from rebac_miner.domain.enums import (
    BOOLEAN_TYPE,
    ConditionOperator,
    ConstraintOperator,
    Multiplicity,
)
from rebac_miner.domain.semantics import (
    BoundedCache,
    PolicyEvaluator,
    is_consistent,
    is_valid,
    multiplicity_of_path,
    navigate,
    op_from_mul,
    policy_meaning,
    rule_meaning,
    satisfies_atomic_constraint,
    satisfies_condition,
    satisfies_constraint,
    uncovered,
)

SAME_DEPT = AtomicConstraint(("dept",), ConstraintOperator.equal, ("dept",))
ONE, OPTIONAL, MANY = Multiplicity.one, Multiplicity.optional, Multiplicity.many

RANDOM_CLASS_MODEL = ClassModel(
    [
        ClassDeclaration("Unit"),
        ClassDeclaration("Tag"),
        ClassDeclaration(
            "Person",
            None,
            (
                FieldDeclaration("unit", "Unit", ONE),
                FieldDeclaration("boss", "Person", OPTIONAL),
                FieldDeclaration("tags", "Tag", MANY),
                FieldDeclaration("active", BOOLEAN_TYPE, ONE),
            ),
        ),
        ClassDeclaration("Manager", "Person"),
        ClassDeclaration(
            "Item",
            None,
            (
                FieldDeclaration("owner", "Person", ONE),
                FieldDeclaration("unit", "Unit", OPTIONAL),
                FieldDeclaration("tags", "Tag", MANY),
                FieldDeclaration("label", "Tag", OPTIONAL),
                FieldDeclaration("watchers", "Person", MANY),
            ),
        ),
    ]
)

PERSON_CONDITIONS = (
    AtomicCondition(("unit", "id"), ConditionOperator.in_, frozenset({"unit0"})),
    AtomicCondition(("unit", "id"), ConditionOperator.in_, frozenset({"unit1", "unit2"})),
    AtomicCondition(("tags", "id"), ConditionOperator.contains, "tag0"),
    AtomicCondition(("active",), ConditionOperator.in_, frozenset({True})),
    AtomicCondition(("active",), ConditionOperator.in_, frozenset({False})),
    AtomicCondition(("boss", "active"), ConditionOperator.in_, frozenset({True})),
    AtomicCondition(("boss", "id"), ConditionOperator.in_, frozenset({"person0", "person1"})),
)
ITEM_CONDITIONS = (
    AtomicCondition(("unit", "id"), ConditionOperator.in_, frozenset({"unit0"})),
    AtomicCondition(("tags", "id"), ConditionOperator.contains, "tag1"),
    AtomicCondition(("label", "id"), ConditionOperator.in_, frozenset({"tag0", "tag2"})),
    AtomicCondition(("owner", "active"), ConditionOperator.in_, frozenset({True})),
    AtomicCondition(("owner", "unit", "id"), ConditionOperator.in_, frozenset({"unit1"})),
    AtomicCondition(("watchers", "id"), ConditionOperator.contains, "person2"),
)
# pares de rutas (sujeto, recurso); el operador se deduce de las multiplicidades
CONSTRAINT_PATHS = {
    "Item": (
        ((), ("owner",)),
        (("unit",), ("unit",)),
        (("unit",), ("owner", "unit")),
        (("boss",), ("owner",)),
        ((), ("watchers",)),
        (("unit",), ("watchers", "unit")),
        (("tags",), ("label",)),
        (("tags",), ("tags",)),
        (("tags",), ("owner", "tags")),
    ),
    "Person": (
        ((), ("boss",)),
        (("boss",), ()),
        (("unit",), ("unit",)),
        (("tags",), ("tags",)),
        (("boss", "unit"), ("unit",)),
    ),
}


def _pick(rng: np.random.Generator, pool: tuple, most: int) -> list:
    k = int(rng.integers(0, min(most, len(pool)) + 1))
    return [pool[i] for i in rng.choice(len(pool), size=k, replace=False)]


def _random_object_model(seed: int) -> ObjectModel:
    """A lo sumo 30 objetos de 5 clases, con opcionales ausentes y conjuntos vacios."""
    rng = np.random.default_rng(seed)
    units = [f"unit{i}" for i in range(int(rng.integers(1, 4)))]
    tags = [f"tag{i}" for i in range(int(rng.integers(1, 5)))]
    people = [f"person{i}" for i in range(int(rng.integers(2, 10)))]
    records = [ObjectRecord("Unit", u) for u in units] + [ObjectRecord("Tag", t) for t in tags]

    def subset(pool: list[str]) -> frozenset[str]:
        return frozenset(p for p in pool if rng.random() < 0.4)

    def maybe(pool: list[str]) -> str | None:
        return str(rng.choice(pool)) if rng.random() < 0.7 else None

    for person in people:
        records.append(
            ObjectRecord(
                "Manager" if rng.random() < 0.3 else "Person",
                person,
                {
                    "unit": str(rng.choice(units)),
                    "boss": maybe(people),
                    "tags": subset(tags),
                    "active": bool(rng.random() < 0.5),
                },
            )
        )
    for i in range(int(rng.integers(1, 10))):
        records.append(
            ObjectRecord(
                "Item",
                f"item{i}",
                {
                    "owner": str(rng.choice(people)),
                    "unit": maybe(units),
                    "tags": subset(tags),
                    "label": maybe(tags),
                    "watchers": subset(people),
                },
            )
        )
    return ObjectModel(RANDOM_CLASS_MODEL, records)


def _random_rule(rng: np.random.Generator) -> Rule:
    cm = RANDOM_CLASS_MODEL
    subject_type = str(rng.choice(["Person", "Manager"]))
    resource_type = str(rng.choice(["Item", "Person", "Manager"]))
    resource_pool = ITEM_CONDITIONS if resource_type == "Item" else PERSON_CONDITIONS
    paths = CONSTRAINT_PATHS["Item" if resource_type == "Item" else "Person"]
    constraint = {
        AtomicConstraint(
            first,
            op_from_mul(
                multiplicity_of_path(cm, subject_type, first),
                multiplicity_of_path(cm, resource_type, second),
            ),
            second,
        )
        for first, second in _pick(rng, paths, 3)
    }
    return make_rule(
        subject_type,
        resource_type,
        _pick(rng, ("read", "write", "share"), 3) or ["read"],
        subject_condition=set(_pick(rng, PERSON_CONDITIONS, 2)),
        resource_condition=set(_pick(rng, resource_pool, 2)),
        constraint=constraint,
    )


def _brute_force(om: ObjectModel, rule: Rule) -> frozenset[SubjectPermission]:
    return frozenset(
        SubjectPermission(s, r, a)
        for s in om.instances_of(rule.subject_type)
        if satisfies_condition(om, s, rule.subject_condition)
        for r in om.instances_of(rule.resource_type)
        if satisfies_condition(om, r, rule.resource_condition)
        and satisfies_constraint(om, s, r, rule.constraint)
        for a in rule.actions
    )


def test_navigate_empty_path_is_identity(dept_model) -> None:
    assert navigate(dept_model, "u1", ()) == "u1"


def test_navigate_reference_then_id(dept_model) -> None:
    assert navigate(dept_model, "u1", ("dept", "id")) == "d1"


def test_navigate_flattens_many_steps(clinic_model) -> None:
    assert navigate(clinic_model, "doc", ("teams", "patients")) == frozenset({"p1", "p2"})


def test_navigate_absent_optional_value(clinic_model) -> None:
    assert navigate(clinic_model, "junior", ("mentor", "id")) == "doc"
    assert navigate(clinic_model, "doc", ("mentor", "id")) is None
    # una ruta many que atraviesa un valor ausente da el conjunto vacio
    assert navigate(clinic_model, "doc", ("mentor", "teams")) == frozenset()


def test_navigate_rejects_ill_typed_path(dept_model) -> None:
    with pytest.raises(PathTypeError):
        navigate(dept_model, "u1", ("manager",))


def test_multiplicity_of_path(clinic_model) -> None:
    cm = clinic_model.class_model
    assert multiplicity_of_path(cm, "Record", ("team", "id")) is Multiplicity.one
    assert multiplicity_of_path(cm, "Doctor", ("teams", "id")) is Multiplicity.many
    assert multiplicity_of_path(cm, "Doctor", ("mentor", "isTrainee")) is Multiplicity.optional


@pytest.mark.parametrize(
    ("first", "second", "expected"),
    [
        (Multiplicity.many, Multiplicity.many, ConstraintOperator.supseteq),
        (Multiplicity.many, Multiplicity.one, ConstraintOperator.contains),
        (Multiplicity.one, Multiplicity.many, ConstraintOperator.in_),
        (Multiplicity.optional, Multiplicity.one, ConstraintOperator.equal),
    ],
)
def test_op_from_mul(first, second, expected) -> None:
    assert op_from_mul(first, second) is expected


def test_satisfies_condition(clinic_model) -> None:
    not_trainee = AtomicCondition(("isTrainee",), ConditionOperator.in_, frozenset({False}))
    knows_b = AtomicCondition(("specialties", "id"), ConditionOperator.contains, "b")

    assert satisfies_condition(clinic_model, "doc", ()) is True
    assert satisfies_condition(clinic_model, "doc", {not_trainee}) is True
    assert satisfies_condition(clinic_model, "junior", {not_trainee}) is False
    assert satisfies_condition(clinic_model, "doc", {knows_b}) is False


def test_satisfies_constraint(clinic_model) -> None:
    treats = AtomicConstraint(("teams",), ConstraintOperator.contains, ("team",))

    assert satisfies_constraint(clinic_model, "doc", "rec", ()) is True
    assert satisfies_constraint(clinic_model, "doc", "rec", {treats}) is True
    assert satisfies_constraint(clinic_model, "junior", "rec", {treats}) is False


def test_absent_values_never_satisfy_a_constraint() -> None:
    assert satisfies_atomic_constraint(None, ConstraintOperator.equal, None) is False
    assert satisfies_atomic_constraint("x", ConstraintOperator.in_, None) is False


def test_rule_meaning_with_constraint(dept_model) -> None:
    rule = make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT})

    assert rule_meaning(dept_model, rule) == {
        SubjectPermission("u1", "doc1", "read"),
        SubjectPermission("u2", "doc2", "read"),
    }


def test_unsatisfiable_condition_has_empty_meaning(dept_model) -> None:
    nobody = AtomicCondition(("id",), ConditionOperator.in_, frozenset())
    rule = make_rule("User", "Doc", {"read"}, subject_condition={nobody})

    assert rule_meaning(dept_model, rule) == frozenset()


def test_rule_meaning_matches_brute_force(clinic_model) -> None:
    rules = [
        make_rule(
            "Doctor",
            "Record",
            {"view"},
            constraint={AtomicConstraint(("teams",), ConstraintOperator.contains, ("team",))},
        ),
        make_rule(
            "Doctor",
            "Patient",
            {"visit", "call"},
            constraint={
                AtomicConstraint(("teams", "patients"), ConstraintOperator.contains, ())
            },
        ),
        make_rule(
            "Doctor",
            "Doctor",
            {"review"},
            subject_condition={
                AtomicCondition(("isTrainee",), ConditionOperator.in_, frozenset({False}))
            },
        ),
    ]
    evaluator = PolicyEvaluator(clinic_model)
    for rule in rules:
        assert evaluator.rule_meaning(rule) == _brute_force(clinic_model, rule)


@pytest.mark.parametrize("seed", range(100))
def test_rule_meaning_matches_brute_force_on_random_models(seed) -> None:
    om = _random_object_model(seed)
    rng = np.random.default_rng(10_000 + seed)
    evaluator = PolicyEvaluator(om)

    assert len(om) <= 30
    for _ in range(5):
        rule = _random_rule(rng)
        assert evaluator.rule_meaning(rule) == _brute_force(om, rule)


@pytest.mark.parametrize("seed", range(10))
def test_tiny_caches_do_not_change_meanings(seed) -> None:
    om = _random_object_model(seed)
    rng = np.random.default_rng(seed)
    small = PolicyEvaluator(om, cache_size=1)
    rules = [_random_rule(rng) for _ in range(5)]

    for rule in rules + rules:
        assert small.rule_meaning(rule) == _brute_force(om, rule)


def test_bounded_cache_clears_when_full() -> None:
    cache: BoundedCache[str, int] = BoundedCache("prueba", 2)

    cache.put("a", 1)
    cache.put("b", 2)
    assert len(cache) == 2
    assert cache.put("c", 3) == 3
    assert len(cache) == 1
    assert "a" not in cache
    assert cache.get("c") == 3
    assert BoundedCache("vacio", 0).limit == 1


def test_evaluator_caches_stay_bounded(clinic_model) -> None:
    evaluator = PolicyEvaluator(clinic_model, cache_size=3)
    for doctor in ("doc", "junior"):
        for path in (("teams",), ("mentor",), ("specialties",), ("teams", "patients")):
            evaluator.navigate(doctor, path)

    assert len(evaluator._nav) <= 3


def test_policy_meaning_is_union(dept_model) -> None:
    first = make_rule(
        "User",
        "Doc",
        {"read"},
        subject_condition={AtomicCondition(("id",), ConditionOperator.in_, frozenset({"u1"}))},
        constraint={SAME_DEPT},
    )
    second = make_rule("User", "Doc", {"write"}, constraint={SAME_DEPT})

    assert policy_meaning(dept_model, []) == frozenset()
    assert policy_meaning(dept_model, [first, second]) == (
        rule_meaning(dept_model, first) | rule_meaning(dept_model, second)
    )


def test_is_valid(dept_acl) -> None:
    om = dept_acl.object_model
    nobody = AtomicCondition(("id",), ConditionOperator.in_, frozenset())

    assert is_valid(om, make_rule("User", "Doc", {"read"}, constraint={SAME_DEPT}), dept_acl.sp0)
    empty = make_rule("User", "Doc", {"read"}, subject_condition={nobody})
    assert is_valid(om, empty, dept_acl.sp0)
    assert not is_valid(om, make_rule("User", "Doc", {"read"}), dept_acl.sp0)


def test_superclass_rule_matches_subclass_instances(staff_acl) -> None:
    rule = make_rule("Clinician", "Room", {"enter"})

    assert is_consistent(staff_acl, [rule])
    assert uncovered(staff_acl, [rule]) == frozenset()


def test_uncovered_without_rules_is_sp0(dept_acl) -> None:
    assert uncovered(dept_acl, []) == dept_acl.sp0
    assert not is_consistent(dept_acl, [])
