"""Semantica exacta de ORAL: navegacion, satisfaccion, significado y validez."""
from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Hashable, Iterable, Iterator
from typing import Generic, TypeVar

from rebac_miner.core.exceptions import ModelIntegrityError
from rebac_miner.domain.entities import (
    ID_FIELD,
    AclPolicy,
    Atom,
    AtomicCondition,
    AtomicConstraint,
    ClassModel,
    ObjectModel,
    Path,
    Rule,
    SubjectPermission,
    Value,
)
from rebac_miner.domain.enums import ConditionOperator, ConstraintOperator, Multiplicity
from rebac_miner.domain.rendering import format_constraint

logger = logging.getLogger(__name__)

Pair = tuple[str, str]
K = TypeVar("K", bound=Hashable)
V = TypeVar("V")


def _field_value(om: ObjectModel, object_id: str, name: str) -> Value:
    if name == ID_FIELD:
        return object_id
    obj = om.get(object_id)
    try:
        return obj.field_values[name]
    except KeyError as exc:
        raise ModelIntegrityError(f"{object_id} no tiene valor para {name}") from exc


def navigate(om: ObjectModel, object_id: str, path: Path) -> Value:
    """Navega `path` desde el objeto; aplana conjuntos al estilo collect de OCL."""
    info = om.class_model.resolve_path(om.type_of(object_id), path)
    current: Value = object_id
    collecting = False
    for name in path:
        if collecting:
            gathered: set[Atom] = set()
            for ref in current:  # type: ignore[union-attr]
                value = _field_value(om, ref, name)  # type: ignore[arg-type]
                if value is None:
                    continue
                if isinstance(value, frozenset):
                    gathered.update(value)
                else:
                    gathered.add(value)
            current = frozenset(gathered)
            continue
        if current is None:
            break
        current = _field_value(om, current, name)  # type: ignore[arg-type]
        if isinstance(current, frozenset):
            collecting = True
    if info.multiplicity is Multiplicity.many and not isinstance(current, frozenset):
        return frozenset() if current is None else frozenset({current})
    return current


def multiplicity_of_path(cm: ClassModel, anchor: str, path: Path) -> Multiplicity:
    return cm.resolve_path(anchor, path).multiplicity


def op_from_mul(first: Multiplicity, second: Multiplicity) -> ConstraintOperator:
    if first is Multiplicity.many and second is Multiplicity.many:
        return ConstraintOperator.supseteq
    if first is Multiplicity.many:
        return ConstraintOperator.contains
    if second is Multiplicity.many:
        return ConstraintOperator.in_
    return ConstraintOperator.equal


def satisfies_atomic_condition(value: Value, condition: AtomicCondition) -> bool:
    if value is None:
        return False
    if condition.op is ConditionOperator.in_:
        return not isinstance(value, frozenset) and value in condition.values
    return isinstance(value, frozenset) and condition.value in value


def satisfies_atomic_constraint(first: Value, op: ConstraintOperator, second: Value) -> bool:
    """Un lado ausente nunca satisface la restriccion."""
    if first is None or second is None:
        return False
    if op is ConstraintOperator.equal:
        return first == second
    if op is ConstraintOperator.in_:
        return not isinstance(first, frozenset) and isinstance(second, frozenset) and (
            first in second
        )
    if op is ConstraintOperator.contains:
        return isinstance(first, frozenset) and not isinstance(second, frozenset) and (
            second in first
        )
    return isinstance(first, frozenset) and isinstance(second, frozenset) and first >= second


def satisfies_condition(
    om: ObjectModel, object_id: str, condition: Iterable[AtomicCondition]
) -> bool:
    return all(
        satisfies_atomic_condition(navigate(om, object_id, c.path), c) for c in condition
    )


def satisfies_constraint(
    om: ObjectModel, subject: str, resource: str, constraint: Iterable[AtomicConstraint]
) -> bool:
    return all(
        satisfies_atomic_constraint(
            navigate(om, subject, c.subject_path), c.op, navigate(om, resource, c.resource_path)
        )
        for c in constraint
    )


class PermissionIndex:
    """Relacion sujeto-permiso indexada por par (sujeto, recurso)."""

    def __init__(self, tuples: Iterable[SubjectPermission] = ()) -> None:
        self._by_pair: dict[Pair, set[str]] = defaultdict(set)
        self._size = 0
        for tup in tuples:
            self.add(tup)

    def add(self, tup: SubjectPermission) -> None:
        actions = self._by_pair[(tup.subject, tup.resource)]
        if tup.action not in actions:
            actions.add(tup.action)
            self._size += 1

    def discard(self, tup: SubjectPermission) -> None:
        key = (tup.subject, tup.resource)
        actions = self._by_pair.get(key)
        if actions and tup.action in actions:
            actions.discard(tup.action)
            self._size -= 1
            if not actions:
                del self._by_pair[key]

    def actions_for(self, subject: str, resource: str) -> set[str]:
        return self._by_pair.get((subject, resource), set())

    def __contains__(self, tup: object) -> bool:
        if not isinstance(tup, tuple) or len(tup) != 3:
            return False
        return tup[2] in self._by_pair.get((tup[0], tup[1]), ())

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[SubjectPermission]:
        for (subject, resource), actions in self._by_pair.items():
            for action in actions:
                yield SubjectPermission(subject, resource, action)

    def copy(self) -> PermissionIndex:
        return PermissionIndex(self)


class BoundedCache(Generic[K, V]):
    """Diccionario que se vacia por completo al alcanzar `limit` entradas."""

    def __init__(self, name: str, limit: int) -> None:
        self.name = name
        self.limit = max(1, limit)
        self._data: dict[K, V] = {}

    def get(self, key: K) -> V | None:
        return self._data.get(key)

    def put(self, key: K, value: V) -> V:
        if len(self._data) >= self.limit:
            logger.debug("Cache %s lleno (%s entradas); se vacia", self.name, len(self._data))
            self._data.clear()
        self._data[key] = value
        return value

    def __contains__(self, key: object) -> bool:
        return key in self._data

    def __len__(self) -> int:
        return len(self._data)


class PolicyEvaluator:
    """Evaluador con caches de navegacion, condiciones atomicas e indices de restricciones.

    Los caches son por instancia y cada uno guarda a lo sumo `cache_size` entradas; cada
    proceso o hilo de trabajo usa su propio evaluador.
    """

    def __init__(self, object_model: ObjectModel, *, cache_size: int = 200_000) -> None:
        self.object_model = object_model
        self.class_model = object_model.class_model
        self._nav: BoundedCache[tuple[str, Path], Value] = BoundedCache("navegacion", cache_size)
        self._atomic: BoundedCache[tuple[str, AtomicCondition], frozenset[str]] = BoundedCache(
            "condiciones", cache_size
        )
        self._indices: BoundedCache[
            tuple[str, AtomicConstraint], dict[object, frozenset[str]]
        ] = BoundedCache("indices", cache_size)
        self._pairs: BoundedCache[Rule, frozenset[Pair]] = BoundedCache("significados", cache_size)

    def navigate(self, object_id: str, path: Path) -> Value:
        key = (object_id, path)
        if key in self._nav:
            return self._nav.get(key)
        return self._nav.put(key, navigate(self.object_model, object_id, path))

    def satisfies_condition(self, object_id: str, condition: Iterable[AtomicCondition]) -> bool:
        return all(
            satisfies_atomic_condition(self.navigate(object_id, c.path), c) for c in condition
        )

    def satisfies_constraint(
        self, subject: str, resource: str, constraint: Iterable[AtomicConstraint]
    ) -> bool:
        return all(
            satisfies_atomic_constraint(
                self.navigate(subject, c.subject_path),
                c.op,
                self.navigate(resource, c.resource_path),
            )
            for c in constraint
        )

    def atomic_meaning(self, class_name: str, condition: AtomicCondition) -> frozenset[str]:
        key = (class_name, condition)
        cached = self._atomic.get(key)
        if cached is None:
            cached = frozenset(
                o
                for o in self.object_model.instances_of(class_name)
                if satisfies_atomic_condition(self.navigate(o, condition.path), condition)
            )
            self._atomic.put(key, cached)
        return cached

    def condition_meaning(
        self, class_name: str, condition: Iterable[AtomicCondition]
    ) -> frozenset[str]:
        """Instancias de `class_name` (subclases incluidas) que satisfacen la condicion."""
        result = self.object_model.instances_of(class_name)
        for atomic in sorted(condition, key=lambda c: len(self.atomic_meaning(class_name, c))):
            result = result & self.atomic_meaning(class_name, atomic)
            if not result:
                break
        return result

    def _constraint_index(
        self, resource_type: str, constraint: AtomicConstraint
    ) -> dict[object, frozenset[str]]:
        key = (resource_type, constraint)
        cached = self._indices.get(key)
        if cached is not None:
            return cached
        buckets: dict[object, set[str]] = defaultdict(set)
        for resource in self.object_model.instances_of(resource_type):
            value = self.navigate(resource, constraint.resource_path)
            if value is None:
                continue
            if constraint.op is ConstraintOperator.in_:
                if isinstance(value, frozenset):
                    for item in value:
                        buckets[item].add(resource)
            elif constraint.op is ConstraintOperator.contains:
                if not isinstance(value, frozenset):
                    buckets[value].add(resource)
            else:
                buckets[value].add(resource)
        cached = {k: frozenset(v) for k, v in buckets.items()}
        self._indices.put(key, cached)
        return cached

    def _candidates(
        self, subject: str, resource_type: str, constraint: AtomicConstraint
    ) -> frozenset[str]:
        index = self._constraint_index(resource_type, constraint)
        value = self.navigate(subject, constraint.subject_path)
        if value is None:
            return frozenset()
        if constraint.op is ConstraintOperator.contains:
            if not isinstance(value, frozenset):
                return frozenset()
            found: set[str] = set()
            for item in value:
                found.update(index.get(item, ()))
            return frozenset(found)
        if constraint.op is ConstraintOperator.in_ and isinstance(value, frozenset):
            return frozenset()
        return index.get(value, frozenset())

    def pair_meaning(self, rule: Rule) -> frozenset[Pair]:
        """Pares (sujeto, recurso) que satisfacen tipos, condiciones y restriccion."""
        cached = self._pairs.get(rule)
        if cached is not None:
            return cached
        subjects = self.condition_meaning(rule.subject_type, rule.subject_condition)
        resources = self.condition_meaning(rule.resource_type, rule.resource_condition)
        pairs: set[Pair] = set()
        if subjects and resources:
            ordered = sorted(rule.constraint, key=format_constraint)
            indexed = next((c for c in ordered if c.op is not ConstraintOperator.supseteq), None)
            rest = [c for c in ordered if c is not indexed]
            for subject in subjects:
                if indexed is None:
                    candidates = resources
                else:
                    candidates = self._candidates(subject, rule.resource_type, indexed) & resources
                for resource in candidates:
                    if self.satisfies_constraint(subject, resource, rest):
                        pairs.add((subject, resource))
        return self._pairs.put(rule, frozenset(pairs))

    def rule_meaning(self, rule: Rule) -> frozenset[SubjectPermission]:
        return frozenset(
            SubjectPermission(s, r, a) for s, r in self.pair_meaning(rule) for a in rule.actions
        )

    def meaning_size(self, rule: Rule) -> int:
        return len(self.pair_meaning(rule)) * len(rule.actions)

    def policy_meaning(self, rules: Iterable[Rule]) -> frozenset[SubjectPermission]:
        result: set[SubjectPermission] = set()
        for rule in rules:
            result.update(self.rule_meaning(rule))
        return frozenset(result)

    def is_valid(self, rule: Rule, sp0: PermissionIndex) -> bool:
        """True si el significado de la regla esta contenido en SP0."""
        actions = rule.actions
        return all(actions <= sp0.actions_for(s, r) for s, r in self.pair_meaning(rule))

    def covered_count(self, rule: Rule, index: PermissionIndex) -> int:
        """|significado(regla) ∩ index| sin materializar las tuplas."""
        actions = rule.actions
        return sum(len(actions & index.actions_for(s, r)) for s, r in self.pair_meaning(rule))

    def covers(self, rule: Rule, tup: SubjectPermission) -> bool:
        return tup.action in rule.actions and (tup.subject, tup.resource) in self.pair_meaning(rule)

    def meaning_subset(self, first: Rule, second: Rule) -> bool:
        """⟦first⟧ ⊆ ⟦second⟧, comparado extensionalmente."""
        if not first.actions <= second.actions:
            return not self.pair_meaning(first)
        return self.pair_meaning(first) <= self.pair_meaning(second)


def rule_meaning(om: ObjectModel, rule: Rule) -> frozenset[SubjectPermission]:
    return PolicyEvaluator(om).rule_meaning(rule)


def policy_meaning(om: ObjectModel, rules: Iterable[Rule]) -> frozenset[SubjectPermission]:
    return PolicyEvaluator(om).policy_meaning(rules)


def is_valid(om: ObjectModel, rule: Rule, sp0: Iterable[SubjectPermission]) -> bool:
    return PolicyEvaluator(om).is_valid(rule, PermissionIndex(sp0))


def uncovered(acl: AclPolicy, rules: Iterable[Rule]) -> frozenset[SubjectPermission]:
    """Tuplas de SP0 que la politica no concede."""
    return acl.sp0 - PolicyEvaluator(acl.object_model).policy_meaning(rules)


def is_consistent(acl: AclPolicy, rules: Iterable[Rule]) -> bool:
    """⟦rules⟧ = SP0: objetivo de la mineria."""
    return PolicyEvaluator(acl.object_model).policy_meaning(rules) == acl.sp0
