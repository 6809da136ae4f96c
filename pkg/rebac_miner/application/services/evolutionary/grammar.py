"""Gramatica de reglas especializada a un modelo de clases, de objetos y SP0.

El lenguaje contiene solo reglas con constantes del modelo de objetos, rutas type-correct
dentro de los limites de longitud y acciones presentes en SP0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.domain.entities import ID_FIELD, Atom, AtomicConstraint, Path
from rebac_miner.domain.enums import ConditionOperator, Multiplicity

logger = logging.getLogger(__name__)

SUBJECT, RESOURCE = "subject", "resource"


def atom_order(value: Atom) -> tuple[bool, str]:
    return (isinstance(value, bool), str(value))


@dataclass(frozen=True, slots=True)
class ConditionSlot:
    """Ruta de condicion precalculada con sus constantes posibles."""

    path: Path
    op: ConditionOperator
    values: tuple[Atom, ...]


class RuleGrammar:
    def __init__(self, ctx: MiningContext) -> None:
        self.ctx = ctx
        cm = ctx.class_model
        om = ctx.object_model
        sp0 = ctx.acl.sp0
        self.actions: tuple[str, ...] = tuple(sorted({t.action for t in sp0}))
        self.subject_types = self._with_ancestors({om.type_of(t.subject) for t in sp0})
        self.resource_types = self._with_ancestors({om.type_of(t.resource) for t in sp0})
        self.type_pairs: frozenset[tuple[str, str]] = frozenset(
            (t1, t2) for t1 in self.subject_types for t2 in self.resource_types
        )
        self._conditions: dict[tuple[str, str], tuple[ConditionSlot, ...]] = {}
        self._slot_index: dict[tuple[str, str], dict[tuple[Path, ConditionOperator], int]] = {}
        self._constraint_index: dict[tuple[str, str], dict[AtomicConstraint, int]] = {}
        self.class_model = cm
        logger.debug(
            "Gramatica: %s tipos de sujeto, %s de recurso, %s acciones",
            len(self.subject_types),
            len(self.resource_types),
            len(self.actions),
        )

    def _with_ancestors(self, classes: set[str]) -> tuple[str, ...]:
        found = set(classes)
        for name in classes:
            found.update(self.ctx.class_model.ancestors(name))
        return tuple(sorted(found))

    def _max_length(self, role: str) -> int:
        params = self.ctx.params
        return params.mspl if role == SUBJECT else params.mrpl

    def condition_slots(self, role: str, class_name: str) -> tuple[ConditionSlot, ...]:
        key = (role, class_name)
        slots = self._conditions.get(key)
        if slots is not None:
            return slots
        cm = self.ctx.class_model
        evaluator = self.ctx.evaluator
        instances = sorted(self.ctx.object_model.instances_of(class_name))
        built: list[ConditionSlot] = []
        paths = ((ID_FIELD,), *self.ctx.condition_paths(class_name, self._max_length(role)))
        for path in paths:
            many = cm.resolve_path(class_name, path).multiplicity is Multiplicity.many
            observed: set[Atom] = set()
            for obj in instances:
                value = evaluator.navigate(obj, path)
                if value is None:
                    continue
                if isinstance(value, frozenset):
                    observed.update(value)
                else:
                    observed.add(value)
            if observed:
                op = ConditionOperator.contains if many else ConditionOperator.in_
                built.append(ConditionSlot(path, op, tuple(sorted(observed, key=atom_order))))
        slots = tuple(built)
        self._conditions[key] = slots
        self._slot_index[key] = {(s.path, s.op): i for i, s in enumerate(slots)}
        return slots

    def slot_position(
        self, role: str, class_name: str, path: Path, op: ConditionOperator
    ) -> int | None:
        self.condition_slots(role, class_name)
        return self._slot_index[(role, class_name)].get((path, op))

    def constraint_slots(
        self, subject_type: str, resource_type: str
    ) -> tuple[AtomicConstraint, ...]:
        return self.ctx.type_constraints(subject_type, resource_type)

    def constraint_position(
        self, subject_type: str, resource_type: str, constraint: AtomicConstraint
    ) -> int | None:
        key = (subject_type, resource_type)
        index = self._constraint_index.get(key)
        if index is None:
            index = {c: i for i, c in enumerate(self.constraint_slots(subject_type, resource_type))}
            self._constraint_index[key] = index
        return index.get(constraint)
