"""Calculo de condiciones que caracterizan un conjunto de objetos."""
from __future__ import annotations

from collections.abc import Collection

from rebac_miner.application.services.greedy.context import MiningContext
from rebac_miner.domain.entities import ID_FIELD, Atom, AtomicCondition
from rebac_miner.domain.enums import ConditionOperator, Multiplicity


def compute_condition(
    ctx: MiningContext, objects: Collection[str], class_name: str, max_length: int
) -> frozenset[AtomicCondition]:
    """Condicion cuyo significado en `class_name` es exactamente `objects`.

    Primero se intenta sin el id propio; si el resultado sobreaproxima se agrega
    `id in {...}`.
    """
    key = (class_name, frozenset(objects), max_length)
    cached = ctx.computed_conditions.get(key)
    if cached is not None:
        return cached
    evaluator = ctx.evaluator
    cm = ctx.class_model
    conjuncts: set[AtomicCondition] = set()
    for path in ctx.condition_paths(class_name, max_length):
        values = [evaluator.navigate(o, path) for o in objects]
        if any(v is None for v in values):
            continue
        if cm.resolve_path(class_name, path).multiplicity is Multiplicity.many:
            common: frozenset[Atom] = frozenset.intersection(*values)  # type: ignore[arg-type]
            for value in common:
                conjuncts.add(AtomicCondition(path, ConditionOperator.contains, value))
        else:
            conjuncts.add(
                AtomicCondition(path, ConditionOperator.in_, frozenset(values))  # type: ignore
            )
    if evaluator.condition_meaning(class_name, conjuncts) != frozenset(objects):
        conjuncts.add(AtomicCondition((ID_FIELD,), ConditionOperator.in_, frozenset(objects)))
    return ctx.computed_conditions.put(key, frozenset(conjuncts))
