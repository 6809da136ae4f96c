"""Requisitos de buena formacion de reglas ORAL."""
from __future__ import annotations

from rebac_miner.core.exceptions import PathTypeError, WellFormednessError, WellFormednessIssue
from rebac_miner.domain.entities import (
    AtomicCondition,
    AtomicConstraint,
    ClassModel,
    PathInfo,
    Rule,
)
from rebac_miner.domain.enums import (
    BOOLEAN_TYPE,
    PRIMITIVE_TYPES,
    STRING_TYPE,
    ConditionOperator,
    ConstraintOperator,
    Multiplicity,
)
from rebac_miner.domain.rendering import format_condition, format_constraint

_SINGLE = (Multiplicity.one, Multiplicity.optional)


def _typed(
    cm: ClassModel, anchor: str, path: tuple[str, ...], where: str
) -> PathInfo | WellFormednessIssue:
    try:
        return cm.resolve_path(anchor, path)
    except PathTypeError as exc:
        return WellFormednessIssue("unknown-field", "unknown-field", f"{where}: {exc}")


def _check_condition(
    cm: ClassModel, anchor: str, role: str, condition: AtomicCondition
) -> WellFormednessIssue | None:
    where = format_condition(role, condition)
    info = _typed(cm, anchor, condition.path, where)
    if isinstance(info, WellFormednessIssue):
        return info
    if info.type not in PRIMITIVE_TYPES:
        return WellFormednessIssue(
            "3", "reference-condition", f"{where}: la ruta es de tipo referencia"
        )
    if condition.op is ConditionOperator.in_:
        if info.multiplicity not in _SINGLE:
            return WellFormednessIssue(
                "4", "in-multiplicity", f"{where}: 'in' requiere multiplicidad one u optional"
            )
        if not isinstance(condition.value, frozenset) or not condition.value:
            return WellFormednessIssue(
                "4", "in-value", f"{where}: 'in' requiere un conjunto de constantes"
            )
    else:
        if info.multiplicity is not Multiplicity.many:
            return WellFormednessIssue(
                "5", "contains-multiplicity", f"{where}: 'contains' requiere multiplicidad many"
            )
        if isinstance(condition.value, frozenset) or condition.value is None:
            return WellFormednessIssue(
                "5", "contains-value", f"{where}: 'contains' requiere un valor atomico"
            )
    expected = bool if info.type == BOOLEAN_TYPE else str
    for value in condition.values:
        if value is None or type(value) is not expected:
            return WellFormednessIssue(
                "1", "constant-type", f"{where}: constante {value!r} no es {info.type}"
            )
    return None


_CONSTRAINT_MULTIPLICITIES = {
    ConstraintOperator.equal: (
        "6", "equal-multiplicity", _SINGLE, _SINGLE, "'=' requiere rutas de un solo valor"
    ),
    ConstraintOperator.in_: (
        "7", "in-multiplicity", _SINGLE, (Multiplicity.many,),
        "'in' requiere primera ruta simple y segunda many",
    ),
    ConstraintOperator.contains: (
        "8", "contains-multiplicity", (Multiplicity.many,), _SINGLE,
        "'contains' requiere primera ruta many y segunda simple",
    ),
    ConstraintOperator.supseteq: (
        "9", "supseteq-multiplicity", (Multiplicity.many,), (Multiplicity.many,),
        "'supseteq' requiere ambas rutas many",
    ),
}


def _check_constraint(
    cm: ClassModel, rule: Rule, constraint: AtomicConstraint
) -> WellFormednessIssue | None:
    where = format_constraint(constraint)
    first = _typed(cm, rule.subject_type, constraint.subject_path, where)
    if isinstance(first, WellFormednessIssue):
        return first
    second = _typed(cm, rule.resource_type, constraint.resource_path, where)
    if isinstance(second, WellFormednessIssue):
        return second
    if first.type in PRIMITIVE_TYPES or second.type in PRIMITIVE_TYPES:
        same = first.type == second.type
    else:
        same = cm.related(first.type, second.type)
    if not same:
        return WellFormednessIssue(
            "2a", "type-mismatch", f"{where}: {first.type} y {second.type} no son del mismo tipo"
        )
    if first.type == STRING_TYPE:
        return WellFormednessIssue(
            "2b", "string-constraint", f"{where}: las restricciones no comparan valores String"
        )
    requirement, code, left, right, text = _CONSTRAINT_MULTIPLICITIES[constraint.op]
    if first.multiplicity not in left or second.multiplicity not in right:
        return WellFormednessIssue(requirement, code, f"{where}: {text}")
    return None


def check_well_formed(cm: ClassModel, rule: Rule) -> list[WellFormednessIssue]:
    """Retorna lista de problemas; vacia si la regla esta bien formada."""
    issues: list[WellFormednessIssue] = []
    for role, name in (("subject", rule.subject_type), ("resource", rule.resource_type)):
        if name not in cm:
            issues.append(
                WellFormednessIssue(
                    "unknown-class", "unknown-class", f"Tipo de {role} no declarado: {name}"
                )
            )
    if issues:
        return issues
    if not rule.actions:
        issues.append(WellFormednessIssue("actions", "empty-actions", "La regla no tiene acciones"))
    for role, anchor, condition in (
        ("subject", rule.subject_type, rule.subject_condition),
        ("resource", rule.resource_type, rule.resource_condition),
    ):
        for atomic in sorted(condition, key=lambda c: format_condition(role, c)):
            issue = _check_condition(cm, anchor, role, atomic)
            if issue is not None:
                issues.append(issue)
    for constraint in sorted(rule.constraint, key=format_constraint):
        issue = _check_constraint(cm, rule, constraint)
        if issue is not None:
            issues.append(issue)
    return issues


def is_well_formed(cm: ClassModel, rule: Rule) -> bool:
    return not check_well_formed(cm, rule)


def ensure_well_formed(cm: ClassModel, rule: Rule) -> None:
    issues = check_well_formed(cm, rule)
    if issues:
        raise WellFormednessError(issues[0])
