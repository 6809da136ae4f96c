"""Forma textual canonica de reglas ORAL.

Es la misma sintaxis que lee `infrastructure.serialization.rule_parser` y sirve
tambien como desempate determinista (toString) en los mineros.
"""
from __future__ import annotations

import re
from collections.abc import Iterable

import orjson

from rebac_miner.domain.entities import (
    Atom,
    AtomicCondition,
    AtomicConstraint,
    Path,
    Rule,
)
from rebac_miner.domain.enums import ConditionOperator

RESERVED_WORDS = frozenset(
    {"rule", "true", "false", "and", "in", "contains", "supseteq", "subject", "resource"}
)
_BARE_ATOM = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")


def format_atom(value: Atom) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if _BARE_ATOM.match(value) and value not in RESERVED_WORDS:
        return value
    return orjson.dumps(value).decode("utf-8")


def format_value_set(values: Iterable[Atom]) -> str:
    return "{" + ", ".join(sorted(format_atom(v) for v in values)) + "}"


def format_path(anchor: str, path: Path) -> str:
    return ".".join((anchor, *path))


def format_condition(anchor: str, condition: AtomicCondition) -> str:
    head = format_path(anchor, condition.path)
    if condition.op is ConditionOperator.contains:
        return f"{head} contains {format_atom(condition.value)}"  # type: ignore[arg-type]
    values = condition.values
    if len(values) == 1:
        return f"{head} = {format_atom(next(iter(values)))}"
    return f"{head} in {format_value_set(values)}"


def format_constraint(constraint: AtomicConstraint) -> str:
    return (
        f"{format_path('subject', constraint.subject_path)} {constraint.op.value} "
        f"{format_path('resource', constraint.resource_path)}"
    )


def _conjunction(parts: Iterable[str]) -> str:
    ordered = sorted(parts)
    return " and ".join(ordered) if ordered else "true"


def format_subject_condition(rule: Rule) -> str:
    return _conjunction(format_condition("subject", c) for c in rule.subject_condition)


def format_resource_condition(rule: Rule) -> str:
    return _conjunction(format_condition("resource", c) for c in rule.resource_condition)


def format_rule(rule: Rule) -> str:
    return (
        f"rule({rule.subject_type}; {format_subject_condition(rule)}; "
        f"{rule.resource_type}; {format_resource_condition(rule)}; "
        f"{_conjunction(format_constraint(c) for c in rule.constraint)}; "
        f"{format_value_set(rule.actions)})"
    )


def format_policy(rules: Iterable[Rule]) -> str:
    lines = sorted(format_rule(rule) for rule in rules)
    return "".join(f"{line}\n" for line in lines)
