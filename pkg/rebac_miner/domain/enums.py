from __future__ import annotations

from enum import Enum


class Multiplicity(str, Enum):
    one = "one"
    optional = "optional"
    many = "many"

    @property
    def symbol(self) -> str:
        return {"one": "1", "optional": "?", "many": "*"}[self.value]


class ConditionOperator(str, Enum):
    in_ = "in"
    contains = "contains"


class ConstraintOperator(str, Enum):
    equal = "="
    in_ = "in"
    contains = "contains"
    supseteq = "supseteq"


class PolicyName(str, Enum):
    """Politicas de ejemplo con generador propio."""

    emr = "emr"
    healthcare = "healthcare"
    project_management = "project-mgmt"
    university = "university"


class Algorithm(str, Enum):
    greedy = "greedy"
    evolutionary = "evolutionary"


BOOLEAN_TYPE = "Boolean"
STRING_TYPE = "String"
PRIMITIVE_TYPES = frozenset({BOOLEAN_TYPE, STRING_TYPE})
