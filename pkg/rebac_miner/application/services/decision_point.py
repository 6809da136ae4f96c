"""Punto de decision simple: permit/deny de una tupla segun ⟦π⟧."""
from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass

from rebac_miner.core.exceptions import ValidationError
from rebac_miner.domain.entities import ObjectModel, Rule, SubjectPermission
from rebac_miner.domain.rendering import format_rule
from rebac_miner.domain.semantics import PolicyEvaluator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Decision:
    request: SubjectPermission
    permitted: bool
    # reglas que conceden la tupla, en orden canonico
    granting_rules: tuple[Rule, ...] = ()

    @property
    def label(self) -> str:
        return "permit" if self.permitted else "deny"


class DecisionPoint:
    def __init__(self, object_model: ObjectModel, rules: Iterable[Rule]) -> None:
        self.object_model = object_model
        self.rules = tuple(sorted(set(rules), key=format_rule))
        self._evaluator = PolicyEvaluator(object_model)

    def decide(self, subject: str, resource: str, action: str) -> Decision:
        for object_id in (subject, resource):
            if object_id not in self.object_model:
                raise ValidationError(f"Objeto inexistente en el modelo: {object_id}")
        request = SubjectPermission(subject, resource, action)
        granting = tuple(r for r in self.rules if self._evaluator.covers(r, request))
        decision = Decision(request, bool(granting), granting)
        logger.debug("%s %s -> %s", decision.label, tuple(request), len(granting))
        return decision
