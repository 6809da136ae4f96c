"""Estado compartido por los pasos del minero: ACL, parametros, evaluador e indices."""
from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable

from rebac_miner.application.dtos.params import GreedyParams
from rebac_miner.application.services.paths import ClassGraph, condition_paths
from rebac_miner.domain.complexity import wsc_policy, wsc_rule
from rebac_miner.domain.entities import (
    AclPolicy,
    AtomicCondition,
    AtomicConstraint,
    Path,
    Rule,
    SubjectPermission,
)
from rebac_miner.domain.rendering import format_rule
from rebac_miner.domain.semantics import (
    BoundedCache,
    Pair,
    PermissionIndex,
    PolicyEvaluator,
)
from rebac_miner.domain.well_formedness import is_well_formed

logger = logging.getLogger(__name__)


class MiningContext:
    def __init__(self, acl: AclPolicy, params: GreedyParams, *, cache_size: int = 200_000) -> None:
        self.acl = acl
        self.params = params
        self.class_model = acl.class_model
        self.object_model = acl.object_model
        self.evaluator = PolicyEvaluator(acl.object_model, cache_size=cache_size)
        self.sp0 = PermissionIndex(acl.sp0)
        self.graph = ClassGraph(acl.class_model)
        self._subjects_with: dict[tuple[str, str], set[str]] = defaultdict(set)
        for tup in acl.sp0:
            self._subjects_with[(tup.resource, tup.action)].add(tup.subject)
        self._condition_paths: dict[tuple[str, int], tuple[Path, ...]] = {}
        self._constraints: dict[tuple[str, str], tuple[AtomicConstraint, ...]] = {}
        self._text: dict[Rule, str] = {}
        # resultados de la fase 1 que no dependen de lo que queda sin cubrir
        self.pair_constraints: BoundedCache[Pair, tuple[AtomicConstraint, ...]] = BoundedCache(
            "restricciones por par", cache_size
        )
        self.computed_conditions: BoundedCache[
            tuple[str, frozenset[str], int], frozenset[AtomicCondition]
        ] = BoundedCache("condiciones calculadas", cache_size)
        self.extensions: BoundedCache[
            tuple[Rule, tuple[AtomicConstraint, ...]], tuple[tuple[AtomicConstraint, Rule], ...]
        ] = BoundedCache("generalizaciones", cache_size)

    def subjects_with(self, resource: str, action: str) -> set[str]:
        return self._subjects_with.get((resource, action), set())

    def condition_paths(self, class_name: str, max_length: int) -> tuple[Path, ...]:
        key = (class_name, max_length)
        paths = self._condition_paths.get(key)
        if paths is None:
            paths = condition_paths(self.class_model, class_name, max_length)
            self._condition_paths[key] = paths
        return paths

    def type_constraints(
        self, subject_type: str, resource_type: str
    ) -> tuple[AtomicConstraint, ...]:
        key = (subject_type, resource_type)
        found = self._constraints.get(key)
        if found is None:
            found = self.graph.constraint_candidates(
                subject_type,
                resource_type,
                sped=self.params.sped,
                rped=self.params.rped,
                mtpl=self.params.mtpl,
            )
            self._constraints[key] = found
        return found

    def text(self, rule: Rule) -> str:
        cached = self._text.get(rule)
        if cached is None:
            cached = format_rule(rule)
            self._text[rule] = cached
        return cached

    def wsc(self, rule: Rule) -> float:
        return wsc_rule(rule, self.params.weights)

    def wsc_policy(self, rules: Iterable[Rule]) -> float:
        return wsc_policy(rules, self.params.weights)

    def is_valid(self, rule: Rule) -> bool:
        return self.evaluator.is_valid(rule, self.sp0)

    def is_acceptable(self, rule: Rule) -> bool:
        """Bien formada, con acciones y valida respecto a SP0."""
        return is_well_formed(self.class_model, rule) and self.is_valid(rule)

    def uncovered(self, rules: Iterable[Rule]) -> PermissionIndex:
        remaining = self.sp0.copy()
        for rule in rules:
            for tup in self.evaluator.rule_meaning(rule):
                remaining.discard(tup)
        return remaining

    def still_covers(self, rules: list[Rule], old: Rule, new: Rule | None) -> bool:
        """True si cambiar `old` por `new` en `rules` no deja tuplas de SP0 sin cubrir."""
        evaluator = self.evaluator
        others = [rule for rule in rules if rule != old]
        new_pairs = evaluator.pair_meaning(new) if new is not None else frozenset()
        new_actions = new.actions if new is not None else frozenset()
        for subject, resource in evaluator.pair_meaning(old):
            granted = self.sp0.actions_for(subject, resource)
            for action in old.actions & granted:
                if action in new_actions and (subject, resource) in new_pairs:
                    continue
                tup = SubjectPermission(subject, resource, action)
                if not any(evaluator.covers(other, tup) for other in others):
                    return False
        return True

    def sort_rules(self, rules: Iterable[Rule]) -> list[Rule]:
        return sorted(set(rules), key=self.text)
