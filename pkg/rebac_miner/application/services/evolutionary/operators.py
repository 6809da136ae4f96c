"""Operadores geneticos sobre arboles de derivacion y sobre reglas."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from rebac_miner.application.services.evolutionary.derivation import (
    PARTS,
    Node,
    Position,
    TreeGrower,
    decode,
    encode,
    node_at,
    nonterminals,
    replace_at,
)
from rebac_miner.application.services.evolutionary.grammar import RuleGrammar
from rebac_miner.core.exceptions import EncodingError
from rebac_miner.domain.entities import Rule, SubjectPermission
from rebac_miner.domain.rendering import format_condition, format_constraint

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Individual:
    tree: Node
    rule: Rule


class Operators:
    """Mutaciones y cruce; toda regla producida pertenece al lenguaje de la gramatica."""

    def __init__(self, grammar: RuleGrammar, rng: np.random.Generator, max_values: int) -> None:
        self.grammar = grammar
        self.rng = rng
        self.grower = TreeGrower(grammar, rng, max_values)

    def individual(self, tree: Node) -> Individual:
        return Individual(tree, decode(self.grammar, tree))

    def from_rule(self, rule: Rule) -> Individual | None:
        try:
            return Individual(encode(self.grammar, rule), rule)
        except EncodingError:
            return None

    def _pick(self, count: int) -> int:
        return int(self.rng.integers(count))

    def _part_nonterminals(self, tree: Node, part: Position) -> list[tuple[Position, Node]]:
        return [
            ((*part, *relative), node)
            for relative, node in nonterminals(node_at(tree, part))
        ]

    def mutate_parts(self, individual: Individual, n_parts: int) -> Individual:
        """Regenera un no terminal elegido al azar en `n_parts` de las tres partes."""
        tree = individual.tree
        chosen = sorted(int(i) for i in self.rng.choice(len(PARTS), size=n_parts, replace=False))
        for index in chosen:
            candidates = self._part_nonterminals(tree, PARTS[index])
            position, node = candidates[self._pick(len(candidates))]
            tree = replace_at(tree, position, self.grower.regrow(node.symbol))
        return self.individual(tree)

    def single_mutation(self, individual: Individual) -> Individual:
        return self.mutate_parts(individual, 1)

    def double_mutation(self, individual: Individual) -> Individual:
        return self.mutate_parts(individual, 2)

    def action_mutation(
        self, individual: Individual, seed: SubjectPermission, allowed: set[str]
    ) -> Individual:
        """Agrega o quita una accion permitida al sujeto semilla; nunca quita la semilla."""
        options = sorted(allowed)
        if not options:
            return individual
        action = options[self._pick(len(options))]
        actions = individual.rule.actions
        if action in actions:
            if action == seed.action:
                return individual
            actions = actions - {action}
        else:
            actions = actions | {action}
        if not actions:
            return individual
        return self.from_rule(individual.rule.replace(actions=actions)) or individual

    def simplify_mutation(self, individual: Individual) -> Individual:
        """Quita una condicion o restriccion atomica elegida al azar."""
        rule = individual.rule
        parts: list[tuple[str, str, object]] = sorted(
            [
                (format_condition("subject", c), "subject_condition", c)
                for c in rule.subject_condition
            ]
            + [
                (format_condition("resource", c), "resource_condition", c)
                for c in rule.resource_condition
            ]
            + [(format_constraint(c), "constraint", c) for c in rule.constraint],
            key=lambda item: item[0],
        )
        if not parts:
            return individual
        _, field_name, atomic = parts[self._pick(len(parts))]
        reduced = rule.replace(**{field_name: getattr(rule, field_name) - {atomic}})
        return self.from_rule(reduced) or individual

    def crossover(self, first: Individual, second: Individual) -> tuple[Individual, Individual]:
        """Intercambia los subarboles de un no terminal presente en ambos padres."""
        candidates = [
            item for part in PARTS for item in self._part_nonterminals(first.tree, part)
        ]
        order = [int(i) for i in self.rng.permutation(len(candidates))]
        for index in order:
            position, node = candidates[index]
            matches = [
                item
                for part in PARTS
                for item in self._part_nonterminals(second.tree, part)
                if item[1].symbol == node.symbol
            ]
            if not matches:
                continue
            other_position, other = matches[self._pick(len(matches))]
            return (
                self.individual(replace_at(first.tree, position, other)),
                self.individual(replace_at(second.tree, other_position, node)),
            )
        return first, second

    def type_mutation(self, rule: Rule) -> Individual | None:
        """Sube el tipo de sujeto, de recurso o ambos a su clase padre."""
        cm = self.grammar.class_model
        subject_parent = cm.declaration(rule.subject_type).parent
        resource_parent = cm.declaration(rule.resource_type).parent
        options: list[dict[str, str]] = []
        if subject_parent is not None:
            options.append({"subject_type": subject_parent})
        if resource_parent is not None:
            options.append({"resource_type": resource_parent})
        if subject_parent is not None and resource_parent is not None:
            options.append({"subject_type": subject_parent, "resource_type": resource_parent})
        if not options:
            return None
        return self.from_rule(rule.replace(**options[self._pick(len(options))]))
