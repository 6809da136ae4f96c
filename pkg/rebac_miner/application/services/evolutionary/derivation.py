"""Arboles de derivacion de la gramatica de reglas: decodificacion, codificacion y regeneracion."""
from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from rebac_miner.application.services.evolutionary.grammar import (
    RESOURCE,
    SUBJECT,
    RuleGrammar,
    atom_order,
)
from rebac_miner.core.exceptions import EncodingError
from rebac_miner.domain.entities import Atom, AtomicCondition, AtomicConstraint, Path, Rule
from rebac_miner.domain.enums import ConditionOperator

Symbol = tuple
Position = tuple[int, ...]

# cantidad maxima de conjuntos o restricciones al regenerar un subarbol al azar
MAX_RANDOM_CONJUNCTS = 3
MAX_RANDOM_CONSTRAINTS = 2

# posiciones de las tres partes mutables dentro de un arbol completo
SUBJECT_PART: Position = (0, 0)
RESOURCE_PART: Position = (0, 1)
CONSTRAINT_PART: Position = (0, 2)
PARTS: tuple[Position, ...] = (SUBJECT_PART, RESOURCE_PART, CONSTRAINT_PART)


@dataclass(frozen=True, slots=True)
class Leaf:
    value: Atom | AtomicConstraint


@dataclass(frozen=True, slots=True)
class Node:
    """No terminal con los hijos de la produccion elegida."""

    symbol: Symbol
    children: tuple[Node | Leaf, ...] = ()


def rule_symbol(subject_type: str, resource_type: str) -> Symbol:
    return ("rule", subject_type, resource_type)


def condition_node(
    grammar: RuleGrammar, role: str, class_name: str, selected: dict[int, tuple[Atom, ...]]
) -> Node:
    slots = grammar.condition_slots(role, class_name)
    children = []
    for i in range(len(slots)):
        symbol = ("slot", role, class_name, i)
        if i in selected:
            values = tuple(Leaf(v) for v in sorted(selected[i], key=atom_order))
            children.append(Node(symbol, (Node(("vals", role, class_name, i), values),)))
        else:
            children.append(Node(symbol))
    return Node(("cond", role, class_name), tuple(children))


def constraint_node(
    grammar: RuleGrammar, subject_type: str, resource_type: str, selected: set[int]
) -> Node:
    constraints = grammar.constraint_slots(subject_type, resource_type)
    children = tuple(
        Node(("cslot", subject_type, resource_type, j), (Leaf(c),) if j in selected else ())
        for j, c in enumerate(constraints)
    )
    return Node(("cons", subject_type, resource_type), children)


def action_node(grammar: RuleGrammar, actions: frozenset[str]) -> Node:
    return Node(
        ("act",),
        tuple(
            Node(("aslot", k), (Leaf(a),) if a in actions else ())
            for k, a in enumerate(grammar.actions)
        ),
    )


def rule_tree(
    subject_type: str,
    resource_type: str,
    subject: Node,
    resource: Node,
    constraint: Node,
    actions: Node,
) -> Node:
    return Node(
        ("rule",),
        (Node(rule_symbol(subject_type, resource_type), (subject, resource, constraint)), actions),
    )


def _decode_condition(grammar: RuleGrammar, node: Node) -> frozenset[AtomicCondition]:
    _, role, class_name = node.symbol
    slots = grammar.condition_slots(role, class_name)
    conjuncts: set[AtomicCondition] = set()
    for i, slot_node in enumerate(node.children):
        if not slot_node.children:  # type: ignore[union-attr]
            continue
        vals = slot_node.children[0]  # type: ignore[union-attr]
        values = frozenset(leaf.value for leaf in vals.children)  # type: ignore[union-attr]
        slot = slots[i]
        if slot.op is ConditionOperator.in_:
            conjuncts.add(AtomicCondition(slot.path, slot.op, values))  # type: ignore[arg-type]
        else:
            conjuncts.update(
                AtomicCondition(slot.path, slot.op, v) for v in values  # type: ignore[arg-type]
            )
    return frozenset(conjuncts)


def decode(grammar: RuleGrammar, tree: Node) -> Rule:
    typed, actions = tree.children
    _, subject_type, resource_type = typed.symbol  # type: ignore[union-attr]
    subject, resource, constraint = typed.children  # type: ignore[union-attr]
    return Rule(
        subject_type,
        _decode_condition(grammar, subject),  # type: ignore[arg-type]
        resource_type,
        _decode_condition(grammar, resource),  # type: ignore[arg-type]
        frozenset(
            slot.children[0].value  # type: ignore[union-attr]
            for slot in constraint.children  # type: ignore[union-attr]
            if slot.children  # type: ignore[union-attr]
        ),
        frozenset(
            slot.children[0].value  # type: ignore[union-attr]
            for slot in actions.children  # type: ignore[union-attr]
            if slot.children  # type: ignore[union-attr]
        ),
    )


def _encode_condition(
    grammar: RuleGrammar, role: str, class_name: str, condition: frozenset[AtomicCondition]
) -> Node:
    in_values: dict[Path, frozenset[Atom]] = {}
    contains: dict[Path, set[Atom]] = defaultdict(set)
    for atomic in condition:
        if atomic.op is ConditionOperator.in_:
            current = in_values.get(atomic.path)
            in_values[atomic.path] = atomic.values if current is None else current & atomic.values
        else:
            contains[atomic.path].add(atomic.value)  # type: ignore[arg-type]
    selected: dict[int, tuple[Atom, ...]] = {}
    slots = grammar.condition_slots(role, class_name)
    groups = [(p, ConditionOperator.in_, v) for p, v in in_values.items()]
    groups += [(p, ConditionOperator.contains, frozenset(v)) for p, v in contains.items()]
    for path, op, values in groups:
        position = grammar.slot_position(role, class_name, path, op)
        if position is None:
            where = f"{role}.{'.'.join(path)} {op.value}"
            raise EncodingError(f"Sin produccion para {where} en {class_name}")
        if not values or not values <= set(slots[position].values):
            raise EncodingError(f"Constantes fuera de la gramatica en {role}.{'.'.join(path)}")
        selected[position] = tuple(values)
    return condition_node(grammar, role, class_name, selected)


def encode(grammar: RuleGrammar, rule: Rule) -> Node:
    """Arbol canonico de `rule`; EncodingError si la regla no pertenece al lenguaje."""
    if (rule.subject_type, rule.resource_type) not in grammar.type_pairs:
        raise EncodingError(f"Tipos sin produccion: {rule.subject_type}, {rule.resource_type}")
    if not rule.actions or not rule.actions <= set(grammar.actions):
        raise EncodingError("Acciones fuera de la gramatica")
    selected: set[int] = set()
    for constraint in rule.constraint:
        position = grammar.constraint_position(rule.subject_type, rule.resource_type, constraint)
        if position is None:
            raise EncodingError(f"Restriccion sin produccion: {constraint}")
        selected.add(position)
    return rule_tree(
        rule.subject_type,
        rule.resource_type,
        _encode_condition(grammar, SUBJECT, rule.subject_type, rule.subject_condition),
        _encode_condition(grammar, RESOURCE, rule.resource_type, rule.resource_condition),
        constraint_node(grammar, rule.subject_type, rule.resource_type, selected),
        action_node(grammar, rule.actions),
    )


def node_at(tree: Node, position: Position) -> Node:
    node = tree
    for index in position:
        node = node.children[index]  # type: ignore[assignment]
    return node


def replace_at(tree: Node, position: Position, replacement: Node) -> Node:
    if not position:
        return replacement
    head, *rest = position
    child = tree.children[head]
    updated = replace_at(child, tuple(rest), replacement)  # type: ignore[arg-type]
    return Node(tree.symbol, (*tree.children[:head], updated, *tree.children[head + 1 :]))


def nonterminals(tree: Node, position: Position = ()) -> Iterator[tuple[Position, Node]]:
    node = node_at(tree, position)
    yield position, node
    for index, child in enumerate(node.children):
        if isinstance(child, Node):
            yield from nonterminals(tree, (*position, index))


class TreeGrower:
    """Regenera subarboles al azar a partir de un no terminal."""

    def __init__(self, grammar: RuleGrammar, rng: np.random.Generator, max_values: int) -> None:
        self.grammar = grammar
        self.rng = rng
        self.max_values = max_values

    def _sample(self, count: int, k: int) -> list[int]:
        return sorted(int(i) for i in self.rng.choice(count, size=k, replace=False))

    def values(self, role: str, class_name: str, i: int) -> Node:
        options = self.grammar.condition_slots(role, class_name)[i].values
        size = int(self.rng.integers(1, min(self.max_values, len(options)) + 1))
        chosen = tuple(Leaf(options[j]) for j in self._sample(len(options), size))
        return Node(("vals", role, class_name, i), chosen)

    def condition(self, role: str, class_name: str) -> Node:
        slots = self.grammar.condition_slots(role, class_name)
        k = int(self.rng.integers(0, min(MAX_RANDOM_CONJUNCTS, len(slots)) + 1))
        present = set(self._sample(len(slots), k)) if k else set()
        return Node(
            ("cond", role, class_name),
            tuple(
                Node(("slot", role, class_name, i), (self.values(role, class_name, i),))
                if i in present
                else Node(("slot", role, class_name, i))
                for i in range(len(slots))
            ),
        )

    def single_valued_condition(self, role: str, class_name: str) -> Node:
        """Condicion con un unico conjunto sobre una ruta de un solo valor."""
        slots = self.grammar.condition_slots(role, class_name)
        single = [i for i, s in enumerate(slots) if s.op is ConditionOperator.in_]
        if not single:
            return condition_node(self.grammar, role, class_name, {})
        i = single[int(self.rng.integers(len(single)))]
        vals = self.values(role, class_name, i)
        chosen = tuple(leaf.value for leaf in vals.children)  # type: ignore[union-attr]
        return condition_node(self.grammar, role, class_name, {i: chosen})  # type: ignore

    def constraint(self, subject_type: str, resource_type: str) -> Node:
        count = len(self.grammar.constraint_slots(subject_type, resource_type))
        k = int(self.rng.integers(0, min(MAX_RANDOM_CONSTRAINTS, count) + 1))
        selected = set(self._sample(count, k)) if k else set()
        return constraint_node(self.grammar, subject_type, resource_type, selected)

    def regrow(self, symbol: Symbol) -> Node:
        kind = symbol[0]
        if kind == "cond":
            return self.condition(symbol[1], symbol[2])
        if kind == "slot":
            _, role, class_name, i = symbol
            if self.rng.random() < 0.5:
                return Node(symbol)
            return Node(symbol, (self.values(role, class_name, i),))
        if kind == "vals":
            return self.values(symbol[1], symbol[2], symbol[3])
        if kind == "cons":
            return self.constraint(symbol[1], symbol[2])
        if kind == "cslot":
            _, subject_type, resource_type, j = symbol
            if self.rng.random() < 0.5:
                return Node(symbol)
            constraints = self.grammar.constraint_slots(subject_type, resource_type)
            return Node(symbol, (Leaf(constraints[j]),))
        msg = f"No terminal sin regeneracion: {symbol!r}"
        raise EncodingError(msg)
