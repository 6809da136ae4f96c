"""Lectura de la sintaxis textual de reglas ORAL (una regla por linea).

    rule(<sType>; <sCond>; <rType>; <rCond>; <constraint>; {<actions>})

Las condiciones y restricciones vacias se escriben `true`; `subject.p = v` es azucar de
`subject.p in {v}`. Las lineas vacias y las que empiezan con `#` se ignoran.
"""
from __future__ import annotations

import re
from collections.abc import Iterable
from typing import NamedTuple

import orjson

from rebac_miner.core.exceptions import RuleSyntaxError, ValidationError
from rebac_miner.domain.entities import (
    Atom,
    AtomicCondition,
    AtomicConstraint,
    ClassModel,
    Path,
    Rule,
)
from rebac_miner.domain.enums import ConditionOperator, ConstraintOperator
from rebac_miner.domain.rendering import format_rule
from rebac_miner.domain.well_formedness import check_well_formed

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<name>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<punct>[(){};,.=])
    """,
    re.VERBOSE,
)

_CONSTRAINT_OPERATORS = {
    "=": ConstraintOperator.equal,
    "in": ConstraintOperator.in_,
    "contains": ConstraintOperator.contains,
    "supseteq": ConstraintOperator.supseteq,
}


class Token(NamedTuple):
    kind: str
    text: str
    column: int


class ParsedRule(NamedTuple):
    line: int
    rule: Rule


def tokenize(text: str, line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise RuleSyntaxError(
                f"caracter inesperado {text[position]!r}", line=line, column=position + 1
            )
        kind = match.lastgroup or ""
        if kind != "space":
            tokens.append(Token(kind, match.group(), position + 1))
        position = match.end()
    return tokens


class _LineParser:
    def __init__(self, text: str, line: int) -> None:
        self.line = line
        self.tokens = tokenize(text, line)
        self.index = 0
        self.end_column = len(text.rstrip()) + 1

    def _error(self, message: str) -> RuleSyntaxError:
        column = self.tokens[self.index].column if self._peek() else self.end_column
        return RuleSyntaxError(message, line=self.line, column=column)

    def _peek(self) -> Token | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _at(self, text: str) -> bool:
        token = self._peek()
        return token is not None and token.kind != "string" and token.text == text

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            found = self._peek()
            shown = repr(found.text) if found else "el fin de la linea"
            raise self._error(f"se esperaba {text!r}, se encontro {shown}")
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _name(self, what: str) -> str:
        token = self._peek()
        if token is None or token.kind != "name":
            raise self._error(f"se esperaba {what}")
        self.index += 1
        return token.text

    def _atom(self) -> Atom:
        token = self._peek()
        if token is None or token.kind not in ("name", "string"):
            raise self._error("se esperaba una constante")
        self.index += 1
        if token.kind == "string":
            return orjson.loads(token.text)
        if token.text in ("true", "false"):
            return token.text == "true"
        return token.text

    def _path(self, anchor: str) -> Path:
        self._expect(anchor)
        names: list[str] = []
        while self._at("."):
            self.index += 1
            names.append(self._name("un nombre de campo"))
        return tuple(names)

    def _value_set(self) -> frozenset[Atom]:
        self._expect("{")
        values: list[Atom] = []
        if not self._at("}"):
            values.append(self._atom())
            while self._at(","):
                self.index += 1
                values.append(self._atom())
        self._expect("}")
        return frozenset(values)

    def _condition(self, anchor: str) -> frozenset[AtomicCondition]:
        if self._at("true"):
            self.index += 1
            return frozenset()
        conjuncts = [self._atomic_condition(anchor)]
        while self._at("and"):
            self.index += 1
            conjuncts.append(self._atomic_condition(anchor))
        return frozenset(conjuncts)

    def _atomic_condition(self, anchor: str) -> AtomicCondition:
        path = self._path(anchor)
        if not path:
            raise self._error(f"la condicion necesita una ruta no vacia desde {anchor}")
        if self._at("in"):
            self.index += 1
            values = self._value_set()
            if not values:
                raise self._error("'in' necesita al menos una constante")
            return AtomicCondition(path, ConditionOperator.in_, values)
        if self._at("="):
            self.index += 1
            return AtomicCondition(path, ConditionOperator.in_, frozenset({self._atom()}))
        if self._at("contains"):
            self.index += 1
            return AtomicCondition(path, ConditionOperator.contains, self._atom())
        raise self._error("se esperaba 'in', '=' o 'contains'")

    def _constraint(self) -> frozenset[AtomicConstraint]:
        if self._at("true"):
            self.index += 1
            return frozenset()
        atoms = [self._atomic_constraint()]
        while self._at("and"):
            self.index += 1
            atoms.append(self._atomic_constraint())
        return frozenset(atoms)

    def _atomic_constraint(self) -> AtomicConstraint:
        subject_path = self._path("subject")
        token = self._peek()
        op = _CONSTRAINT_OPERATORS.get(token.text) if token and token.kind != "string" else None
        if op is None:
            raise self._error("operador de restriccion desconocido")
        self.index += 1
        return AtomicConstraint(subject_path, op, self._path("resource"))

    def parse(self) -> Rule:
        self._expect("rule")
        self._expect("(")
        subject_type = self._name("el tipo de sujeto")
        self._expect(";")
        subject_condition = self._condition("subject")
        self._expect(";")
        resource_type = self._name("el tipo de recurso")
        self._expect(";")
        resource_condition = self._condition("resource")
        self._expect(";")
        constraint = self._constraint()
        self._expect(";")
        actions = self._value_set()
        self._expect(")")
        if self._peek() is not None:
            raise self._error("texto sobrante despues de la regla")
        if any(not isinstance(a, str) for a in actions):
            raise self._error("las acciones deben ser nombres")
        return Rule(
            subject_type,
            subject_condition,
            resource_type,
            resource_condition,
            constraint,
            frozenset(actions),  # type: ignore[arg-type]
        )


def parse_rule(text: str, line: int = 1) -> Rule:
    return _LineParser(text, line).parse()


def parse_rules(text: str) -> list[ParsedRule]:
    parsed: list[ParsedRule] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        # columnas contadas sobre la linea original, sangria incluida
        parsed.append(ParsedRule(number, _LineParser(raw, number).parse()))
    return parsed


def validate_rules(cm: ClassModel, parsed: Iterable[ParsedRule], source: str = "") -> None:
    """Chequeo semantico contra el modelo de clases; reporta linea y regla."""
    where = f"{source}:" if source else "linea "
    for line, rule in parsed:
        issues = check_well_formed(cm, rule)
        if issues:
            details = "; ".join(issue.message for issue in issues)
            raise ValidationError(f"{where}{line}: {format_rule(rule)}: {details}")


def load_rules_text(text: str, cm: ClassModel, source: str = "") -> frozenset[Rule]:
    parsed = parse_rules(text)
    validate_rules(cm, parsed, source)
    return frozenset(item.rule for item in parsed)
