"""Base comun de los generadores de politicas de ejemplo."""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Iterable
from dataclasses import dataclass
from typing import cast

import numpy as np

from rebac_miner import __version__
from rebac_miner.application.dtos.documents import PolicyInfo
from rebac_miner.domain.entities import (
    AclPolicy,
    ClassModel,
    ObjectModel,
    ObjectRecord,
    Rule,
    Value,
)
from rebac_miner.domain.enums import PolicyName
from rebac_miner.domain.semantics import policy_meaning
from rebac_miner.infrastructure.generators.rng import substream
from rebac_miner.infrastructure.serialization.rule_parser import load_rules_text

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class GeneratedPolicy:
    info: PolicyInfo
    acl: AclPolicy
    rules: frozenset[Rule]


class ObjectModelBuilder:
    """Acumula objetos mientras se generan; los campos many se guardan como listas."""

    def __init__(self, seed: int) -> None:
        self.seed = seed
        self._objects: dict[str, tuple[str, dict[str, object]]] = {}

    def rng(self, stream: str) -> np.random.Generator:
        return substream(self.seed, stream)

    def add(self, class_name: str, object_id: str, **fields: object) -> str:
        self._objects[object_id] = (class_name, dict(fields))
        return object_id

    def set(self, object_id: str, name: str, value: object) -> None:
        self._objects[object_id][1][name] = value

    def append(self, object_id: str, name: str, value: str) -> None:
        values = self._objects[object_id][1].setdefault(name, [])
        if value not in values:  # type: ignore[operator]
            values.append(value)  # type: ignore[union-attr]

    def get(self, object_id: str, name: str) -> object:
        return self._objects[object_id][1][name]

    def ref(self, object_id: str, name: str) -> str:
        return cast(str, self.get(object_id, name))

    def refs(self, object_id: str, name: str) -> list[str]:
        return cast(list[str], self.get(object_id, name))

    def build(self, class_model: ClassModel) -> ObjectModel:
        records = []
        for object_id, (class_name, fields) in self._objects.items():
            values: dict[str, Value] = {
                name: frozenset(v) if isinstance(v, (list, set, tuple)) else v  # type: ignore
                for name, v in fields.items()
            }
            records.append(ObjectRecord(class_name, object_id, values))
        return ObjectModel(class_model, records)


class PolicyGenerator(ABC):
    """Modelo de clases y reglas escritos a mano mas un constructor de objetos con semilla."""

    name: PolicyName
    default_n: int
    rules_text: str

    @abstractmethod
    def build_class_model(self) -> ClassModel: ...

    @abstractmethod
    def populate(self, builder: ObjectModelBuilder, n: int) -> None:
        """Crea los objetos; las cantidades de las clases que escalan son proporcionales a n."""

    def original_rules(self, class_model: ClassModel | None = None) -> frozenset[Rule]:
        cm = class_model or self.build_class_model()
        return load_rules_text(self.rules_text, cm, self.name.value)

    def generate_object_model(self, n: int, seed: int) -> ObjectModel:
        if n < 1:
            msg = f"n debe ser al menos 1 (se recibio {n})"
            raise ValueError(msg)
        builder = ObjectModelBuilder(seed)
        self.populate(builder, n)
        return builder.build(self.build_class_model())

    @staticmethod
    def extract_acl(object_model: ObjectModel, rules: Iterable[Rule]) -> AclPolicy:
        """SP0 = significado de las reglas; las acciones son las mencionadas en ellas."""
        rule_list = list(rules)
        actions = frozenset(a for rule in rule_list for a in rule.actions)
        return AclPolicy(
            object_model.class_model,
            object_model,
            actions,
            policy_meaning(object_model, rule_list),
        )

    def generate(self, n: int | None = None, seed: int = 0) -> GeneratedPolicy:
        n = n or self.default_n
        om = self.generate_object_model(n, seed)
        rules = self.original_rules(om.class_model)
        acl = self.extract_acl(om, rules)
        logger.info(
            "Politica %s generada (n=%s, semilla=%s): %s objetos, %s tuplas",
            self.name.value,
            n,
            seed,
            len(om),
            len(acl.sp0),
        )
        info = PolicyInfo(name=self.name.value, n=n, seed=seed, generator_version=__version__)
        return GeneratedPolicy(info, acl, rules)
