"""Puertos de los algoritmos de mineria."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from rebac_miner.domain.entities import AclPolicy, Rule


@dataclass(frozen=True, slots=True)
class MiningOutcome:
    rules: frozenset[Rule]
    # segundos por fase, en el orden en que se ejecutaron
    phase_seconds: dict[str, float] = field(default_factory=dict, hash=False)


class RuleMiner(Protocol):
    def mine(self, acl: AclPolicy) -> MiningOutcome: ...
