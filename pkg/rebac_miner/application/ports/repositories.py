"""Puerto de persistencia de bundles de politicas."""
from __future__ import annotations

from pathlib import Path
from typing import Protocol

from rebac_miner.application.dtos.documents import PolicyInfo
from rebac_miner.application.dtos.reports import RunMetadata
from rebac_miner.domain.entities import AclPolicy, Rule


class BundleRepository(Protocol):
    def save(
        self,
        directory: Path,
        *,
        info: PolicyInfo,
        acl: AclPolicy,
        rules: frozenset[Rule],
        reference_rules: frozenset[Rule],
    ) -> None: ...

    def load_acl(self, directory: Path) -> AclPolicy: ...

    def load_info(self, directory: Path) -> PolicyInfo: ...

    def load_rules(self, path: Path, acl: AclPolicy) -> frozenset[Rule]: ...

    def save_rules(self, path: Path, rules: frozenset[Rule]) -> None: ...

    def save_run(self, path: Path, metadata: RunMetadata) -> None: ...
