"""Repositorio de bundles de politicas en un directorio de archivos JSON y texto ORAL."""
from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path

from rebac_miner.application.dtos.documents import (
    AclDocument,
    ClassModelDocument,
    ObjectModelDocument,
    PolicyInfo,
)
from rebac_miner.application.dtos.reports import RunMetadata
from rebac_miner.application.ports.repositories import BundleRepository
from rebac_miner.core.exceptions import ValidationError
from rebac_miner.domain.entities import AclPolicy, ClassModel, Rule
from rebac_miner.domain.rendering import format_policy
from rebac_miner.infrastructure.mappers.documents import (
    acl_from_document,
    acl_to_document,
    class_model_from_document,
    class_model_to_document,
    object_model_from_document,
    object_model_to_document,
)
from rebac_miner.infrastructure.serialization import json_codec
from rebac_miner.infrastructure.serialization.rule_parser import load_rules_text

logger = logging.getLogger(__name__)

POLICY_FILE = "policy.json"
CLASS_MODEL_FILE = "class_model.json"
OBJECT_MODEL_FILE = "object_model.json"
ACL_FILE = "acl.json"
RULES_FILE = "rules.txt"
REFERENCE_RULES_FILE = "reference_rules.txt"
RUN_SUFFIX = ".run.json"


def write_atomic(path: Path, data: bytes) -> None:
    """Escribe en un temporal del mismo directorio y lo renombra con os.replace."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def run_metadata_path(rules_path: Path) -> Path:
    return rules_path.with_name(rules_path.name + RUN_SUFFIX)


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except FileNotFoundError as exc:
        raise ValidationError(f"No existe el archivo {path}") from exc


class FileBundleRepository(BundleRepository):
    def save(
        self,
        directory: Path,
        *,
        info: PolicyInfo,
        acl: AclPolicy,
        rules: frozenset[Rule],
        reference_rules: frozenset[Rule],
    ) -> None:
        write_atomic(directory / POLICY_FILE, json_codec.dumps(info))
        write_atomic(
            directory / CLASS_MODEL_FILE,
            json_codec.dumps(class_model_to_document(acl.class_model)),
        )
        write_atomic(
            directory / OBJECT_MODEL_FILE,
            json_codec.dumps(object_model_to_document(acl.object_model)),
        )
        write_atomic(directory / ACL_FILE, json_codec.dumps(acl_to_document(acl)))
        self.save_rules(directory / RULES_FILE, rules)
        self.save_rules(directory / REFERENCE_RULES_FILE, reference_rules)
        logger.info(
            "Bundle escrito en %s: %s objetos, %s tuplas",
            directory,
            len(acl.object_model),
            len(acl.sp0),
        )

    def load_class_model(self, directory: Path) -> ClassModel:
        path = directory / CLASS_MODEL_FILE
        return class_model_from_document(
            json_codec.loads(_read(path), ClassModelDocument, str(path))
        )

    def load_acl(self, directory: Path) -> AclPolicy:
        cm = self.load_class_model(directory)
        om_path = directory / OBJECT_MODEL_FILE
        om = object_model_from_document(
            cm, json_codec.loads(_read(om_path), ObjectModelDocument, str(om_path))
        )
        acl_path = directory / ACL_FILE
        return acl_from_document(om, json_codec.loads(_read(acl_path), AclDocument, str(acl_path)))

    def load_info(self, directory: Path) -> PolicyInfo:
        path = directory / POLICY_FILE
        if not path.exists():
            return PolicyInfo()
        return json_codec.loads(_read(path), PolicyInfo, str(path))

    def load_rules(self, path: Path, acl: AclPolicy) -> frozenset[Rule]:
        text = _read(path).decode("utf-8")
        return load_rules_text(text, acl.class_model, str(path))

    def save_rules(self, path: Path, rules: frozenset[Rule]) -> None:
        write_atomic(path, format_policy(rules).encode("utf-8"))

    def save_run(self, path: Path, metadata: RunMetadata) -> None:
        write_atomic(path, json_codec.dumps(metadata))
