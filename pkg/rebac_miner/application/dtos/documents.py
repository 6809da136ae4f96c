"""DTOs de los archivos JSON de un bundle de politica."""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from rebac_miner.domain.enums import Multiplicity

JsonAtom = bool | str
JsonValue = JsonAtom | list[JsonAtom] | None


class FieldDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(min_length=1)
    type: str = Field(min_length=1)
    multiplicity: Multiplicity = Multiplicity.one


class ClassDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(min_length=1)
    parent: str | None = None
    fields: list[FieldDocument] = Field(default_factory=list)


class ClassModelDocument(BaseModel):
    """Modelo de clases: lista de declaraciones (el campo id es implicito)."""

    model_config = ConfigDict(extra="forbid")

    classes: list[ClassDocument]


class ObjectDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    class_name: str = Field(alias="class", min_length=1)
    id: str = Field(min_length=1)
    fields: dict[str, JsonValue] = Field(default_factory=dict)


class ObjectModelDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    objects: list[ObjectDocument]


class AclDocument(BaseModel):
    """Acciones y relacion sujeto-permiso SP0 como tripletas [sujeto, recurso, accion]."""

    model_config = ConfigDict(extra="forbid")

    actions: list[str]
    tuples: list[tuple[str, str, str]]


class PolicyInfo(BaseModel):
    """Procedencia de un bundle generado (policy.json)."""

    model_config = ConfigDict(extra="forbid")

    name: str | None = None
    n: int | None = Field(default=None, ge=1)
    seed: int | None = Field(default=None, ge=0)
    generator_version: str | None = None
