"""DTOs de salida: metadatos de corridas, similitud y estadisticas de politicas."""
from __future__ import annotations

from pydantic import BaseModel, Field

from rebac_miner.domain.enums import Algorithm


class EnvironmentInfo(BaseModel):
    python: str
    platform: str
    cpu_count: int | None = None
    package_version: str


class RunMetadata(BaseModel):
    """Metadatos que acompanan a un archivo de reglas minadas (<out>.run.json)."""

    algorithm: Algorithm
    bundle: str
    seed: int
    params: dict
    wall_time_seconds: float
    phase_seconds: dict[str, float] = Field(default_factory=dict)
    rule_count: int
    wsc: float
    consistent: bool
    environment: EnvironmentInfo


class RuleMatch(BaseModel):
    mined: str
    best_match: str | None
    components: list[float] = Field(default_factory=list)
    similarity: float


class SimilarityReport(BaseModel):
    syn_sim: float = Field(ge=0, le=1)
    rsem_sim: float = Field(ge=0, le=1)
    per_rule: list[RuleMatch] = Field(default_factory=list)
    wsc_mined: float
    wsc_reference: float


class PolicyStats(BaseModel):
    """Fila al estilo de la tabla de tamanos de politicas."""

    rules: float
    conditions_per_rule: float
    constraints_per_rule: float
    classes: float
    objects: float
    fields_per_object: float
    sp0: float
    bundles: int = 1
