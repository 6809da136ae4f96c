"""Parametros de mineria (archivo params.json y banderas de la CLI)."""
from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rebac_miner.domain.entities import WscWeights
from rebac_miner.domain.enums import PolicyName


class GreedyParams(BaseModel):
    """Limites de rutas y simplificacion compartidos por ambos mineros."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mspl: int = Field(default=3, ge=0, description="Ruta maxima en condiciones de sujeto")
    mrpl: int = Field(default=3, ge=0, description="Ruta maxima en condiciones de recurso")
    sped: int = Field(default=0, ge=0, description="Distancia extra, rutas de sujeto")
    rped: int = Field(default=0, ge=0, description="Distancia extra, rutas de recurso")
    mtpl: int = Field(default=4, ge=0, description="Longitud total de una restriccion")
    mcse: int = Field(default=5, ge=0, description="Conjunciones para busqueda exhaustiva")
    batch_size: int = Field(default=1000, ge=1, description="Tuplas semilla por lote")
    weights: WscWeights = Field(default_factory=WscWeights)


class MutationWeights(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    single: float = Field(default=1.0, ge=0)
    action: float = Field(default=1.0, ge=0)
    simplify: float = Field(default=1.0, ge=0)
    double: float = Field(default=0.7, ge=0)


class ImproveWeights(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    single: float = Field(default=0.09, ge=0)
    double: float = Field(default=0.81, ge=0)
    type_single: float = Field(default=0.01, ge=0)
    type_double: float = Field(default=0.09, ge=0)


class EvoParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    pop_size: int = Field(default=200, ge=2)
    n_generations_search: int = Field(default=2000, ge=0)
    n_tournament: int = Field(default=15, ge=1)
    n_generations_improve: int = Field(default=1000, ge=0)
    # la mutacion ocurre con probabilidad 1 - crossover_probability
    crossover_probability: float = Field(default=0.1, ge=0, le=1)
    mutation_weights: MutationWeights = Field(default_factory=MutationWeights)
    improve_weights: ImproveWeights = Field(default_factory=ImproveWeights)
    method1_fraction: float = Field(default=0.5, ge=0, le=1)
    type_keep_probability: float = Field(default=0.8, ge=0, le=1)
    max_condition_values: int = Field(default=3, ge=1)
    max_seed_failures: int = Field(default=10, ge=1)
    classic_operators: bool = False
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _distributions_sum_to_one(self) -> EvoParams:
        improve = self.improve_weights
        total = improve.single + improve.double + improve.type_single + improve.type_double
        if not math.isclose(total, 1.0, abs_tol=1e-6):
            msg = "improve_weights debe sumar 1"
            raise ValueError(msg)
        if sum(self.mutation_weights.model_dump().values()) <= 0:
            msg = "mutation_weights necesita al menos un peso positivo"
            raise ValueError(msg)
        return self


class MiningParams(BaseModel):
    """Contenido de params.json."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    greedy: GreedyParams = Field(default_factory=GreedyParams)
    evolutionary: EvoParams = Field(default_factory=EvoParams)


# Parametros usados para las politicas de ejemplo (MCSE=5 y pesos 1 en todas)
_POLICY_PATH_LIMITS: dict[PolicyName, dict[str, int]] = {
    PolicyName.emr: {"mspl": 3, "mrpl": 4, "sped": 0, "rped": 1, "mtpl": 4},
    PolicyName.healthcare: {"mspl": 3, "mrpl": 3, "sped": 0, "rped": 0, "mtpl": 4},
    PolicyName.project_management: {"mspl": 3, "mrpl": 3, "sped": 0, "rped": 0, "mtpl": 4},
    PolicyName.university: {"mspl": 3, "mrpl": 3, "sped": 0, "rped": 0, "mtpl": 4},
}


def default_greedy_params(policy: PolicyName | str | None = None) -> GreedyParams:
    if policy is None:
        return GreedyParams()
    return GreedyParams(**_POLICY_PATH_LIMITS[PolicyName(policy)])


def default_mining_params(policy: PolicyName | str | None = None) -> MiningParams:
    return MiningParams(greedy=default_greedy_params(policy))
