"""Orquestacion de una corrida de mineria: eleccion del algoritmo y metadatos de la corrida."""
from __future__ import annotations

import logging
import os
import platform
import time
from dataclasses import dataclass

from rebac_miner import __version__
from rebac_miner.application.dtos.params import MiningParams
from rebac_miner.application.dtos.reports import EnvironmentInfo, RunMetadata
from rebac_miner.application.ports.miners import MiningOutcome, RuleMiner
from rebac_miner.application.services.evolutionary import EvolutionaryMiner
from rebac_miner.application.services.greedy import GreedyMiner
from rebac_miner.core.config import Settings, get_settings
from rebac_miner.domain.complexity import wsc_policy
from rebac_miner.domain.entities import AclPolicy
from rebac_miner.domain.enums import Algorithm
from rebac_miner.domain.semantics import is_consistent, uncovered

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class MiningRun:
    outcome: MiningOutcome
    metadata: RunMetadata


def environment_info() -> EnvironmentInfo:
    return EnvironmentInfo(
        python=platform.python_version(),
        platform=platform.platform(),
        cpu_count=os.cpu_count(),
        package_version=__version__,
    )


def build_miner(
    algorithm: Algorithm, params: MiningParams, *, settings: Settings | None = None
) -> RuleMiner:
    settings = settings or get_settings()
    if algorithm is Algorithm.greedy:
        return GreedyMiner(params.greedy, cache_size=settings.meaning_cache_size)
    return EvolutionaryMiner(
        params.evolutionary, params.greedy, cache_size=settings.meaning_cache_size
    )


def with_seed(params: MiningParams, seed: int | None) -> MiningParams:
    """La semilla de la CLI reemplaza la del archivo de parametros."""
    if seed is None:
        return params
    return params.model_copy(
        update={"evolutionary": params.evolutionary.model_copy(update={"seed": seed})}
    )


def run_mining(
    acl: AclPolicy,
    algorithm: Algorithm,
    params: MiningParams,
    *,
    bundle: str,
    seed: int | None = None,
    settings: Settings | None = None,
) -> MiningRun:
    params = with_seed(params, seed)
    miner = build_miner(algorithm, params, settings=settings)
    logger.info("Minando %s con %s (%s tuplas en SP0)", bundle, algorithm.value, len(acl.sp0))
    started = time.perf_counter()
    outcome = miner.mine(acl)
    elapsed = time.perf_counter() - started
    missing = uncovered(acl, outcome.rules)
    if missing:
        logger.error("La politica minada no cubre %s tuplas de SP0", len(missing))
    metadata = RunMetadata(
        algorithm=algorithm,
        bundle=bundle,
        seed=params.evolutionary.seed,
        params=params.model_dump(mode="json"),
        wall_time_seconds=elapsed,
        phase_seconds=dict(outcome.phase_seconds),
        rule_count=len(outcome.rules),
        wsc=wsc_policy(outcome.rules, params.greedy.weights),
        consistent=not missing and is_consistent(acl, outcome.rules),
        environment=environment_info(),
    )
    logger.info(
        "Corrida terminada: %s reglas, WSC %s, %.2f s", metadata.rule_count, metadata.wsc, elapsed
    )
    return MiningRun(outcome, metadata)
