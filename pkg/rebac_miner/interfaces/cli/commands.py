"""Implementacion de los subcomandos de la CLI."""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from rebac_miner.application.dtos.params import MiningParams, default_mining_params
from rebac_miner.application.dtos.reports import PolicyStats, SimilarityReport
from rebac_miner.application.ports.repositories import BundleRepository
from rebac_miner.application.services.decision_point import DecisionPoint
from rebac_miner.application.services.greedy import simplify_policy
from rebac_miner.application.services.metrics import similarity_report
from rebac_miner.application.services.mining import run_mining
from rebac_miner.application.services.policy_stats import average_stats, policy_stats
from rebac_miner.core.config import Settings
from rebac_miner.domain.enums import Algorithm, PolicyName
from rebac_miner.domain.rendering import format_rule
from rebac_miner.infrastructure.generators import get_generator
from rebac_miner.infrastructure.persistence import FileBundleRepository
from rebac_miner.infrastructure.persistence.bundle_repository import (
    REFERENCE_RULES_FILE,
    RULES_FILE,
    run_metadata_path,
    write_atomic,
)
from rebac_miner.infrastructure.serialization import json_codec

logger = logging.getLogger(__name__)


def generate_bundle(policy: str, n: int | None, seed: int, directory: str) -> str:
    """Genera y guarda un bundle; funcion de modulo para poder ejecutarse en otro proceso."""
    generator = get_generator(policy)
    generated = generator.generate(n, seed)
    mining = default_mining_params(generator.name)
    reference = simplify_policy(generated.acl, generated.rules, mining.greedy)
    FileBundleRepository().save(
        Path(directory),
        info=generated.info,
        acl=generated.acl,
        rules=generated.rules,
        reference_rules=reference,
    )
    return directory


def cmd_generate(args: argparse.Namespace, _: BundleRepository, settings: Settings) -> int:
    out = Path(args.out)
    if args.count == 1:
        generate_bundle(args.policy, args.n, args.seed, str(out))
        print(out)
        return 0
    jobs = [(args.seed + k, out / f"seed-{args.seed + k}") for k in range(args.count)]
    workers = min(args.count, settings.effective_workers)
    logger.info("Generando %s bundles con %s procesos", args.count, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(generate_bundle, args.policy, args.n, seed, str(directory))
            for seed, directory in jobs
        ]
        for future in futures:
            print(future.result())
    return 0


def _load_params(args: argparse.Namespace, repository: BundleRepository) -> MiningParams:
    if args.params:
        path = Path(args.params)
        return json_codec.loads(path.read_bytes(), MiningParams, str(path))
    name = repository.load_info(Path(args.input)).name
    if name in {p.value for p in PolicyName}:
        return default_mining_params(name)
    return MiningParams()


def cmd_mine(args: argparse.Namespace, repository: BundleRepository, settings: Settings) -> int:
    bundle = Path(args.input)
    acl = repository.load_acl(bundle)
    params = _load_params(args, repository)
    run = run_mining(
        acl,
        Algorithm(args.algorithm),
        params,
        bundle=str(bundle),
        seed=args.seed,
        settings=settings,
    )
    out = Path(args.out)
    repository.save_rules(out, run.outcome.rules)
    repository.save_run(run_metadata_path(out), run.metadata)
    print(
        f"{run.metadata.rule_count} reglas, WSC {run.metadata.wsc:g}, "
        f"{run.metadata.wall_time_seconds:.2f} s -> {out}"
    )
    if not run.metadata.consistent:
        logger.error("La politica minada no es consistente con SP0")
        return 2
    return 0


def render_report(report: SimilarityReport) -> str:
    lines = [
        f"SynSim   {report.syn_sim:.4f}",
        f"RSemSim  {report.rsem_sim:.4f}",
        f"WSC      minada {report.wsc_mined:g}  referencia {report.wsc_reference:g}",
        "",
    ]
    for match in report.per_rule:
        lines.append(f"{match.similarity:.3f}  {match.mined}")
        if match.best_match is not None and match.best_match != match.mined:
            lines.append(f"       ~ {match.best_match}")
    return "\n".join(lines)


def cmd_compare(args: argparse.Namespace, repository: BundleRepository, _: Settings) -> int:
    bundle = Path(args.bundle)
    acl = repository.load_acl(bundle)
    mined = repository.load_rules(Path(args.mined), acl)
    reference_path = Path(args.reference) if args.reference else bundle / REFERENCE_RULES_FILE
    reference = repository.load_rules(reference_path, acl)
    report = similarity_report(acl.object_model, mined, reference)
    print(render_report(report))
    if args.out:
        write_atomic(Path(args.out), json_codec.dumps(report))
    return 0


def cmd_evaluate(args: argparse.Namespace, repository: BundleRepository, _: Settings) -> int:
    bundle = Path(args.bundle)
    acl = repository.load_acl(bundle)
    rules = repository.load_rules(Path(args.rules) if args.rules else bundle / RULES_FILE, acl)
    decision = DecisionPoint(acl.object_model, rules).decide(
        args.subject, args.resource, args.action
    )
    print(decision.label)
    if args.explain:
        for rule in decision.granting_rules:
            print(f"  {format_rule(rule)}")
    return 0


def render_stats(row: PolicyStats) -> str:
    header = "#rules  #cond/rule  #constr/rule  #classes  #obj  #field/obj  |SP0|  bundles"
    values = (
        f"{row.rules:6.1f}  {row.conditions_per_rule:10.2f}  {row.constraints_per_rule:12.2f}  "
        f"{row.classes:8.1f}  {row.objects:4.0f}  {row.fields_per_object:10.2f}  "
        f"{row.sp0:5.0f}  {row.bundles:7d}"
    )
    return f"{header}\n{values}"


def cmd_stats(args: argparse.Namespace, repository: BundleRepository, _: Settings) -> int:
    rows = []
    for directory in args.bundle:
        bundle = Path(directory)
        acl = repository.load_acl(bundle)
        rows.append(policy_stats(acl, repository.load_rules(bundle / RULES_FILE, acl)))
    row = average_stats(rows)
    if args.json:
        sys.stdout.write(json_codec.dumps(row).decode("utf-8"))
    else:
        print(render_stats(row))
    return 0
