"""Punto de entrada de la linea de comandos.

Codigos de salida: 0 exito, 1 error de validacion de entradas, 2 error interno.
"""
from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence

from rebac_miner import __version__
from rebac_miner.application.ports.repositories import BundleRepository
from rebac_miner.core.config import Settings, get_settings
from rebac_miner.core.exceptions import (
    ModelIntegrityError,
    PathTypeError,
    ValidationError,
    WellFormednessError,
)
from rebac_miner.core.logging import configure_logging
from rebac_miner.domain.enums import Algorithm, PolicyName
from rebac_miner.infrastructure.persistence import FileBundleRepository
from rebac_miner.interfaces.cli import commands

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VALIDATION, EXIT_INTERNAL = 0, 1, 2

Command = Callable[[argparse.Namespace, BundleRepository, Settings], int]

# errores atribuibles a las entradas del usuario
_INPUT_ERRORS = (ValidationError, ModelIntegrityError, PathTypeError, WellFormednessError)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _non_negative(raw: str) -> int:
    value = int(raw)
    if value < 0:
        msg = f"se esperaba un entero no negativo: {raw}"
        raise argparse.ArgumentTypeError(msg)
    return value


def _positive(raw: str) -> int:
    value = int(raw)
    if value < 1:
        msg = f"se esperaba un entero positivo: {raw}"
        raise argparse.ArgumentTypeError(msg)
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="rebac-miner", description="Minado de politicas ReBAC a partir de ACLs."
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="logging en nivel DEBUG")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    generate = sub.add_parser("generate", help="genera un bundle de una politica de ejemplo")
    generate.add_argument("--policy", required=True, choices=[p.value for p in PolicyName])
    generate.add_argument("--n", type=_positive, default=None, help="parametro de tamano")
    generate.add_argument("--seed", type=_non_negative, default=0)
    generate.add_argument("--count", type=_positive, default=1, help="bundles con semillas S..")
    generate.add_argument("--out", required=True, help="directorio del bundle")
    generate.set_defaults(handler=commands.cmd_generate)

    mine = sub.add_parser("mine", help="mina reglas a partir de las ACLs de un bundle")
    mine.add_argument("--algorithm", required=True, choices=[a.value for a in Algorithm])
    mine.add_argument("--in", dest="input", required=True, help="directorio del bundle")
    mine.add_argument("--params", default=None, help="archivo JSON de parametros")
    mine.add_argument("--seed", type=_non_negative, default=None)
    mine.add_argument("--out", required=True, help="archivo de reglas de salida")
    mine.set_defaults(handler=commands.cmd_mine)

    compare = sub.add_parser("compare", help="similitud entre reglas minadas y de referencia")
    compare.add_argument("--mined", required=True)
    compare.add_argument("--reference", default=None, help="por defecto reference_rules.txt")
    compare.add_argument("--bundle", required=True)
    compare.add_argument("--out", default=None, help="resumen JSON del reporte")
    compare.set_defaults(handler=commands.cmd_compare)

    evaluate = sub.add_parser("evaluate", help="permit/deny de una tupla segun las reglas")
    evaluate.add_argument("--bundle", required=True)
    evaluate.add_argument("--rules", default=None, help="por defecto rules.txt del bundle")
    evaluate.add_argument("--subject", required=True)
    evaluate.add_argument("--resource", required=True)
    evaluate.add_argument("--action", required=True)
    evaluate.add_argument("--explain", action="store_true", help="lista las reglas que conceden")
    evaluate.set_defaults(handler=commands.cmd_evaluate)

    stats = sub.add_parser("stats", help="tamanos de politica (promedio si hay varios bundles)")
    stats.add_argument("--bundle", required=True, nargs="+")
    stats.add_argument("--json", action="store_true")
    stats.set_defaults(handler=commands.cmd_stats)
    return parser


def main(
    argv: Sequence[str] | None = None,
    *,
    repository: BundleRepository | None = None,
    settings: Settings | None = None,
) -> int:
    args = build_parser().parse_args(argv)
    settings = settings or get_settings()
    configure_logging(settings.log_level, verbose=args.verbose)
    handler: Command = args.handler
    try:
        return handler(args, repository or FileBundleRepository(), settings)
    except _INPUT_ERRORS as exc:
        logger.error("%s", exc)
        return EXIT_VALIDATION
    except Exception:
        logger.exception("Error interno ejecutando %s", args.command)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
