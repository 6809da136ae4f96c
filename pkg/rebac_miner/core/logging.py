"""Logging de la CLI: solo el logger del paquete, hacia stderr; stdout queda para los datos."""
from __future__ import annotations

from logging.config import dictConfig

PACKAGE_LOGGER = "rebac_miner"


def configure_logging(log_level: str = "INFO", *, verbose: bool = False) -> None:
    """`verbose` fuerza DEBUG sobre el nivel configurado."""
    dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {"cli": {"format": "%(levelname)s %(name)s: %(message)s"}},
            "handlers": {
                "stderr": {
                    "class": "logging.StreamHandler",
                    "formatter": "cli",
                    "stream": "ext://sys.stderr",
                }
            },
            "loggers": {
                PACKAGE_LOGGER: {
                    "handlers": ["stderr"],
                    "level": "DEBUG" if verbose else log_level.upper(),
                    "propagate": False,
                }
            },
        }
    )
