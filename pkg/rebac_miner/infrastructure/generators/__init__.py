"""Generadores con semilla de las politicas de ejemplo."""
from rebac_miner.infrastructure.generators.base import GeneratedPolicy, PolicyGenerator
from rebac_miner.infrastructure.generators.registry import get_generator

__all__ = ["GeneratedPolicy", "PolicyGenerator", "get_generator"]
