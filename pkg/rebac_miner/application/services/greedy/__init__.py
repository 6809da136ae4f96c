"""Minero voraz de tres fases: reglas candidatas, mejora y seleccion."""
from rebac_miner.application.services.greedy.miner import GreedyMiner, simplify_policy

__all__ = ["GreedyMiner", "simplify_policy"]
