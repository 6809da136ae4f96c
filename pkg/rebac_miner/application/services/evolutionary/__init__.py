"""Minero evolutivo basado en arboles de derivacion de una gramatica de reglas."""
from rebac_miner.application.services.evolutionary.miner import EvolutionaryMiner

__all__ = ["EvolutionaryMiner"]
