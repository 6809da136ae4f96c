"""Subflujos aleatorios con nombre derivados de una sola semilla.

Cada clase o atributo generado usa su propio flujo, identificado por el CRC32 de su nombre,
asi agregar una clase a un generador no altera los valores de las demas.
"""
from __future__ import annotations

import zlib
from collections.abc import Sequence
from typing import TypeVar

import numpy as np

T = TypeVar("T")

# desviacion estandar relativa de los conteos de instancias
COUNT_SPREAD = 0.1
ZIPF_EXPONENT = 1.5


def substream(seed: int, name: str) -> np.random.Generator:
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(name.encode()),))
    return np.random.default_rng(sequence)


def scaled_count(rng: np.random.Generator, mean: float, *, minimum: int = 1) -> int:
    """Conteo ~ Normal(mean, 10% de mean), redondeado y acotado por abajo."""
    if mean <= 0:
        return minimum
    return max(minimum, int(round(rng.normal(mean, COUNT_SPREAD * mean))))


def zipf_weights(count: int, exponent: float = ZIPF_EXPONENT) -> np.ndarray:
    weights = np.arange(1, count + 1, dtype=float) ** -exponent
    return weights / weights.sum()


def pick(rng: np.random.Generator, items: Sequence[T], weights: np.ndarray | None = None) -> T:
    return items[int(rng.choice(len(items), p=weights))]


def sample(
    rng: np.random.Generator, items: Sequence[T], k: int, weights: np.ndarray | None = None
) -> list[T]:
    """Hasta `k` elementos distintos, en el orden en que se sortearon."""
    k = min(k, len(items))
    if k <= 0:
        return []
    if weights is not None and np.count_nonzero(weights) < k:
        weights = None
    chosen = rng.choice(len(items), size=k, replace=False, p=weights)
    return [items[int(i)] for i in chosen]


def bernoulli(rng: np.random.Generator, probability: float) -> bool:
    return bool(rng.random() < probability)
