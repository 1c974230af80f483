"""Seeded samplers for Haar measure on {-1, +1}^N and its coarse-grained variant.

All randomness comes from numpy's counter-based Philox generator keyed by
``(seed.value, seed.stream)``; draw number ``index`` starts at its own counter
block, so every sample is a pure function of ``(value, stream, index)``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .series import BlockPartition, CoefficientSeq, chi_from_eps
from .space_core import ContractError

SEED_ENV = "ORLICZ_LAB_SEED"
DEFAULT_SEED = 20240607

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Seed:
    value: int
    stream: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) & _MASK64)
        object.__setattr__(self, "stream", int(self.stream) & _MASK64)

    def generator(self, index: int = 0) -> np.random.Generator:
        bitgen = np.random.Philox(key=[self.value, self.stream],
                                  counter=[0, 0, 0, int(index) & _MASK64])
        return np.random.Generator(bitgen)

    def child(self, stream: int) -> "Seed":
        return Seed(self.value, stream)


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


def haar_array(seed: Seed, N: int, index: int = 0) -> np.ndarray:
    """N i.i.d. uniform signs as an int8 array."""
    if N < 1:
        raise ContractError("N must be >= 1")
    bits = seed.generator(index).integers(0, 2, size=N, dtype=np.int8)
    return (2 * bits - 1).astype(np.int8)


def sample_haar(seed: Seed, N: int, index: int = 0) -> CoefficientSeq:
    return CoefficientSeq.signs(haar_array(seed, N, index).tolist(), origin="haar")


def coarse_array(seed: Seed, part: BlockPartition, N: int, index: int = 0) -> np.ndarray:
    """One uniform sign per block id, expanded through f."""
    if N < 1:
        raise ContractError("N must be >= 1")
    ids = part.ids(N)
    coins = haar_array(seed, int(ids.max()) + 1, index)
    return coins[ids]


def sample_coarse(seed: Seed, part: BlockPartition, N: int, index: int = 0) -> CoefficientSeq:
    return CoefficientSeq.signs(coarse_array(seed, part, N, index).tolist(),
                                origin="coarse", partition=part)


__all__ = ["Seed", "sample_haar", "sample_coarse", "chi_from_eps", "haar_array",
           "coarse_array", "default_seed", "SEED_ENV"]
