# -*- coding: utf-8 -*-

"""Seeding and buffered uniform draws.

Every stochastic routine takes a ``numpy.random.Generator`` backed by
PCG64. Replicate ``r`` of a run with master seed ``s`` uses the seed
``splitmix64(s, r)``, so adding replicates never changes earlier ones.
"""

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
BLOCK_SIZE = 4096


def splitmix64(master_seed, index):
    z = (int(master_seed) + (int(index) + 1) * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def replicate_rng(master_seed, index):
    return make_rng(splitmix64(master_seed, index))


class UniformStream:
    """Uniform [0, 1) variates drawn from a generator in fixed blocks."""

    def __init__(self, rng, block_size=BLOCK_SIZE):
        self.rng = rng
        self.block_size = block_size
        self._block = rng.random(block_size).tolist()
        self._pos = 0

    def next(self):
        if self._pos == self.block_size:
            self._block = self.rng.random(self.block_size).tolist()
            self._pos = 0
        u = self._block[self._pos]
        self._pos += 1
        return u

    def exponential(self, rate):
        # 1 - u lies in (0, 1]
        return -math.log(1.0 - self.next()) / rate
