"""Pauli error sampling with deterministic, shardable randomness.

Sub-seeds come from the splitmix64 stream: shard ``k`` of master seed ``s``
uses output ``k`` of splitmix64 seeded at ``s``, i.e.
``mix64(s + (k+1) * 0x9E3779B97F4A7C15)`` with the standard finalizer.
Each shard then drives an independent numpy PCG64 generator, so identical
(seed, shard_index) pairs reproduce identical sample streams on any
platform regardless of shard count or scheduling.

Sampling uses one uniform draw per qubit with fixed inverse-CDF thresholds
(X, then Y, then Z), so a stream is reproducible independent of which
channel parameters happen to be zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidChannel, InvalidParams

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """Output of the splitmix64 finalizer for the given 64-bit state."""
    z = state & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class RngSeed:
    seed: int
    shard_index: int = 0
    shard_count: int = 1

    def __post_init__(self):
        if not (0 <= self.shard_index < self.shard_count):
            raise InvalidParams("shard_index must lie in [0, shard_count)")


def derive_shard_seed(seed: RngSeed | int, shard_index: int | None = None) -> int:
    """64-bit sub-seed for one shard; a function of (seed, shard_index) only."""
    if isinstance(seed, RngSeed):
        master, idx = seed.seed, seed.shard_index
    else:
        master, idx = seed, shard_index
    if idx is None:
        raise InvalidParams("shard_index required when seed is an integer")
    return splitmix64((master + (idx + 1) * _GAMMA) & _MASK64)


def rng_for_shard(seed: RngSeed | int, shard_index: int | None = None) -> np.random.Generator:
    return np.random.default_rng(derive_shard_seed(seed, shard_index))


@dataclass(frozen=True)
class PauliChannel:
    """Single-qubit Pauli channel acting i.i.d. on every qubit."""

    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0

    def __post_init__(self):
        ps = (self.p_x, self.p_y, self.p_z)
        if any(p < 0 or p > 1 for p in ps) or sum(ps) > 1 + 1e-12:
            raise InvalidChannel(f"invalid channel probabilities {ps}")

    @property
    def p_total(self) -> float:
        return self.p_x + self.p_y + self.p_z

    def z_marginal(self) -> float:
        """Probability that a qubit picks up a Z component (Y or Z)."""
        return self.p_y + self.p_z

    def x_marginal(self) -> float:
        return self.p_x + self.p_y


def dephasing(p: float) -> PauliChannel:
    return PauliChannel(0.0, 0.0, p)


def bitflip(p: float) -> PauliChannel:
    return PauliChannel(p, 0.0, 0.0)


@dataclass(frozen=True)
class ErrorPattern:
    """X/Z supports of one sampled Pauli error; a Y sets both bits."""

    x_support: np.ndarray
    z_support: np.ndarray

    @property
    def n_qubits(self) -> int:
        return self.x_support.shape[0]


def sample_error_batch(channel: PauliChannel, n_qubits: int, n_samples: int,
                       rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """(x, z) support matrices of shape (n_samples, n_qubits)."""
    u = rng.random((n_samples, n_qubits))
    tx = channel.p_x
    ty = tx + channel.p_y
    tz = ty + channel.p_z
    is_x = u < tx
    is_y = (u >= tx) & (u < ty)
    is_z = (u >= ty) & (u < tz)
    x = (is_x | is_y).astype(np.uint8)
    z = (is_y | is_z).astype(np.uint8)
    return x, z


def sample_error(channel: PauliChannel, n_qubits: int,
                 rng: np.random.Generator) -> ErrorPattern:
    x, z = sample_error_batch(channel, n_qubits, 1, rng)
    return ErrorPattern(x[0], z[0])
