"""Counter-based randomness keyed by (seed, trial, vertex, purpose, ordinal).

Every random decision in a simulation is a pure function of its address, so
trials can run in any order, replays are bit-identical, and two runs that
share a seed draw literally the same coins for the same (vertex, ordinal)
pair.  That last property is what makes delayed/undelayed couplings exact.

Key derivation happens in plain Python ints masked to 64 bits (numpy uint64
scalars warn on overflow, arrays wrap silently), and the per-round draws are
vectorized over uint64 arrays.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# purpose tags; values are arbitrary but fixed so streams never collide
PURPOSE_INITIAL = 0x11
PURPOSE_COIN = 0x22
PURPOSE_TARGET = 0x33
PURPOSE_FEEDBACK = 0x44

_G = np.uint64(_GOLDEN)
_M1 = np.uint64(_MIX1)
_M2 = np.uint64(_MIX2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 2.0 ** -53


def mix64(x: int) -> int:
    """Finalizer of the splitmix64 generator, on Python ints mod 2**64."""
    x &= _MASK
    x ^= x >> 30
    x = (x * _MIX1) & _MASK
    x ^= x >> 27
    x = (x * _MIX2) & _MASK
    x ^= x >> 31
    return x


def derive_key(*words: int) -> int:
    """Hash a tuple of ints into one 64-bit key, order-sensitive."""
    h = 0x61C8864680B583EB
    for w in words:
        h = mix64((h + (w & _MASK) * _GOLDEN) & _MASK)
    return h


def _mix_array(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> _S30)
    x = x * _M1
    x = x ^ (x >> _S27)
    x = x * _M2
    return x ^ (x >> _S31)


class TrialRandomness:
    """All random draws for one trial of one experiment.

    Draws are addressed, never sequential: asking twice for the same
    (purpose, vertex, ordinal) returns the same value, and no draw depends
    on which other draws happened before it.
    """

    def __init__(self, master_seed: int, trial: int):
        self.master_seed = int(master_seed)
        self.trial = int(trial)
        key = derive_key(master_seed, trial)
        self._keys = {
            purpose: mix64(key ^ ((purpose * _GOLDEN) & _MASK))
            for purpose in (
                PURPOSE_INITIAL,
                PURPOSE_COIN,
                PURPOSE_TARGET,
                PURPOSE_FEEDBACK,
            )
        }

    def _hash(self, purpose: int, vertices: np.ndarray, ordinals: np.ndarray) -> np.ndarray:
        v = np.asarray(vertices, dtype=np.uint64)
        o = np.asarray(ordinals, dtype=np.uint64)
        h = _mix_array(np.uint64(self._keys[purpose]) ^ (v * _G))
        return _mix_array(h ^ (o * _G))

    def _uniforms(self, purpose: int, vertices: np.ndarray, ordinals: np.ndarray) -> np.ndarray:
        h = self._hash(purpose, vertices, ordinals)
        return (h >> _S11).astype(np.float64) * _INV53

    def coin_uniforms(self, vertices: np.ndarray, ordinals: np.ndarray) -> np.ndarray:
        """Uniform [0,1) driving the delivery coin of each (vertex, ordinal)."""
        return self._uniforms(PURPOSE_COIN, vertices, ordinals)

    def feedback_uniforms(self, vertices: np.ndarray, ordinals: np.ndarray) -> np.ndarray:
        """Uniform [0,1) driving the feedback coin, independent of delivery."""
        return self._uniforms(PURPOSE_FEEDBACK, vertices, ordinals)

    def initial_positions(self, vertices: np.ndarray, degrees: np.ndarray) -> np.ndarray:
        """Starting offset of each vertex in its cyclic neighbor list."""
        h = self._hash(PURPOSE_INITIAL, vertices, np.zeros(len(vertices), dtype=np.uint64))
        return (h % np.asarray(degrees, dtype=np.uint64)).astype(np.int64)

    def target_indices(
        self, vertices: np.ndarray, ordinals: np.ndarray, degrees: np.ndarray
    ) -> np.ndarray:
        """Fresh uniform neighbor index for each (vertex, ordinal) attempt."""
        h = self._hash(PURPOSE_TARGET, vertices, ordinals)
        return (h % np.asarray(degrees, dtype=np.uint64)).astype(np.int64)
