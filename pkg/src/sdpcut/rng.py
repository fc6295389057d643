"""Counter-based deterministic pseudo-random numbers (SplitMix64).

Every draw is a pure function of (seed, counter), so streams are
bit-reproducible across runs, platforms, and languages.  The generator is
fully written out:

    state   : s_i = (seed + (i + 1) * 0x9E3779B97F4A7C15)          mod 2^64
    output  : z = s_i
              z = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9           mod 2^64
              z = (z XOR (z >> 27)) * 0x94D049BB133111EB           mod 2^64
              z = z XOR (z >> 31)
    uniform : u_i = (z >> 11) * 2^-53                              in [0, 1)

Substream derivation (for per-trial streams) chains the same mixer:

    derive_seed(seed, k_1, ..., k_m):
        s = seed
        for k in (k_1, ..., k_m):
            s = mix64( s XOR mix64((k + 0x9E3779B97F4A7C15) mod 2^64) )
        return s
"""

from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

_U_GOLDEN = np.uint64(_GOLDEN)
_U_MIX_A = np.uint64(_MIX_A)
_U_MIX_B = np.uint64(_MIX_B)
_INV_2_53 = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 output function on a Python integer (exact, mod 2^64)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps mod 2^64, matching mix64 exactly
    z = (z ^ (z >> np.uint64(30))) * _U_MIX_A
    z = (z ^ (z >> np.uint64(27))) * _U_MIX_B
    return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a substream seed from integer keys (trial index, cell index, ...)."""
    s = int(seed) & _MASK
    for k in keys:
        s = mix64(s ^ mix64((int(k) + _GOLDEN) & _MASK))
    return s


def raw_block(seed: int, start: int, count: int) -> np.ndarray:
    """The uint64 outputs for counters start..start+count-1 of this seed."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    state = idx * _U_GOLDEN + np.uint64(int(seed) & _MASK)
    return _mix64_array(state)


class Stream:
    """Sequential view over one seed's counter sequence."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK
        self._pos = 0

    def uniforms(self, count: int) -> np.ndarray:
        """Next `count` doubles, i.i.d. uniform on [0, 1)."""
        block = raw_block(self.seed, self._pos, count)
        self._pos += count
        return (block >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])

    def index(self, n: int) -> int:
        """Uniform index in [0, n) via floor(u * n)."""
        return min(int(self.uniform() * n), n - 1)

    def spawn(self, *keys: int) -> "Stream":
        """Independent substream identified by integer keys."""
        return Stream(derive_seed(self.seed, *keys))
