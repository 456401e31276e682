"""Counter-based hashing used wherever randomness must be keyed, not streamed.

Everything here is vectorized over ``numpy.uint64`` arrays and relies on
wrap-around multiplication, so callers never carry generator state.
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def splitmix64(x):
    """SplitMix64 finalizer applied elementwise to ``x`` (any integer array)."""
    x = np.asarray(x, dtype=np.uint64)
    # 1-d view: uint64 array ops wrap silently, 0-d scalar ops warn
    z = x.reshape(-1) + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    z = z ^ (z >> np.uint64(31))
    return z.reshape(x.shape)


def hash_keys(seed, *keys):
    """Hash a 64-bit seed together with any number of integer key arrays."""
    h = splitmix64(np.array(int(seed) & _MASK64, dtype=np.uint64))
    for k in keys:
        h = splitmix64(h ^ np.asarray(k, dtype=np.uint64))
    return h


def to_unit(h):
    """Map 64-bit hashes to doubles in [0, 1) using the top 53 bits."""
    return (np.asarray(h, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, index: int) -> int:
    """Per-replicate seed: ``seed`` xor the hash of ``index``."""
    return (int(seed) ^ int(splitmix64(np.uint64(index)))) & _MASK64
