"""Counter-based random streams keyed by sample index.

Every sample owns an independent Philox-4x64-10 substream whose key is
(seed, sample_index).  Uniform variates for a sample therefore never
depend on how samples are split across workers, which is what makes
byte-identical parallel runs possible.  The vectorized generator here
reproduces numpy's Generator(Philox(key=[seed, index])).uniform()
bit for bit; the Generator constructors are kept for consumers that
need a full stream object (grid drawing, tests).
"""

from __future__ import annotations

import numpy as np

__all__ = ["BLOCK", "substream_uniforms", "sample_stream", "grid_stream"]

#: Fixed reduction granularity of all censuses.  Partial results are
#: folded in block order, so this constant participates in the
#: determinism contract and must not be made configurable.
BLOCK = 65536

_U64 = np.uint64
_LO32 = _U64(0xFFFFFFFF)
_SH32 = _U64(32)
_MULT0 = _U64(0xD2E7470EE14C6C93)
_MULT1 = _U64(0xCA5A826395121157)
_WEYL0 = _U64(0x9E3779B97F4A7C15)
_WEYL1 = _U64(0xBB67AE8584CAA73B)


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    return seed


def _mulhilo(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # 64x64 -> 128 bit product from 32-bit limbs; uint64 wraps by design.
    al = a & _LO32
    ah = a >> _SH32
    bl = b & _LO32
    bh = b >> _SH32
    t1 = ah * bl
    t2 = al * bh
    lo = a * b
    carry = (((al * bl) >> _SH32) + (t1 & _LO32) + (t2 & _LO32)) >> _SH32
    hi = ah * bh + (t1 >> _SH32) + (t2 >> _SH32) + carry
    return hi, lo


def _philox_round10(c0, c1, c2, c3, k0, k1):
    for _ in range(10):
        hi0, lo0 = _mulhilo(c0, _MULT0)
        hi1, lo1 = _mulhilo(c2, _MULT1)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = k0 + _WEYL0
        k1 = k1 + _WEYL1
    return c0, c1, c2, c3


def substream_uniforms(seed: int, start: int, count: int, width: int = 10) -> np.ndarray:
    """Uniform [0, 1) variates for samples start .. start + count - 1.

    Row i holds the first `width` uniforms of the substream keyed by
    (seed, start + i), exactly as numpy's Philox generator would draw
    them one sample at a time.
    """
    seed = _check_seed(seed)
    index = np.arange(start, start + count, dtype=np.uint64)
    key0 = np.full(count, seed, dtype=np.uint64)
    blocks = -(-width // 4)
    words = []
    for counter in range(1, blocks + 1):
        c0 = np.full(count, counter, dtype=np.uint64)
        zero = np.zeros(count, dtype=np.uint64)
        words.extend(
            _philox_round10(c0, zero, zero.copy(), zero.copy(), key0.copy(), index.copy())
        )
    raw = np.stack(words, axis=1)[:, :width]
    return (raw >> np.uint64(11)) * 2.0**-53


def _key(seed: int, index: int) -> np.ndarray:
    # An explicit uint64 array: a plain list would go through numpy's
    # default promotion, which loses exactness for values near 2^64.
    return np.array([_check_seed(seed), int(index)], dtype=np.uint64)


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Full stream object for one sample's substream."""
    return np.random.Generator(np.random.Philox(key=_key(seed, index)))


def grid_stream(seed: int, index: int) -> np.random.Generator:
    """Auxiliary substream for per-sample grid drawing.

    Starts the same keyed Philox at counter 2^64, a region the matrix
    draws (which start at counter zero) can never reach.
    """
    return np.random.Generator(np.random.Philox(key=_key(seed, index), counter=2**64))
