"""Deterministic pseudo-randomness for simulations and oracles.

Everything downstream draws from xoshiro256** generators seeded through
splitmix64.  A trial owns one master seed; every agent gets its own
substream derived from that master, so agent i's trajectory depends only
on (master, i) and never on how many other agents exist or in which
order they are stepped.

Substream layout per trial:
  index 0          trial-level draws (placement, tie-breaking)
  index 1 + i      movement stream of agent i

The same derivation is re-implemented in the numba kernels; a test pins
the two against each other word for word.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """splitmix64 finalizer: a 64-bit bijective scrambler."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def substream_seed(master: int, index: int) -> int:
    """Seed of substream `index` under `master`.

    Distinct indices give independent-looking seeds; index is shifted by
    one so substream 0 never collides with the master itself.
    """
    if index < 0:
        raise ValueError("substream index must be >= 0")
    return mix64((master + GOLDEN * (index + 1)) & MASK64)


def trial_seed(base_seed: int, n: int, m: int, trial: int) -> int:
    """Master seed of one sweep trial, stable across cell orderings.

    Folding (n, m, trial) through mix64 keeps every cell of a sweep on
    its own seed even when the same base_seed is reused.
    """
    h = mix64(n & MASK64)
    h = mix64(h ^ (m & MASK64))
    h = mix64(h ^ (trial & MASK64))
    return (base_seed ^ h) & MASK64


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Stream:
    """xoshiro256** generator with explicit 64-bit state.

    Pure-Python reference implementation; the hot loops run an identical
    generator inside numba kernels.
    """

    __slots__ = ("_s",)

    def __init__(self, seed: int):
        s = seed & MASK64
        words = []
        for _ in range(4):
            s = (s + GOLDEN) & MASK64
            words.append(mix64(s))
        self._s = words

    @classmethod
    def substream(cls, master: int, index: int) -> "Stream":
        return cls(substream_seed(master, index))

    def state(self) -> tuple[int, int, int, int]:
        return tuple(self._s)

    def next_u64(self) -> int:
        s = self._s
        out = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return out

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def randint(self, k: int) -> int:
        """Integer in [0, k) by modulo reduction.

        The modulo bias is below 2**-50 for every k used here (k <= 2**32),
        which is far under anything the statistics can resolve.  Kept as
        plain modulo so the kernel-side draw matches bit for bit.
        """
        if k <= 0:
            raise ValueError("randint needs k >= 1")
        return self.next_u64() % k
