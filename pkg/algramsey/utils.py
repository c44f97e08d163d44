import hashlib
import math
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from algramsey.errors import Overflow

MASK64 = (1 << 64) - 1
INT64_MAX = (1 << 63) - 1

# symmetry_check switches from exhaustive to sampled above this many oriented tuples
EXHAUSTIVE_SYMMETRY_LIMIT = 10**6
SAMPLED_SYMMETRY_TUPLES = 2000

DEFAULT_TUPLE_BUDGET = 10**7
DEFAULT_TENSOR_BUDGET = 10**7
DEFAULT_SEARCH_BUDGET = 10**6


def binomial(n: int, k: int) -> int:
    """
    Checked binomial coefficient.

    Args:
        n (int): Population size, n >= 0.
        k (int): Selection size.

    Returns:
        int: C(n, k), or 0 when k is outside [0, n].

    Raises:
        Overflow: If the result does not fit a signed 64-bit integer.
    """
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    value = math.comb(n, k)
    if value > INT64_MAX:
        raise Overflow(f"C({n}, {k}) exceeds 64-bit range", needed=value, budget=INT64_MAX)
    return value


def frac_str(value: Fraction | int) -> str:
    """Serialize an exact rational as "num/den"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(value) -> Fraction:
    """
    Read a rational from a Fraction, int, "num/den" or decimal string, or float.

    Floats go through their shortest repr so 0.1 becomes 1/10 rather than a binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"not a rational: {value!r}")


def ceil_fraction(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


# ---------------------------------------------------------------------------
# seeded randomness: one root seed, child seeds derived by fixed hashing
# ---------------------------------------------------------------------------


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _label_word(label) -> int:
    if isinstance(label, int):
        return label & MASK64
    digest = hashlib.blake2b(str(label).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(seed: int, *labels) -> int:
    """
    Derive a child seed from a root seed and a path of labels.

    Args:
        seed (int): Root 64-bit seed (negative values are reduced mod 2^64).
        labels: Strings or integers naming the consumer, e.g. ("dense_clique", attempt).

    Returns:
        int: Child seed in [0, 2^64).
    """
    state = splitmix64(seed & MASK64)
    for label in labels:
        state = splitmix64(state ^ _label_word(label))
    return state


def make_rng(seed: int, *labels) -> np.random.Generator:
    """Return a numpy Generator seeded from `derive_seed(seed, *labels)`."""
    return np.random.default_rng(derive_seed(seed, *labels))


# ---------------------------------------------------------------------------
# python-int bitsets
# ---------------------------------------------------------------------------


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of `mask` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


# ---------------------------------------------------------------------------
# console formatting
# ---------------------------------------------------------------------------


def section(title: str) -> str:
    """Two-space indented header with an underline, the console style used throughout."""
    return f"\n  {title}\n  {'-' * len(title)}"


def mask_from_bools(flags: np.ndarray) -> int:
    """Pack a 1-D boolean array into a python-int bitset (index i -> bit i)."""
    flags = np.asarray(flags, dtype=bool)
    if not flags.size:
        return 0
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


# ---------------------------------------------------------------------------
# progress observers
# ---------------------------------------------------------------------------


class Observable:
    """Base for long-running routines (extraction loops, partition rounds, sweeps)."""

    def __init__(self):
        # observers receive (event_type, payload) at every checkpoint
        self.observers = []

    def add_observer(self, observer):
        """Register a progress observer.

        Args:
            observer: Callable accepting (event_type: str, payload: dict). It may raise to abort.
        """
        if not hasattr(self, "observers"):
            self.observers = []
        self.observers.append(observer)

    def _notify(self, event_type: str, payload: dict):
        """Send a checkpoint to every observer; observer exceptions propagate."""
        for observer in getattr(self, "observers", []):
            observer(event_type, payload)
