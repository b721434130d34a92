"""Canonical de Bruijn sequences and cyclic occurrence counting."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .digits import BudgetExceededError, as_digits, to_str

DEFAULT_MAX_SYMBOLS = 1 << 28


@dataclass(frozen=True, eq=False)
class DeBruijnSequence:
    """Order-``order`` de Bruijn sequence over the alphabet ``0..alphabet_size-1``.

    ``digits`` is a read-only uint8 array of length ``alphabet_size ** order``.
    """

    alphabet_size: int
    order: int
    digits: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.digits.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DeBruijnSequence):
            return NotImplemented
        return (
            self.alphabet_size == other.alphabet_size
            and self.order == other.order
            and np.array_equal(self.digits, other.digits)
        )

    def __hash__(self) -> int:
        return hash((self.alphabet_size, self.order, self.digits.tobytes()))

    def __str__(self) -> str:
        return to_str(self.digits)

    def as_int(self) -> int:
        """Integer value of the sequence read as a base-k numeral."""
        from .digits import to_int

        return to_int(self.digits, self.alphabet_size)


def _fkm(k: int, n: int) -> np.ndarray:
    # Fredricksen-Kessler-Maiorana: concatenate, in lexicographic order, the
    # Lyndon words whose length divides n.
    out = np.empty(k**n, dtype=np.uint8)
    pos = 0
    a = [0] * (n + 1)
    t = 1
    # iterative form of the standard recursive generator
    p = 1
    a[1] = 0
    while True:
        if n % p == 0:
            out[pos : pos + p] = a[1 : p + 1]
            pos += p
        # next prenecklace in lexicographic order
        t = n
        while t > 0 and a[t] == k - 1:
            t -= 1
        if t == 0:
            break
        a[t] += 1
        for j in range(t + 1, n + 1):
            a[j] = a[j - t]
        p = t
    assert pos == k**n
    return out


@lru_cache(maxsize=32)
def _cached(k: int, n: int) -> DeBruijnSequence:
    digits = _fkm(k, n)
    digits.setflags(write=False)
    return DeBruijnSequence(k, n, digits)


def generate_debruijn(k: int, n: int, max_symbols: int = DEFAULT_MAX_SYMBOLS) -> DeBruijnSequence:
    """Lexicographically least de Bruijn sequence B(k, n).

    Raises ``ValueError`` for ``k < 2`` or ``n < 1`` and
    ``BudgetExceededError`` when ``k**n`` exceeds ``max_symbols``.
    """
    if k < 2:
        raise ValueError(f"alphabet size must be at least 2, got {k}")
    if k > 256:
        raise ValueError("alphabet sizes above 256 do not fit in uint8 digits")
    if n < 1:
        raise ValueError(f"order must be at least 1, got {n}")
    if k**n > max_symbols:
        raise BudgetExceededError(f"B({k},{n}) has {k**n} symbols, cap is {max_symbols}")
    return _cached(k, n)


def cyclic_occurrences(seq: DeBruijnSequence, w) -> int:
    """Number of start positions whose cyclic window equals ``w``."""
    pattern = as_digits(w, base=seq.alphabet_size)
    L = len(seq)
    m = pattern.size
    if m == 0 or m > L:
        raise ValueError(f"pattern length must be in [1, {L}], got {m}")
    ext = np.concatenate([seq.digits, seq.digits[: m - 1]])
    windows = np.lib.stride_tricks.sliding_window_view(ext, m)
    return int(np.count_nonzero((windows == pattern).all(axis=1)))


def cyclic_window_counts(seq: DeBruijnSequence, m: int) -> np.ndarray:
    """Counts of every length-``m`` cyclic window, indexed by the window's base-k value."""
    k = seq.alphabet_size
    if not 1 <= m <= len(seq):
        raise ValueError(f"window length must be in [1, {len(seq)}], got {m}")
    ext = np.concatenate([seq.digits, seq.digits[: m - 1]]).astype(np.int64)
    codes = np.zeros(len(seq), dtype=np.int64)
    for j in range(m):
        codes = codes * k + ext[j : j + len(seq)]
    return np.bincount(codes, minlength=k**m)
