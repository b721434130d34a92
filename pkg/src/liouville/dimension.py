"""Block frequencies, Shannon entropy and finite-state dimension estimates.

Normalized rates use logarithms to the alphabet size, so they lie in [0, 1]
for every base; entropies themselves are reported in bits.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .constructions import ConstructionRecipe, StageSchedule, make_stream, take_prefix
from .digits import BudgetExceededError, as_digits, max_digits

# k**m table entries; covers m = 16 for k = 2 and m = 4 for k = 10
MAX_TABLE_SIZE = 1 << 16


class Mode(str, enum.Enum):
    SLIDING = "sliding"
    DISJOINT = "disjoint"


@dataclass(frozen=True, eq=False)
class FrequencyTable:
    """Counts of every length-``block_size`` block, indexed by its base-k value."""

    block_size: int
    mode: Mode
    base: int
    counts: np.ndarray = field(repr=False)
    window_total: int

    def __getitem__(self, w) -> int:
        return int(self.counts[_encode(as_digits(w, base=self.base), self.base)])

    def frequencies(self) -> np.ndarray:
        return self.counts / self.window_total

    def as_dict(self) -> dict[str, int]:
        """Nonzero counts keyed by the block written as a digit string."""
        if self.base > 10:
            raise ValueError("string keys need base <= 10")
        out = {}
        for code in np.flatnonzero(self.counts).tolist():
            key = np.base_repr(code, self.base).rjust(self.block_size, "0")
            out[key] = int(self.counts[code])
        return out


def _encode(w: np.ndarray, base: int) -> int:
    code = 0
    for d in w.tolist():
        code = code * base + d
    return code


def _infer_base(*arrays: np.ndarray) -> int:
    top = max((int(a.max()) for a in arrays if a.size), default=1)
    return max(2, top + 1)


def count_occurrences(w, x, base: int | None = None) -> int:
    """Sliding (overlapping, non-cyclic) occurrences of ``w`` in ``x``."""
    w = as_digits(w, base=base)
    x = as_digits(x, base=base)
    if not 1 <= w.size <= x.size:
        raise ValueError(f"need 1 <= |w| <= |x|, got |w|={w.size}, |x|={x.size}")
    windows = np.lib.stride_tricks.sliding_window_view(x, w.size)
    return int(np.count_nonzero((windows == w).all(axis=1)))


def block_codes(x: np.ndarray, m: int, base: int, mode: Mode, cyclic: bool = False) -> np.ndarray:
    """Base-k value of every counted length-``m`` window of ``x``."""
    mode = Mode(mode)
    if mode is Mode.DISJOINT:
        blocks = x[: (x.size // m) * m].reshape(-1, m).astype(np.int64)
        weights = base ** np.arange(m - 1, -1, -1, dtype=np.int64)
        return blocks @ weights
    src = np.concatenate([x, x[: m - 1]]) if cyclic else x
    n = x.size if cyclic else x.size - m + 1
    codes = np.zeros(n, dtype=np.int64)
    for j in range(m):
        codes *= base
        codes += src[j : j + n]
    return codes


def _table_size(base: int, m: int) -> int:
    size = base**m
    if size > MAX_TABLE_SIZE:
        raise BudgetExceededError(f"{base}**{m} block table exceeds {MAX_TABLE_SIZE} entries")
    return size


def block_frequencies(
    x, m: int, mode: Mode | str = Mode.SLIDING, base: int | None = None, cyclic: bool = False
) -> FrequencyTable:
    """Exact length-``m`` block counts of ``x``.

    Sliding mode counts the ``|x|-m+1`` overlapping windows (``|x|`` windows
    when ``cyclic``); disjoint mode parses ``x`` into ``|x|//m`` blocks.
    """
    mode = Mode(mode)
    x = as_digits(x, base=base)
    if m < 1:
        raise ValueError(f"block size must be positive, got {m}")
    if x.size < m:
        raise ValueError(f"string of length {x.size} has no blocks of size {m}")
    if cyclic and mode is Mode.DISJOINT:
        raise ValueError("cyclic counting only applies to sliding windows")
    base = _infer_base(x) if base is None else base
    size = _table_size(base, m)
    codes = block_codes(x, m, base, mode, cyclic)
    return FrequencyTable(m, mode, base, np.bincount(codes, minlength=size), int(codes.size))


def entropy_of_counts(counts: np.ndarray, log_base: float = 2) -> float:
    c = counts[counts > 0].astype(np.float64)
    total = c.sum()
    if total <= 0:
        raise ValueError("entropy of an empty table")
    p = c / total
    return float(-(p * np.log(p)).sum() / math.log(log_base))


def shannon_entropy(table: FrequencyTable, log_base: float = 2) -> float:
    """Entropy of the table's empirical distribution; 0 log(1/0) counts as 0."""
    if table.window_total <= 0:
        raise ValueError("table has no windows")
    return entropy_of_counts(table.counts, log_base)


# ---------------------------------------------------------------- rate profiles


@dataclass(frozen=True)
class RateEntry:
    prefix_length: int
    m: int
    mode: str
    entropy_bits: float
    normalized_rate: float


@dataclass
class EntropyReport:
    """Sampled block-entropy trajectory of one digit sequence.

    ``lower`` and ``upper`` hold the min and max normalized rate over the
    sampled prefixes, keyed ``"<mode>:<m>"``; ``dimension_estimate`` is the
    smallest sampled rate over all ``m`` per mode.  All three are finite-data
    estimates of liminf/limsup quantities, not the limits themselves.
    """

    source: str
    base: int
    m_max: int
    prefix_lengths: list[int]
    entries: list[RateEntry]
    lower: dict[str, float]
    upper: dict[str, float]
    dimension_estimate: dict[str, float]
    strong_dimension_estimate: dict[str, float]

    def rate(self, prefix_length: int, m: int, mode: Mode | str = Mode.SLIDING) -> float:
        mode = Mode(mode).value
        for e in self.entries:
            if e.prefix_length == prefix_length and e.m == m and e.mode == mode:
                return e.normalized_rate
        raise KeyError((prefix_length, m, mode))

    def as_json(self) -> dict:
        return {
            "source": self.source,
            "base": self.base,
            "m_max": self.m_max,
            "prefix_lengths": list(self.prefix_lengths),
            "entries": [asdict(e) for e in self.entries],
            "lower_estimate": self.lower,
            "upper_estimate": self.upper,
            "dimension_estimate": self.dimension_estimate,
            "strong_dimension_estimate": self.strong_dimension_estimate,
        }


def profile_digits(
    x, base: int, m_max: int, prefix_lengths: list[int] | None = None, source: str = "digits"
) -> EntropyReport:
    """Normalized block-entropy rates of ``x`` at each sampled prefix length."""
    x = as_digits(x, base=base)
    if prefix_lengths is None:
        prefix_lengths = [x.size]
    prefix_lengths = [int(p) for p in prefix_lengths]
    if prefix_lengths != sorted(prefix_lengths):
        raise ValueError("prefix lengths must be ascending")
    if not prefix_lengths or prefix_lengths[-1] > x.size:
        raise ValueError(f"prefix lengths must be nonempty and at most {x.size}")
    if m_max < 1 or m_max > prefix_lengths[0]:
        raise ValueError(f"m_max must be in [1, {prefix_lengths[0]}], got {m_max}")
    log_k = math.log2(base)
    entries = []
    for m in range(1, m_max + 1):
        size = _table_size(base, m)
        for mode in Mode:
            codes = block_codes(x[: prefix_lengths[-1]], m, base, mode)
            for L in prefix_lengths:
                n = L - m + 1 if mode is Mode.SLIDING else L // m
                h = entropy_of_counts(np.bincount(codes[:n], minlength=size))
                entries.append(RateEntry(L, m, mode.value, h, h / (m * log_k)))
    lower, upper = {}, {}
    for e in entries:
        key = f"{e.mode}:{e.m}"
        lower[key] = min(lower.get(key, math.inf), e.normalized_rate)
        upper[key] = max(upper.get(key, -math.inf), e.normalized_rate)
    dim = {mode.value: min(v for k, v in lower.items() if k.startswith(mode.value)) for mode in Mode}
    sdim = {mode.value: min(v for k, v in upper.items() if k.startswith(mode.value)) for mode in Mode}
    return EntropyReport(source, base, m_max, prefix_lengths, entries, lower, upper, dim, sdim)


def default_prefixes(recipe: ConstructionRecipe, cap: int | None = None) -> list[int]:
    """End-of-stage boundaries that fit within ``cap`` digits."""
    cap = min(max_digits(), 1 << 24) if cap is None else cap
    sched = StageSchedule(recipe)
    out = []
    i = 1
    while sched.boundary(i) <= cap:
        if sched.boundary(i) > 0:
            out.append(sched.boundary(i))
        i += 1
    return out


def entropy_rate_profile(
    recipe: ConstructionRecipe, m_max: int, prefix_lengths: list[int] | None = None
) -> EntropyReport:
    if prefix_lengths is None:
        prefix_lengths = [p for p in default_prefixes(recipe) if p >= m_max]
    x = take_prefix(make_stream(recipe), max(prefix_lengths))
    return profile_digits(x, recipe.base, m_max, prefix_lengths, source=recipe.name)


# ---------------------------------------------------------------- dilution


def _check_dilution(m: int, n: int) -> None:
    if not 0 < m < n or math.gcd(m, n) != 1:
        raise ValueError(f"dilution must be coprime with 0 < m < n, got {m}/{n}")


def stage_block_frequencies(m: int, n: int, k: int) -> tuple[float, float]:
    """Closed-form k-block frequencies in one diluted stage-k period.

    Returns (frequency of each block other than 0**k, frequency of 0**k).
    """
    _check_dilution(m, n)
    other = m / (n * 2**k)
    return other, (n - m) / n + other


def stage_entropy_closed_form(m: int, n: int, k: int) -> float:
    """Normalized k-block entropy (bits per symbol) of stage k of the m/n dilution."""
    _check_dilution(m, n)
    if k < 1:
        raise ValueError(f"stage must be positive, got {k}")
    other, zero = stage_block_frequencies(m, n, k)
    # log2(n 2^k / m) and log2(n 2^k / ((n-m) 2^k + m)) without forming 2^k twice
    log_other = k + math.log2(n / m)
    log_zero = math.log2(n) - math.log2((n - m) + m * 2.0**-k)
    return (other * (2**k - 1) * log_other + zero * log_zero) / k
