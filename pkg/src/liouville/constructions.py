"""Digit streams for the Liouville constructions and their stage schedules.

Four constructions are supported:

``psi1``     sum of 2**-(i!) for i >= 1
``psi2``     sum of i * 2**-(i!) for i >= 3
``alpha``    stage i is i**i copies of the de Bruijn sequence B(k, i)
``diluted``  stage i is i**i copies of 0**((n-m) k**i) followed by B(k, i)**m

Digit ``j`` (0-indexed) carries weight ``base**-(j+1)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .debruijn import generate_debruijn
from .digits import check_budget


class Kind(str, enum.Enum):
    LIOUVILLE_PSI1 = "psi1"
    DISJUNCTIVE_PSI2 = "psi2"
    NORMAL_ALPHA = "alpha"
    DILUTED_ALPHA = "diluted"


@dataclass(frozen=True)
class ConstructionRecipe:
    kind: Kind
    base: int = 2
    dilution: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.base < 2:
            raise ValueError(f"base must be at least 2, got {self.base}")
        if self.kind in (Kind.LIOUVILLE_PSI1, Kind.DISJUNCTIVE_PSI2) and self.base != 2:
            raise ValueError(f"{self.kind.value} is only defined in base 2")
        if self.kind is Kind.DILUTED_ALPHA:
            if self.dilution is None:
                raise ValueError("diluted construction needs a dilution pair m/n")
            m, n = self.dilution
            if not 0 < m < n:
                raise ValueError(f"dilution must satisfy 0 < m < n, got {m}/{n}")
            if math.gcd(m, n) != 1:
                raise ValueError(f"dilution must be in lowest terms, got {m}/{n}")
        elif self.dilution is not None:
            raise ValueError(f"{self.kind.value} takes no dilution pair")

    @property
    def first_stage(self) -> int:
        return 3 if self.kind is Kind.DISJUNCTIVE_PSI2 else 1

    @property
    def name(self) -> str:
        if self.kind is Kind.DILUTED_ALPHA:
            m, n = self.dilution
            return f"diluted[{m}/{n}]" + (f"@{self.base}" if self.base != 2 else "")
        return self.kind.value + (f"@{self.base}" if self.base != 2 else "")


def parse_dilution(text: str) -> tuple[int, int]:
    try:
        m, n = (int(part) for part in text.split("/"))
    except ValueError:
        raise ValueError(f"dilution must look like M/N, got {text!r}") from None
    return m, n


# ---------------------------------------------------------------- schedules


def _period_block(recipe: ConstructionRecipe, i: int) -> np.ndarray:
    """Recurring block of stage ``i`` for the de Bruijn based constructions."""
    return _period_block_cached(recipe.kind, recipe.base, recipe.dilution, i)


@lru_cache(maxsize=64)
def _period_block_cached(kind, base, dilution, i):
    b = generate_debruijn(base, i).digits
    if kind is Kind.NORMAL_ALPHA:
        return b
    m, n = dilution
    block = np.concatenate([np.zeros((n - m) * base**i, dtype=np.uint8), np.tile(b, m)])
    block.setflags(write=False)
    return block


def period_length(recipe: ConstructionRecipe, i: int) -> int:
    """Length of the recurring block of stage ``i`` (k**i, or n*k**i when diluted)."""
    if recipe.kind is Kind.NORMAL_ALPHA:
        return recipe.base**i
    if recipe.kind is Kind.DILUTED_ALPHA:
        return recipe.dilution[1] * recipe.base**i
    raise ValueError(f"{recipe.kind.value} has no recurring stage block")


class StageSchedule:
    """Big-integer stage boundaries b_0 = 0 < b_1 < b_2 < ... of a construction."""

    def __init__(self, recipe: ConstructionRecipe):
        self.recipe = recipe
        self._bounds = [0]

    def _stage_length(self, i: int) -> int:
        kind = self.recipe.kind
        if kind in (Kind.LIOUVILLE_PSI1, Kind.DISJUNCTIVE_PSI2):
            return math.factorial(i) - math.factorial(i - 1) if i > 1 else 1
        return period_length(self.recipe, i) * i**i

    def boundary(self, i: int) -> int:
        if i < 0:
            raise ValueError(f"stage index must be nonnegative, got {i}")
        while len(self._bounds) <= i:
            s = len(self._bounds)
            self._bounds.append(self._bounds[-1] + self._stage_length(s))
        return self._bounds[i]

    def boundaries(self, upto: int) -> list[int]:
        self.boundary(upto)
        return self._bounds[: upto + 1]

    def stage_of(self, j: int) -> int:
        """Stage ``i`` with ``b_{i-1} <= j < b_i``."""
        if j < 0:
            raise IndexError(j)
        i = 1
        while self.boundary(i) <= j:
            i += 1
        return i


def stage_boundary(recipe: ConstructionRecipe, i: int) -> int:
    """Exact prefix length at the end of stage ``i``."""
    return StageSchedule(recipe).boundary(i)


# ---------------------------------------------------------------- streams


def _psi2_span(i: int) -> tuple[int, int]:
    """Digit positions [start, stop) holding the binary numeral of ``i``."""
    stop = math.factorial(i)
    start = stop - i.bit_length()
    # numerals never touch: the previous one ends before (i-1)!
    assert start >= math.factorial(i - 1), f"numeral of {i} overlaps stage {i - 1}"
    return start, stop


class DigitStream:
    """Seekable, resumable digit stream of a construction.

    ``digit(j)`` is a pure function of the recipe and ``j``; iteration keeps
    a cursor that ``seek`` can move.
    """

    def __init__(self, recipe: ConstructionRecipe):
        self.recipe = recipe
        self.schedule = StageSchedule(recipe)
        self.position = 0

    @property
    def base(self) -> int:
        return self.recipe.base

    @property
    def stage(self) -> int:
        return self.schedule.stage_of(self.position)

    def __repr__(self) -> str:
        return f"DigitStream({self.recipe.name}, position={self.position})"

    def digit(self, j: int) -> int:
        if j < 0:
            raise IndexError(j)
        kind = self.recipe.kind
        if kind is Kind.LIOUVILLE_PSI1:
            i, f = 1, 1
            while f < j + 1:
                i += 1
                f *= i
            return int(f == j + 1)
        if kind is Kind.DISJUNCTIVE_PSI2:
            i, f = 1, 1
            while f <= j:
                i += 1
                f *= i
            if i < 3:
                return 0
            start, stop = _psi2_span(i)
            if j < start:
                return 0
            return (i >> (stop - 1 - j)) & 1
        i = self.schedule.stage_of(j)
        offset = j - self.schedule.boundary(i - 1)
        block = _period_block(self.recipe, i)
        return int(block[offset % block.size])

    def range(self, start: int, stop: int) -> np.ndarray:
        """Digits ``start .. stop-1`` as a uint8 array."""
        if start < 0 or stop < start:
            raise ValueError(f"bad digit range [{start}, {stop})")
        check_budget(stop - start)
        out = np.zeros(stop - start, dtype=np.uint8)
        if stop == start:
            return out
        kind = self.recipe.kind
        if kind is Kind.LIOUVILLE_PSI1:
            i, f = 1, 1
            while f <= stop:
                if start <= f - 1 < stop:
                    out[f - 1 - start] = 1
                i += 1
                f *= i
            return out
        if kind is Kind.DISJUNCTIVE_PSI2:
            i = 3
            while math.factorial(i) - i.bit_length() < stop:
                lo, hi = _psi2_span(i)
                bits = np.array([int(c) for c in format(i, "b")], dtype=np.uint8)
                a, b = max(lo, start), min(hi, stop)
                if a < b:
                    out[a - start : b - start] = bits[a - lo : b - lo]
                i += 1
            return out
        i = self.schedule.stage_of(start)
        pos = start
        while pos < stop:
            lo, hi = self.schedule.boundary(i - 1), self.schedule.boundary(i)
            end = min(hi, stop)
            block = _period_block(self.recipe, i)
            P = block.size
            first = (pos - lo) % P
            count = end - pos
            reps = (first + count + P - 1) // P
            out[pos - start : end - start] = np.tile(block, reps)[first : first + count]
            pos = end
            i += 1
        return out

    def stage_digits(self, i: int) -> np.ndarray:
        return self.range(self.schedule.boundary(i - 1), self.schedule.boundary(i))

    def seek(self, j: int) -> None:
        if j < 0:
            raise ValueError(j)
        self.position = j

    def read(self, count: int) -> np.ndarray:
        out = self.range(self.position, self.position + count)
        self.position += count
        return out

    def __iter__(self):
        return self

    def __next__(self) -> int:
        # refill a small buffer so iteration stays O(1) amortized per digit
        buf = getattr(self, "_buf", None)
        if buf is None or not buf[0] <= self.position < buf[0] + buf[1].size:
            self._buf = buf = (self.position, self.range(self.position, self.position + 4096))
        d = int(buf[1][self.position - buf[0]])
        self.position += 1
        return d


def make_stream(recipe: ConstructionRecipe) -> DigitStream:
    return DigitStream(recipe)


def take_prefix(stream: DigitStream, length: int) -> np.ndarray:
    """First ``length`` digits of ``stream``; does not move its cursor."""
    if length < 0:
        raise ValueError(f"prefix length must be nonnegative, got {length}")
    return stream.range(0, length)
