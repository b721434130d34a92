"""Exact rationals, stage convergents and Liouville certification.

Everything here is integer arithmetic; no floating point is involved in any
certificate.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from .constructions import (
    ConstructionRecipe,
    Kind,
    StageSchedule,
    _period_block,
    make_stream,
    period_length,
    take_prefix,
)
from .digits import BudgetExceededError, check_budget, from_int, to_int

DEFAULT_MAX_STAGE = {
    Kind.LIOUVILLE_PSI1: 7,
    Kind.DISJUNCTIVE_PSI2: 7,
    Kind.NORMAL_ALPHA: 6,
    Kind.DILUTED_ALPHA: 6,
}


@dataclass(frozen=True)
class ExactRational:
    """Integer pair with a positive denominator; never reduced implicitly."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")

    def __add__(self, other: ExactRational) -> ExactRational:
        if self.denominator == other.denominator:
            return ExactRational(self.numerator + other.numerator, self.denominator)
        return ExactRational(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __sub__(self, other: ExactRational) -> ExactRational:
        return self + ExactRational(-other.numerator, other.denominator)

    def __mul__(self, other) -> ExactRational:
        if isinstance(other, int):
            return ExactRational(self.numerator * other, self.denominator)
        return ExactRational(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def _cmp(self, other) -> int:
        if isinstance(other, int):
            other = ExactRational(other, 1)
        lhs = self.numerator * other.denominator
        rhs = other.numerator * self.denominator
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        if not isinstance(other, (ExactRational, int)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    __hash__ = None

    def reduced(self) -> ExactRational:
        g = math.gcd(self.numerator, self.denominator)
        return ExactRational(self.numerator // g, self.denominator // g)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __repr__(self) -> str:
        if self.denominator.bit_length() > 256:
            return f"ExactRational(<{self.numerator.bit_length()} bits>/<{self.denominator.bit_length()} bits>)"
        return f"ExactRational({self.numerator}, {self.denominator})"


def digits_needed(q: int, base: int) -> int:
    """Smallest ``e`` with ``base**e >= q``, i.e. ceil(log_base q)."""
    if q <= 1:
        return 0
    if base == 2:
        return (q - 1).bit_length()
    e = max(0, int((q.bit_length() - 1) / math.log2(base)) - 1)
    while base**e < q:
        e += 1
    return e


def expansion_digits(r: ExactRational, base: int, count: int) -> np.ndarray:
    """First ``count`` base-``base`` digits of ``r`` in [0, 1), by exact division."""
    if not 0 <= r.numerator < r.denominator:
        raise ValueError("expansion_digits needs 0 <= r < 1")
    if count < 0:
        raise ValueError(f"digit count must be nonnegative, got {count}")
    check_budget(count)
    if base == 2:
        scaled = gmpy2.mpz(r.numerator) << count
    else:
        scaled = gmpy2.mpz(r.numerator) * gmpy2.mpz(base) ** count
    return from_int(int(scaled // r.denominator), base, count)


# ---------------------------------------------------------------- convergents


@dataclass(frozen=True)
class Convergent:
    value: ExactRational
    stage: int
    agreement_digits: int

    @property
    def q_bits(self) -> int:
        return digits_needed(self.value.denominator, 2)


def _check_stage(recipe: ConstructionRecipe, i: int, max_stage: int | None) -> None:
    if i < recipe.first_stage:
        raise ValueError(f"{recipe.kind.value} has no convergent at stage {i}")
    cap = DEFAULT_MAX_STAGE[recipe.kind] if max_stage is None else max_stage
    if i > cap:
        raise BudgetExceededError(f"stage {i} exceeds the stage budget {cap}")


def convergent(recipe: ConstructionRecipe, i: int, max_stage: int | None = None) -> Convergent:
    """Stage-``i`` rational approximant whose expansion reproduces stages 1..i."""
    _check_stage(recipe, i, max_stage)
    kind = recipe.kind
    if kind is Kind.LIOUVILLE_PSI1:
        top = math.factorial(i)
        num = sum(1 << (top - math.factorial(j)) for j in range(1, i + 1))
        return Convergent(ExactRational(num, 1 << top), i, math.factorial(i + 1) - 1)
    if kind is Kind.DISJUNCTIVE_PSI2:
        top = math.factorial(i)
        num = sum(j << (top - math.factorial(j)) for j in range(3, i + 1))
        agree = math.factorial(i + 1) - (i + 1).bit_length()
        return Convergent(ExactRational(num, 1 << top), i, agree)

    # prefix through stage i-1, then the stage-i block recurring forever
    k = recipe.base
    sched = StageSchedule(recipe)
    head_len = sched.boundary(i - 1)
    period = period_length(recipe, i)
    check_budget(sched.boundary(i), "convergent agreement window")
    head = to_int(take_prefix(make_stream(recipe), head_len), k)
    block = to_int(_period_block(recipe, i), k)
    cycle = k**period - 1
    value = ExactRational(head * cycle + block, cycle * k**head_len)
    return Convergent(value, i, sched.boundary(i))


# ---------------------------------------------------------------- certification


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one stage's Liouville certificate.

    ``agreement`` is the measured common-prefix length of stream and
    convergent expansion (looked at up to ``boundary + probe`` digits);
    ``required`` is the digit count that makes ``base**-boundary`` small
    enough against ``1/q**stage``.
    """

    stage: int
    q_bits: int
    agreement: int
    boundary: int
    required: int
    holds: bool

    def as_json(self) -> dict:
        return asdict(self)


def _common_prefix(a: np.ndarray, b: np.ndarray) -> int:
    n = min(a.size, b.size)
    diff = np.flatnonzero(a[:n] != b[:n])
    return int(diff[0]) if diff.size else n


def verify_liouville_stage(
    recipe: ConstructionRecipe, i: int, probe: int = 64, max_stage: int | None = None
) -> VerificationReport:
    """Certify |x - p/q| < 1/q**i for the stage-``i`` convergent, exactly.

    The stream and the expansion of p/q must share their first ``b`` digits
    (``b`` being the convergent's guaranteed agreement), which places both in
    one base-k interval of width k**-b.  The certificate then needs
    ``i*ceil(log_k q) + 1 <= b``.  When p/q is itself the truncation of the
    stream at ``b`` digits and ``q`` is a power of ``k``, the distance is
    strictly below k**-b as soon as some later stream digit is not k-1, so the
    slack digit is dropped.
    """
    conv = convergent(recipe, i, max_stage=max_stage)
    k = recipe.base
    b = conv.agreement_digits
    window = b + probe
    stream = take_prefix(make_stream(recipe), window)
    expansion = expansion_digits(conv.value, k, window)
    agreement = _common_prefix(stream, expansion)

    q = conv.value.denominator
    q_digits = digits_needed(q, k)
    truncation = (
        k**q_digits == q
        and (conv.value.numerator * k**b) % q == 0
        and bool(np.any(stream[b:] != k - 1))
    )
    required = i * q_digits + (0 if truncation else 1)
    holds = agreement >= b and required <= b
    return VerificationReport(i, conv.q_bits, agreement, b, required, holds)


def verify_liouville(
    recipe: ConstructionRecipe, last_stage: int, stage_cap: int | None = None, probe: int = 64
) -> list[VerificationReport]:
    """Reports for every stage from the recipe's first stage through ``last_stage``."""
    return [
        verify_liouville_stage(recipe, i, probe=probe, max_stage=stage_cap)
        for i in range(recipe.first_stage, last_stage + 1)
    ]

