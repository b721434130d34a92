"""Primitive roots, simultaneous-primitive-root primes and the multi-base gamma.

The multi-base construction gamma is conditional on a generalized Artin
conjecture; everything computed here is unconditional arithmetic on the
primes actually found.  Normality of gamma is not certified.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .digits import BudgetExceededError
from .exact import ExactRational, digits_needed, expansion_digits

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981
MAX_SEARCH_LIMIT = 10**8


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} is beyond the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _check_unit(a: int, p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if a % p == 0:
        raise ValueError(f"{a} is divisible by {p}")


def multiplicative_order(a: int, p: int) -> int:
    _check_unit(a, p)
    order = p - 1
    for q in factorize(p - 1):
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order


@dataclass(frozen=True)
class PrimitiveRootCertificate:
    base: int
    prime: int
    order: int

    @property
    def valid(self) -> bool:
        return self.order == self.prime - 1


def primitive_root_certificate(a: int, p: int) -> PrimitiveRootCertificate:
    return PrimitiveRootCertificate(a, p, multiplicative_order(a, p))


def is_primitive_root(a: int, p: int) -> bool:
    """True iff ``a`` has multiplicative order p-1 modulo the prime ``p``."""
    _check_unit(a, p)
    return all(pow(a, (p - 1) // q, p) != 1 for q in factorize(p - 1))


def _is_square(a: int) -> bool:
    r = math.isqrt(a)
    return r * r == a


def _validate_bases(bases) -> tuple[int, ...]:
    bases = tuple(int(a) for a in bases)
    if not bases:
        raise ValueError("need at least one base")
    for a in bases:
        if a < 2:
            raise ValueError(f"base {a} must be at least 2")
        if _is_square(a):
            raise ValueError(f"base {a} is a perfect square and is never a primitive root of an odd prime")
    return bases


def _primes_upto(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


def find_simultaneous_primes(bases, limit: int) -> list[int]:
    """All primes p <= limit having every base as a primitive root, ascending."""
    bases = _validate_bases(bases)
    if limit > MAX_SEARCH_LIMIT:
        raise BudgetExceededError(f"search limit {limit} exceeds {MAX_SEARCH_LIMIT}")
    out = []
    for p in _primes_upto(max(limit, 1)).tolist():
        if any(a % p == 0 for a in bases):
            continue
        factors = list(factorize(p - 1))
        if all(pow(a, (p - 1) // q, p) != 1 for a in bases for q in factors):
            out.append(p)
    return out


def first_simultaneous_primes(bases, count: int, start_limit: int = 64) -> list[int]:
    """The ``count`` smallest simultaneous primes, growing the search range as needed."""
    limit = start_limit
    while True:
        found = find_simultaneous_primes(bases, limit)
        if len(found) >= count:
            return found[:count]
        if limit >= MAX_SEARCH_LIMIT:
            raise BudgetExceededError(f"fewer than {count} simultaneous primes below {limit}")
        limit = min(limit * 4, MAX_SEARCH_LIMIT)


def period_block(a: int, p: int) -> np.ndarray:
    """Repeating block of the base-``a`` expansion of 1/p; length p-1."""
    if not is_primitive_root(a, p):
        raise ValueError(f"{a} is not a primitive root of {p}")
    out = np.empty(p - 1, dtype=np.uint8 if a <= 256 else np.int64)
    r = 1
    for i in range(p - 1):
        r *= a
        out[i], r = divmod(r, p)
    return out


def orbit_bin_counts(a: int, p: int, k: int, n: int = 1, span: int | None = None) -> np.ndarray:
    """Histogram of the orbit points a**m / p mod 1 over a**k equal bins.

    Exponents run over ``m in [n, n + span - 1]``; ``span`` defaults to one
    full period ``p - 1``.
    """
    if not is_primitive_root(a, p):
        raise ValueError(f"{a} is not a primitive root of {p}")
    if k < 0 or a**k >= p:
        raise ValueError(f"need a**k < p, got {a}**{k} >= {p}")
    span = p - 1 if span is None else span
    bins = a**k
    counts = np.zeros(bins, dtype=np.int64)
    r = pow(a, n, p)
    for _ in range(span):
        counts[r * bins // p] += 1
        r = r * a % p
    return counts


def verify_orbit_identity(bases, p: int) -> bool:
    """Check (a_1...a_n)**(p-1) = 1 mod p and the orbit-set equality for each base."""
    bases = tuple(bases)
    prod = math.prod(bases)
    if pow(prod, p - 1, p) != 1:
        return False
    shift = pow(prod, p - 1, p)
    for a in bases:
        plain = {pow(a, k, p) for k in range(p)}
        shifted = {pow(a, k, p) * shift % p for k in range(p)}
        if plain != shifted:
            return False
    return True


# ---------------------------------------------------------------- gamma


def _log(x: float, base: float) -> float:
    return math.log(x) / math.log(base)


def default_schedule(bases, primes) -> list[int]:
    """f(i) = i * max(1, ceil(log_{a_1} p_{i+1} / (p_i - 1)) * (p_i - 1)).

    Needs one more prime than stages.  When p_i < a_n the value is raised in
    steps of i * (p_i - 1) until ``schedule_violations`` accepts it.
    """
    a1 = min(bases)
    f = []
    for i in range(1, len(primes)):
        p, nxt = primes[i - 1], primes[i]
        fi = i * max(1, math.ceil(_log(nxt, a1) / (p - 1)) * (p - 1))
        while schedule_violations(bases, [p, nxt], [fi], first=i):
            fi += i * (p - 1)
        f.append(fi)
    return f


def schedule_violations(bases, primes, f, first: int = 1) -> list[int]:
    """Stages i where f(i) * log_{a_n} p_i < i * log_{a_1} p_{i+1}.

    ``f[0]`` and ``primes[0]`` belong to stage ``first``.
    """
    a1, an = min(bases), max(bases)
    bad = []
    for j, fi in enumerate(f):
        i = first + j
        if fi * _log(primes[j], an) < i * _log(primes[j + 1], a1):
            bad.append(i)
    return bad


class ScheduleError(ValueError):
    pass


class DigitStabilityError(AssertionError):
    pass


@dataclass(frozen=True)
class GammaRecipe:
    bases: tuple[int, ...]
    stages: int = 3
    f: tuple[int, ...] | None = None
    max_stages: int = 3

    def __post_init__(self):
        bases = _validate_bases(self.bases)
        if list(bases) != sorted(set(bases)):
            raise ValueError("bases must be strictly ascending")
        object.__setattr__(self, "bases", bases)
        if self.stages < 1:
            raise ValueError("need at least one stage")
        if self.stages > self.max_stages:
            raise BudgetExceededError(f"{self.stages} stages exceed the cap of {self.max_stages}")
        if self.f is not None:
            f = tuple(int(v) for v in self.f)
            if len(f) < self.stages or min(f) < 1:
                raise ValueError(f"schedule needs {self.stages} positive entries, got {f}")
            object.__setattr__(self, "f", f[: self.stages])

    @property
    def product(self) -> int:
        return math.prod(self.bases)


@dataclass(frozen=True)
class GammaStage:
    index: int
    prime: int
    repeats: int
    P: int
    N: ExactRational
    S_prime: ExactRational
    S: ExactRational
    offset: int  # base-A digits preceding the stage: sum of f(j)(p_j - 1), j < i


@dataclass(frozen=True)
class GammaLiouville:
    """Certificate for |gamma - R_i| < 1/q**i with R_i the stage-i recurring convergent."""

    stage: int
    q_bits: int
    distance_bound_bits: int
    holds: bool
    per_base: dict[int, dict]


@dataclass(frozen=True)
class StageDigitCheck:
    stage: int
    base: int
    digits: int
    stable: bool
    block_repeats: bool


@dataclass
class GammaBuild:
    recipe: GammaRecipe
    primes: list[int]
    schedule: list[int]
    stages: list[GammaStage]
    partial_sums: list[ExactRational]
    liouville: list[GammaLiouville]
    digit_checks: list[StageDigitCheck] = field(default_factory=list)

    @property
    def digits_stable(self) -> bool:
        return all(c.stable for c in self.digit_checks)

    def digits(self, base: int, count: int, stage: int | None = None) -> np.ndarray:
        """Base-``base`` digits of the partial sum through ``stage`` (default: last)."""
        stage = len(self.stages) if stage is None else stage
        return expansion_digits(self.partial_sums[stage - 1], base, count)

    def as_json(self) -> dict:
        return {
            "bases": list(self.recipe.bases),
            "primes": self.primes[: len(self.stages)],
            "next_prime": self.primes[len(self.stages)],
            "schedule": self.schedule,
            "stages": [
                {
                    "stage": s.index,
                    "prime": s.prime,
                    "f": s.repeats,
                    "P": s.P,
                    "offset": s.offset,
                    "partial_sum_denominator_bits": self.partial_sums[s.index - 1].denominator.bit_length(),
                }
                for s in self.stages
            ],
            "liouville": [
                {
                    "stage": r.stage,
                    "q_bits": r.q_bits,
                    "distance_bound_bits": r.distance_bound_bits,
                    "holds": r.holds,
                    "per_base": {str(a): v for a, v in r.per_base.items()},
                }
                for r in self.liouville
            ],
            "digit_checks": [c.__dict__ for c in self.digit_checks],
            "digits_stable": self.digits_stable,
        }


def _floor_log(num: int, den: int, base: int) -> int:
    """Largest L with base**L <= num/den (num >= den > 0)."""
    L = max(0, int((num.bit_length() - den.bit_length() - 1) / math.log2(base)) - 1)
    num, den = gmpy2.mpz(num), gmpy2.mpz(den)
    power = gmpy2.mpz(base) ** (L + 1)
    while power * den <= num:
        L += 1
        power *= base
    return L


def gamma_stage(bases, i: int, p: int, repeats: int, offset: int) -> GammaStage:
    """P_i, N(i), S'(i) and S(i) for prime ``p`` after ``offset`` base-A digits."""
    A = math.prod(bases)
    block = A ** (p - 1)
    P = block // p
    N = ExactRational(P, block)
    # sum over t = 1..f of A^{(f-t)(p-1)}
    geometric = (A ** (repeats * (p - 1)) - 1) // (block - 1)
    S_prime = ExactRational(P * geometric, A ** ((repeats + 1) * (p - 1)))
    S = ExactRational(S_prime.numerator, S_prime.denominator * A**offset)
    return GammaStage(i, p, repeats, P, N, S_prime, S, offset)


def build_gamma(recipe: GammaRecipe, strict: bool = False) -> GammaBuild:
    """Exact partial sums of gamma with per-stage Liouville and digit checks.

    ``strict`` turns a failed digit-stability check into ``DigitStabilityError``;
    otherwise the outcome is only recorded.
    """
    bases, A, I = recipe.bases, recipe.product, recipe.stages
    primes = first_simultaneous_primes(bases, I + 1)
    f = list(recipe.f) if recipe.f is not None else default_schedule(bases, primes)
    bad = schedule_violations(bases, primes, f[:I])
    if bad:
        raise ScheduleError(f"schedule {f[:I]} too small at stages {bad}")

    stages: list[GammaStage] = []
    sums: list[ExactRational] = []
    offset = 0
    total = ExactRational(0, 1)
    for i in range(1, I + 1):
        st = gamma_stage(bases, i, primes[i - 1], f[i - 1], offset)
        total = _add_powers(total, st.S)
        stages.append(st)
        sums.append(total)
        offset += st.repeats * (st.prime - 1)

    build = GammaBuild(recipe, primes, f[:I], stages, sums, [])
    build.liouville = [_certify(build, i) for i in range(1, I + 1)]
    build.digit_checks = [_digit_check(build, i, a) for i in range(1, I + 1) for a in bases]
    if strict and not build.digits_stable:
        failed = [(c.stage, c.base) for c in build.digit_checks if not c.stable]
        raise DigitStabilityError(f"digits unstable at (stage, base) {failed}")
    return build


def _add_powers(x: ExactRational, y: ExactRational) -> ExactRational:
    # denominators are powers of one integer; align on the larger one
    if x.denominator == y.denominator:
        return x + y
    if y.denominator % x.denominator == 0:
        return ExactRational(x.numerator * (y.denominator // x.denominator) + y.numerator, y.denominator)
    if x.denominator % y.denominator == 0:
        return ExactRational(y.numerator * (x.denominator // y.denominator) + x.numerator, x.denominator)
    return x + y


def _tail_bound(build: GammaBuild, i: int) -> ExactRational:
    """Strict upper bound on gamma - Gamma_i = sum of S_j over j > i."""
    A = build.recipe.product
    st = build.stages[i - 1]
    F_i = st.offset + st.repeats * (st.prime - 1)
    return ExactRational(2, A ** (F_i + build.primes[i] - 1))


def _certify(build: GammaBuild, i: int) -> GammaLiouville:
    A = build.recipe.product
    st = build.stages[i - 1]
    p, fi = st.prime, st.repeats
    cycle = A ** (p - 1) - 1
    # R_i: stages before i, then stage i's block recurring forever
    q = A ** (st.offset + p - 1) * cycle
    prev = build.partial_sums[i - 2] if i > 1 else ExactRational(0, 1)
    R = _add_powers(prev, ExactRational(0, A ** (st.offset + p - 1)))
    R = ExactRational(R.numerator * cycle + st.P, q)
    # gamma - R = (gamma - Gamma_i) - (R - Gamma_i), both brackets nonnegative
    overshoot = ExactRational(st.P, A ** (st.offset + (fi + 1) * (p - 1)) * cycle)
    tail = _tail_bound(build, i)
    bound = max(overshoot, tail)
    qi = q**i
    holds = bound.numerator * qi < bound.denominator
    per_base = {}
    for a in build.recipe.bases:
        certified = _floor_log(bound.denominator, bound.numerator, a)
        required = i * digits_needed(q, a) + 1
        per_base[a] = {"certified_digits": certified, "required_digits": required, "holds": certified >= required}
    bound_bits = bound.denominator.bit_length() - bound.numerator.bit_length()
    return GammaLiouville(i, digits_needed(q, 2), bound_bits, holds, per_base)


def _digit_check(build: GammaBuild, i: int, a: int) -> StageDigitCheck:
    A = build.recipe.product
    st = build.stages[i - 1]
    p, fi = st.prime, st.repeats
    g = build.partial_sums[i - 1]
    L = _floor_log(g.denominator, 1, a)
    tail = _tail_bound(build, i)
    # gamma lies in [g, g + tail); its first L digits are fixed iff both ends agree
    scale = gmpy2.mpz(a) ** L
    lo = gmpy2.mpz(g.numerator) * scale // g.denominator
    hi_num = gmpy2.mpz(g.numerator) * tail.denominator + gmpy2.mpz(tail.numerator) * g.denominator
    hi = hi_num * scale // (gmpy2.mpz(g.denominator) * tail.denominator)
    stable = lo == hi

    # stage i sits at base-A positions [offset + p - 1, offset + (f + 1)(p - 1))
    start = digits_needed(A ** (st.offset + p - 1), a)
    end = _floor_log(A ** (st.offset + (fi + 1) * (p - 1)), 1, a)
    blen = _floor_log(A ** (p - 1), 1, a)
    region = expansion_digits(g, a, end)[start:]
    repeats = region.size >= fi * blen and blen > 0 and bool(
        np.array_equal(region[: fi * blen], np.tile(region[:blen], fi))
    )
    return StageDigitCheck(i, a, L, bool(stable), repeats)
