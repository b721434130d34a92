import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from liouville.constructions import ConstructionRecipe, make_stream, stage_boundary, take_prefix
from liouville.digits import BudgetExceededError, to_int, to_str
from liouville.exact import (
    ExactRational,
    convergent,
    digits_needed,
    expansion_digits,
    verify_liouville,
    verify_liouville_stage,
)

ALPHA = ConstructionRecipe("alpha")
PSI1 = ConstructionRecipe("psi1")
PSI2 = ConstructionRecipe("psi2")
DILUTIONS = [(1, 2), (1, 3), (2, 3), (3, 5)]


def long_division(x: Fraction, base: int, count: int) -> str:
    out = []
    for _ in range(count):
        x *= base
        d = int(x)
        out.append(str(d))
        x -= d
    return "".join(out)


def distance_upper_bound(prefix, base, value: Fraction) -> Fraction:
    """Largest distance from ``value`` to any point whose expansion starts with ``prefix``."""
    lo = Fraction(to_int(prefix, base), base**prefix.size)
    hi = lo + Fraction(1, base**prefix.size)
    return max(abs(lo - value), abs(hi - value))


def test_expansion_examples():
    assert to_str(expansion_digits(ExactRational(1, 3), 2, 6)) == "010101"
    assert to_str(expansion_digits(ExactRational(3, 4), 2, 4)) == "1100"
    assert to_str(expansion_digits(ExactRational(1, 7), 10, 6)) == "142857"


@given(st.integers(1, 10**6), st.integers(0, 10**6), st.integers(2, 10), st.integers(0, 200))
def test_expansion_matches_long_division(q, p, base, count):
    p %= q
    got = to_str(expansion_digits(ExactRational(p, q), base, count))
    assert got == long_division(Fraction(p, q), base, count)


def test_expansion_rejects_out_of_range():
    with pytest.raises(ValueError):
        expansion_digits(ExactRational(4, 3), 2, 5)
    with pytest.raises(ValueError):
        ExactRational(1, 0)


def test_exact_rational_is_unreduced():
    r = ExactRational(2, 4)
    assert r.numerator == 2 and r == ExactRational(1, 2)
    assert r.reduced() == ExactRational(1, 2) and r.reduced().denominator == 2
    assert (r + ExactRational(1, 4)).to_fraction() == Fraction(3, 4)
    assert (r - ExactRational(1, 4)).to_fraction() == Fraction(1, 4)
    assert ExactRational(1, 3) < ExactRational(1, 2) <= 1


@given(st.integers(1, 10**40), st.integers(2, 16))
def test_digits_needed(q, base):
    e = digits_needed(q, base)
    assert base**e >= q and (e == 0 or base ** (e - 1) < q)


@pytest.mark.parametrize("n", range(1, 7))
def test_psi1_convergent_is_partial_sum(n):
    c = convergent(PSI1, n)
    expected = sum(Fraction(1, 2 ** math.factorial(i)) for i in range(1, n + 1))
    assert c.value.to_fraction() == expected
    assert c.value.denominator == 2 ** math.factorial(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_psi1_stage_holds(n):
    r = verify_liouville_stage(PSI1, n)
    assert r.holds and r.agreement >= r.boundary
    # the tail is below 2 * 2**-((n+1)!), which is below q**-n
    tail = Fraction(2, 2 ** math.factorial(n + 1))
    assert tail <= Fraction(1, 2 ** (math.factorial(n) * n))


def test_alpha_first_stage_fails_and_later_hold():
    reports = verify_liouville(ALPHA, 5)
    assert [r.holds for r in reports] == [False, True, True, True, True]
    assert [r.boundary for r in reports] == [2, 18, 234, 4330, 104330]


def test_alpha_convergent_reproduces_stages():
    for i in range(1, 5):
        c = convergent(ALPHA, i)
        n = stage_boundary(ALPHA, i)
        exp = expansion_digits(c.value, 2, n)
        assert to_str(exp) == to_str(take_prefix(make_stream(ALPHA), n))


@pytest.mark.parametrize("dilution", DILUTIONS)
def test_diluted_stages(dilution):
    r = ConstructionRecipe("diluted", dilution=dilution)
    assert all(rep.holds for rep in verify_liouville(r, 4)[1:])


def test_diluted_half_stage3():
    r = ConstructionRecipe("diluted", dilution=(1, 2))
    assert verify_liouville_stage(r, 3).holds


@pytest.mark.parametrize(
    "recipe,i",
    [(PSI1, 3), (PSI1, 4), (PSI2, 4), (PSI2, 5), (ALPHA, 2), (ALPHA, 3),
     (ConstructionRecipe("diluted", dilution=(2, 3)), 3)],
)
def test_certificate_is_sound(recipe, i):
    """Whenever a stage holds, an interval argument over the stream prefix confirms it."""
    rep = verify_liouville_stage(recipe, i)
    assert rep.holds
    c = convergent(recipe, i)
    prefix = take_prefix(make_stream(recipe), rep.boundary + 64)
    bound = distance_upper_bound(prefix, recipe.base, c.value.to_fraction())
    assert bound < Fraction(1, c.value.denominator**i)


def test_psi2_stages():
    assert all(r.holds for r in verify_liouville(PSI2, 6))
    with pytest.raises(ValueError):
        convergent(PSI2, 2)


def test_stage_budget():
    with pytest.raises(BudgetExceededError):
        convergent(ALPHA, 7)
    assert convergent(PSI1, 8, max_stage=8).stage == 8


def test_report_json_roundtrip():
    r = verify_liouville_stage(PSI1, 3)
    assert r.as_json() == {"stage": 3, "q_bits": 6, "agreement": r.agreement, "boundary": 23,
                           "required": r.required, "holds": True}
