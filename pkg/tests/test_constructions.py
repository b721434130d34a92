import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liouville.constructions import ConstructionRecipe, StageSchedule, make_stream, stage_boundary, take_prefix
from liouville.debruijn import generate_debruijn
from liouville.digits import BudgetExceededError, to_str

ALPHA = ConstructionRecipe("alpha")
PSI1 = ConstructionRecipe("psi1")
PSI2 = ConstructionRecipe("psi2")
HALF = ConstructionRecipe("diluted", dilution=(1, 2))


def fraction_digits(x: Fraction, count: int, base: int = 2) -> str:
    out = []
    for _ in range(count):
        x *= base
        d = int(x)
        out.append(str(d))
        x -= d
    return "".join(out)


def alpha_by_concatenation(stages: int, k: int = 2, dilution=None) -> str:
    parts = []
    for i in range(1, stages + 1):
        b = str(generate_debruijn(k, i))
        if dilution:
            m, n = dilution
            block = "0" * ((n - m) * k**i) + b * m
        else:
            block = b
        parts.append(block * i**i)
    return "".join(parts)


def test_alpha_first_digits():
    assert to_str(take_prefix(make_stream(ALPHA), 18)) == "010011001100110011"
    assert to_str(take_prefix(make_stream(ALPHA), 2)) == "01"


def test_psi1_digits_match_series():
    value = sum(Fraction(1, 2 ** math.factorial(i)) for i in range(1, 7))
    assert to_str(take_prefix(make_stream(PSI1), 6)) == "110001"
    assert to_str(take_prefix(make_stream(PSI1), 700)) == fraction_digits(value, 700)


def test_psi2_digits_match_series():
    value = sum(Fraction(i, 2 ** math.factorial(i)) for i in range(3, 7))
    assert to_str(take_prefix(make_stream(PSI2), 700)) == fraction_digits(value, 700)


def test_diluted_first_stage():
    assert to_str(take_prefix(make_stream(HALF), 4)) == "0001"


def test_empty_prefix():
    assert to_str(take_prefix(make_stream(PSI1), 0)) == ""


@pytest.mark.parametrize(
    "recipe,dilution",
    [(ALPHA, None), (HALF, (1, 2)), (ConstructionRecipe("diluted", dilution=(3, 5)), (3, 5))],
)
def test_prefix_matches_concatenation(recipe, dilution):
    expected = alpha_by_concatenation(4, dilution=dilution)
    assert to_str(take_prefix(make_stream(recipe), len(expected))) == expected


def test_base3_alpha():
    r = ConstructionRecipe("alpha", base=3)
    expected = alpha_by_concatenation(3, k=3)
    assert to_str(take_prefix(make_stream(r), len(expected))) == expected
    assert stage_boundary(r, 3) == sum(m**m * 3**m for m in range(1, 4))


def test_stage_boundaries():
    assert [stage_boundary(ALPHA, i) for i in range(5)] == [0, 2, 18, 234, 4330]
    assert stage_boundary(HALF, 1) == 4 and stage_boundary(HALF, 2) == 36
    assert [stage_boundary(PSI1, i) for i in range(6)] == [0, 1, 2, 6, 24, 120]


@pytest.mark.parametrize("i", range(1, 21))
def test_alpha_boundary_bound(i):
    b = stage_boundary(ALPHA, i)
    assert b == sum(m**m * 2**m for m in range(1, i + 1))
    assert b < 2 * i**i * 2**i


@pytest.mark.parametrize("m,n", [(1, 2), (2, 3), (3, 5)])
def test_diluted_boundary_formula(m, n):
    r = ConstructionRecipe("diluted", dilution=(m, n))
    for i in range(1, 10):
        assert stage_boundary(r, i) == sum(n * 2**j * j**j for j in range(1, i + 1))


def test_alpha_stage_parses_into_debruijn_copies():
    s = make_stream(ALPHA)
    for i in range(1, 6):
        stage = s.stage_digits(i)
        b = generate_debruijn(2, i).digits
        assert stage.size == i**i * b.size
        assert (stage.reshape(i**i, b.size) == b).all()


@given(st.sampled_from([PSI1, PSI2, ALPHA, HALF]), st.integers(0, 3000), st.integers(0, 3000))
def test_prefix_consistency(recipe, a, b):
    a, b = sorted((a, b))
    s = make_stream(recipe)
    long = take_prefix(s, b)
    assert np.array_equal(take_prefix(s, a), long[:a])
    assert np.array_equal(take_prefix(s, b), long)


@given(st.sampled_from([PSI1, PSI2, ALPHA, HALF, ConstructionRecipe("alpha", base=3)]), st.integers(0, 5000))
def test_digit_is_pure_and_matches_prefix(recipe, j):
    s = make_stream(recipe)
    d = s.digit(j)
    assert d == s.digit(j) == int(take_prefix(s, j + 1)[j])
    assert 0 <= d < recipe.base


@given(st.sampled_from([PSI2, ALPHA, HALF]), st.integers(0, 2000), st.integers(0, 500))
def test_iteration_resumes_from_cursor(recipe, start, count):
    s = make_stream(recipe)
    s.seek(start)
    got = [next(s) for _ in range(count)]
    assert got == take_prefix(s, start + count)[start:].tolist()
    assert s.position == start + count


@pytest.mark.parametrize("i", range(3, 9))
def test_psi2_ones_density(i):
    ones = int(take_prefix(make_stream(PSI2), math.factorial(i)).sum())
    assert ones <= i * (math.floor(math.log2(i)) + 1)


@given(st.text(alphabet="01", max_size=8))
def test_psi2_contains_every_1w(w):
    # 1w is the numeral of N, placed to end at digit N! - 1
    numeral = "1" + w
    N = int(numeral, 2)
    s = make_stream(PSI2)
    if N < 3:
        # numerals 1 and 2 occur inside the numeral of 3 ("11") or 4 ("100")
        host = 3 if numeral == "1" else 4
        start = math.factorial(host) - host.bit_length()
        text = "".join(str(s.digit(j)) for j in range(start, math.factorial(host)))
        assert numeral in text
        return
    end = math.factorial(N)
    got = "".join(str(s.digit(j)) for j in range(end - len(numeral), end))
    assert got == numeral


def test_recipe_validation():
    with pytest.raises(ValueError, match="lowest terms"):
        ConstructionRecipe("diluted", dilution=(2, 4))
    with pytest.raises(ValueError):
        ConstructionRecipe("diluted", dilution=(3, 2))
    with pytest.raises(ValueError):
        ConstructionRecipe("diluted")
    with pytest.raises(ValueError):
        ConstructionRecipe("psi1", base=3)
    with pytest.raises(ValueError):
        ConstructionRecipe("alpha", base=1)


def test_prefix_budget(monkeypatch):
    monkeypatch.setenv("LIOUVILLE_MAX_DIGITS", "100")
    with pytest.raises(BudgetExceededError):
        take_prefix(make_stream(ALPHA), 101)


def test_schedule_stage_of():
    sched = StageSchedule(ALPHA)
    assert [sched.stage_of(j) for j in (0, 1, 2, 17, 18, 233, 234)] == [1, 1, 2, 2, 3, 3, 4]
