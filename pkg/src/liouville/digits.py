"""Digit-array helpers and the shared memory budget.

Digit sequences are ``numpy.uint8`` arrays holding symbol values
``0..base-1``.  ASCII strings of ``'0'..'9'`` are accepted anywhere a digit
sequence is expected and converted on entry.
"""
from __future__ import annotations

import os

import numpy as np

DEFAULT_MAX_DIGITS = 1 << 27
BUDGET_ENV = "LIOUVILLE_MAX_DIGITS"


class BudgetExceededError(RuntimeError):
    """A request would materialize more symbols than the configured budget."""


def max_digits() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_MAX_DIGITS
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{BUDGET_ENV} must be positive, got {raw!r}")
    return value


def check_budget(count: int, what: str = "digits", cap: int | None = None) -> None:
    cap = max_digits() if cap is None else cap
    if count > cap:
        raise BudgetExceededError(f"{what}: {count} symbols requested, budget is {cap}")


def as_digits(x, base: int | None = None) -> np.ndarray:
    """Coerce a digit string, bytes, list or array into a uint8 digit array."""
    if isinstance(x, np.ndarray):
        arr = x.astype(np.uint8, copy=False)
    elif isinstance(x, str):
        arr = np.frombuffer(x.encode("ascii"), dtype=np.uint8) - np.uint8(48)
        if arr.size and arr.max() > 9:
            raise ValueError("digit strings may only contain the characters 0-9")
    else:
        arr = np.asarray(list(x), dtype=np.uint8)
    if base is not None and arr.size and int(arr.max()) >= base:
        raise ValueError(f"symbol {int(arr.max())} outside alphabet of size {base}")
    return arr


def to_str(digits) -> str:
    arr = as_digits(digits)
    if arr.size and arr.max() > 9:
        raise ValueError("only bases up to 10 have an ASCII digit form")
    return (arr + np.uint8(48)).tobytes().decode("ascii")


def to_int(digits, base: int) -> int:
    """Integer whose base-``base`` numeral is ``digits`` (most significant first)."""
    arr = as_digits(digits)
    if arr.size == 0:
        return 0
    if base == 2:
        return int.from_bytes(np.packbits(arr[::-1], bitorder="little").tobytes(), "little")
    import gmpy2

    if base <= 10:
        return int(gmpy2.mpz(to_str(arr), base))
    return _to_int_split(arr, base)


def _to_int_split(arr: np.ndarray, base: int) -> int:
    if arr.size <= 64:
        value = 0
        for d in arr.tolist():
            value = value * base + d
        return value
    half = arr.size // 2
    low = arr[half:]
    return _to_int_split(arr[:half], base) * base ** low.size + _to_int_split(low, base)


def from_int(value: int, base: int, width: int) -> np.ndarray:
    """Base-``base`` numeral of ``value`` left-padded with zeros to ``width``."""
    if value < 0:
        raise ValueError("negative values have no numeral")
    if width == 0:
        if value:
            raise ValueError(f"{value} does not fit in 0 digits")
        return np.zeros(0, dtype=np.uint8)
    if base == 2:
        if value.bit_length() > width:
            raise ValueError(f"{value} does not fit in {width} binary digits")
        nbytes = (width + 7) // 8
        raw = np.frombuffer(value.to_bytes(nbytes, "big"), dtype=np.uint8)
        return np.unpackbits(raw)[8 * nbytes - width:]
    if base > 36:
        out = np.zeros(width, dtype=np.uint8)
        pos = width
        while value:
            if pos == 0:
                raise ValueError(f"value does not fit in {width} base-{base} digits")
            value, out[pos - 1] = divmod(value, base)
            pos -= 1
        return out
    import gmpy2

    text = gmpy2.mpz(value).digits(base) if value else "0"
    if len(text) > width:
        raise ValueError(f"{value} does not fit in {width} base-{base} digits")
    out = np.zeros(width, dtype=np.uint8)
    raw = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
    # gmpy2 spells digits above nine as a-z for bases up to 36
    vals = np.where(raw >= 97, raw - 87, raw - 48).astype(np.uint8)
    out[width - vals.size:] = vals
    return out
