"""Closed-form stage entropy of the diluted construction against m/n as k grows."""
import math

from liouville.dimension import stage_entropy_closed_form

PAIRS = [(1, 2), (1, 3), (2, 3), (3, 5), (5, 7)]

print(f"{'k':>4}" + "".join(f"{f'{m}/{n}':>12}" for m, n in PAIRS))
for k in (1, 2, 4, 8, 16, 32, 64, 128, 256):
    row = [stage_entropy_closed_form(m, n, k) - m / n for m, n in PAIRS]
    print(f"{k:>4}" + "".join(f"{d:>12.6f}" for d in row))
print("\nbound 2.5(1+log2 n)/k at k=32:", {f"{m}/{n}": round(2.5 * (1 + math.log2(n)) / 32, 4) for m, n in PAIRS})
