"""Sliding block-entropy rates at every stage boundary, per construction.

Shows alpha climbing toward 1, psi1 and psi2 collapsing toward 0, and each
diluted variant settling near its ratio m/n.
"""
import argparse

from liouville.constructions import ConstructionRecipe
from liouville.dimension import default_prefixes, entropy_rate_profile

RECIPES = [
    ConstructionRecipe("psi1"),
    ConstructionRecipe("psi2"),
    ConstructionRecipe("alpha"),
    ConstructionRecipe("diluted", dilution=(1, 2)),
    ConstructionRecipe("diluted", dilution=(2, 3)),
    ConstructionRecipe("diluted", dilution=(3, 5)),
]


def main():
    ap = argparse.ArgumentParser(description="block-entropy trajectories")
    ap.add_argument("--m-max", type=int, default=6)
    ap.add_argument("--cap", type=int, default=1 << 23, help="longest prefix to sample")
    args = ap.parse_args()
    for recipe in RECIPES:
        prefixes = [p for p in default_prefixes(recipe, args.cap) if p >= args.m_max]
        rep = entropy_rate_profile(recipe, args.m_max, prefixes)
        print(f"\n{recipe.name}")
        print("prefix".rjust(10) + "".join(f"  m={m:<6}" for m in range(1, args.m_max + 1)))
        for L in prefixes:
            print(f"{L:>10}" + "".join(f"  {rep.rate(L, m):.5f}" for m in range(1, args.m_max + 1)))


if __name__ == "__main__":
    main()
