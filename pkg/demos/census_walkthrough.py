"""The counting identity, shape by shape.

For separate parameters the simple modules tile the algebra: summing
d^2 over type M and d^2/2 over type Q lands exactly on 2^n r^n n!.

Run from the repository root:  python3 demos/census_walkthrough.py
"""

from fractions import Fraction

from heckeclifford.modules import semisimplicity_census
from heckeclifford.params import ParameterSet, separability_exact

for variant, flavor, Q in (
    ("nondeg", "s", ()),
    ("nondeg", "zero", (Fraction(5),)),
    ("deg", "s", (Fraction(5),)),
):
    kwargs = {"q": Fraction(3, 2)} if variant == "nondeg" else {}
    p = ParameterSet(variant, flavor, Q=Q, **kwargs)
    print(f"\n=== {variant} {flavor}, m={p.m}, polynomial degree r={p.r} ===")
    for n in (1, 2, 3):
        print(f"P_{n} = {separability_exact(p, n)}")
        rep = semisimplicity_census(p, n, numeric=(n <= 2))
        for row in rep["shapes"]:
            stars = row["dim"] ** 2
            if row["type"] == "Q":
                stars //= 2
            built = f" built={row['built_dim']}" if "built_dim" in row else ""
            print(f"  {str(row['shape']):58s} dim {row['dim']:3d} "
                  f"type {row['type']}  contributes {stars}{built}")
        print(f"  sum {rep['sum']} = 2^{n} * {p.r}^{n} * {n}! "
              f"= {rep['target']}  ok={rep['ok']}")
