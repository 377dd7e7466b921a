"""Build one module, look inside it, and round-trip it through JSON.

Run from the repository root:  python3 demos/build_and_inspect.py
"""

import tempfile
from fractions import Fraction

from heckeclifford.modules import (
    build_module,
    eigenvalue_audit,
    intertwiner_check,
    irreducibility_check,
    load_module,
    save_module,
    verify_relations,
)
from heckeclifford.params import ParameterSet, residue_sequence
from heckeclifford.shapes import Multipartition, enumerate_standard_tableaux

p = ParameterSet("nondeg", "ss", q=Fraction(3, 2), Q=(Fraction(5),))
shape = Multipartition.from_json(
    {"flavor": "ss", "strict": [[2], [1]], "ordinary": [[]]})
print(f"shape {shape.to_json()}, size n = {shape.n}")
print(f"diagonal boxes: {len(shape.diagonal_boxes())}")

M = build_module(shape, p)
print(f"\nbuilt: {len(M.blocks)} tableau blocks of dimension {M.block_dim}, "
      f"total {M.total_dim}, type {M.module_type}")

for t in enumerate_standard_tableaux(shape):
    rs = residue_sequence(t, p)
    print("  tableau", t.values, "residues",
          [str(complex(v).real) for v in rs.values])

rel = verify_relations(M)
print(f"\nrelations: max residual {rel['max_residual']:.3e} "
      f"(ok={rel['ok']})")
aud = eigenvalue_audit(M)
print(f"eigenvalues: max residual {aud['max_residual']:.3e} "
      f"(ok={aud['ok']})")
irr = irreducibility_check(M)
print(f"spin-up dimensions {irr['spinup_dims']}, "
      f"supercommutant (even, odd) = "
      f"({irr['even_commutant']}, {irr['odd_commutant']}) "
      f"-> type {irr['type_from_commutant']}")
for i in range(1, shape.n):
    rep = intertwiner_check(M, i)
    print(f"intertwiner at {i}: bijective={rep['bijective']}, "
          f"max residual {rep['max_residual']:.3e}")

with tempfile.NamedTemporaryFile(suffix=".json", delete=False) as fh:
    path = fh.name
save_module(M, path)
M2 = load_module(path)
rel2 = verify_relations(M2)
print(f"\nreloaded from {path}: residuals identical: "
      f"{rel2['max_residual'] == rel['max_residual']}")
