"""Two independent routes to the same verdict.

The construction route builds every simple module from tableaux; the
brute-force route builds the whole algebra from its presentation and
ranks its trace form.  When the separating product is nonzero both
report semisimple; when a parameter is pushed onto a zero of the
product, the trace form collapses and the census refuses to start.

Run from the repository root:  python3 demos/semisimplicity_frontier.py
"""

from fractions import Fraction

from heckeclifford.modules import NotSeparate, semisimplicity_census
from heckeclifford.params import ParameterSet, separability_exact
from heckeclifford.pbw import normal_form, trace_form_rank

print("straightening a few free words (nondeg, zero flavor, m=1):")
p = ParameterSet("nondeg", "zero", q=Fraction(3, 2), Q=(Fraction(5),))
for word in (["T1", "T1"], ["T1", "X1"], ["C1", "X1", "C1"]):
    elem = normal_form(word, p, 2)
    terms = ", ".join(
        f"({w.x_exponents}|{w.c_bits}|{w.perm}): {complex(c).real:+.4f}"
        f"{complex(c).imag:+.4f}i"
        for w, c in sorted(elem.items(), key=lambda kv: str(kv[0])))
    print(f"  {'*'.join(word):12s} -> {terms}")

print("\ngood parameters, n = 2:")
rank, dim = trace_form_rank(p, 2)
census = semisimplicity_census(p, 2)
print(f"  trace-form rank {rank}/{dim} (exact, modular)")
print(f"  census: {len(census['shapes'])} simples, "
      f"sum {census['sum']} = {census['target']}")

print("\ncrafted degeneracy Q = (1,):  P_1 =",
      separability_exact(ParameterSet("nondeg", "zero", q=Fraction(3, 2),
                                      Q=(Fraction(1),)), 1))
bad = ParameterSet("nondeg", "zero", q=Fraction(3, 2), Q=(Fraction(1),))
for n in (1, 2):
    rank, dim = trace_form_rank(bad, n)
    print(f"  n={n}: trace-form rank {rank}/{dim}  -> radical is nontrivial")
try:
    semisimplicity_census(bad, 1)
except NotSeparate as err:
    print(f"  census side agrees, refusing to build: {err}")

print("\nsame story, degenerate variant, Q = (0,):")
bad = ParameterSet("deg", "zero", Q=(Fraction(0),))
for n in (1, 2):
    rank, dim = trace_form_rank(bad, n)
    print(f"  n={n}: trace-form rank {rank}/{dim}")
