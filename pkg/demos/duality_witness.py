"""Which cocycle matrix makes the twisted and multiparameter Borel pairings agree.

The compatibility conditions pass at S = -A^T Psi A and break, with a named
witness, as soon as one entry moves.

    python demos/duality_witness.py
"""

from fractions import Fraction

from mpquea import build_cartan, verify_duality
from mpquea import ratmat as rm

c = build_cartan("A2")
psi = ((0, Fraction(1, 6)), (Fraction(-1, 6), 0))

rep = verify_duality(c, psi)
print("S =", rep.params["S"], "->", "PASS" if rep.theorem_passed else "FAIL")

for bump in [((0, 1), (0, 0)), ((0, 0), (1, 0)), ((1, 0), (0, 0))]:
    S = rm.add(((0, Fraction(-1, 2)), (Fraction(1, 2), 0)), bump)
    rep = verify_duality(c, psi, S)
    first = rep.failures()[0]
    print(f"S = {rm.fmt_matrix(S)} -> FAIL at {first['name']}: {first['witness']}")
