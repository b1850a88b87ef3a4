"""From a toral twist to a multiparameter, and back, on A2.

    python demos/twist_to_multiparameter.py
"""

from fractions import Fraction

from mpquea import build_cartan, build_twquea, q_psi, root_lattice, theta, verify_iso_double, xi
from mpquea import ratmat as rm
from mpquea.mpmatrix import equivalence_witness, sigma_from_psi
from mpquea.twist import twisted_generators

c = build_cartan("A2")
psi = ((0, Fraction(1, 6)), (Fraction(-1, 6), 0))

R = theta(c, psi)
print("Psi            =", rm.fmt_matrix(psi))
print("R = theta(Psi) =", rm.fmt_matrix(R))
print("xi(R)          =", rm.fmt_matrix(xi(c, R).psi))
print("S = -A^T Psi A =", rm.fmt_matrix(sigma_from_psi(c, psi).S))
print("nu witness DA ~ R:", rm.fmt_matrix(equivalence_witness(c.DA, R)))

# psi_+ moves alpha_1 off the root lattice, so the twisted algebra lives over Q^Psi
L = q_psi(c, psi)
print("Q^Psi basis    =", rm.fmt_matrix(L.basis), " index over Q:", L.index_over(root_lattice(c)))

t = build_twquea(c, psi, L, doubled=True)
g = twisted_generators(t)
for i in range(2):
    print(f"E^Psi_{i + 1} = {g.E[i].render()}")
    print(f"  Delta = {t.coproduct(g.E[i]).render()}")

rep = verify_iso_double(c, psi)
print(f"\niso-double: {'PASS' if rep.passed else 'FAIL'} with {len(rep.checks)} checks")
for ctl in rep.controls:
    print(f"  control '{ctl['name']}' fails as it should")
