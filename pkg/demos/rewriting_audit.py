"""Audit the oriented Serre rewriting: critical overlaps and PBW counts.

For B2 the raw Serre rules are not confluent; one completion rule in degree 5
brings the count of irreducible words down to the PBW value.

    python demos/rewriting_audit.py
"""

from mpquea import build_cartan, build_mpquea, overlap_check, pbw_counts, root_lattice
from mpquea.lattice import product_lattice
from mpquea.quantumalg import build_algebra

for name, bound in [("A1", 6), ("A2", 5), ("B2", 5), ("G2", 5)]:
    c = build_cartan(name)
    h = build_mpquea(c, c.DA)
    rep = overlap_check(h.system, bound)
    print(f"{name}: {rep.checked} overlaps up to degree {bound}, {len(rep.failures)} failures;"
          f" PBW counts {pbw_counts(h.system, 6)}")

c = build_cartan("B2")
Q = root_lattice(c)
raw = build_algebra(c, c.DA, product_lattice(Q, Q), completion_bound=0)
rep = overlap_check(raw.system, 5)
print(f"\nB2 without completion: counts {pbw_counts(raw.system, 6)}, {len(rep.failures)} overlap failures")
for f in rep.failures:
    print(f"  {f.rule_a} vs {f.rule_b}: {f.difference}")
