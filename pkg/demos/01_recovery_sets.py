"""Recovery sets and serving requests on the 2x3 parity code.

Run: python3 demos/01_recovery_sets.py
"""

from asbpir import constructions as C
from asbpir.recovery import Request, minimal_recovery_sets, serve, verify_plan

g = C.identity_parity(2, 2)
print("generator:")
for row in g.tolist():
    print("  ", row)

# each column has two minimal recovery sets: itself and the other two columns
for j, col in enumerate(g.columns()):
    sets = [rs.indices for rs in minimal_recovery_sets(g, col)]
    print(f"column {j} = {col}: minimal recovery sets {sets}")

# any two column values can be served with disjoint sets ...
for req in [Request.from_vectors([(1, 0), (1, 0)]), Request.from_vectors([(1, 0), (1, 1)])]:
    plan = serve(g, req)
    print(f"{req}: sets {plan.sets()}, valid {verify_plan(g, req, plan)}")

# ... but three copies of one column cannot
print("{[1, 0]^3} servable:", bool(serve(g, Request.from_vectors([(1, 0)] * 3))))

# the zero vector is always served by the empty set
print("plan for {0, e1}:", serve(g, Request.from_vectors([(0, 0), (1, 0)])).sets())
