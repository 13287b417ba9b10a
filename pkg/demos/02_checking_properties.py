"""Deciding the six recovery properties and the largest level t of known codes.

Run: python3 demos/02_checking_properties.py
"""

from asbpir import constructions as C
from asbpir.bounds import dual_distance_bound
from asbpir.properties import PropertyKind, check, max_t

K = PropertyKind

# the stored 4x8 binary example is 3-all-symbol batch
g = C.paper_example("gf2_4x8")
v = check(g, K.ASBATCH, 3)
print(f"gf2_4x8: 3-ASBATCH {v.holds} over {v.requests_checked} requests")

# a failing check returns the first unservable request
v = check(g, K.ASPIR, 4)
print(f"gf2_4x8: 4-ASPIR {v.holds}, counterexample {v.counterexample}")

# over GF(3) the sixth column of G'(5) has only three disjoint recovery sets
gp = C.t4_gprime(5, 3)
print("G'(5) over GF(3), 4-ASPIR:", check(gp, K.ASPIR, 4).holds)

# level profile of a few codes next to the dual-distance bound
codes = {
    "simplex(3)": C.simplex(3),
    "RS(7,3) over GF(8)": C.mds_rs(7, 3, 8),
    "t3(4)": C.t3_construction(4, 2),
}
print(f"{'code':22} {'pir':>4} {'batch':>6} {'aspir':>6} {'asbatch':>8} {'dual bound':>11}")
for name, code in codes.items():
    row = [max_t(code, kind) for kind in (K.PIR, K.BATCH, K.ASPIR, K.ASBATCH)]
    print(f"{name:22} {row[0]:>4} {row[1]:>6} {row[2]:>6} {row[3]:>8} {str(dual_distance_bound(code)):>11}")
