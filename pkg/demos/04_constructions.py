"""The t = 3 and t = 4 constructions, and where the second one breaks.

Run: python3 demos/04_constructions.py
"""

from asbpir import constructions as C
from asbpir.oracles import span_contains
from asbpir.properties import PropertyKind, check
from asbpir.recovery import Request, serve

K = PropertyKind

for k in range(2, 7):
    g = C.t3_construction(k, 2)
    print(f"t3({k}): n = {g.n} = k + {C.pair_count(k)}, 3-ASBATCH {check(g, K.ASBATCH, 3).holds}")

# G'(k, 2) appends the all-one parity column; it needs four disjoint recovery sets
for k in range(1, 10):
    g = C.t4_gprime(k, 2)
    ok = bool(serve(g, Request(((g.column(g.n - 1), 4),))))
    print(f"G'({k},2): n = {g.n}, parity column served 4 times: {ok}")

# G''(6, 2) adds a second parity column, yet the all-one column still lacks a
# second recovery set inside (I_6 | A): the columns of A sum to zero in characteristic 2
g = C.t4_gdoubleprime(6, 2)
ones = g.column(g.n - 1)
first_ten = range(10)
subsets = [s for s in range(1, 1 << 10) if span_contains(g, [j for j in first_ten if s >> j & 1], ones)]
disjoint = any(a & b == 0 for a in subsets for b in subsets)
print(f"G''(6,2): two disjoint recovery sets for 1 inside the first 10 columns: {disjoint}")
print(f"G''(6,2): 4-ASPIR {check(g, K.ASPIR, 4).holds}; over GF(3): {check(C.t4_gdoubleprime(6, 3), K.ASPIR, 4).holds}")
