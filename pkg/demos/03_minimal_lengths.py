"""Shortest all-symbol codes by exhaustive search over systematic candidates.

Run: python3 demos/03_minimal_lengths.py
"""

import tempfile
from pathlib import Path

from asbpir.bounds import length_bounds
from asbpir.search import ResultCache, candidate_count, find_min_length, verify_value

# ASB(2, t, 2) = t + ceil(t/2), found from n = k upward
for t in range(2, 6):
    out = find_min_length(2, t, 2, "asbatch", use_bounds=False)
    print(f"ASB(2,{t},2) = {out.n} after {out.examined} candidates")

# the t = 3 value k + r, with every shorter length exhausted
out = find_min_length(5, 3, 2, "asbatch", use_bounds=False)
print(f"ASB(5,3,2) = {out.n}; length {out.n - 1} examined {out.length_stats(out.n - 1)['examined']}"
      f" of {candidate_count(5, out.n - 1, 2)} candidates")
print("witness:")
for row in out.witness:
    print("  ", row)

# two-sided certificate
cert = verify_value(3, 3, 2, "asbatch", 6)
print(f"ASB(3,3,2) = 6 confirmed: {cert.confirmed} (lower side by {cert.lower_side['method']})")

# bounds consulted before a search
print(length_bounds(6, 4, 2).table())

# results are cached in an append-only JSON-lines file
with tempfile.TemporaryDirectory() as tmp:
    cache = ResultCache(Path(tmp) / "cache.jsonl")
    first = find_min_length(3, 4, 2, "asbatch", cache=cache)
    again = find_min_length(3, 4, 2, "asbatch", cache=cache)
    print(f"ASB(3,4,2) = {first.n} in {first.wall_time:.2f}s; cached lookup: {again.cached}")
