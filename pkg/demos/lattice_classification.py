"""Integer 2x2 classification: similarity classes, roots, conjugators.

Scans a small box of expanding |det| = 2 matrices, tallies the six
similarity classes, then spot-checks a returned conjugator and a couple
of roots of identity by exact integer arithmetic.
"""

from collections import Counter

from densilab import (IntMatrix2, REPRESENTATIVES, classify_det2,
                      enumerate_expanding, minimal_root_of_identity,
                      scalar_power_witness)

tally = Counter()
missing = []
sample = {}
for m in enumerate_expanding(3, dets=(-2, 2)):
    cls = classify_det2(m, search_bound=8)
    tally[cls.similarity_class] += 1
    if cls.conjugator is None:
        missing.append(m)
    else:
        sample.setdefault(cls.similarity_class, (m, cls.conjugator))

print("expanding, |entries| <= 3, det = +-2:")
for label in ("A1", "A2", "+A3", "-A3", "+A4", "-A4"):
    print(f"  {label:>4}: {tally[label]} matrices")
print("  without a verified conjugator:", len(missing))

# verify one conjugator per class the slow way: C^-1 R C == M
print("\nconjugator spot checks (C^-1 R C == M):")
for label, (m, c) in sorted(sample.items()):
    rep = REPRESENTATIVES[label]
    ok = (c.unimodular_inverse() @ rep @ c) == m
    print(f"  {label:>4}: C = {c.rows()}  ok = {ok}")

# roots of identity: M^l = n I with exact integers
print("\nroots of identity:")
for rows in ([[0, 2], [1, 0]], [[1, 1], [-1, 1]], [[0, -2], [1, -1]]):
    m = IntMatrix2.from_rows(rows)
    root = minimal_root_of_identity(m)
    print(f"  {rows}: minimal (l, n) = {root}")

# and the reverse direction: given (l, n), produce a witness matrix
for l, n in ((2, 4), (3, 8), (8, 16)):
    w = scalar_power_witness(l, n)
    print(f"  witness for M^{l} = {n}I:", None if w is None else w.rows())
