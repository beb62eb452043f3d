"""Worked equivalence decisions for pairs of expansive self-adjoint maps."""

import numpy as np

from densilab import decide_equivalence, power, sym_diag, sym_matrix

# A power pair: A2 = A1^t shares eigenvectors and has proportional
# log-spectra, so the decision recovers t.
a1 = sym_diag(2.0, 4.0)
a2 = power(a1, 1.7)
v = decide_equivalence(a1, a2)
print("power pair:      equivalent =", v.equivalent,
      " t =", round(v.exponent, 12), " cert =", v.certification)

# Same spectra written in a rotated basis; absolutization strips the basis.
th = 0.4
q = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
b = sym_matrix(q @ np.diag([2.0, 4.0]) @ q.T)
v = decide_equivalence(b, power(b, 3.0))
print("rotated pair:    equivalent =", v.equivalent, " t =", round(v.exponent, 12))

# Exponent mismatch: diag(2,4) needs t=1 on the first axis and t=1.5 on the
# second to reach diag(2,8), so no single power works.
v = decide_equivalence(sym_diag(2.0, 4.0), sym_diag(2.0, 8.0))
ob = v.obstruction
print("mismatch:        equivalent =", v.equivalent, " obstruction =", ob.kind)
print(f"                 axes {ob.i} and {ob.l} need t = {ob.t_i} vs {ob.t_l}")

# Different eigenvectors entirely.
c = sym_matrix(np.array([[3.0, 1.0], [1.0, 3.0]]))
v = decide_equivalence(sym_diag(2.0, 4.0), c)
print("skew basis:      equivalent =", v.equivalent,
      " obstruction =", v.obstruction.kind)

# A negative eigenvalue only flips orientation; the absolutized maps agree.
v = decide_equivalence(sym_diag(2.0, 4.0), sym_diag(-2.0, 4.0))
print("sign flip:       equivalent =", v.equivalent, " t =", v.exponent)
