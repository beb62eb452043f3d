"""Full equivalence reports for lattice-compatible dilation pairs."""

import json

import numpy as np

from densilab import mra_equivalence_report, sym_diag, sym_matrix

pairs = [
    ("rational exponent 3/2", sym_diag(4.0, 9.0), sym_diag(8.0, 27.0)),
    ("common base 2 and 3", sym_diag(2.0, 4.0), sym_diag(3.0, 9.0)),
    ("scalar pair", sym_diag(2.0, 2.0), sym_diag(3.0, 3.0)),
    ("exponent mismatch", sym_diag(2.0, 4.0), sym_diag(2.0, 8.0)),
    ("numeric only, irrational spectra",
     sym_matrix(np.array([[2.0, 1.0], [1.0, 3.0]])),
     sym_matrix(np.array([[5.0, 5.0], [5.0, 10.0]]))),
]

for label, a1, a2 in pairs:
    rep = mra_equivalence_report(a1, a2)
    print(f"--- {label}")
    print(json.dumps(rep.to_json(), indent=2))
    print()
