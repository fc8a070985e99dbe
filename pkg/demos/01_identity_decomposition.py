"""
=====================================
Cutting a wire into three experiments
=====================================

A single qubit wire is the identity channel. Both cuts below rewrite it as a
signed sum of simpler channels that only need classical communication (plus
a shared entangled pair for the teleportation term).

This script:

1) builds the optimal entanglement-free cut and the cut on a resource state
   ``K(|00> + k|11>)``,
2) checks each against the identity through its Choi matrix, and
3) looks at what each term does to ``|+>``.
"""

import numpy as np

from nmecut import apply_term_exact, harada_cut, identity_deviation, nme_cut
from nmecut.qmath import PureState

plus = PureState.normalized([1, 1]).density()

# Entanglement-free cut: coefficients (+1, +1, -1), kappa = 3.
d = harada_cut()
print("harada coefficients:", d.coefficients, "kappa:", d.kappa)
print("max |Choi - Choi(Id)|:", identity_deviation(d))

for term in d.terms:
    print(f"  {term.name:>9} on |+><+| ->\n{np.round(apply_term_exact(term, plus).matrix, 6)}")

# The resource-assisted cut interpolates between the above (k = 0) and plain
# teleportation (k = 1).
for k in (0.0, 0.25, 0.5, 1.0):
    d = nme_cut(k)
    print(f"k={k:<5} coefficients={np.round(d.coefficients, 4)} kappa={d.kappa:.4f} "
          f"deviation={identity_deviation(d):.1e}")

# Teleporting through a weakly entangled pair keeps the populations but damps
# the coherences; the two compensation terms put the difference back.
d = nme_cut(0.5)
tele, comp1, comp2 = d.terms
print("tele output on |+>:\n", np.round(apply_term_exact(tele, plus).matrix, 6))
restored = sum(t.coefficient * apply_term_exact(t, plus).matrix for t in d.terms)
print("weighted sum of all three:\n", np.round(restored, 6))
