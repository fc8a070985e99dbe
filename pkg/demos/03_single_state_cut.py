"""
==========================================
Estimating one state's outcome probabilities
==========================================

Draw a Haar-random qubit ``U|0>``, push it through the cut with a finite shot
budget, and compare the quasi-probability estimate against
``(|<0|U|0>|^2, |<1|U|0>|^2)``. Repeating the estimate shows that the spread
shrinks as the resource gets more entangled.
"""

import numpy as np

from nmecut import estimate_distribution, l2_error, nme_cut
from nmecut.entangle import haar_random_unitary
from nmecut.qmath import PureState

rng = np.random.default_rng(7)
u = haar_random_unitary(2, rng)
psi = PureState.normalized(u[:, 0])
exact = np.abs(u[:, 0]) ** 2
print("exact probabilities:", np.round(exact, 5))

shots = 2048
for k in (0.0, 0.5, 1.0):
    d = nme_cut(k)
    est = estimate_distribution(d, psi, shots, rng=rng)
    print(f"k={k:<4} plan={est.shots_used}  estimate={np.round(est.probs, 5)}  "
          f"L2={l2_error(est.probs, exact):.4f}")

# 300 repetitions per k: the mean is unbiased, the spread follows kappa.
for k in (0.0, 0.5, 1.0):
    d = nme_cut(k)
    p0 = np.array([estimate_distribution(d, psi, shots, rng=rng).probs[0] for _ in range(300)])
    print(f"k={k:<4} mean P(0)={p0.mean():.4f} (exact {exact[0]:.4f})  std={p0.std(ddof=1):.4f}")
