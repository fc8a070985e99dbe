"""
==============================================
Resource entanglement versus sampling overhead
==============================================

The sampling overhead ``kappa`` of the cut falls linearly with the robustness
of entanglement ``R`` of the shared pair: ``kappa = 3 - 2R``. The number of
shots for a fixed accuracy grows like ``kappa^2``.
"""

import numpy as np

from nmecut import k_from_robustness, kappa_nme, nme_state, robustness_of_k, schmidt_decompose
from nmecut.entangle import haar_random_unitary
from nmecut.estimator import shots_for_accuracy
from nmecut.qmath import PureState

# Robustness from the Schmidt coefficients agrees with the closed form.
for k in (0.0, 0.3, 1.0, 3.0):
    sd = schmidt_decompose(nme_state(k))
    print(f"k={k:<4} Schmidt=({sd.p0:.4f}, {sd.p1:.4f})  R={sd.robustness:.4f}  2k/(1+k^2)={robustness_of_k(k):.4f}")

# Any two-qubit pure state is a local rotation of some K(|00> + k|11>).
rng = np.random.default_rng(1)
psi = PureState.normalized(haar_random_unitary(4, rng)[:, 0])
sd = schmidt_decompose(psi)
print("random state: Schmidt coefficients", round(sd.p0, 4), round(sd.p1, 4),
      "reconstruction error", np.max(np.abs(sd.reconstruct() - psi.amplitudes)))

print(f"\n{'R':>5} {'k':>8} {'kappa':>7} {'shots for eps=0.01':>20}")
for r in np.linspace(0, 1, 6):
    k = k_from_robustness(r)
    kap = kappa_nme(k)
    print(f"{r:5.1f} {k:8.4f} {kap:7.3f} {shots_for_accuracy(kap, 0.01):20d}")
