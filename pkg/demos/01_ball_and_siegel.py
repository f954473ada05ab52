"""
The invariant on the ball and on the Siegel domain
==================================================

F(z) = K(z) * vol(I(z)) multiplies the Bergman kernel by the volume of the
Kobayashi indicatrix.  Both factors change under biholomorphisms, but their
product does not.  The ball is homogeneous, so F is the same at every
point, and the Cayley transform carries that value over to the Siegel
domain {2 Re z2 + |z1|^2 < 0}.
"""

import math

import numpy as np

from suita_lab import DomainSpec, cayley, kernel_siegel, mc_volume, metric_oracle, suita_invariant

ball = DomainSpec.ball(2)
siegel = DomainSpec.siegel(2)

# exact values at a few points of the ball
for z in ([0, 0], [0, 0.5], [0.3, 0.6j]):
    r = suita_invariant(ball, z)
    print(f"ball  z={z!s:<12} K={r.kernel:9.5f}  vol={r.indicatrix_volume:8.4f}  F={r.F:.15f}")

# p* = (0, -1) goes to the centre of the ball
p_star = np.array([0, -1], complex)
print("Cayley(p*) =", cayley(p_star))
print("K(p*) =", kernel_siegel(2, p_star), " 1/(4 pi^2) =", 1 / (4 * math.pi ** 2))

# the indicatrix at p* is the ellipsoid |v1|^2/2 + |v2|^2/4 < 1, volume 4 pi^2
oracle = metric_oracle(siegel, p_star)
est = mc_volume(oracle, 1_000_000, seed=7)
print(f"MC vol = {est.value:.4f} +- {est.std_error:.4f}   4 pi^2 = {4 * math.pi ** 2:.4f}")

r = suita_invariant(siegel, p_star, method="mc", N=1_000_000, seed=7)
print(f"F(p*) by Monte Carlo: {r.F:.4f} +- {r.F_error:.4f}")
