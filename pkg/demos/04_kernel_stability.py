"""
Kernel stability and the monomial series
========================================

Bergman kernels depend continuously on the domain when the domains
converge from the outside (inflated balls) or by translation.  On complete
Reinhardt domains the kernel is also the sum of |z^a|^2 / ||z^a||^2 over
monomials, which gives an independent check of the closed forms.
"""

import math
import warnings

from suita_lab import (
    ConvergenceWarning,
    DomainSpec,
    homothety,
    inflating_ball_family,
    kernel_oracle,
    ramadanov_run,
    reinhardt_kernel,
    translated_ball_family,
)

ball = kernel_oracle(DomainSpec.ball(2))
inflate = ramadanov_run(inflating_ball_family(50), ball, [0, 0], reference=ball)
print(inflate.to_csv().splitlines()[-1], " (error decays like 4/j)")

half = kernel_oracle(DomainSpec.scaled(DomainSpec.ball(2), homothety([0, 0], 2.0)))
shift = ramadanov_run(translated_ball_family(50), ball, [0, 0], reference=half)
print(shift.to_csv().splitlines()[-1], " converged:", shift.converged)

egg = DomainSpec.egg(0.25)
for p in (0.0, 0.3, 0.5, 0.8):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceWarning)
        s = reinhardt_kernel(egg, [0, p], 60)
    flag = " (truncated)" if caught else ""
    print(f"p={p}: series={s:.8f}  closed form={kernel_oracle(egg)([0, p]):.8f}{flag}")
print("K_E(0) * vol(E) =", kernel_oracle(egg)([0, 0]) * math.pi ** 2 * 0.25 / 1.25)
