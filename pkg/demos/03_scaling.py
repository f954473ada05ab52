"""
Scaling towards a strongly pseudoconvex point
=============================================

Points p_j = (0, 1 - 2^-j) of the ball are normalized at the nearest
boundary point and dilated so that p_j lands on p* = (0, -1).  The scaled
domains {|u1|^2 + 2 Re u2 + delta_j |u2|^2 < 0} tend to the Siegel domain,
their kernels and indicatrices at p* converge, and F stays equal to 1.
"""

from suita_lab import DomainSpec, build_sequence, hausdorff_grid_fraction, metric_discrepancy
from suita_lab.scaling import convergence_report, report_csv

seq = build_sequence(DomainSpec.ball(2), p0=[0, 1], count=12, rate=0.5)
for s in seq.steps[:3]:
    print(f"j={s.j}  p={s.p}  zeta={s.zeta}  delta={s.delta}  T(phi(p))={s.composite(s.p)}")

rows = convergence_report(seq, N=200_000, seed=1)
print(report_csv(rows))

# geometry: metrics on a fixed test set and membership on a grid around p*
for j in (1, 4, 8, 12):
    print(f"j={j:2d}  metric gap={metric_discrepancy(seq, j):.2e}  grid flips={hausdorff_grid_fraction(seq, j):.4f}")

# the egg at (0, 1) is strongly pseudoconvex too; only the geometry is checked there
egg = build_sequence(DomainSpec.egg(0.25), [0, 1], 10)
print("egg grid flips:", [round(hausdorff_grid_fraction(egg, j), 4) for j in range(1, 11)])
