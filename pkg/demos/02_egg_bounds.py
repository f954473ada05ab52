"""
Brackets on a non-convex egg
============================

For E = {|z1|^2 + |z2|^(2 mu) < 1} with mu < 1/2 the indicatrix at (0, p)
is squeezed between two Euclidean ellipsoids, so F(0, p) lies in a
bracket.  Every automorphism orbit meets the segment {(0, p)}, which makes
these brackets the whole story along the weakly pseudoconvex circle
{z2 = 0}.
"""

from suita_lab import egg_bounds, orbit_value_note, rows_to_csv, segment_scan
from suita_lab.suita import SEGMENT_HEADER

mu = 0.25
print(f"mu = {mu}: at p = 0 the upper bound is (1+mu)/(2mu) = {egg_bounds(mu, 0).upper}")
for p in (1e-6, 1e-3, 0.1, 0.5, 0.9, 0.99, 0.999):
    b = egg_bounds(mu, p)
    print(f"  p={p:<7} lower={b.lower:.6f}  upper={b.upper:.6f}")

# the upper bound creeps towards its p = 0 value like p^(2 mu), slowly
print(rows_to_csv(segment_scan([0.1, 0.25, 0.49], [0.0, 0.5, 0.999]), SEGMENT_HEADER))

note = orbit_value_note(mu)
print("proven:")
for line in note.proven:
    print("  -", line)
print("not decided by the brackets:")
for line in note.suggested:
    print("  -", line)
