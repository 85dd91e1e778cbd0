"""Frenet frames, curvatures and slant helices.

The circular helix (cos t, sin t, t) has both curvatures equal to 1/2
after reparametrising by arclength. Its principal normal points at the
axis, so it keeps a constant (right) angle with e3: it is a slant helix
for that direction.
"""

import math

import numpy as np

from helixsub import AmbientCurve, frenet, reparametrize_unit_speed, slant_helix_test

np.set_printoptions(precision=6, suppress=True)

helix = AmbientCurve(map=lambda t: np.array([math.cos(t), math.sin(t), t]), t_range=(0.0, 2 * math.pi))
unit = reparametrize_unit_speed(helix)
print("arclength of one turn:", unit.t_range[1], "(2 pi sqrt 2 =", 2 * math.pi * math.sqrt(2), ")")

for s in np.linspace(0.5, 8.0, 4):
    fa = frenet(unit, s, max_order=3)
    print(f"s={s:.3f} rank {fa.rank} curvatures {np.asarray(fa.curvatures)}")

ts = np.linspace(0.5, 8.0, 16)
rep = slant_helix_test(unit, np.array([0.0, 0.0, 1.0]), ts, tol=1e-6)
print("\n<V2, e3> spread along the helix:", rep.spread)

# A line has rank 1: asking for V2 is an error, and frenet reports the rank.
line = AmbientCurve(map=lambda t: np.array([t, 2 * t, 0.0]), t_range=(0.0, 1.0))
print("line frame rank:", frenet(reparametrize_unit_speed(line), 0.5, max_order=3).rank)
