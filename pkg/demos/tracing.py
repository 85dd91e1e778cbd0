"""Tracing geodesics and lines of curvature.

Geodesics on the cylinder are helices; the trace is compared with the
closed form. Lines of curvature follow a principal direction field and
stop at umbilics, where that field is undefined (every point of a sphere).
"""

import math

import numpy as np

from helixsub import catalog_get, integrate_curvature_line, integrate_geodesic
from helixsub.errors import UmbilicEncountered
from helixsub.manifold import unit_normal

a = b = math.sqrt(0.5)
cyl = catalog_get("cylinder").patch
r = integrate_geodesic(cyl, [0.0, 0.0], [a, b], length=10.0, step=1e-3)
exact = np.array([math.cos(a * 10), math.sin(a * 10), b * 10])
print(f"cylinder geodesic: {r.steps} steps, endpoint error {np.linalg.norm(cyl(r.end) - exact):.1e}, "
      f"speed drift {r.speed_drift:.1e}, defect {r.max_defect:.1e}")

# Step halving in a chart with nonzero Christoffel symbols shows fourth order.
warped = catalog_get("cylinder", {"warp": 1.0}).patch
errs = [np.linalg.norm(warped(integrate_geodesic(warped, [0.0, 0.0], [a, b], 10.0, h).end) - exact)
        for h in (0.1, 0.05, 0.025)]
print("warped chart errors", [f"{e:.1e}" for e in errs], "ratios", [round(float(errs[i] / errs[i + 1]), 1) for i in range(2)])

# Curvature lines on the cone: index 0 follows the circles, index 1 the rulings.
cone = catalog_get("cone").patch
field = lambda u: unit_normal(cone, u)  # noqa: E731
for eig in (0, 1):
    line = integrate_curvature_line(cone, [0.0, 1.0], field, eig, length=0.5, step=0.05)
    print(f"cone curvature line {eig}: end u={line.end}, defect {line.max_defect:.1e}")

sphere = catalog_get("sphere").patch
try:
    integrate_curvature_line(sphere, [0.0, 0.0], lambda u: unit_normal(sphere, u), 0, 1.0, 0.1)
except UmbilicEncountered as exc:
    print("sphere:", exc)
