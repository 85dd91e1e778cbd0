"""Checking the implications about curves on helix submanifolds.

Each verifier evaluates the premises on a surface, a curve and a helix
direction, then the conclusion, and returns a report with one residual
per check and a verdict: Verified, PremiseFailed, NotApplicable or
FALSIFIED.
"""

import math

import numpy as np

from helixsub import catalog_get, grid_samples
from helixsub.theorems import VERIFIERS

E3, E5 = np.eye(3)[2], np.eye(5)[4]


def check(key, name, curve, d, entry_params=None, **curve_params):
    entry = catalog_get(name, entry_params)
    rep = VERIFIERS[key](entry.patch, entry.curve(curve, **curve_params), d,
                         surface_samples=grid_samples(entry.sample_box, 64))
    failed = [p.name for p in rep.premises if p.applicable and not p.holds]
    print(f"{key} {name}.{curve}: {rep.verdict.value:13s} conclusion {rep.conclusion.name} "
          f"= {rep.conclusion.residual:.3g}" + (f"  failed premises: {failed}" if failed else ""))
    return rep


print("Circles of curvature keep the axis away from span{N, T}:")
check("3.1", "cone", "u_circle", E3)
check("3.1", "cylinder", "u_circle", E3)

print("\nGeodesic helices on the cylinder are slant helices:")
for climb in (0.3, math.pi / 4, 1.2):
    check("3.2", "cylinder", "geodesic", E3, climb=climb)

print("\nAsymptotic curves in a flat factor:")
check("3.3", "product_s1_r3", "flat_helix", E5)
check("3.3", "cylinder", "u_circle", E3)

print("\nCurvature lines of the cone are orthogonal to the axis:")
for beta in (0.3, math.pi / 4, 1.2):
    check("3.5", "cone", "u_circle", E3, {"beta": beta})
check("3.5", "cone", "ruling", E3)

print("\nDependence of T_d' on T gives a curvature line for xi:")
check("3.6", "cone", "u_circle", E3)
check("3.6", "cone", "spiral", E3)

print("\nA plane with d normal to it meets every premise of the first implication")
print("but d lies in span{N, T}: the harness reports it rather than hiding it.")
rep = check("3.1", "plane", "circle", E3)
print("largest |principal curvature| along the circle:", float(np.abs(rep.details["lambdas"]).max()))
