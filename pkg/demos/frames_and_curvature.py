"""Tangent frames, the second fundamental form and principal curvatures.

Builds frames on a few catalog surfaces and on a surface typed in as
text, then prints principal curvatures. With the outward normal the
shape operator of the unit sphere is -I and the unit cylinder has
principal curvatures -1 (around) and 0 (along the rulings).
"""

import numpy as np

from helixsub import catalog_get, parse_immersion, point_frame, shape_operator
from helixsub.manifold import gauss_split, unit_normal

np.set_printoptions(precision=6, suppress=True)

for name, u in [("sphere", [0.4, 0.3]), ("cylinder", [1.0, 0.5]), ("cone", [0.7, 1.2])]:
    patch = catalog_get(name).patch
    S = shape_operator(patch, u, unit_normal(patch, u))
    print(f"{name:9s} at u={u}: principal curvatures {S.principal_curvatures}")

# A saddle typed as text. Derivatives come from finite differences.
saddle = parse_immersion("u1, u2, u1*u2", 2, 3, domain=((-2, 2), (-2, 2)))
u = [0.0, 0.0]
frame = point_frame(saddle, u)
print("\nsaddle tangent basis at the origin:\n", frame.tangent.basis.T)
S = shape_operator(saddle, u, unit_normal(saddle, u))
print("saddle principal curvatures", S.principal_curvatures, "(expected -1, 1)")

# Splitting the second derivative of the map into tangent and normal parts.
tang, norm = gauss_split(saddle, [0.5, 0.2], [1.0, 0.0], [0.0, 1.0])
print("\nd2f/du1du2 at (0.5, 0.2): tangential", tang, "normal", norm)
