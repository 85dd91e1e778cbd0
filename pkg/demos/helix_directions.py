"""Recovering the space of helix directions of a submanifold.

A helix direction makes the same angle with every tangent space. For the
catalog surfaces the answer is known: every direction for the plane, the
axis for cylinders and cones, nothing for the sphere, and the flat factor
for products with a circle.
"""

import math

import numpy as np

from helixsub import catalog_get, catalog_names, estimate_helix_space, grid_samples, is_helix_direction
from helixsub.helix import decompose_direction, helix_angle_of
from helixsub.manifold import point_frame

np.set_printoptions(precision=6, suppress=True)

for name in catalog_names():
    entry = catalog_get(name)
    space = estimate_helix_space(entry.patch, grid_samples(entry.sample_box, 64))
    print(f"{name:14s} dim {space.dim} (known {entry.known_helix_space.dim}), residual {space.residual:.1e}")

# The cone's axis is a helix direction at the half-angle beta.
for beta in (0.3, math.pi / 4, 1.2):
    cone = catalog_get("cone", {"beta": beta})
    space = estimate_helix_space(cone.patch, grid_samples(cone.sample_box, 64))
    angle = helix_angle_of(space, cone.patch, space.basis.basis[:, 0])
    print(f"cone beta={beta:.4f}: helix angle {angle.angle:.10f}, stddev {angle.stddev:.1e}")

# A tilted direction is not a helix direction of the cone.
cone = catalog_get("cone")
tilted = np.array([0.0, 0.6, 0.8])
rep = is_helix_direction(cone.patch, tilted, grid_samples(cone.sample_box, 64))
print(f"\ntilted direction: angle spread {rep.spread:.3f}, helix direction: {rep.is_helix}")

# The split d = cos(theta) xi + sin(theta) T_d into normal and tangent parts.
dec = decompose_direction(point_frame(cone.patch, [0.5, 1.0]), [0.0, 0.0, 1.0])
print("axis on the cone: theta", round(dec.theta, 6), "xi", dec.xi, "T_d", dec.t_dir)
